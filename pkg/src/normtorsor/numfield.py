"""Number fields Q[x]/(f) in power-basis coordinates.

Besides element arithmetic and norms this module recognizes quadratic
subfields (``sqrt_in_field``), builds the L-structure of K for a quadratic
subfield L = Q(sqrt a), models the relative quadratic extension F = K(sqrt a)
when sqrt a is not in K, and expands norm forms symbolically.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import linalg
from .arith import Q, RationalLike, fmt, rational_sqrt
from .config import DEFAULT_BUDGETS, Budgets
from .errors import DomainError, UnsupportedCase
from .poly import (MultiPoly, UniPoly, factor_over_Q, interpolate, is_irreducible,
                   is_squarefree, real_root_count, resultant)


class NumberField:
    """K = Q[theta]/(minpoly) with minpoly monic and irreducible."""

    def __init__(self, minpoly: UniPoly | Sequence[RationalLike], *, check: bool = True,
                 budgets: Budgets = DEFAULT_BUDGETS, name: str = "K"):
        f = minpoly if isinstance(minpoly, UniPoly) else UniPoly(minpoly)
        if f.degree < 1:
            raise DomainError("minimal polynomial must have degree >= 1")
        if f.lc != 1:
            raise DomainError(f"minimal polynomial must be monic: {f}")
        if check and not is_irreducible(f, budgets):
            raise DomainError(f"minimal polynomial is reducible over Q: {f}")
        self.minpoly = f
        self.degree = f.degree
        self.name = name
        n = self.degree
        # theta^k reduced, for k < 2n - 1
        table = []
        cur = [Fraction(0)] * n
        cur[0] = Fraction(1)
        for _ in range(2 * n - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                cur = [c - top * m for c, m in zip(cur, f.coeffs)]
        self._powers = table

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self) -> int:
        return hash(("NumberField", self.minpoly))

    def __repr__(self) -> str:
        return f"NumberField({self.minpoly.to_text('x')})"

    def __call__(self, coords: Iterable[RationalLike] | RationalLike) -> "FieldElement":
        if isinstance(coords, (int, Fraction, str)):
            return self.scalar(coords)
        return FieldElement(self, coords)

    def scalar(self, q: RationalLike) -> "FieldElement":
        c = [Fraction(0)] * self.degree
        c[0] = Q(q)
        return FieldElement(self, c)

    def zero(self) -> "FieldElement":
        return self.scalar(0)

    def one(self) -> "FieldElement":
        return self.scalar(1)

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.scalar(-self.minpoly.coeffs[0])
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return FieldElement(self, c)

    def power_basis(self) -> list["FieldElement"]:
        return [FieldElement(self, self._powers[i]) for i in range(self.degree)]

    def from_poly(self, p: UniPoly) -> "FieldElement":
        out = [Fraction(0)] * self.degree
        rem = p % self.minpoly if p.degree >= self.degree else p
        for i, c in enumerate(rem.coeffs):
            out[i] += c
        return FieldElement(self, out)

    @cached_property
    def real_places(self) -> int:
        """Number of real embeddings."""
        return real_root_count(self.minpoly)

    def to_json(self) -> dict:
        return {"minpoly": [fmt(c) for c in self.minpoly.coeffs]}


def quadratic_field(a: RationalLike, budgets: Budgets = DEFAULT_BUDGETS) -> NumberField:
    """L = Q[s]/(s^2 - a) for a non-square a."""
    a = Q(a)
    if rational_sqrt(a) is not None:
        raise DomainError(f"{a} is a square; Q(sqrt {a}) is not a quadratic field")
    return NumberField([-a, 0, 1], check=False, budgets=budgets, name="L")


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable[RationalLike]):
        cs = tuple(Q(c) for c in coords)
        if len(cs) != field.degree:
            raise DomainError(f"{len(cs)} coordinates for a degree-{field.degree} field")
        self.field = field
        self.coords = cs

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DomainError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        raise TypeError(type(other).__name__)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.scalar(other)
        return isinstance(other, FieldElement) and other.field == self.field and other.coords == self.coords

    def __hash__(self) -> int:
        return hash((self.field, self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self) -> str:
        return f"{self.field.name}[{', '.join(fmt(c) for c in self.coords)}]"

    def to_text(self, var: str = "theta") -> str:
        return UniPoly(self.coords).to_text(var)

    def to_json(self) -> list[str]:
        return [fmt(c) for c in self.coords]

    def as_poly(self) -> UniPoly:
        return UniPoly(self.coords)

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self.field, (a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, (-a for a in self.coords))

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self.field, (a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, (a * other for a in self.coords))
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        n = self.field.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        out = [Fraction(0)] * n
        for k, c in enumerate(prod):
            if c:
                for i, t in enumerate(self.field._powers[k]):
                    if t:
                        out[i] += c * t
        return FieldElement(self.field, out)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DomainError("inverse of zero")
        # extended Euclid: s*x + t*f = 1
        f = self.field.minpoly
        r0, r1 = f, self.as_poly()
        s0, s1 = UniPoly(), UniPoly([1])
        while r1.degree > 0:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise DomainError("element is a zero divisor (minpoly not irreducible?)")
        return self.field.from_poly(s1 * (1 / r1.lc))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.field.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def mult_matrix(self) -> list[list[Fraction]]:
        """Column j holds the coordinates of self * theta^j."""
        cols = [(self * b).coords for b in self.field.power_basis()]
        n = self.field.degree
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self) -> Fraction:
        return absolute_norm(self)

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))


def absolute_norm(x: FieldElement) -> Fraction:
    """N_{K/Q}(x) as the determinant of multiplication by x."""
    return linalg.det(x.mult_matrix())


# -- square roots ---------------------------------------------------------------

def _canonical_sign(s: FieldElement) -> FieldElement:
    """Pick the root whose highest nonzero coordinate is positive."""
    for c in reversed(s.coords):
        if c:
            return s if c > 0 else -s
    return s


def _poly_mod_K(coeffs: list[FieldElement]) -> list[FieldElement]:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _gcd_over_K(f: list[FieldElement], g: list[FieldElement]) -> list[FieldElement]:
    """Monic gcd of two polynomials with coefficients in K (constant term first)."""
    f, g = _poly_mod_K(list(f)), _poly_mod_K(list(g))
    while g:
        # f mod g
        r = list(f)
        inv = g[-1].inverse()
        while len(r) >= len(g):
            c = r[-1] * inv
            shift = len(r) - len(g)
            for j, b in enumerate(g):
                r[shift + j] = r[shift + j] - c * b
            r.pop()
            r = _poly_mod_K(r)
        f, g = g, r
    inv = f[-1].inverse()
    return [c * inv for c in f]


def sqrt_in_field(a: RationalLike, K: NumberField, budgets: Budgets = DEFAULT_BUDGETS) -> FieldElement | None:
    """An element s of K with s^2 = a, or None.

    Trager's squarefree-norm method: for shifts k = 0, 1, 2, ... form
    N(y) = Res_x(f(x), (y - k x)^2 - a); once N is squarefree, a factor of N
    of degree deg K yields, through a gcd over K, a linear factor of
    (y - k theta)^2 - a.  The result is checked by squaring.
    """
    a = Q(a)
    if a == 0:
        raise DomainError("sqrt_in_field needs a != 0")
    r = rational_sqrt(a)
    if r is not None:
        return K.scalar(r)
    n = K.degree
    if n % 2:
        return None
    f = K.minpoly
    theta = K.gen()
    for k in range(0, 64):
        samples = []
        for i in range(2 * n + 1):
            y0 = Fraction(i)
            g = UniPoly([y0 * y0 - a, -2 * k * y0, k * k])  # (y0 - k x)^2 - a in x
            samples.append((y0, resultant(f, g)))
        norm = interpolate(samples)
        if norm.degree != 2 * n or not is_squarefree(norm):
            continue
        _, facs = factor_over_Q(norm, budgets)
        if len(facs) == 1:
            return None
        kt = theta * k
        # (y - k theta)^2 - a = y^2 - 2k theta y + (k^2 theta^2 - a)
        gK = [kt * kt - a, kt * -2, K.one()]
        for h, _ in facs:
            hK = [K.scalar(c) for c in h.coeffs]
            d = _gcd_over_K(gK, hK)
            if len(d) == 2:
                root = -d[0]  # y = root satisfies (root - k theta)^2 = a
                s = root - kt
                if s * s == a:
                    return _canonical_sign(s)
        return None
    raise DomainError("no squarefree Trager shift found (inseparable input?)")


# -- quadratic subfields and L-structure ----------------------------------------

class SubfieldEmbedding:
    """L = Q(sqrt a) inside K, together with an L-basis of K.

    ``sqrt_a`` is the image of the generator of L.  ``l_basis`` has
    [K:Q]/2 elements; coordinates of x in K with respect to the Q-basis
    {b, sqrt_a * b : b in l_basis} are cached through ``_to_lcoords``.
    """

    def __init__(self, ambient: NumberField, a: RationalLike, sqrt_a: FieldElement,
                 l_basis: Sequence[FieldElement] | None = None):
        a = Q(a)
        if sqrt_a.field != ambient:
            raise DomainError("generator image must lie in the ambient field")
        if sqrt_a * sqrt_a != a:
            raise DomainError(f"witness does not square to {a}")
        if ambient.degree % 2:
            raise DomainError("a quadratic subfield needs even ambient degree")
        self.ambient = ambient
        self.a = a
        self.sub = quadratic_field(a)
        self.image_of_generator = sqrt_a
        m = ambient.degree // 2
        if l_basis is None:
            l_basis = self._greedy_basis()
        l_basis = list(l_basis)
        if len(l_basis) != m:
            raise DomainError(f"an L-basis of K needs {m} elements, got {len(l_basis)}")
        qbasis = []
        for b in l_basis:
            qbasis += [b, sqrt_a * b]
        cols = [e.coords for e in qbasis]
        mat = [[cols[j][i] for j in range(len(cols))] for i in range(ambient.degree)]
        if linalg.rank(mat) != ambient.degree:
            raise DomainError("l_basis is not linearly independent over L")
        self.l_basis = l_basis
        self._qmat_inv = linalg.inverse(mat)

    def _greedy_basis(self) -> list[FieldElement]:
        chosen: list[FieldElement] = []
        vecs: list[tuple] = []
        for b in self.ambient.power_basis():
            trial = vecs + [b.coords, (self.image_of_generator * b).coords]
            if linalg.rank(trial) == len(trial):
                chosen.append(b)
                vecs = trial
            if len(chosen) * 2 == self.ambient.degree:
                break
        return chosen

    def embed(self, l: FieldElement) -> FieldElement:
        """Image in K of an element of L."""
        if l.field != self.sub:
            raise DomainError("element is not in L")
        return self.ambient.scalar(l.coords[0]) + self.image_of_generator * l.coords[1]

    def q_coords(self, x: FieldElement) -> list[Fraction]:
        """Rational coordinates (c_1, d_1, c_2, d_2, ...) with x = sum (c_i + d_i sqrt a) b_i."""
        return linalg.matvec(self._qmat_inv, x.coords)

    def l_coords(self, x: FieldElement) -> list[FieldElement]:
        qc = self.q_coords(x)
        return [self.sub([qc[2 * i], qc[2 * i + 1]]) for i in range(len(self.l_basis))]

    def from_l_coords(self, ls: Sequence[FieldElement]) -> FieldElement:
        out = self.ambient.zero()
        for l, b in zip(ls, self.l_basis):
            out = out + self.embed(l) * b
        return out

    def contains(self, x: FieldElement) -> bool:
        """Is x in the image of L?"""
        return _in_span(x, [self.ambient.one(), self.image_of_generator])

    def to_L(self, x: FieldElement) -> FieldElement:
        """Preimage in L of an element of K lying in L."""
        if not self.contains(x):
            raise DomainError("element does not lie in L")
        # solve x = c + d sqrt_a over Q
        s = self.image_of_generator
        mat = [[Fraction(int(i == 0)), s.coords[i]] for i in range(self.ambient.degree)]
        rows = [i for i in range(self.ambient.degree)]
        for i in rows:
            for j in rows:
                sub = [mat[i], mat[j]]
                if linalg.rank(sub) == 2:
                    c, d = linalg.solve(sub, [x.coords[i], x.coords[j]])
                    return self.sub([c, d])
        raise DomainError("degenerate generator image")


def _in_span(x: FieldElement, gens: Sequence[FieldElement]) -> bool:
    vecs = [g.coords for g in gens]
    return linalg.rank(vecs + [x.coords]) == linalg.rank(vecs)


def relative_norm(x: FieldElement, emb: SubfieldEmbedding) -> FieldElement:
    """N_{K/L}(x): determinant over L of multiplication by x in ``emb.l_basis``."""
    if x.field != emb.ambient:
        raise DomainError("element not in the ambient field")
    cols = [emb.l_coords(x * b) for b in emb.l_basis]
    m = len(cols)
    mat = [[cols[j][i] for j in range(m)] for i in range(m)]
    return linalg.det(mat, one=emb.sub.one())


def conj_L(l: FieldElement) -> FieldElement:
    """The nontrivial automorphism sqrt a -> -sqrt a of a quadratic field."""
    if l.field.degree != 2 or l.field.minpoly.coeffs[1] != 0:
        raise DomainError("conjugation is only defined on Q[s]/(s^2 - a)")
    return l.field([l.coords[0], -l.coords[1]])


def find_beta(emb: SubfieldEmbedding) -> FieldElement:
    """An element beta of K with beta^2 in L and K = L(beta), for [K:L] = 2.

    Scans theta, theta^2, theta^3, ...; the first candidate outside L is
    adjusted by half its relative trace, which always puts its square in L.
    """
    K = emb.ambient
    if K.degree != 4:
        raise UnsupportedCase("beta completion is implemented for quartic K only")
    L_span = [K.one(), emb.image_of_generator]
    theta = K.gen()
    cands = [theta ** k for k in range(1, K.degree)]
    for e in cands:
        if not _in_span(e, L_span) and _in_span(e * e, L_span):
            return e
    for e in cands:
        if _in_span(e, L_span):
            continue
        trial = SubfieldEmbedding(K, emb.a, emb.image_of_generator, [K.one(), e])
        # e^2 = T e - N with T, N in L, so beta = e - T/2 squares into L
        tr = _relative_trace(e, trial)
        beta = e - trial.embed(tr) * Fraction(1, 2)
        if _in_span(beta * beta, L_span):
            return beta
    raise DomainError("no element of K outside L found")


def _relative_trace(x: FieldElement, emb: SubfieldEmbedding) -> FieldElement:
    cols = [emb.l_coords(x * b) for b in emb.l_basis]
    return sum((cols[i][i] for i in range(len(cols))), emb.sub.zero())


def quartic_structure(emb: SubfieldEmbedding, beta: FieldElement | None = None):
    """Return ``(emb_beta, beta, u, v)`` with l_basis [1, beta] and beta^2 = u + v sqrt a."""
    K = emb.ambient
    if K.degree != 4:
        raise UnsupportedCase("expected [K:Q] = 4")
    beta = beta if beta is not None else find_beta(emb)
    emb_b = SubfieldEmbedding(K, emb.a, emb.image_of_generator, [K.one(), beta])
    b2 = emb_b.q_coords(beta * beta)
    if b2[2] or b2[3]:
        raise DomainError("beta^2 is not in L")
    return emb_b, beta, b2[0], b2[1]


# -- relative quadratic extension F = K(sqrt a) -----------------------------------

class RelQuadExt:
    """F = K(sqrt a) for a rational a that is not a square in K."""

    def __init__(self, base: NumberField, a: RationalLike, *, check: bool = True,
                 budgets: Budgets = DEFAULT_BUDGETS):
        a = Q(a)
        if check and sqrt_in_field(a, base, budgets) is not None:
            raise DomainError(f"{a} is a square in the base field; F would not be a field")
        self.base = base
        self.a = a
        self.L = quadratic_field(a)

    def __eq__(self, other):
        return isinstance(other, RelQuadExt) and other.base == self.base and other.a == self.a

    def __hash__(self):
        return hash(("RelQuadExt", self.base, self.a))

    def __call__(self, x, y=0) -> "RelQuadElement":
        K = self.base
        x = x if isinstance(x, FieldElement) else K.scalar(x)
        y = y if isinstance(y, FieldElement) else K.scalar(y)
        return RelQuadElement(self, x, y)

    def embed_L(self, l: FieldElement) -> "RelQuadElement":
        return self(self.base.scalar(l.coords[0]), self.base.scalar(l.coords[1]))

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "a": fmt(self.a)}


class RelQuadElement:
    """x + y sqrt a with x, y in K."""

    __slots__ = ("F", "x", "y")

    def __init__(self, F: RelQuadExt, x: FieldElement, y: FieldElement):
        self.F, self.x, self.y = F, x, y

    def _lift(self, o):
        if isinstance(o, RelQuadElement):
            return o
        if isinstance(o, FieldElement):
            return RelQuadElement(self.F, o, self.F.base.zero())
        return self.F(o)

    def __eq__(self, other):
        o = self._lift(other)
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"F({self.x!r}, {self.y!r})"

    def __add__(self, o):
        o = self._lift(o)
        return RelQuadElement(self.F, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return RelQuadElement(self.F, -self.x, -self.y)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __mul__(self, o):
        o = self._lift(o)
        a = self.F.a
        return RelQuadElement(self.F, self.x * o.x + self.y * o.y * a, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def conjugate(self) -> "RelQuadElement":
        """sigma: sqrt a -> -sqrt a, identity on K."""
        return RelQuadElement(self.F, self.x, -self.y)

    def norm_to_base(self) -> FieldElement:
        """N_{F/K}(x + y sqrt a) = x^2 - a y^2."""
        return self.x * self.x - self.y * self.y * self.F.a

    def inverse(self) -> "RelQuadElement":
        if self.is_zero():
            raise DomainError("inverse of zero")
        n = self.norm_to_base().inverse()
        c = self.conjugate()
        return RelQuadElement(self.F, c.x * n, c.y * n)

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def norm_to_L(self) -> FieldElement:
        """N_{F/L}: determinant over L of multiplication on the L-basis {theta^i}."""
        L = self.F.L
        mx, my = self.x.mult_matrix(), self.y.mult_matrix()
        n = len(mx)
        mat = [[L([mx[i][j], my[i][j]]) for j in range(n)] for i in range(n)]
        return linalg.det(mat, one=L.one())

    def absolute_norm(self) -> Fraction:
        return absolute_norm(self.norm_to_base())

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}


def conjugate(w: RelQuadElement) -> RelQuadElement:
    return w.conjugate()


def relnorm_to_base(w: RelQuadElement) -> FieldElement:
    return w.norm_to_base()


# -- symbolic norm forms ----------------------------------------------------------

def _symbolic_det(mat: list[list[MultiPoly]]) -> MultiPoly:
    """Laplace expansion along rows with memoized minors (2^n n products)."""
    n = len(mat)
    arity = mat[0][0].arity

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]) -> MultiPoly:
        if row == n:
            return MultiPoly.const(1, arity)
        acc = MultiPoly(arity)
        for k, c in enumerate(cols):
            entry = mat[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:k] + cols[k + 1:])
            term = entry * sub
            acc = acc - term if k % 2 else acc + term
        return acc

    return minor(0, tuple(range(n)))


def norm_form(K: NumberField) -> MultiPoly:
    """N_{K/Q}(z1 + z2 theta + ... + zn theta^(n-1)) as a form in z1..zn."""
    return _norm_form_cached(K.minpoly)


@lru_cache(maxsize=64)
def _norm_form_cached(minpoly: UniPoly) -> MultiPoly:
    K = NumberField(minpoly, check=False)
    n = K.degree
    zs = MultiPoly.variables(n)
    basis_mats = [b.mult_matrix() for b in K.power_basis()]
    mat = [[MultiPoly(n) for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                c = basis_mats[k][i][j]
                if c:
                    mat[i][j] = mat[i][j] + zs[k] * c
    return _symbolic_det(mat)


class _LPoly:
    """p0 + p1 s with s^2 = a, coefficients MultiPoly (a itself may be symbolic)."""

    __slots__ = ("p0", "p1", "a")

    def __init__(self, p0, p1, a):
        self.p0, self.p1, self.a = p0, p1, a

    def __add__(self, o):
        return _LPoly(self.p0 + o.p0, self.p1 + o.p1, self.a)

    def __sub__(self, o):
        return _LPoly(self.p0 - o.p0, self.p1 - o.p1, self.a)

    def __mul__(self, o):
        return _LPoly(self.p0 * o.p0 + self.p1 * o.p1 * self.a, self.p0 * o.p1 + self.p1 * o.p0, self.a)


def _relative_norm_pair(y: list[MultiPoly], a, u, v) -> tuple[MultiPoly, MultiPoly]:
    """N_{K/L}((y1 + y2 s) + (y3 + y4 s) beta) for beta^2 = u + v s, as (g0, g1).

    Multiplication by A + B beta on the L-basis {1, beta} has matrix
    [[A, B beta^2], [B, A]]; its determinant is A^2 - B^2 beta^2.
    """
    A = _LPoly(y[0], y[1], a)
    B = _LPoly(y[2], y[3], a)
    zero = y[0] * 0
    beta2 = _LPoly(zero + u, zero + v, a)
    n = A * A - B * B * beta2
    return n.p0, n.p1


def relative_norm_form_quartic(emb: SubfieldEmbedding, beta: FieldElement) -> tuple[MultiPoly, MultiPoly]:
    """(g0, g1) with N_{K/L}((y1 + y2 sqrt a) + (y3 + y4 sqrt a) beta) = g0 + g1 sqrt a."""
    _, beta, u, v = quartic_structure(emb, beta)
    ys = MultiPoly.variables(4)
    return _relative_norm_pair(ys, emb.a, u, v)


LEMMA_VARS = ("a", "u", "v", "y1", "y2", "y3", "y4")


def symbolic_relative_norm_forms() -> tuple[MultiPoly, MultiPoly]:
    """(g0, g1) with a, u, v kept symbolic; arity 7 in the order of ``LEMMA_VARS``."""
    a, u, v, *ys = MultiPoly.variables(7)
    return _relative_norm_pair(ys, a, u, v)


def closed_form_relative_norm_forms() -> tuple[MultiPoly, MultiPoly]:
    """The textbook closed form, typed in directly (independent of the derivation)."""
    a, u, v, y1, y2, y3, y4 = MultiPoly.variables(7)
    g0 = y1 ** 2 + a * y2 ** 2 - u * (y3 ** 2 + a * y4 ** 2) - 2 * a * v * y3 * y4
    g1 = 2 * y1 * y2 - 2 * u * y3 * y4 - v * (y3 ** 2 + a * y4 ** 2)
    return g0, g1


def element_from_lcoords(emb: SubfieldEmbedding, beta: FieldElement, y: Sequence[RationalLike]) -> FieldElement:
    """(y1 + y2 sqrt a) + (y3 + y4 sqrt a) beta."""
    s = emb.image_of_generator
    y = [Q(c) for c in y]
    return (s * y[1] + y[0]) + (s * y[3] + y[2]) * beta
