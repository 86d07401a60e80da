"""Univariate and sparse multivariate polynomials over Q.

UniPoly is dense (constant term first).  MultiPoly is a sparse map from
exponent vectors to nonzero coefficients, serialized in graded-lex order so
that printed forms are byte-stable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import Q, RationalLike, fmt, rational_sqrt
from .config import DEFAULT_BUDGETS, Budgets
from .errors import BudgetError, DomainError


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c: RationalLike) -> "UniPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly([{', '.join(fmt(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        return self.to_text("x")

    def to_text(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                terms.append(fmt(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{fmt(c)}*{mono}")
        return " + ".join(terms)

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = UniPoly([1])
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs) + 1
        if dq <= 0:
            return UniPoly(), self
        q = [Fraction(0)] * dq
        lc = other.lc
        for k in range(dq - 1, -1, -1):
            c = r[k + other.degree] / lc
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    r[k + j] -= c * b
        return UniPoly(q), UniPoly(r[: other.degree])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly(c / self.lc for c in self.coeffs)

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd (zero if both are zero)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """Res(f, g) = lc(f)^deg g * prod g(alpha) over the roots alpha of f."""
    if f.is_zero() and g.is_zero():
        raise DomainError("resultant of two zero polynomials")
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    sign = 1
    acc = Fraction(1)
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return sign * acc * g.lc ** m
        if m == 0:
            return sign * acc * f.lc ** n
        # Res(f, g) = (-1)^{mn} Res(g, f) and Res(g, f) = lc(g)^{m - deg r} Res(g, r)
        r = f % g
        if r.is_zero():
            return Fraction(0)
        if (m * n) % 2:
            sign = -sign
        acc *= g.lc ** (m - r.degree)
        f, g = g, r


def discriminant(f: UniPoly) -> Fraction:
    n = f.degree
    if n < 1:
        raise DomainError("discriminant of a constant polynomial")
    s = -1 if (n * (n - 1) // 2) % 2 else 1
    return s * resultant(f, f.derivative()) / f.lc


def is_squarefree(f: UniPoly) -> bool:
    return poly_gcd(f, f.derivative()).degree == 0


def factor_over_Q(f: UniPoly, budgets: Budgets = DEFAULT_BUDGETS) -> tuple[Fraction, list[tuple[UniPoly, int]]]:
    """Return ``(c, [(monic irreducible factor, multiplicity), ...])``.

    Factors are sorted by degree, then by coefficient tuple (highest first).
    """
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    if f.degree > budgets.factor_max_degree:
        raise BudgetError(f"degree {f.degree} exceeds factor_max_degree={budgets.factor_max_degree}",
                          partial={"polynomial": f.coeffs})
    c = f.lc
    if f.degree == 0:
        return c, []
    g = f.monic()
    if g.degree == 1:
        return c, [(g, 1)]
    if g.degree == 2:
        # decided exactly: irreducible iff the discriminant is not a square
        root = rational_sqrt(discriminant(g))
        if root is None:
            return c, [(g, 1)]
        b = g.coeffs[1]
        r1, r2 = (-b + root) / 2, (-b - root) / 2
        facs = {}
        for r in (r1, r2):
            p = UniPoly([-r, 1])
            facs[p] = facs.get(p, 0) + 1
        return c, _sorted_factors(facs.items())

    import sympy

    x = sympy.Symbol("x")
    sp = sympy.Poly([sympy.Rational(k.numerator, k.denominator) for k in reversed(g.coeffs)], x,
                    domain=sympy.QQ)
    _, facs = sp.factor_list()
    out = []
    for h, e in facs:
        hc = [Fraction(int(k.p), int(k.q)) for k in reversed(h.all_coeffs())]
        out.append((UniPoly(hc).monic(), int(e)))
    return c, _sorted_factors(out)


def _sorted_factors(items):
    return sorted(items, key=lambda fe: (fe[0].degree, tuple(reversed(fe[0].coeffs)), fe[1]))


def is_irreducible(f: UniPoly, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    if f.degree < 1:
        return False
    _, facs = factor_over_Q(f, budgets)
    return len(facs) == 1 and facs[0][1] == 1


def interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> UniPoly:
    """Lagrange interpolation through distinct abscissae."""
    acc = UniPoly()
    for i, (xi, yi) in enumerate(points):
        basis = UniPoly([1])
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j != i:
                basis = basis * UniPoly([-xj, 1])
                denom *= xi - xj
        acc = acc + basis * (yi / denom)
    return acc


def real_root_count(f: UniPoly) -> int:
    """Number of distinct real roots (Sturm sequence)."""
    if f.degree < 1:
        return 0
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)

    def changes(signs):
        s = [x for x in signs if x != 0]
        return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))

    at_pos = [p.lc for p in seq]
    at_neg = [p.lc * (-1 if p.degree % 2 else 1) for p in seq]
    return changes(at_neg) - changes(at_pos)


# -- multivariate --------------------------------------------------------------

Exps = tuple[int, ...]


def _grlex_key(e: Exps):
    return (-sum(e), tuple(-x for x in e))


class MultiPoly:
    """Sparse polynomial in ``arity`` variables with rational coefficients."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: dict[Exps, RationalLike] | None = None):
        self.arity = arity
        clean: dict[Exps, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != arity:
                raise DomainError(f"exponent vector {e} does not have arity {arity}")
            if any(x < 0 for x in e):
                raise DomainError(f"negative exponent in {e}")
            c = Q(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def var(cls, i: int, arity: int) -> "MultiPoly":
        e = [0] * arity
        e[i] = 1
        return cls(arity, {tuple(e): 1})

    @classmethod
    def const(cls, c: RationalLike, arity: int) -> "MultiPoly":
        return cls(arity, {(0,) * arity: c})

    @classmethod
    def variables(cls, arity: int) -> list["MultiPoly"]:
        return [cls.var(i, arity) for i in range(arity)]

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if d is not None:
            return degs <= {d}
        return len(degs) <= 1

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.arity)
        return isinstance(other, MultiPoly) and self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.arity}, {self.to_text()!r})"

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise DomainError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        return MultiPoly.const(other, self.arity)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.const(1, self.arity)
        for _ in range(k):
            out = out * self
        return out

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """``c*z1^e1*...*zn^en`` terms joined by `` + `` in graded-lex order."""
        names = list(names) if names is not None else [f"z{i + 1}" for i in range(self.arity)]
        if len(names) != self.arity:
            raise DomainError("wrong number of variable names")
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(fmt(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{fmt(c)}*{mono}")
        return " + ".join(parts)

    __str__ = to_text

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "MultiPoly":
        """Inverse of :meth:`to_text` (also accepts ``-`` between terms)."""
        names = list(names)
        idx = {n: i for i, n in enumerate(names)}
        arity = len(names)
        text = text.strip()
        if text == "0":
            return cls(arity)
        out = cls(arity)
        for raw in re.split(r"\s\+\s", text.replace(" - ", " + -")):
            tok = raw.strip()
            coef = Fraction(1)
            factors = tok.split("*")
            if factors and factors[0].startswith("-") and factors[0][1:] in idx:
                coef = Fraction(-1)
                factors[0] = factors[0][1:]
            e = [0] * arity
            for fac in factors:
                if fac in idx or "^" in fac:
                    base, _, k = fac.partition("^")
                    if base not in idx:
                        raise DomainError(f"unknown variable {base!r} in {tok!r}")
                    e[idx[base]] += int(k) if k else 1
                else:
                    coef *= Q(fac)
            out = out + cls(arity, {tuple(e): coef})
        return out

    def __call__(self, *point):
        return evaluate(self, point)

    def partial(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly(self.arity, out)


def evaluate(p: MultiPoly, point: Sequence) -> object:
    """Exact value of ``p`` at ``point``; works for any ring elements supporting + and *."""
    if len(point) != p.arity:
        raise DomainError(f"point of length {len(point)} for arity-{p.arity} polynomial")
    acc = 0
    pows: dict[tuple[int, int], object] = {}
    for e, c in p.terms.items():
        term = c
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in pows:
                    pows[key] = point[i] ** k
                term = term * pows[key]
        acc = acc + term
    return acc


class LinearSubstitution:
    """Variable i of the source polynomial is replaced by ``images[i]``.

    Every image is an affine-linear MultiPoly in ``target_arity`` variables.
    """

    def __init__(self, images: Sequence[MultiPoly], target_arity: int | None = None):
        if not images and target_arity is None:
            raise DomainError("empty substitution needs an explicit target arity")
        self.target_arity = target_arity if target_arity is not None else images[0].arity
        for im in images:
            if im.arity != self.target_arity:
                raise DomainError("substitution images must share the target arity")
            if im.degree > 1:
                raise DomainError("substitution images must be affine-linear")
        self.images = list(images)

    @property
    def source_arity(self) -> int:
        return len(self.images)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[RationalLike]]) -> "LinearSubstitution":
        """x_i -> sum_j rows[i][j] * y_j."""
        m = len(rows[0]) if rows else 0
        ys = MultiPoly.variables(m)
        images = []
        for row in rows:
            im = MultiPoly(m)
            for c, y in zip(row, ys):
                if Q(c):
                    im = im + y * Q(c)
            images.append(im)
        return cls(images, m)

    @classmethod
    def identity(cls, n: int) -> "LinearSubstitution":
        return cls(MultiPoly.variables(n), n)


def substitute(p: MultiPoly, s: LinearSubstitution) -> MultiPoly:
    if p.arity != s.source_arity:
        raise DomainError(f"substitution expects arity {s.source_arity}, got {p.arity}")
    return evaluate(p, s.images) if p.terms else MultiPoly(s.target_arity)


def lattice_points(arity: int, h: int) -> Iterable[tuple[int, ...]]:
    """Integer vectors with sup-norm exactly h, lexicographic in the value order 0, 1, -1, 2, -2, ..."""
    order = [0]
    for k in range(1, h + 1):
        order += [k, -k]

    def rec(i, hit):
        if i == arity:
            if hit:
                yield ()
            return
        choices = order if (hit or i < arity - 1) else [h, -h] if h else [0]
        for x in choices:
            for rest in rec(i + 1, hit or abs(x) == h):
                yield (x,) + rest

    yield from rec(0, False)
