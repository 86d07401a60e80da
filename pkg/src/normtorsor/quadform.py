"""Exact quadratic forms over Q.

Covers diagonalization, Hasse invariants, local and global isotropy
(Hasse-Minkowski), a complete conic solver based on Holzer's bound, and a
deterministic search for rational representations q(x) = value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .arith import (INF, Place, Q, RationalLike, bad_places, factor, fmt, hilbert_symbol,
                    is_local_square, rational_sqrt, squarefree_integer)
from .config import DEFAULT_BUDGETS, Budgets
from .errors import BudgetError, DomainError
from .poly import LinearSubstitution, MultiPoly, lattice_points


class QuadraticForm:
    """q(x) = x^T G x with G symmetric."""

    __slots__ = ("gram",)

    def __init__(self, gram: Sequence[Sequence[RationalLike]]):
        g = tuple(tuple(Q(c) for c in row) for row in gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise DomainError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise DomainError("Gram matrix must be symmetric")
        self.gram = g

    @property
    def arity(self) -> int:
        return len(self.gram)

    @classmethod
    def diagonal(cls, coeffs: Sequence[RationalLike]) -> "QuadraticForm":
        n = len(coeffs)
        return cls([[coeffs[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "QuadraticForm":
        if not p.is_homogeneous(2):
            raise DomainError("not a quadratic form (must be homogeneous of degree 2)")
        n = p.arity
        g = [[Fraction(0)] * n for _ in range(n)]
        for e, c in p.terms.items():
            idx = [i for i, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                g[i][i] += c
            else:
                g[i][j] += c / 2
                g[j][i] += c / 2
        return cls(g)

    def to_poly(self) -> MultiPoly:
        n = self.arity
        xs = MultiPoly.variables(n)
        out = MultiPoly(n)
        for i in range(n):
            for j in range(n):
                if self.gram[i][j]:
                    out = out + xs[i] * xs[j] * self.gram[i][j]
        return out

    def __call__(self, x: Sequence) -> Fraction:
        return self.value(x)

    def value(self, x: Sequence) -> Fraction:
        if len(x) != self.arity:
            raise DomainError("point has the wrong arity")
        x = [Q(c) for c in x]
        return sum((self.gram[i][j] * x[i] * x[j] for i in range(self.arity) for j in range(self.arity)),
                   Fraction(0))

    def det(self) -> Fraction:
        return linalg.det(self.gram)

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm([[a + b for a, b in zip(r, s)] for r, s in zip(self.gram, other.gram)])

    def __mul__(self, c: RationalLike) -> "QuadraticForm":
        c = Q(c)
        return QuadraticForm([[a * c for a in r] for r in self.gram])

    __rmul__ = __mul__

    def direct_sum(self, other: "QuadraticForm") -> "QuadraticForm":
        n, m = self.arity, other.arity
        g = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.gram[i][j]
        return QuadraticForm(g)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"QuadraticForm({[[fmt(c) for c in r] for r in self.gram]})"

    def serialize(self) -> str:
        """Arity, then the upper-triangular Gram entries row-major."""
        n = self.arity
        entries = [fmt(self.gram[i][j]) for i in range(n) for j in range(i, n)]
        return f"{n}: " + " ".join(entries)

    @classmethod
    def deserialize(cls, text: str) -> "QuadraticForm":
        head, _, body = text.partition(":")
        n = int(head)
        vals = [Q(t) for t in body.split()]
        if len(vals) != n * (n + 1) // 2:
            raise DomainError("wrong number of Gram entries")
        g = [[Fraction(0)] * n for _ in range(n)]
        k = 0
        for i in range(n):
            for j in range(i, n):
                g[i][j] = g[j][i] = vals[k]
                k += 1
        return cls(g)


def binary_disc(q: QuadraticForm) -> Fraction:
    """Discriminant of a binary form, taken as det(Gram).

    For q = alpha x^2 + 2 beta x y + gamma y^2 this is alpha gamma - beta^2.
    """
    if q.arity != 2:
        raise DomainError("binary_disc needs a binary form")
    return q.det()


@dataclass(frozen=True)
class Diagonalization:
    """P^T G P = diag(coefficients, 0, ..., 0); ``transition`` maps x to y = P^{-1} x."""

    coefficients: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]  # columns of P, as rows of this tuple
    transition: LinearSubstitution
    rank: int

    def diagonal_poly(self) -> MultiPoly:
        n = len(self.basis)
        ys = MultiPoly.variables(n)
        out = MultiPoly(n)
        for d, y in zip(self.coefficients, ys):
            out = out + y * y * d
        return out


def rank_and_diagonalize(q: QuadraticForm) -> Diagonalization:
    """Symmetric Gaussian elimination with exact pivoting."""
    n = q.arity
    A = [list(r) for r in q.gram]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_op(dst, src, f):
        # basis change e_dst <- e_dst + f e_src, applied as congruence
        for r in range(n):
            P[r][dst] += f * P[r][src]
        for c in range(n):
            A[dst][c] += f * A[src][c]
        for r in range(n):
            A[r][dst] += f * A[r][src]

    def swap(i, j):
        if i == j:
            return
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]
        A[i], A[j] = A[j], A[i]
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]

    r = 0
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            col_op(i, j, Fraction(1))
            piv = i
        swap(k, piv)
        for j in range(k + 1, n):
            if A[k][j] != 0:
                col_op(j, k, -A[k][j] / A[k][k])
        r += 1
    coeffs = tuple(A[i][i] for i in range(r))
    Pinv = linalg.inverse(P)
    transition = LinearSubstitution.from_matrix(Pinv)
    basis = tuple(tuple(P[i][j] for i in range(n)) for j in range(n))
    d = Diagonalization(coeffs, basis, transition, r)
    # the transition must carry the diagonal form back to q, every call
    from .poly import substitute
    if substitute(d.diagonal_poly(), transition) != q.to_poly():
        raise AssertionError("diagonalization round-trip failed")
    return d


def _diag_nondegenerate(q: QuadraticForm) -> tuple[Fraction, ...]:
    d = rank_and_diagonalize(q)
    if d.rank != q.arity:
        raise DomainError("degenerate quadratic form")
    return d.coefficients


def hasse_invariant(q: QuadraticForm, v: Place) -> int:
    return _hasse(_diag_nondegenerate(q), v)


def _hasse(d: Sequence[Fraction], v: Place) -> int:
    out = 1
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            out *= hilbert_symbol(d[i], d[j], v)
    return out


@dataclass(frozen=True)
class LocalCertificate:
    """Local verdict at one place, with the invariants that justify it."""

    place: Place
    verdict: str  # "solvable" | "insolvable"
    invariant_data: dict = field(default_factory=dict)
    witness: tuple | None = None
    channel: str = "form"

    @property
    def solvable(self) -> bool:
        return self.verdict == "solvable"

    def to_json(self) -> dict:
        out = {"place": str(self.place), "verdict": self.verdict, "channel": self.channel,
               "invariants": {k: (fmt(v) if isinstance(v, Fraction) else v)
                              for k, v in self.invariant_data.items()}}
        if self.witness is not None:
            out["witness"] = [fmt(c) for c in self.witness]
        return out

    def relabel(self, channel: str) -> "LocalCertificate":
        return LocalCertificate(self.place, self.verdict, self.invariant_data, self.witness, channel)


def _local_diag(d: Sequence[Fraction], v: Place, channel: str = "form") -> LocalCertificate:
    m = len(d)
    disc = Fraction(1)
    for c in d:
        disc *= c
    data = {"rank": m, "disc_class": squarefree_integer(disc)}
    if v.is_infinite:
        pos = sum(1 for c in d if c > 0)
        data["signature"] = [pos, m - pos]
        ok = 0 < pos < m
    else:
        eps = _hasse(d, v)
        data["hasse"] = eps
        if m == 1:
            ok = False
        elif m == 2:
            ok = is_local_square(-disc, v)
        elif m == 3:
            ok = hilbert_symbol(-1, -disc, v) == eps
        elif m == 4:
            ok = (not is_local_square(disc, v)) or eps == hilbert_symbol(-1, -1, v)
        else:
            ok = True
    return LocalCertificate(v, "solvable" if ok else "insolvable", data, None, channel)


def local_isotropy(q: QuadraticForm, v: Place) -> LocalCertificate:
    return _local_diag(_diag_nondegenerate(q), v)


@dataclass(frozen=True)
class IsotropyReport:
    isotropic: bool
    certificates: tuple[LocalCertificate, ...]
    witness: tuple | None = None

    @property
    def failing(self) -> LocalCertificate | None:
        return next((c for c in self.certificates if not c.solvable), None)


def _global_diag(d: Sequence[Fraction], budgets: Budgets, channel: str = "form") -> IsotropyReport:
    places = bad_places(*d, budgets=budgets)
    certs = tuple(_local_diag(d, v, channel) for v in places)
    return IsotropyReport(all(c.solvable for c in certs), certs)


def isotropy_report(q: QuadraticForm, budgets: Budgets = DEFAULT_BUDGETS) -> IsotropyReport:
    d = _diag_nondegenerate(q)
    rep = _global_diag(d, budgets)
    if rep.isotropic and q.arity == 3:
        diag = rank_and_diagonalize(q)
        pt = solve_conic(*diag.coefficients, budgets=budgets)
        if isinstance(pt, tuple):
            P = diag.basis
            x = [sum((P[j][i] * pt[j] for j in range(3)), Fraction(0)) for i in range(3)]
            rep = IsotropyReport(True, rep.certificates, tuple(_primitive(x)))
    return rep


def is_isotropic(q: QuadraticForm, v: Place | None = None, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    """Local isotropy at ``v``, or global isotropy (Hasse-Minkowski) when v is None."""
    if v is not None:
        return local_isotropy(q, v).solvable
    return _global_diag(_diag_nondegenerate(q), budgets).isotropic


def _primitive(x: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in x:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in x]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    g = g or 1
    ints = [c // g for c in ints]
    first = next((c for c in ints if c), 1)
    return [-c for c in ints] if first < 0 else ints


# -- conics -------------------------------------------------------------------------

def _squarefree_split(n: int, budgets: Budgets) -> tuple[int, int]:
    """n = core * s^2 with core squarefree; returns (core, s)."""
    f = factor(n, budgets)
    core, s = f.sign, 1
    for p, e in f.factors:
        if e % 2:
            core *= p
        s *= p ** (e // 2)
    return core, s


def reduce_ternary(a: RationalLike, b: RationalLike, c: RationalLike,
                   budgets: Budgets = DEFAULT_BUDGETS) -> tuple[list[int], list[Fraction]]:
    """Legendre-reduce a x^2 + b y^2 + c z^2 = 0.

    Returns integer coefficients (squarefree, pairwise coprime) and scales
    such that original variable i = scale[i] * new variable i.
    """
    coeffs = [Q(a), Q(b), Q(c)]
    if any(x == 0 for x in coeffs):
        raise DomainError("conic coefficients must be nonzero")
    den = 1
    for x in coeffs:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in coeffs]
    scale = [Fraction(1)] * 3
    while True:
        for i in range(3):
            core, s = _squarefree_split(ints[i], budgets)
            if s != 1:
                ints[i] = core
                scale[i] /= s  # a s^2 X^2 = a (s X)^2, so X = Y / s
        g = math.gcd(math.gcd(ints[0], ints[1]), ints[2])
        if g > 1:
            ints = [x // g for x in ints]
        changed = False
        for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            g = math.gcd(ints[i], ints[j])
            if g > 1:
                # multiply through by g: (a/g)(g X)^2 + (b/g)(g Y)^2 + g c Z^2
                ints[i] //= g
                ints[j] //= g
                ints[k] *= g
                scale[i] /= g
                scale[j] /= g
                changed = True
                break
        if not changed:
            return ints, scale


def holzer_bounds(coeffs: Sequence[int]) -> list[int]:
    a, b, c = (abs(x) for x in coeffs)
    return [math.isqrt(b * c), math.isqrt(a * c), math.isqrt(a * b)]


def solve_conic(a: RationalLike, b: RationalLike, c: RationalLike,
                budgets: Budgets = DEFAULT_BUDGETS) -> tuple[int, int, int] | LocalCertificate:
    """A primitive integral point on a x^2 + b y^2 + c z^2 = 0, or the failing place.

    Local solvability is decided first.  The point is then found by exhaustive
    search in Holzer's box for the reduced form: the two variables with the
    smaller bounds are enumerated by height (value order 0, 1, -1, ...), the
    remaining one is recovered by an integer square root.
    """
    orig = [Q(a), Q(b), Q(c)]
    if any(x == 0 for x in orig):
        raise DomainError("conic coefficients must be nonzero")
    rep = _global_diag(orig, budgets, channel="conic")
    if not rep.isotropic:
        return rep.failing
    red, scale = reduce_ternary(*orig, budgets=budgets)
    bounds = holzer_bounds(red)
    k = max(range(3), key=lambda i: (bounds[i], i))
    free = [i for i in range(3) if i != k]
    nodes = 0
    for h in range(0, max(bounds[free[0]], bounds[free[1]]) + 1):
        for u, w in lattice_points(2, h):
            if abs(u) > bounds[free[0]] or abs(w) > bounds[free[1]]:
                continue
            nodes += 1
            if nodes > budgets.enum_nodes:
                raise BudgetError("Holzer search exceeded enum_nodes", partial={"decision": "solvable"})
            rest = red[free[0]] * u * u + red[free[1]] * w * w
            if -rest % red[k]:
                continue
            sq = -rest // red[k]
            if sq < 0:
                continue
            r = math.isqrt(sq)
            if r * r != sq or (r == 0 and u == 0 and w == 0):
                continue
            Y = [0, 0, 0]
            Y[free[0]], Y[free[1]], Y[k] = u, w, r
            X = _primitive([Y[i] * scale[i] for i in range(3)])
            if sum(o * x * x for o, x in zip(orig, X)) != 0:
                raise AssertionError("conic point failed verification")
            return tuple(X)
    raise AssertionError(f"locally solvable conic {orig} has no point in Holzer's box")


# -- representations --------------------------------------------------------------

def _box_points(arity: int, h: int):
    """Integer vectors with sup-norm <= h, lexicographic in value order 0, 1, -1, ..."""
    order = [0]
    for k in range(1, h + 1):
        order += [k, -k]

    def rec(i):
        if i == arity:
            yield ()
            return
        for x in order:
            for rest in rec(i + 1):
                yield (x,) + rest

    yield from rec(0)


def solved_coordinate(q: QuadraticForm) -> int:
    """Coordinate recovered by the quadratic formula in ``represent_value``.

    The one whose Gram row has the smallest sup-norm; the last one on ties.
    """
    sizes = [max(abs(c) for c in row) for row in q.gram]
    return min(range(q.arity), key=lambda i: (sizes[i], -i))


def represent_value(q: QuadraticForm, value: RationalLike,
                    budgets: Budgets = DEFAULT_BUDGETS) -> tuple[Fraction, ...] | LocalCertificate:
    """A rational x with q(x) = value, or the place where q does not represent value.

    Representability is decided first through isotropy of q + <-value>.  The
    point is then searched among primitive integer vectors (x, x0), x0 > 0, of
    q(x) = value x0^2: ordered by height, then x0, then lexicographically on the
    free coordinates; one coordinate is recovered exactly as a rational root.
    """
    value = Q(value)
    if value == 0:
        raise DomainError("represent_value needs a nonzero value")
    diag = rank_and_diagonalize(q)
    if diag.rank != q.arity:
        raise DomainError("represent_value needs a nondegenerate form")
    if diag.rank < 3:
        raise DomainError("represent_value needs rank >= 3")
    rep = _global_diag(list(diag.coefficients) + [-value], budgets, channel="representation")
    if not rep.isotropic:
        return rep.failing
    n = q.arity
    G, ival = _integer_gram(q.gram, value)
    k = solved_coordinate(q)
    free = [i for i in range(n) if i != k]
    nodes = 0
    h = 0
    while True:
        h += 1
        for x0 in range(1, h + 1):
            pts = _box_points(n - 1, h) if x0 == h else lattice_points(n - 1, h)
            for fv in pts:
                nodes += 1
                if nodes > budgets.enum_nodes:
                    raise BudgetError(f"representation search exceeded {budgets.enum_nodes} nodes at height {h}",
                                      partial={"decision": "representable", "height": h})
                sol = _solve_in_coordinate(G, k, free, fv, ival * x0 * x0)
                if sol is None:
                    continue
                x = [Fraction(0)] * n
                for i, c in zip(free, fv):
                    x[i] = Fraction(c)
                x[k] = sol
                x = tuple(c / x0 for c in x)
                if q.value(x) != value:
                    raise AssertionError("representation failed verification")
                return x


def _integer_gram(G, value):
    """Gram matrix and value scaled by a common denominator; roots are unchanged."""
    m = 1
    for c in [value] + [c for row in G for c in row]:
        m = m * c.denominator // math.gcd(m, c.denominator)
    return [[int(c * m) for c in row] for row in G], int(value * m)


def _solve_in_coordinate(G, k, free, fv, rhs) -> Fraction | None:
    A = G[k][k]
    B = 2 * sum(G[k][i] * c for i, c in zip(free, fv))
    C = sum(G[i][j] * ci * cj for i, ci in zip(free, fv) for j, cj in zip(free, fv)) - rhs
    if A == 0:
        if B == 0:
            return Fraction(0) if C == 0 else None
        return Fraction(-C, B)
    D = B * B - 4 * A * C
    if D < 0:
        return None
    r = math.isqrt(D)
    if r * r != D:
        return None
    return Fraction(-B + r, 2 * A)
