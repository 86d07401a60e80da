"""Norm equations P(t) = N_{K/Q}(z), their universal torsors, and solvers.

The constructive solver for quartic K containing sqrt a goes through the
conic fibration: a point w of the conic N_{L/Q}(w) = c, the fiber
t - sqrt a = w^{-1} N_{K/L}(x), and a rational point of the rank-4 quadric
f1(x) = -1 cut out by the sqrt a-coordinate of that fiber equation.

Torsor models come in three shapes: Split (sqrt a in K, coordinates
x1, x2 in K), Inert (sqrt a not in K, coordinate x in F = K(sqrt a)) and
General (P factored over Q, one coordinate block per factor).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .arith import Q, RationalLike, fmt, iter_rationals, rational_sqrt
from .config import DEFAULT_BUDGETS, Budgets
from .errors import BudgetError, DomainError, UnsupportedCase
from .numfield import (FieldElement, NumberField, RelQuadElement, RelQuadExt, SubfieldEmbedding,
                       _LPoly, absolute_norm, conj_L, element_from_lcoords, norm_form,
                       quadratic_field, quartic_structure, relative_norm,
                       relative_norm_form_quartic, sqrt_in_field)
from .poly import MultiPoly, UniPoly, evaluate, factor_over_Q, lattice_points, substitute, LinearSubstitution
from .quadform import LocalCertificate, QuadraticForm, rank_and_diagonalize, represent_value, solve_conic


# -- problems and solutions -------------------------------------------------------

class NormEquationProblem:
    """P(t) = N_{K/Q}(z).

    When P is an irreducible quadratic it is kept in the shape
    c((t + shift)^2 - a); the usual c(t^2 - a) has shift 0.
    """

    def __init__(self, K: NumberField, P: UniPoly, *, sqrt_witness: FieldElement | None = None,
                 budgets: Budgets = DEFAULT_BUDGETS):
        if P.is_zero() or P.degree < 1:
            raise DomainError("P must be a nonconstant polynomial")
        self.K = K
        self.P = P
        self.budgets = budgets
        self.c = P.lc
        self.quadratic = False
        self.shift = Fraction(0)
        self.a: Fraction | None = None
        if P.degree == 2:
            p0, p1, p2 = P.coeffs
            shift = p1 / (2 * p2)
            a = shift * shift - p0 / p2
            if rational_sqrt(a) is None:
                self.quadratic = True
                self.shift = shift
                self.a = a
        self._sqrt = None
        self._sqrt_known = False
        if sqrt_witness is not None:
            if not self.quadratic:
                raise DomainError("a sqrt witness only makes sense for an irreducible quadratic P")
            if sqrt_witness.field != K or sqrt_witness * sqrt_witness != self.a:
                raise DomainError(f"witness does not square to a = {self.a}")
            self._sqrt, self._sqrt_known = sqrt_witness, True

    @classmethod
    def quadratic_problem(cls, c: RationalLike, a: RationalLike, K: NumberField, **kw) -> "NormEquationProblem":
        c, a = Q(c), Q(a)
        if c == 0:
            raise DomainError("c must be nonzero")
        if rational_sqrt(a) is not None:
            raise DomainError(f"a = {a} is a square; c(t^2 - a) is reducible")
        return cls(K, UniPoly([-c * a, 0, c]), **kw)

    @property
    def L(self) -> NumberField:
        if not self.quadratic:
            raise DomainError("L = Q(sqrt a) is only defined for irreducible quadratic P")
        return quadratic_field(self.a)

    def sqrt_a(self) -> FieldElement | None:
        if not self._sqrt_known:
            self._sqrt = sqrt_in_field(self.a, self.K, self.budgets)
            self._sqrt_known = True
        return self._sqrt

    def embedding(self) -> SubfieldEmbedding:
        s = self.sqrt_a()
        if s is None:
            raise DomainError(f"sqrt({self.a}) is not in K")
        return SubfieldEmbedding(self.K, self.a, s)

    def t_minus_eta(self, t: Fraction) -> FieldElement:
        """t - eta as an element of L, eta = -shift + sqrt a."""
        return self.L([Q(t) + self.shift, -1])

    def describe(self) -> dict:
        out = {"field": self.K.to_json(), "P": [fmt(x) for x in self.P.coeffs]}
        if self.quadratic:
            out.update(c=fmt(self.c), a=fmt(self.a), shift=fmt(self.shift))
        return out


@dataclass(frozen=True)
class XSolution:
    """A rational point (t, z) of P(t) = N_{K/Q}(z) with P(t) != 0."""

    problem: NormEquationProblem
    t: Fraction
    z: FieldElement

    def __post_init__(self):
        object.__setattr__(self, "t", Q(self.t))
        pt = self.problem.P(self.t)
        if pt == 0:
            raise DomainError(f"P({self.t}) = 0: point is not in U")
        n = absolute_norm(self.z)
        if n != pt:
            raise DomainError(f"P({self.t}) = {pt} but N(z) = {n}")

    @property
    def value(self) -> Fraction:
        return self.problem.P(self.t)

    def to_json(self) -> dict:
        return {"t": fmt(self.t), "z": self.z.to_json(), "P(t)": fmt(self.value)}


def verify_solution(K: NumberField, P: UniPoly, t: RationalLike, z: Sequence[RationalLike]) -> bool:
    t = Q(t)
    pt = P(t)
    return pt != 0 and absolute_norm(K(z)) == pt


# -- splitting data ----------------------------------------------------------------

@dataclass(frozen=True)
class SplittingDatum:
    """(rho, xi) in L^x x K^x with c N_{L/Q}(rho) = N_{K/Q}(xi)."""

    c: Fraction
    rho: FieldElement
    xi: FieldElement

    def __post_init__(self):
        lhs = self.c * absolute_norm(self.rho)
        rhs = absolute_norm(self.xi)
        if lhs == 0 or lhs != rhs:
            raise DomainError(f"splitting condition fails: c N(rho) = {lhs}, N(xi) = {rhs}")

    def to_json(self) -> dict:
        return {"c": fmt(self.c), "rho": self.rho.to_json(), "xi": self.xi.to_json()}


@dataclass(frozen=True)
class FactorData:
    """One factor P_i^e_i of P for the General torsor.

    ``kind`` is "rational" (P_i = t - r, L_i = Q), "split" or "inert"
    (P_i quadratic, L_i = Q(sqrt D) and eta_i = -shift + sqrt D).
    """

    poly: UniPoly
    exponent: int
    kind: str
    rho: Union[Fraction, FieldElement]
    root: Fraction | None = None
    D: Fraction | None = None
    shift: Fraction | None = None

    def rho_norm(self) -> Fraction:
        return self.rho if self.kind == "rational" else absolute_norm(self.rho)


@dataclass(frozen=True)
class GeneralSplittingDatum:
    """(rho_1, ..., rho_d, xi) with c prod N(rho_i)^e_i = N_{K/Q}(xi)."""

    c: Fraction
    factors: tuple[FactorData, ...]
    xi: FieldElement

    def __post_init__(self):
        lhs = self.c
        for f in self.factors:
            lhs *= f.rho_norm() ** f.exponent
        rhs = absolute_norm(self.xi)
        if lhs == 0 or lhs != rhs:
            raise DomainError(f"splitting condition fails: {lhs} != {rhs}")

    def to_json(self) -> dict:
        return {"c": fmt(self.c), "xi": self.xi.to_json(),
                "factors": [{"P_i": [fmt(x) for x in f.poly.coeffs], "e_i": f.exponent, "kind": f.kind,
                             "rho_i": fmt(f.rho) if f.kind == "rational" else f.rho.to_json()}
                            for f in self.factors]}


def _norm_conic(a: Fraction, d: Fraction, budgets: Budgets) -> FieldElement | LocalCertificate:
    """w in Q(sqrt a) with N(w) = d, from the conic x^2 - a y^2 - d z^2 = 0."""
    pt = solve_conic(1, -a, -d, budgets=budgets)
    if isinstance(pt, LocalCertificate):
        return pt
    x, y, z = pt
    if z == 0:
        raise AssertionError("conic point at infinity although a is not a square")
    L = quadratic_field(a)
    w = L([Fraction(x, z), Fraction(y, z)])
    assert absolute_norm(w) == d
    return w


def _xi_candidates(K: NumberField, c: Fraction, budgets: Budgets):
    yield K.one()
    if K.degree % 2:
        yield K.scalar(c)
    seen_one = False
    for h in range(1, budgets.xi_height + 1):
        for v in lattice_points(K.degree, h):
            if v[0] == 1 and not any(v[1:]) and not seen_one:
                seen_one = True
                continue
            if next(x for x in v if x) < 0:
                continue  # xi and -xi give the same conic up to sign of N when n is even
            yield K(v)


def solve_splitting(c: RationalLike, a: RationalLike, K: NumberField,
                    budgets: Budgets = DEFAULT_BUDGETS) -> SplittingDatum:
    """First (rho, xi) in a fixed order with c N_{L/Q}(rho) = N_{K/Q}(xi).

    xi runs over 1 and then integral power-basis vectors by height; for each,
    rho comes from the conic N_{L/Q}(rho) = N(xi)/c.
    """
    c, a = Q(c), Q(a)
    if c == 0:
        raise DomainError("c must be nonzero")
    failures: dict[str, int] = {}
    nodes = 0
    for xi in _xi_candidates(K, c, budgets):
        nodes += 1
        if nodes > budgets.enum_nodes:
            break
        nxi = absolute_norm(xi)
        if nxi == 0:
            continue
        w = _norm_conic(a, nxi / c, budgets)
        if isinstance(w, LocalCertificate):
            failures[str(w.place)] = failures.get(str(w.place), 0) + 1
            continue
        return SplittingDatum(c, w, xi)
    raise BudgetError("no splitting datum within budget",
                      partial={"certified_conic_failures": failures, "candidates": nodes})


# -- torsor models ----------------------------------------------------------------

@dataclass(frozen=True)
class SplitTorsor:
    """t - eta = rho N_{K/L}(x1) sigma(N_{K/L}(x2)), x1, x2 in K^x."""

    problem: NormEquationProblem
    emb: SubfieldEmbedding
    split: SplittingDatum
    case = "split"

    @property
    def sqrt_a_in_K(self) -> FieldElement:
        return self.emb.image_of_generator

    def rhs(self, x1: FieldElement, x2: FieldElement) -> FieldElement:
        return self.split.rho * relative_norm(x1, self.emb) * conj_L(relative_norm(x2, self.emb))

    def residual(self, t, x1, x2) -> FieldElement:
        return self.problem.t_minus_eta(t) - self.rhs(x1, x2)

    def z_of(self, x1, x2) -> FieldElement:
        return self.split.xi * x1 * x2

    def equation_text(self) -> str:
        sh = "" if self.problem.shift == 0 else f" + {fmt(self.problem.shift)}"
        return (f"t{sh} - sqrt({fmt(self.problem.a)}) = rho * N_K/L(x1) * sigma(N_K/L(x2)), "
                f"rho = {_ltext(self.split.rho)}")

    def to_json(self) -> dict:
        return {"case": self.case, "equation": self.equation_text(),
                "sqrt_a_in_K": self.sqrt_a_in_K.to_json(), "splitting": self.split.to_json()}


@dataclass(frozen=True)
class InertTorsor:
    """t - eta = rho N_{F/L}(x), x in F^x, F = K(sqrt a)."""

    problem: NormEquationProblem
    F: RelQuadExt
    split: SplittingDatum
    case = "inert"

    def rhs(self, x: RelQuadElement) -> FieldElement:
        return self.split.rho * x.norm_to_L()

    def residual(self, t, x) -> FieldElement:
        return self.problem.t_minus_eta(t) - self.rhs(x)

    def z_of(self, x: RelQuadElement) -> FieldElement:
        return self.split.xi * x.norm_to_base()

    def equation_text(self) -> str:
        sh = "" if self.problem.shift == 0 else f" + {fmt(self.problem.shift)}"
        return f"t{sh} - sqrt({fmt(self.problem.a)}) = rho * N_F/L(x), rho = {_ltext(self.split.rho)}"

    def to_json(self) -> dict:
        return {"case": self.case, "equation": self.equation_text(),
                "F": {"base_minpoly": [fmt(c) for c in self.F.base.minpoly.coeffs], "adjoin_sqrt": fmt(self.F.a)},
                "splitting": self.split.to_json()}


@dataclass(frozen=True)
class GeneralTorsor:
    """t - eta_i = rho_i N_{A_i/L_i}(z_i) for every factor P_i of P."""

    problem: NormEquationProblem
    split: GeneralSplittingDatum
    embeddings: tuple
    case = "general"

    def factor_residual(self, i: int, t: Fraction, coords) -> Union[Fraction, FieldElement]:
        f = self.split.factors[i]
        t = Q(t)
        if f.kind == "rational":
            return (t - f.root) - f.rho * absolute_norm(coords)
        L = quadratic_field(f.D)
        lhs = L([t + f.shift, -1])
        if f.kind == "split":
            emb = self.embeddings[i]
            x1, x2 = coords
            return lhs - f.rho * relative_norm(x1, emb) * conj_L(relative_norm(x2, emb))
        return lhs - f.rho * coords.norm_to_L()

    def residual(self, t, *blocks):
        return [self.factor_residual(i, t, b) for i, b in enumerate(blocks)]

    def z_of(self, *blocks) -> FieldElement:
        z = self.split.xi
        for f, b in zip(self.split.factors, blocks):
            if f.kind == "rational":
                part = b
            elif f.kind == "split":
                part = b[0] * b[1]
            else:
                part = b.norm_to_base()
            z = z * part ** f.exponent
        return z

    def equation_text(self) -> str:
        lines = []
        for f in self.split.factors:
            if f.kind == "rational":
                lines.append(f"t - {fmt(f.root)} = rho_i * N_K/Q(z_i)   [P_i = {f.poly}, e_i = {f.exponent}]")
            else:
                sh = "" if f.shift == 0 else f" + {fmt(f.shift)}"
                norm = "N_K/L(x1) * sigma(N_K/L(x2))" if f.kind == "split" else "N_F/L(x)"
                lines.append(f"t{sh} - sqrt({fmt(f.D)}) = rho_i * {norm}   [P_i = {f.poly}, e_i = {f.exponent}, {f.kind}]")
        return "; ".join(lines)

    def to_json(self) -> dict:
        facs = []
        for f, emb in zip(self.split.factors, self.embeddings):
            d = {"P_i": [fmt(x) for x in f.poly.coeffs], "e_i": f.exponent, "kind": f.kind}
            if f.kind == "rational":
                d["root"] = fmt(f.root)
            else:
                d.update(D=fmt(f.D), shift=fmt(f.shift))
            if emb is not None:
                d["sqrt_D_in_K"] = emb.image_of_generator.to_json()
            facs.append(d)
        return {"case": self.case, "equation": self.equation_text(), "c": fmt(self.problem.c),
                "factors": facs, "splitting": self.split.to_json()}


TorsorModel = Union[SplitTorsor, InertTorsor, GeneralTorsor]


def _ltext(l: FieldElement) -> str:
    c0, c1 = l.coords
    return f"{fmt(c0)} + {fmt(c1)}*sqrt({fmt(-l.field.minpoly.coeffs[0])})"


def _is_zero(r) -> bool:
    if isinstance(r, list):
        return all(_is_zero(x) for x in r)
    return r == 0


@dataclass(frozen=True)
class TorsorPoint:
    """A rational point (t, coordinates) on a torsor model; checked on construction."""

    model: object
    t: Fraction
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "t", Q(self.t))
        r = self.model.residual(self.t, *self.coords)
        if not _is_zero(r):
            raise DomainError(f"torsor equation fails, residual {r!r}")

    def to_json(self) -> dict:
        return {"t": fmt(self.t), "coords": [_coord_json(c) for c in self.coords]}


def _coord_json(c):
    if isinstance(c, (tuple, list)):
        return [_coord_json(x) for x in c]
    if isinstance(c, Fraction):
        return fmt(c)
    return c.to_json()


def _quadratic_factor_data(P_i: UniPoly):
    _, b, _one = P_i.coeffs
    d = P_i.coeffs[0]
    shift = b / 2
    D = shift * shift - d
    return shift, D


def build_torsor(p: NormEquationProblem, s: SplittingDatum | GeneralSplittingDatum,
                 *, general: bool = False) -> TorsorModel:
    """Torsor model attached to the splitting datum ``s``.

    Irreducible quadratic P gives Split (sqrt a in K) or Inert; anything else
    (or ``general=True``) goes through the factored system.
    """
    if p.quadratic and not general:
        if not isinstance(s, SplittingDatum):
            raise DomainError("irreducible quadratic P needs a SplittingDatum")
        if s.c != p.c or s.xi.field != p.K or s.rho.field != p.L:
            raise DomainError("splitting datum does not belong to this problem")
        root = p.sqrt_a()
        if root is not None:
            return SplitTorsor(p, SubfieldEmbedding(p.K, p.a, root), s)
        return InertTorsor(p, RelQuadExt(p.K, p.a, check=False), s)
    if not isinstance(s, GeneralSplittingDatum):
        raise DomainError("the factored torsor needs a GeneralSplittingDatum")
    embs = []
    for f in s.factors:
        if f.kind == "split":
            root = sqrt_in_field(f.D, p.K, p.budgets)
            if root is None:
                raise DomainError("factor marked split but sqrt D is not in K")
            embs.append(SubfieldEmbedding(p.K, f.D, root))
        else:
            embs.append(None)
    prod = UniPoly([s.c])
    for f in s.factors:
        prod = prod * f.poly ** f.exponent
    if prod != p.P:
        raise DomainError("factor data do not multiply back to P")
    return GeneralTorsor(p, s, tuple(embs))


def general_factors(p: NormEquationProblem) -> list[tuple[UniPoly, int, str, dict]]:
    """Factor P over Q and classify each factor against K."""
    c, facs = factor_over_Q(p.P, p.budgets)
    out = []
    for h, e in facs:
        if h.degree == 1:
            out.append((h, e, "rational", {"root": -h.coeffs[0]}))
        elif h.degree == 2:
            shift, D = _quadratic_factor_data(h)
            kind = "split" if sqrt_in_field(D, p.K, p.budgets) is not None else "inert"
            out.append((h, e, kind, {"shift": shift, "D": D}))
        else:
            raise UnsupportedCase(f"factor {h} of degree {h.degree}: L_i (x) K may split partially; "
                                  "only the two extreme cases are implemented")
    return out


def solve_general_splitting(p: NormEquationProblem, budgets: Budgets | None = None) -> GeneralSplittingDatum:
    """Search xi by height; one factor absorbs N(xi)/c, the other rho_i are 1."""
    budgets = budgets or p.budgets
    facs = general_factors(p)
    c = p.c
    order = sorted(range(len(facs)), key=lambda i: (facs[i][1] != 1, facs[i][2] != "rational", i))
    failures: dict[str, int] = {}
    nodes = 0
    for xi in _xi_candidates(p.K, c, budgets):
        nodes += 1
        if nodes > budgets.enum_nodes:
            break
        target = absolute_norm(xi) / c
        if target == 0:
            continue
        for j in order:
            h, e, kind, info = facs[j]
            root = _rational_root(target, e)
            if root is None:
                continue
            if kind == "rational":
                rho_j = root
            else:
                w = _norm_conic(info["D"], root, budgets)
                if isinstance(w, LocalCertificate):
                    failures[str(w.place)] = failures.get(str(w.place), 0) + 1
                    continue
                rho_j = w
            data = []
            for i, (hi, ei, ki, inf) in enumerate(facs):
                if i == j:
                    rho = rho_j
                else:
                    rho = Fraction(1) if ki == "rational" else quadratic_field(inf["D"]).one()
                data.append(FactorData(hi, ei, ki, rho, inf.get("root"), inf.get("D"), inf.get("shift")))
            return GeneralSplittingDatum(c, tuple(data), xi)
    raise BudgetError("no general splitting datum within budget",
                      partial={"certified_conic_failures": failures, "candidates": nodes})


def _rational_root(q: Fraction, e: int) -> Fraction | None:
    """The rational r with r^e = q (real root, r > 0 for even e), if any."""
    if e == 1:
        return q
    if q < 0 and e % 2 == 0:
        return None
    sign = -1 if q < 0 else 1
    n, d = abs(q.numerator), q.denominator
    rn, rd = _int_root(n, e), _int_root(d, e)
    if rn is None or rd is None:
        return None
    return sign * Fraction(rn, rd)


def _int_root(n: int, e: int) -> int | None:
    r = round(n ** (1.0 / e)) if n < 2 ** 1000 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // e + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** e < n:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** e == n:
            return cand
    return None


# -- torsor -> X and the changes of variables --------------------------------------

def make_point(model: TorsorModel, t: RationalLike, *coords) -> TorsorPoint:
    return TorsorPoint(model, Q(t), tuple(coords))


def torsor_to_X(model: TorsorModel, pt: TorsorPoint) -> XSolution:
    """Image of a torsor point on X; z = xi x1 x2, xi N_{F/K}(x) or the factored product."""
    r = model.residual(pt.t, *pt.coords)
    if not _is_zero(r):
        raise DomainError(f"point is not on the torsor, residual {r!r}")
    return XSolution(model.problem, pt.t, model.z_of(*pt.coords))


@dataclass(frozen=True)
class YPoint:
    """(t, w, y) on N_{K/Q}(w)(t - eta) = rho N_{K/L}(y), w, y in K^x."""

    model: SplitTorsor
    t: Fraction
    w: FieldElement
    y: FieldElement

    def __post_init__(self):
        r = y_residual(self.model, self.t, self.w, self.y)
        if r != 0:
            raise DomainError(f"Y equation fails, residual {r!r}")


def y_residual(model: SplitTorsor, t, w: FieldElement, y: FieldElement) -> FieldElement:
    p = model.problem
    return p.t_minus_eta(t) * absolute_norm(w) - model.split.rho * relative_norm(y, model.emb)


def bhb_substitution(direction: str, model: SplitTorsor, pt):
    """forward: (t, x1, x2) -> (t, w, y) = (t, 1/x2, x1/x2); backward is the inverse."""
    if not isinstance(model, SplitTorsor):
        raise DomainError("this change of variables applies to the split torsor")
    if direction == "forward":
        x1, x2 = pt.coords
        if x2.is_zero():
            raise DomainError("x2 must be invertible")
        w = x2.inverse()
        return YPoint(model, pt.t, w, x1 * w)
    if direction == "backward":
        if pt.w.is_zero():
            raise DomainError("w must be invertible")
        winv = pt.w.inverse()
        return make_point(model, pt.t, winv * pt.y, winv)
    raise DomainError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class YPrimePoint:
    """(t, w, y) on N_{F/Q}(w)(t - eta) = rho N_{F/L}(y), w, y in F^x."""

    model: InertTorsor
    t: Fraction
    w: RelQuadElement
    y: RelQuadElement

    def __post_init__(self):
        r = yprime_residual(self.model, self.t, self.w, self.y)
        if r != 0:
            raise DomainError(f"Y' equation fails, residual {r!r}")


def yprime_residual(model: InertTorsor, t, w: RelQuadElement, y: RelQuadElement) -> FieldElement:
    return model.problem.t_minus_eta(t) * w.absolute_norm() - model.split.rho * y.norm_to_L()


def inert_product_iso(direction: str, model: InertTorsor, pt):
    """forward: (t, w, y) -> ((t, (w sigma(w))^{-1} y), w); backward: ((t, x), y) -> (t, y, x y sigma(y))."""
    if not isinstance(model, InertTorsor):
        raise DomainError("this isomorphism applies to the inert torsor")
    if direction == "forward":
        if pt.w.is_zero():
            raise DomainError("w must be invertible")
        x = (pt.w * pt.w.conjugate()).inverse() * pt.y
        return make_point(model, pt.t, x), pt.w
    if direction == "backward":
        tp, y = pt
        if y.is_zero():
            raise DomainError("the free coordinate must be invertible")
        (x,) = tp.coords
        return YPrimePoint(model, tp.t, y, x * y * y.conjugate())
    raise DomainError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class TorusPoint:
    """(z1, z2) in L^x x K^x with N_{L/Q}(z1) = N_{K/Q}(z2)."""

    z1: FieldElement
    z2: FieldElement

    def __post_init__(self):
        if absolute_norm(self.z1) != absolute_norm(self.z2):
            raise DomainError("point is not on the torus N_L(z1) = N_K(z2)")


def torus_map_d(model: SplitTorsor | InertTorsor, z) -> TorusPoint:
    """d(z) = (N_{A/L}(z), N_{A/K}(z)); A = K x K (split) or F (inert)."""
    if isinstance(model, SplitTorsor):
        x1, x2 = z
        if x1.is_zero() or x2.is_zero():
            raise DomainError("z must be invertible in A")
        return TorusPoint(relative_norm(x1, model.emb) * conj_L(relative_norm(x2, model.emb)), x1 * x2)
    if isinstance(model, InertTorsor):
        if z.is_zero():
            raise DomainError("z must be invertible in A")
        return TorusPoint(z.norm_to_L(), z.norm_to_base())
    raise DomainError("d is defined for the split and inert models")


torus_membership_and_d = torus_map_d


def on_E(c: RationalLike, z1: FieldElement, z2: FieldElement) -> bool:
    """Is (z1, z2) on the homogeneous space c N_{L/Q}(z1) = N_{K/Q}(z2)?"""
    n = Q(c) * absolute_norm(z1)
    return n != 0 and n == absolute_norm(z2)


def u_to_T(model: SplitTorsor | InertTorsor, sol: XSolution) -> TorusPoint:
    """(t, z) -> (rho^{-1}(t - eta), xi^{-1} z), which lands in T."""
    p = model.problem
    return TorusPoint(p.t_minus_eta(sol.t) / model.split.rho, sol.z / model.split.xi)


# -- random torsor points ----------------------------------------------------------

def _gram_by_polarization(phi, n: int) -> list[list[Fraction]]:
    e = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    diag = [phi(e[i]) for i in range(n)]
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = diag[i]
        for j in range(i + 1, n):
            s = [a + b for a, b in zip(e[i], e[j])]
            g[i][j] = g[j][i] = (phi(s) - diag[i] - diag[j]) / 2
    return g


def _secant_points(q: QuadraticForm, base: Sequence[Fraction], rng: random.Random, count: int, span: int = 4):
    """Further rational points of q(x) = q(base) on random lines through ``base``."""
    n = q.arity
    G = q.gram
    out = []
    while len(out) < count:
        d = [Fraction(rng.randint(-span, span)) for _ in range(n)]
        qd = q.value(d)
        if qd == 0:
            continue
        bxd = sum((G[i][j] * base[i] * d[j] for i in range(n) for j in range(n)), Fraction(0))
        k = -2 * bxd / qd
        out.append([b + k * di for b, di in zip(base, d)])
    return out


SAMPLE_FIBER_NODES = 20000


def random_torsor_points(model: SplitTorsor | InertTorsor, count: int, seed: int = 0,
                         pool: int = 4, budgets: Budgets = DEFAULT_BUDGETS) -> list[TorsorPoint]:
    """Randomized rational torsor points (quadratic relative norm only).

    A few random values of the outer coordinate fix the fiber quadric in the
    remaining coordinates; one point of each is found by ``represent_value``
    and the rest come from secant lines through it.
    """
    rng = random.Random(seed)
    p = model.problem
    K = p.K
    if isinstance(model, SplitTorsor):
        if K.degree != 4:
            raise UnsupportedCase("random split points need [K:L] = 2")
        dim = 4
    else:
        if K.degree != 2:
            raise UnsupportedCase("random inert points need [K:Q] = 2")
        dim = 4
    F = getattr(model, "F", None)
    local = budgets.with_overrides(enum_nodes=min(budgets.enum_nodes, SAMPLE_FIBER_NODES))
    out: list[TorsorPoint] = []
    per = -(-count // pool)
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * pool:
            raise BudgetError("could not build enough random torsor points")
        if isinstance(model, SplitTorsor):
            x2 = K([rng.randint(-3, 3) for _ in range(4)])
            if x2.is_zero():
                continue
            outer = model.split.rho * conj_L(relative_norm(x2, model.emb))

            def elem(v, x2=x2):
                return K(v)

            def nrm(v):
                return relative_norm(K(v), model.emb)
        else:
            x2 = None
            outer = model.split.rho

            def elem(v):
                return F(K(v[:2]), K(v[2:]))

            def nrm(v):
                return elem(v).norm_to_L()

        def phi(v, outer=outer):
            return (outer * nrm(v)).coords[1]

        q = QuadraticForm(_gram_by_polarization(phi, dim))
        if rank_and_diagonalize(q).rank != dim:
            continue
        try:
            base = represent_value(q, -1, local)
        except BudgetError:
            continue  # a hard fiber; any other x2 will do
        if isinstance(base, LocalCertificate):
            continue
        for v in [list(base)] + _secant_points(q, base, rng, per - 1):
            r = outer * nrm(v)
            if r.coords[1] != -1:
                raise AssertionError("secant point left the fiber")
            t = r.coords[0] - p.shift
            if p.P(t) == 0 or (isinstance(model, SplitTorsor) and K(v).is_zero()):
                continue
            coords = (elem(v), x2) if isinstance(model, SplitTorsor) else (elem(v),)
            out.append(make_point(model, t, *coords))
            if len(out) == count:
                break
    return out


# -- symbolic torsor identity ------------------------------------------------------

def _sym_mul(K: NumberField, xs: Sequence[MultiPoly], ys: Sequence[MultiPoly]) -> list[MultiPoly]:
    n = K.degree
    arity = xs[0].arity
    prod = [MultiPoly(arity) for _ in range(2 * n - 1)]
    for i, a in enumerate(xs):
        if a.is_zero():
            continue
        for j, b in enumerate(ys):
            if not b.is_zero():
                prod[i + j] = prod[i + j] + a * b
    out = [MultiPoly(arity) for _ in range(n)]
    for k, cpoly in enumerate(prod):
        if cpoly.is_zero():
            continue
        for i, t in enumerate(K._powers[k]):
            if t:
                out[i] = out[i] + cpoly * t
    return out


def _const_coords(x: FieldElement, arity: int) -> list[MultiPoly]:
    return [MultiPoly.const(c, arity) for c in x.coords]


def _sym_relnorm_split(emb_b: SubfieldEmbedding, u, v, coords: Sequence[MultiPoly]) -> _LPoly:
    qc = [sum((m * c for m, c in zip(row, coords)), MultiPoly(coords[0].arity)) for row in emb_b._qmat_inv]
    A = _LPoly(qc[0], qc[1], emb_b.a)
    B = _LPoly(qc[2], qc[3], emb_b.a)
    zero = coords[0] * 0
    return A * A - B * B * _LPoly(zero + u, zero + v, emb_b.a)


def _sym_relnorm_inert(K: NumberField, a: Fraction, xs, ys) -> _LPoly:
    """N_{F/L}(x + y sqrt a) for quadratic K, via the 2x2 matrix over L[vars]."""
    if K.degree != 2:
        raise UnsupportedCase("symbolic inert identity implemented for quadratic K")
    arity = xs[0].arity
    theta = [MultiPoly.const(c, arity) for c in K.gen().coords]

    def mul_matrix(cs):
        col0 = cs
        col1 = _sym_mul(K, cs, theta)
        return [[col0[0], col1[0]], [col0[1], col1[1]]]

    mx, my = mul_matrix(xs), mul_matrix(ys)
    m = [[_LPoly(mx[i][j], my[i][j], a) for j in range(2)] for i in range(2)]
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def symbolic_torsor_identity(model: SplitTorsor | InertTorsor) -> dict:
    """Certify N_{K/Q}(z-formula) - P(t) lies in the ideal of the torsor equation.

    With R = R0 + R1 sqrt a the right-hand side and T = t + shift, the
    difference equals h0 (T - R0) + h1 (R1 + 1) for the explicit cofactors
    h0 = -c (T + R0) and h1 = -c a (R1 - 1).  Everything is expanded as
    polynomials in t and the torsor coordinates.
    """
    p = model.problem
    K = p.K
    n = K.degree
    c, a, shift = p.c, p.a, p.shift
    if isinstance(model, SplitTorsor):
        arity = 1 + 2 * n
        vs = MultiPoly.variables(arity)
        T = vs[0] + shift
        x1, x2 = vs[1:1 + n], vs[1 + n:]
        emb_b, _, u, v = quartic_structure(model.emb)
        N1 = _sym_relnorm_split(emb_b, u, v, x1)
        N2 = _sym_relnorm_split(emb_b, u, v, x2)
        N2s = _LPoly(N2.p0, -N2.p1, a)
        rho = model.split.rho
        R = _LPoly(MultiPoly.const(rho.coords[0], arity), MultiPoly.const(rho.coords[1], arity), a) * N1 * N2s
        zc = _sym_mul(K, _sym_mul(K, _const_coords(model.split.xi, arity), x1), x2)
    else:
        arity = 1 + 2 * n
        vs = MultiPoly.variables(arity)
        T = vs[0] + shift
        xs, ys = vs[1:1 + n], vs[1 + n:]
        Nx = _sym_relnorm_inert(K, a, xs, ys)
        rho = model.split.rho
        R = _LPoly(MultiPoly.const(rho.coords[0], arity), MultiPoly.const(rho.coords[1], arity), a) * Nx
        nfk = [p0 - p1 * a for p0, p1 in zip(_sym_mul(K, xs, xs), _sym_mul(K, ys, ys))]
        zc = _sym_mul(K, _const_coords(model.split.xi, arity), nfk)
    normz = evaluate(norm_form(K), zc)
    diff = normz - (T * T - a) * c
    h0 = (T + R.p0) * (-c)
    h1 = (R.p1 - 1) * (-c * a)
    certificate = h0 * (T - R.p0) + h1 * (R.p1 + 1)
    return {"holds": diff == certificate, "arity": arity, "terms": len(diff.terms),
            "cofactors": {"h0": h0.to_text(_names(arity)), "h1": h1.to_text(_names(arity))}}


def _names(arity: int) -> list[str]:
    return ["t"] + [f"x{i}" for i in range(1, arity)]


# -- the constructive quartic pipeline --------------------------------------------

@dataclass
class PipelineResult:
    verdict: str  # "solved" | "local-obstruction"
    steps: list = field(default_factory=list)
    solution: XSolution | None = None
    certificate: LocalCertificate | None = None


def _conic_moves(a: Fraction, w0: FieldElement, c: Fraction, budgets: Budgets):
    """w0 first, then the second intersections of lines through w0 with slope m."""
    yield w0
    x0, y0 = w0.coords
    L = w0.field
    count = 0
    for m in iter_rationals(10 ** 6):
        den = 1 - a * m * m
        if den == 0:
            continue
        k = (2 * a * y0 * m - 2 * x0) / den
        if k == 0:
            continue
        w = L([x0 + k, y0 + m * k])
        assert absolute_norm(w) == c
        count += 1
        if count > budgets.conic_moves:
            return
        yield w


def solve_quartic_split(p: NormEquationProblem, budgets: Budgets | None = None,
                        steps: list | None = None) -> PipelineResult:
    """Conic point w, forms f0 and f1 from rho = 1/w, then f1(x) = -1, t = f0(x), z = x."""
    budgets = budgets or p.budgets
    steps = steps if steps is not None else []
    res = PipelineResult("pending", steps)
    if not p.quadratic:
        raise DomainError("the quartic pipeline needs an irreducible quadratic P")
    if p.K.degree != 4:
        raise DomainError("the quartic pipeline needs [K:Q] = 4")
    if p.sqrt_a() is None:
        raise DomainError(f"sqrt({p.a}) is not in K")
    c, a = p.c, p.a
    steps.append({"step": "problem", **p.describe(), "sqrt_a": p.sqrt_a().to_json()})

    w0 = _norm_conic(a, c, budgets)
    if isinstance(w0, LocalCertificate):
        steps.append({"step": "conic", "result": "insolvable", "certificate": w0.to_json()})
        res.verdict, res.certificate = "local-obstruction", w0
        return res
    steps.append({"step": "conic", "result": "point", "w": w0.to_json()})

    emb = p.embedding()
    emb_b, beta, u, v = quartic_structure(emb)
    g0, g1 = relative_norm_form_quartic(emb, beta)
    names = ["y1", "y2", "y3", "y4"]
    steps.append({"step": "basis", "beta": beta.to_json(), "u": fmt(u), "v": fmt(v),
                  "g0": g0.to_text(names), "g1": g1.to_text(names)})

    fiber_failures = 0
    for w in _conic_moves(a, w0, c, budgets):
        rho = w.inverse()
        r0, r1 = rho.coords
        f0 = g0 * r0 + g1 * (a * r1)
        f1 = g0 * r1 + g1 * r0
        q0, q1 = QuadraticForm.from_poly(f0), QuadraticForm.from_poly(f1)
        rk0, rk1 = rank_and_diagonalize(q0).rank, rank_and_diagonalize(q1).rank
        if rk0 != 4 or rk1 != 4:
            raise AssertionError(f"fiber forms lost rank: {rk0}, {rk1}")
        step = {"step": "fiber", "w": w.to_json(), "rho": rho.to_json(),
                "f0": f0.to_text(names), "f1": f1.to_text(names), "rank_f0": rk0, "rank_f1": rk1}
        x = represent_value(q1, -1, budgets)
        if isinstance(x, LocalCertificate):
            # real fiber empty over this w; X(R) is not, so another conic point works
            step["result"] = "fiber-insolvable"
            step["certificate"] = x.to_json()
            steps.append(step)
            fiber_failures += 1
            continue
        t = f0(*x) - p.shift
        z = element_from_lcoords(emb_b, beta, x)
        step.update(result="point", x=[fmt(c_) for c_ in x])
        steps.append(step)
        sol = XSolution(p, t, z)
        steps.append({"step": "solution", **sol.to_json()})
        res.verdict, res.solution = "solved", sol
        return res
    raise BudgetError(f"no conic point with a real fiber after {budgets.conic_moves} moves",
                      partial={"steps": steps, "fiber_failures": fiber_failures})


# -- brute force ----------------------------------------------------------------------

def _compiled_norm(K: NumberField, basis: Sequence[FieldElement]):
    nf = norm_form(K)
    if basis is not None:
        rows = [[b.coords[i] for b in basis] for i in range(K.degree)]
        nf = substitute(nf, LinearSubstitution.from_matrix(rows))
    den = 1
    for c in nf.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    terms = [(int(c * den), e) for e, c in nf.terms.items()]
    return terms, den


def solve_by_enumeration(p: NormEquationProblem, height: int, basis: Sequence[FieldElement] | None = None,
                         budgets: Budgets | None = None, limit: int | None = None) -> list[XSolution]:
    """Every (t, z) with P(t) = N(z), P(t) != 0, t and z of height <= ``height``.

    z = (n_1 b_1 + ... + n_k b_k) / D with gcd(n, D) = 1 and |n_i|, D <= height,
    over ``basis`` (power basis by default).  Output order: t in height order,
    then D, then n in height order.
    """
    budgets = budgets or p.budgets
    K = p.K
    n = K.degree
    basis = list(basis) if basis is not None else K.power_basis()
    terms, den = _compiled_norm(K, basis)
    norms: dict[int, list[tuple[int, ...]]] = {}
    nodes = 0
    for h in range(1, height + 1):
        for v in lattice_points(n, h):
            nodes += 1
            if nodes > budgets.enum_nodes:
                raise BudgetError("enumeration exceeded enum_nodes", partial={"height": h})
            val = 0
            for coef, e in terms:
                m = coef
                for vi, k in zip(v, e):
                    if k:
                        m *= vi ** k
                val += m
            norms.setdefault(val, []).append(v)
    out: list[XSolution] = []
    for t in iter_rationals(height):
        pt = p.P(t)
        if pt == 0:
            continue
        for D in range(1, height + 1):
            target = pt * den * D ** n
            if target.denominator != 1:
                continue
            for v in norms.get(target.numerator, ()):
                if math.gcd(D, *v) != 1:
                    continue
                z = K.zero()
                for vi, b in zip(v, basis):
                    if vi:
                        z = z + b * vi
                out.append(XSolution(p, t, z / D))
                if limit is not None and len(out) >= limit:
                    return out
    return out


# -- relative norm form checks --------------------------------------------------------

def lemma22_numeric(a, u, v, lam, mu) -> dict:
    """Rank of lam g0 + mu g1 and the discriminants of its two binary blocks."""
    from .numfield import symbolic_relative_norm_forms
    a, u, v, lam, mu = (Q(x) for x in (a, u, v, lam, mu))
    if rational_sqrt(a) is not None:
        raise DomainError(f"a = {a} is a square")
    if lam == 0 and mu == 0:
        raise DomainError("(lambda, mu) must not be (0, 0)")
    if u == 0 and v == 0:
        raise DomainError("u + v sqrt a must be nonzero")
    g0, g1 = symbolic_relative_norm_forms()
    ys = MultiPoly.variables(4)
    point = [MultiPoly.const(a, 4), MultiPoly.const(u, 4), MultiPoly.const(v, 4), *ys]
    f = evaluate(g0, point) * lam + evaluate(g1, point) * mu
    q = QuadraticForm.from_poly(f)
    G = q.gram
    if any(G[i][j] for i in (0, 1) for j in (2, 3)):
        raise AssertionError("lam g0 + mu g1 does not split into two binary blocks")
    q0 = QuadraticForm([[G[0][0], G[0][1]], [G[1][0], G[1][1]]])
    q1 = QuadraticForm([[G[2][2], G[2][3]], [G[3][2], G[3][3]]])
    expect0 = lam * lam * a - mu * mu
    expect1 = -expect0 * (v * v * a - u * u)
    rk = rank_and_diagonalize(q).rank
    return {"form": f.to_text(["y1", "y2", "y3", "y4"]), "rank": rk,
            "disc_q0": q0.det(), "disc_q1": q1.det(),
            "expected_disc_q0": expect0, "expected_disc_q1": expect1,
            "holds": rk == 4 and q0.det() == expect0 and q1.det() == expect1}
