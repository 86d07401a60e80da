"""Transcripts: append-only step lists, and a re-verifier that trusts none of them.

Every step is a plain JSON object.  ``reverify`` rebuilds the objects a step
mentions (field, polynomial, conic point, fiber forms, torsor model, points)
and re-checks the identities they must satisfy.  Nothing is searched again.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Place, Q, fmt
from .errors import DomainError, NormTorsorError
from .numfield import (NumberField, RelQuadExt, SubfieldEmbedding, _relative_norm_pair, absolute_norm,
                       norm_form, quadratic_field, symbolic_relative_norm_forms, closed_form_relative_norm_forms,
                       LEMMA_VARS)
from .poly import MultiPoly, UniPoly
from .quadform import QuadraticForm, _local_diag, rank_and_diagonalize

Y_NAMES = ["y1", "y2", "y3", "y4"]


@dataclass
class Transcript:
    command: str
    inputs: dict
    steps: list = field(default_factory=list)
    verdict: str = "pending"
    verification: list = field(default_factory=list)
    wall_time: float | None = None
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, step: str, **data) -> dict:
        entry = {"step": step, **data}
        self.steps.append(entry)
        return entry

    def finish(self, verdict: str, timed: bool = True) -> "Transcript":
        self.verdict = verdict
        self.wall_time = round(time.perf_counter() - self._t0, 6) if timed else None
        return self

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "steps": self.steps,
                "verdict": self.verdict, "verification": self.verification, "wall_time": self.wall_time}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


# -- rebuilding objects from JSON --------------------------------------------------

def field_from_json(d: dict) -> NumberField:
    return NumberField([Q(c) for c in d["minpoly"]])


def problem_from_step(step: dict):
    from .torsor import NormEquationProblem
    K = field_from_json(step["field"])
    P = UniPoly([Q(c) for c in step["P"]])
    witness = step.get("sqrt_a")
    return NormEquationProblem(K, P, sqrt_witness=K([Q(c) for c in witness]) if witness else None)


def model_from_json(problem, d: dict):
    from .torsor import (FactorData, GeneralSplittingDatum, GeneralTorsor, InertTorsor, SplitTorsor,
                         SplittingDatum)
    K = problem.K
    sp = d["splitting"]
    if d["case"] in ("split", "inert"):
        datum = SplittingDatum(Q(sp["c"]), problem.L([Q(c) for c in sp["rho"]]), K([Q(c) for c in sp["xi"]]))
        if d["case"] == "split":
            root = K([Q(c) for c in d["sqrt_a_in_K"]])
            return SplitTorsor(problem, SubfieldEmbedding(K, problem.a, root), datum)
        return InertTorsor(problem, RelQuadExt(K, problem.a, check=False), datum)
    facs, embs = [], []
    for fd, fs in zip(d["factors"], sp["factors"]):
        poly = UniPoly([Q(c) for c in fd["P_i"]])
        if fd["kind"] == "rational":
            facs.append(FactorData(poly, fd["e_i"], "rational", Q(fs["rho_i"]), root=Q(fd["root"])))
        else:
            D = Q(fd["D"])
            rho = quadratic_field(D)([Q(c) for c in fs["rho_i"]])
            facs.append(FactorData(poly, fd["e_i"], fd["kind"], rho, D=D, shift=Q(fd["shift"])))
        embs.append(SubfieldEmbedding(K, Q(fd["D"]), K([Q(c) for c in fd["sqrt_D_in_K"]]))
                    if "sqrt_D_in_K" in fd else None)
    datum = GeneralSplittingDatum(Q(sp["c"]), tuple(facs), K([Q(c) for c in sp["xi"]]))
    return GeneralTorsor(problem, datum, tuple(embs))


def _elem(K, coords):
    return K([Q(c) for c in coords])


def _block(model, kind, raw):
    K = model.problem.K
    if kind in ("rational",):
        return _elem(K, raw)
    if kind == "split":
        return (_elem(K, raw[0]), _elem(K, raw[1]))
    F = model.F if hasattr(model, "F") else RelQuadExt(K, raw["a"], check=False)
    return F(_elem(K, raw["x"]), _elem(K, raw["y"]))


def point_from_json(model, d: dict):
    from .torsor import make_point
    if model.case == "split":
        x1, x2 = d["coords"]
        return make_point(model, Q(d["t"]), _elem(model.problem.K, x1), _elem(model.problem.K, x2))
    if model.case == "inert":
        (x,) = d["coords"]
        return make_point(model, Q(d["t"]), model.F(_elem(model.problem.K, x["x"]), _elem(model.problem.K, x["y"])))
    blocks = []
    for f, raw in zip(model.split.factors, d["coords"]):
        if f.kind == "inert":
            F = RelQuadExt(model.problem.K, f.D, check=False)
            blocks.append(F(_elem(model.problem.K, raw["x"]), _elem(model.problem.K, raw["y"])))
        else:
            blocks.append(_block(model, f.kind, raw))
    return make_point(model, Q(d["t"]), *blocks)


# -- the re-verifier ---------------------------------------------------------------

class _Checker:
    def __init__(self):
        self.problem = None
        self.model = None
        self.fiber = None
        self.basis = None
        self.checked: list[str] = []

    def fail(self, msg):
        raise DomainError(msg)

    def need(self, cond, msg):
        if not cond:
            self.fail(msg)
        self.checked.append(msg)

    def certificate(self, coeffs, cert):
        place = Place.parse(cert["place"])
        local = _local_diag([Q(c) for c in coeffs], place)
        self.need(cert["verdict"] == "insolvable" and not local.solvable,
                  f"diagonal form {[fmt(Q(c)) for c in coeffs]} is anisotropic at {place}")

    # steps
    def problem_(self, s):
        self.problem = problem_from_step(s)
        if s.get("sqrt_a") is not None:
            self.need(True, f"sqrt witness squares to {fmt(self.problem.a)}")

    def conic(self, s):
        p = self.problem
        if s["result"] == "point":
            w = _elem(p.L, s["w"])
            self.need(absolute_norm(w) == p.c, f"N_L(w) = {fmt(p.c)}")
        else:
            self.certificate([1, -p.a, -p.c], s["certificate"])

    def basis_(self, s):
        p = self.problem
        K = p.K
        beta = _elem(K, s["beta"])
        u, v = Q(s["u"]), Q(s["v"])
        root = p.sqrt_a()
        self.need(beta * beta == root * v + u, "beta^2 = u + v sqrt a")
        ys = MultiPoly.variables(4)
        g0, g1 = _relative_norm_pair(ys, p.a, u, v)
        self.need(MultiPoly.parse(s["g0"], Y_NAMES) == g0 and MultiPoly.parse(s["g1"], Y_NAMES) == g1,
                  "g0, g1 match the closed form at (a, u, v)")
        self.basis = (beta, g0, g1)

    def fiber_(self, s):
        p = self.problem
        w = _elem(p.L, s["w"])
        rho = _elem(p.L, s["rho"])
        self.need(absolute_norm(w) == p.c and rho * w == p.L.one(), "w on the conic and rho = 1/w")
        _, g0, g1 = self.basis
        r0, r1 = rho.coords
        f0, f1 = MultiPoly.parse(s["f0"], Y_NAMES), MultiPoly.parse(s["f1"], Y_NAMES)
        self.need(f0 == g0 * r0 + g1 * (p.a * r1) and f1 == g1 * r0 + g0 * r1,
                  "f0 = rho0 g0 + a rho1 g1, f1 = rho1 g0 + rho0 g1")
        q1 = QuadraticForm.from_poly(f1)
        self.need(rank_and_diagonalize(QuadraticForm.from_poly(f0)).rank == 4 and
                  rank_and_diagonalize(q1).rank == 4, "f0 and f1 have rank 4")
        if s["result"] == "point":
            x = [Q(c) for c in s["x"]]
            self.need(f1(*x) == -1, "f1(x) = -1")
            self.fiber = (f0, x)
        else:
            diag = list(rank_and_diagonalize(q1).coefficients) + [Fraction(1)]
            self.certificate(diag, s["certificate"])

    def solution(self, s):
        from .torsor import XSolution
        p = self.problem
        t, z = Q(s["t"]), _elem(p.K, s["z"])
        sol = XSolution(p, t, z)
        self.need(fmt(sol.value) == s["P(t)"], f"P({fmt(t)}) = {fmt(sol.value)} = N(z)")
        if self.fiber is not None and self.basis is not None:
            f0, x = self.fiber
            beta = self.basis[0]
            root = p.sqrt_a()
            zx = (root * x[1] + x[0]) + (root * x[3] + x[2]) * beta
            self.need(t + p.shift == f0(*x) and zx == z, "t = f0(x) and z has L-coordinates x")

    def solutions(self, s):
        for item in s["solutions"]:
            self.solution(item)

    def splitting(self, s):
        pass  # checked when the torsor step rebuilds the datum

    def torsor(self, s):
        self.model = model_from_json(self.problem, s["model"])
        self.need(True, f"splitting datum satisfies the {self.model.case} splitting condition")

    def torsor_point(self, s):
        from .torsor import torsor_to_X
        pt = point_from_json(self.model, s["point"])
        sol = torsor_to_X(self.model, pt)
        self.need(sol.t == Q(s["image"]["t"]) and sol.z.to_json() == s["image"]["z"],
                  f"torsor point at t = {s['point']['t']} maps to a verified XSolution")

    def norm_form_(self, s):
        K = field_from_json(s["field"])
        names = [f"z{i + 1}" for i in range(K.degree)]
        self.need(MultiPoly.parse(s["norm_form"], names) == norm_form(K), "norm form matches the determinant")

    def sqrt(self, s):
        K = field_from_json(s["field"])
        a = Q(s["a"])
        if s["root"] is None:
            from .numfield import sqrt_in_field
            self.need(sqrt_in_field(a, K) is None, f"{fmt(a)} is not a square in K")
        else:
            r = _elem(K, s["root"])
            self.need(r * r == a, f"root squares to {fmt(a)}")

    def conic_solve(self, s):
        coeffs = [Q(c) for c in s["coefficients"]]
        if s["result"] == "point":
            x = [Q(c) for c in s["point"]]
            self.need(any(x) and sum(c * xi * xi for c, xi in zip(coeffs, x)) == 0, "conic point is a zero")
        else:
            self.certificate(coeffs, s["certificate"])

    def lemma22(self, s):
        from .torsor import lemma22_numeric
        r = lemma22_numeric(*(Q(s[k]) for k in ("a", "u", "v", "lambda", "mu")))
        self.need(r["rank"] == s["rank"] and fmt(r["disc_q0"]) == s["disc_q0"] and fmt(r["disc_q1"]) == s["disc_q1"],
                  "rank and discriminants recomputed")

    def lemma22_symbolic(self, s):
        g0, g1 = symbolic_relative_norm_forms()
        c0, c1 = closed_form_relative_norm_forms()
        self.need(s["g0"] == g0.to_text(LEMMA_VARS) and s["g1"] == g1.to_text(LEMMA_VARS),
                  "derived g0, g1 re-expanded")
        self.need((g0 == c0 and g1 == c1) == s["matches_closed_form"], "closed-form comparison")


_DISPATCH = {
    "problem": "problem_", "conic": "conic", "basis": "basis_", "fiber": "fiber_", "solution": "solution",
    "solutions": "solutions", "splitting": "splitting", "torsor": "torsor", "torsor-point": "torsor_point",
    "norm-form": "norm_form_", "sqrt": "sqrt", "conic-solve": "conic_solve", "lemma22": "lemma22",
    "lemma22-symbolic": "lemma22_symbolic",
}


def reverify(data: dict | str) -> list[str]:
    """Re-check every identity recorded in a transcript; returns what was checked.

    Raises DomainError on the first identity that does not hold.
    """
    if isinstance(data, str):
        data = json.loads(data)
    ch = _Checker()
    for s in data["steps"]:
        name = _DISPATCH.get(s["step"])
        if name is None:
            continue
        try:
            getattr(ch, name)(s)
        except NormTorsorError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise DomainError(f"malformed {s['step']} step: {e}") from e
    if data["verdict"] == "solved" and not any(s["step"] in ("solution", "solutions", "torsor-point", "conic-solve")
                                                for s in data["steps"]):
        raise DomainError("verdict solved without a solution step")
    return ch.checked
