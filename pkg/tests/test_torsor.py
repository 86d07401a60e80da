import random
from fractions import Fraction

import pytest

from normtorsor.arith import INF
from normtorsor.config import Budgets
from normtorsor.errors import BudgetError, DomainError, UnsupportedCase
from normtorsor.numfield import NumberField, RelQuadExt, absolute_norm, quadratic_field, sqrt_in_field
from normtorsor.poly import UniPoly
from normtorsor.torsor import (GeneralTorsor, InertTorsor, NormEquationProblem, SplitTorsor, SplittingDatum,
                               TorusPoint, XSolution, YPoint, bhb_substitution, build_torsor, general_factors,
                               inert_product_iso, lemma22_numeric, make_point, on_E, random_torsor_points,
                               solve_by_enumeration, solve_general_splitting, solve_quartic_split,
                               solve_splitting, symbolic_torsor_identity, torsor_to_X, torus_map_d, u_to_T,
                               verify_solution)

K4 = NumberField([1, 0, -10, 0, 1])
Qi = NumberField([1, 0, 1])
L2 = quadratic_field(2)
H = Fraction(1, 2)


def split_model(c=1):
    p = NormEquationProblem.quadratic_problem(c, 2, K4)
    return build_torsor(p, solve_splitting(c, 2, K4))


def inert_model(c=1, K=Qi):
    p = NormEquationProblem.quadratic_problem(c, 2, K)
    return build_torsor(p, solve_splitting(c, 2, K))


def test_problem_validation():
    with pytest.raises(DomainError):
        NormEquationProblem.quadratic_problem(0, 2, K4)
    with pytest.raises(DomainError):
        NormEquationProblem.quadratic_problem(1, 4, K4)
    with pytest.raises(DomainError):
        NormEquationProblem.quadratic_problem(1, 2, K4, sqrt_witness=K4.gen())
    p = NormEquationProblem(K4, UniPoly([2, 4, 1]))  # (t + 2)^2 - 2
    assert p.quadratic and p.shift == 2 and p.a == 2


def test_xsolution_self_checks():
    p = NormEquationProblem.quadratic_problem(1, 2, K4)
    s2 = sqrt_in_field(2, K4)
    z = 1 - s2 * H
    XSolution(p, H * 3, z)
    with pytest.raises(DomainError):
        XSolution(p, H * 3, z + 1)
    assert verify_solution(K4, p.P, H * 3, z.coords)
    assert not verify_solution(K4, p.P, 1, z.coords)


def test_splitting_examples():
    s = solve_splitting(1, 2, K4)
    assert s.rho == L2.one() and s.xi == K4.one()
    for c in (7, -1, 3, Fraction(5, 7)):
        try:
            s = solve_splitting(c, 2, K4, budgets=Budgets(xi_height=3))
        except BudgetError:
            continue
        assert c * absolute_norm(s.rho) == absolute_norm(s.xi)
    with pytest.raises(DomainError):
        SplittingDatum(Fraction(7), L2([3, 1]), K4.one())


def test_splitting_budget_reports_conic_failures():
    # N(xi) > 0 over Q(i) while -N(rho) < 0 over Q(i): every conic fails at inf
    with pytest.raises(BudgetError) as e:
        solve_splitting(-1, -1, Qi, budgets=Budgets(xi_height=2))
    assert e.value.partial["certified_conic_failures"].get("inf")


def test_build_torsor_cases():
    m = split_model()
    assert isinstance(m, SplitTorsor)
    t = K4.gen()
    assert m.sqrt_a_in_K == (t ** 3 - t * 9) * H
    assert isinstance(inert_model(), InertTorsor)
    p = NormEquationProblem(Qi, UniPoly([0, 0, 1]))
    g = build_torsor(p, solve_general_splitting(p))
    assert isinstance(g, GeneralTorsor)
    assert [(f.exponent, f.kind) for f in g.split.factors] == [(2, "rational")]


def test_split_worked_point():
    m = split_model()
    s2 = m.sqrt_a_in_K
    x1 = 1 - s2 * H
    pt = make_point(m, H * 3, x1, K4.one())
    sol = torsor_to_X(m, pt)
    assert sol.z == x1 and sol.value == Fraction(1, 4)
    with pytest.raises(DomainError):
        make_point(m, 2, x1, K4.one())


def test_inert_worked_point():
    m = inert_model()
    x = m.F(Qi.one(), Qi.scalar(-H))
    pt = make_point(m, H * 3, x)
    sol = torsor_to_X(m, pt)
    assert sol.z == Qi.scalar(H) and sol.value == Fraction(1, 4)


def test_bhb_worked_example():
    m = split_model()
    x1 = 1 - m.sqrt_a_in_K * H
    y = bhb_substitution("forward", m, make_point(m, H * 3, x1, K4.one()))
    assert isinstance(y, YPoint)
    assert y.w == K4.one() and y.y == x1
    back = bhb_substitution("backward", m, y)
    assert back.coords == (x1, K4.one())
    with pytest.raises(DomainError):
        bhb_substitution("sideways", m, y)
    with pytest.raises(DomainError):
        bhb_substitution("forward", inert_model(), y)


@pytest.mark.parametrize("c", [1, 7, -1])
def test_random_split_points_and_round_trips(c):
    try:
        m = split_model(c)
    except BudgetError:
        pytest.skip("no splitting datum in the default budget")
    pts = random_torsor_points(m, 12, seed=c)
    assert len(pts) == 12
    for pt in pts:
        sol = torsor_to_X(m, pt)
        assert sol.value == absolute_norm(sol.z)
        y = bhb_substitution("forward", m, pt)
        assert bhb_substitution("backward", m, y) == pt
        assert bhb_substitution("forward", m, bhb_substitution("backward", m, y)) == y
        d = torus_map_d(m, pt.coords)
        assert absolute_norm(d.z1) == absolute_norm(d.z2)
        assert isinstance(u_to_T(m, sol), TorusPoint)


def test_random_inert_points_and_iso():
    m = inert_model(5)
    rng = random.Random(0)
    for pt in random_torsor_points(m, 12, seed=3):
        assert torsor_to_X(m, pt).value == m.problem.P(pt.t)
        y = m.F(Qi([rng.randint(-3, 3), rng.randint(1, 3)]), Qi([rng.randint(-3, 3), 0]))
        yp = inert_product_iso("backward", m, (pt, y))
        back, w = inert_product_iso("forward", m, yp)
        assert back == pt and w == y
        assert inert_product_iso("backward", m, (back, w)) == yp
        d = torus_map_d(m, pt.coords[0])
        assert absolute_norm(d.z1) == absolute_norm(d.z2)


def test_inert_iso_with_trivial_free_coordinate():
    m = inert_model()
    x = m.F(Qi.one(), Qi.scalar(-H))
    pt = make_point(m, H * 3, x)
    yp = inert_product_iso("backward", m, (pt, m.F(Qi.one())))
    assert yp.w == m.F(Qi.one()) and yp.y == x
    with pytest.raises(DomainError):
        inert_product_iso("backward", m, (pt, m.F(Qi.zero())))


def test_random_points_unsupported_degree():
    K6 = NumberField([1, 0, 0, 1, 0, 0, 1])
    p = NormEquationProblem.quadratic_problem(1, -3, K6)
    m = build_torsor(p, solve_splitting(1, -3, K6))
    with pytest.raises(UnsupportedCase):
        random_torsor_points(m, 2)


def test_torus_identity_point():
    m = split_model()
    d = torus_map_d(m, (K4.one(), K4.one()))
    assert d.z1 == L2.one() and d.z2 == K4.one()
    with pytest.raises(DomainError):
        torus_map_d(m, (K4.zero(), K4.one()))
    assert on_E(7, L2([3, 1]), K4.one()) is False
    assert on_E(1, L2.one(), K4.one())


@pytest.mark.parametrize("make", [split_model, inert_model])
def test_symbolic_identity(make):
    assert symbolic_torsor_identity(make())["holds"]


def test_symbolic_identity_with_shift_and_twist():
    p = NormEquationProblem(Qi, UniPoly([Fraction(-7, 2), 2, 2]))  # 2((t + 1/2)^2 - 2)
    m = build_torsor(p, solve_splitting(p.c, p.a, Qi))
    assert symbolic_torsor_identity(m)["holds"]


def test_pipeline_worked_example():
    p = NormEquationProblem.quadratic_problem(1, 2, K4)
    res = solve_quartic_split(p)
    assert res.verdict == "solved"
    assert res.solution.t == H * 3
    assert res.solution.z == 1 - sqrt_in_field(2, K4) * H
    fiber = [s for s in res.steps if s["step"] == "fiber"][0]
    assert fiber["f1"] == "2*y1*y2 + -6*y3*y4" and fiber["x"] == ["1", "-1/2", "0", "0"]
    assert fiber["rank_f0"] == fiber["rank_f1"] == 4


@pytest.mark.parametrize("c", [7, -1, 3, Fraction(2, 3), -6])
def test_pipeline_verified(c):
    p = NormEquationProblem.quadratic_problem(c, 2, K4)
    res = solve_quartic_split(p)
    if res.verdict == "solved":
        assert absolute_norm(res.solution.z) == p.P(res.solution.t)
    else:
        assert solve_by_enumeration(p, 3, limit=1) == []


def test_pipeline_c7_conic_point():
    res = solve_quartic_split(NormEquationProblem.quadratic_problem(7, 2, K4))
    conic = [s for s in res.steps if s["step"] == "conic"][0]
    assert absolute_norm(L2(conic["w"])) == 7


def test_pipeline_definite_obstruction():
    K = NumberField([9, 0, -2, 0, 1])
    res = solve_quartic_split(NormEquationProblem.quadratic_problem(-1, -1, K))
    assert res.verdict == "local-obstruction" and res.certificate.place == INF


def test_pipeline_needs_sqrt_in_K():
    with pytest.raises(DomainError):
        solve_quartic_split(NormEquationProblem.quadratic_problem(1, 5, K4))


def test_enumeration_examples():
    p = NormEquationProblem(Qi, UniPoly([1, 0, 1]))
    sols = solve_by_enumeration(p, 2)
    ts = {s.t for s in sols}
    assert ts >= {Fraction(0), Fraction(1), Fraction(-1), H, -H, Fraction(2), Fraction(-2)}
    for s in sols:
        assert absolute_norm(s.z) == s.t ** 2 + 1
    p4 = NormEquationProblem.quadratic_problem(1, 2, K4)
    s2 = sqrt_in_field(2, K4)
    basis = [K4.one(), s2, sqrt_in_field(3, K4), s2 * sqrt_in_field(3, K4)]
    found = solve_by_enumeration(p4, 4, basis=basis)
    assert any(s.t == H * 3 and s.z == 1 - s2 * H for s in found)
    definite = NormEquationProblem.quadratic_problem(-1, -1, NumberField([9, 0, -2, 0, 1]))
    assert solve_by_enumeration(definite, 2) == []


def test_general_unsupported_for_quartic_factor():
    p = NormEquationProblem(K4, UniPoly([1, 0, -10, 0, 1]))
    with pytest.raises(UnsupportedCase):
        general_factors(p)


def test_general_torsor_over_cubic():
    K = NumberField([-2, 0, 0, 1])
    p = NormEquationProblem(K, UniPoly([-6, 12, -3, -6, 3]))  # 3 (t-1)^2 (t^2-2)
    kinds = [(f.degree, e, k) for f, e, k, _ in general_factors(p)]
    assert sorted(kinds) == [(1, 2, "rational"), (2, 1, "inert")]
    g = build_torsor(p, solve_general_splitting(p))
    assert "e_i = 2" in g.equation_text()


def test_lemma22_numeric():
    r = lemma22_numeric(2, 3, 0, 1, 0)
    assert r["rank"] == 4 and r["disc_q0"] == 2 and r["disc_q1"] == 18 and r["holds"]
    with pytest.raises(DomainError):
        lemma22_numeric(2, 3, 0, 0, 0)
    with pytest.raises(DomainError):
        lemma22_numeric(4, 3, 0, 1, 0)
