import itertools
import random
from fractions import Fraction

import pytest

from normtorsor.arith import INF, Place, bad_places
from normtorsor.config import Budgets
from normtorsor.errors import BudgetError, DomainError
from normtorsor.poly import MultiPoly
from normtorsor.quadform import (LocalCertificate, QuadraticForm, binary_disc, hasse_invariant, holzer_bounds,
                                 is_isotropic, isotropy_report, local_isotropy, rank_and_diagonalize,
                                 reduce_ternary, represent_value, solve_conic)

from oracles import conic_brute_force, p_adic_isotropic_ternary

SQUAREFREE = [1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 14, -15]


def rand_form(rng, n, bound=4):
    G = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            G[i][j] = G[j][i] = Fraction(rng.randint(-bound, bound), rng.randint(1, 2))
    return QuadraticForm(G)


def test_gram_must_be_symmetric():
    with pytest.raises(DomainError):
        QuadraticForm([[1, 2], [0, 1]])


def test_poly_round_trip():
    y1, y2, y3, y4 = MultiPoly.variables(4)
    f1 = y1 * y2 * 2 - y3 * y4 * 6
    q = QuadraticForm.from_poly(f1)
    assert q.to_poly() == f1
    assert q.gram[0][1] == 1 and q.gram[2][3] == -3
    assert q((1, Fraction(-1, 2), 0, 0)) == -1


def test_serialization_round_trip():
    q = QuadraticForm([[1, Fraction(1, 2), 0], [Fraction(1, 2), -3, 7], [0, 7, Fraction(2, 9)]])
    assert QuadraticForm.deserialize(q.serialize()) == q
    assert q.serialize() == QuadraticForm.deserialize(q.serialize()).serialize()


def test_rank_examples():
    d = rank_and_diagonalize(QuadraticForm([[1, 1], [1, 1]]))
    assert d.rank == 1 and d.coefficients == (1,)
    d = rank_and_diagonalize(QuadraticForm([[0, 1], [1, 0]]))
    assert d.rank == 2
    assert d.coefficients[0] * d.coefficients[1] < 0
    y1, y2, y3, y4 = MultiPoly.variables(4)
    assert rank_and_diagonalize(QuadraticForm.from_poly(y1 * y2 * 2 - y3 * y4 * 6)).rank == 4
    assert rank_and_diagonalize(QuadraticForm([[0] * 3] * 3)).rank == 0


def test_diagonalization_matches_determinant():
    rng = random.Random(1)
    for _ in range(40):
        n = rng.randint(1, 5)
        q = rand_form(rng, n)
        d = rank_and_diagonalize(q)
        det = q.det()
        if d.rank == n:
            prod = Fraction(1)
            for c in d.coefficients:
                prod *= c
            # det changes by the square of det(P)
            from normtorsor import linalg
            P = [[d.basis[j][i] for j in range(n)] for i in range(n)]
            assert prod == det * linalg.det(P) ** 2
        else:
            assert det == 0


def test_binary_disc_is_gram_det():
    assert binary_disc(QuadraticForm([[1, 0], [0, -2]])) == -2
    assert binary_disc(QuadraticForm([[0, 1], [1, 0]])) == -1
    with pytest.raises(DomainError):
        binary_disc(QuadraticForm.diagonal([1, 1, 1]))


def test_hasse_examples():
    for v in (INF, Place(2), Place(3), Place(7)):
        assert hasse_invariant(QuadraticForm.diagonal([1, 1, 1, 1]), v) == 1
    assert hasse_invariant(QuadraticForm.diagonal([-1, -1]), INF) == -1
    with pytest.raises(DomainError):
        hasse_invariant(QuadraticForm([[1, 1], [1, 1]]), INF)


def test_hasse_is_diagonalization_independent():
    rng = random.Random(2)
    done = 0
    while done < 30:
        n = rng.randint(2, 4)
        q = rand_form(rng, n)
        if q.det() == 0:
            continue
        # a second diagonalization: reorder the variables first
        perm = list(range(n))
        rng.shuffle(perm)
        q2 = QuadraticForm([[q.gram[perm[i]][perm[j]] for j in range(n)] for i in range(n)])
        d1, d2 = rank_and_diagonalize(q).coefficients, rank_and_diagonalize(q2).coefficients
        for v in bad_places(*d1, *d2):
            assert hasse_invariant(q, v) == hasse_invariant(q2, v)
        done += 1


def test_isotropy_examples():
    assert not is_isotropic(QuadraticForm.diagonal([1, 1, 1]))
    assert not local_isotropy(QuadraticForm.diagonal([1, 1, 1]), INF).solvable
    q = QuadraticForm.diagonal([1, 1, -2])
    assert is_isotropic(q)
    w = isotropy_report(q).witness
    assert q(w) == 0 and any(w)
    assert is_isotropic(QuadraticForm.diagonal([1, -2, -7]), Place(7))
    with pytest.raises(DomainError):
        is_isotropic(QuadraticForm([[1, 1], [1, 1]]))


def test_rank_two_and_rank_five():
    assert is_isotropic(QuadraticForm.diagonal([1, -4]))
    assert not is_isotropic(QuadraticForm.diagonal([1, -2]))
    assert not is_isotropic(QuadraticForm.diagonal([1, 1, 1, 1, 1]))
    assert is_isotropic(QuadraticForm.diagonal([1, 1, 1, 1, -1]))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_local_ternary_against_hensel_search(p):
    small = [1, -1, 2, -2, 3, -3, 5, 6, -7, 10]
    for a, b, c in itertools.combinations_with_replacement(small, 3):
        got = is_isotropic(QuadraticForm.diagonal([a, b, c]), Place(p))
        assert got == p_adic_isotropic_ternary((a, b, c), p), (a, b, c, p)


def test_local_ternary_at_seven():
    for a, b, c in [(1, 1, 7), (1, -2, -7), (1, 3, 7), (1, -1, 7), (2, 3, 7), (-1, -3, 7), (1, 1, 1)]:
        got = is_isotropic(QuadraticForm.diagonal([a, b, c]), Place(7))
        assert got == p_adic_isotropic_ternary((a, b, c), 7), (a, b, c)


def test_local_quaternary_against_ternary_split():
    # <a,b,c,d> is isotropic iff <a,b> and <-c,-d> share a value e; the list covers
    # every square class of Q_2, Q_3 and Q_5
    classes = [1, -1, 2, -2, 3, -3, 6, -6, 5, -5, 10, -10, 15, -15, 30, -30]
    rng = random.Random(4)
    for _ in range(40):
        a, b, c, d = (rng.choice([1, -1, 2, -2, 3, -3, 5, -5]) for _ in range(4))
        for p in (2, 3, 5):
            ok = any(p_adic_isotropic_ternary((a, b, -e), p) and p_adic_isotropic_ternary((c, d, e), p)
                     for e in classes)
            assert is_isotropic(QuadraticForm.diagonal([a, b, c, d]), Place(p)) == ok, (a, b, c, d, p)


def test_certificate_json():
    cert = local_isotropy(QuadraticForm.diagonal([1, 1, 7]), INF)
    assert isinstance(cert, LocalCertificate)
    j = cert.to_json()
    assert j["place"] == "inf" and j["verdict"] == "insolvable"
    assert j["invariants"]["signature"] == [3, 0]


def test_reduce_ternary():
    red, scale = reduce_ternary(4, 6, Fraction(-9, 2))
    a, b, c = red
    from math import gcd
    assert gcd(a, b) == gcd(a, c) == gcd(b, c) == 1
    for x in red:
        assert all(x % (p * p) for p in (2, 3, 5, 7))
    with pytest.raises(DomainError):
        reduce_ternary(0, 1, 1)


def test_solve_conic_examples():
    assert solve_conic(1, -2, -7) == (3, 1, 1)
    x, y, z = solve_conic(1, -5, -1)
    assert x * x - 5 * y * y - z * z == 0 and z != 0 or y != 0
    cert = solve_conic(1, 1, 7)
    assert isinstance(cert, LocalCertificate) and cert.place == INF
    with pytest.raises(DomainError):
        solve_conic(0, 1, 1)


def test_conic_with_fractions():
    a, b, c = Fraction(1, 2), Fraction(-3, 4), Fraction(5, 3)
    pt = solve_conic(a, b, c)
    if isinstance(pt, tuple):
        assert a * pt[0] ** 2 + b * pt[1] ** 2 + c * pt[2] ** 2 == 0
    else:
        assert pt.verdict == "insolvable"


def test_conic_local_global_against_brute_force():
    for a, b, c in itertools.combinations_with_replacement(SQUAREFREE[:12], 3):
        if a * b * c == 0:
            continue
        pt = solve_conic(a, b, c)
        red, _ = reduce_ternary(a, b, c)
        found = conic_brute_force(red, max(holzer_bounds(red)) + 1)
        assert isinstance(pt, tuple) == (found is not None), (a, b, c)
        if isinstance(pt, tuple):
            assert a * pt[0] ** 2 + b * pt[1] ** 2 + c * pt[2] ** 2 == 0


def test_conic_budget():
    with pytest.raises(BudgetError):
        solve_conic(1, 1, -5 * 13 * 17 * 29 * 37, budgets=Budgets(enum_nodes=50))


def test_represent_value_examples():
    y1, y2, y3, y4 = MultiPoly.variables(4)
    q = QuadraticForm.from_poly(y1 * y2 * 2 - y3 * y4 * 6)
    x = represent_value(q, -1)
    assert q(x) == -1
    assert x == (1, Fraction(-1, 2), 0, 0)
    cert = represent_value(QuadraticForm.diagonal([1, 1, 1, 1]), -1)
    assert isinstance(cert, LocalCertificate) and cert.place == INF
    q3 = QuadraticForm.diagonal([1, -1, 1])
    for v in (1, -3, Fraction(7, 5), 11):
        assert q3(represent_value(q3, v)) == v


def test_represent_value_errors():
    with pytest.raises(DomainError):
        represent_value(QuadraticForm.diagonal([1, 1, 1]), 0)
    with pytest.raises(DomainError):
        represent_value(QuadraticForm.diagonal([1, -1]), 3)
    with pytest.raises(DomainError):
        represent_value(QuadraticForm([[1, 1, 0], [1, 1, 0], [0, 0, 1]]), 3)


def test_represent_value_finite_obstruction():
    # 7 is not a sum of three squares in Q_2
    cert = represent_value(QuadraticForm.diagonal([1, 1, 1]), 7)
    assert isinstance(cert, LocalCertificate) and cert.place == Place(2)


def test_represent_value_random():
    rng = random.Random(9)
    hits = 0
    for _ in range(25):
        q = rand_form(rng, 4, bound=3)
        if q.det() == 0:
            continue
        v = Fraction(rng.choice([-3, -2, -1, 1, 2, 5]))
        x = represent_value(q, v)
        if isinstance(x, tuple):
            assert q(x) == v
            hits += 1
    assert hits > 5
