from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from normtorsor.arith import (INF, Place, Q, bad_places, factor, fmt, hilbert_symbol, is_local_square, is_prime,
                              iter_rationals, legendre_symbol, rational_sqrt, squarefree_integer, valuation)
from normtorsor.config import Budgets
from normtorsor.errors import BudgetError, DomainError

from oracles import hilbert_by_search

SQUAREFREE = [-7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, -10, 14, 15]
nonzero_q = st.builds(Fraction, st.integers(-60, 60).filter(bool), st.integers(1, 30))


def test_rational_parsing_is_strict():
    assert Q("6/4") == Fraction(3, 2)
    assert Q(" -3 ") == -3
    assert fmt(Fraction(-6, 4)) == "-3/2"
    with pytest.raises(DomainError):
        Q(0.5)
    with pytest.raises(DomainError):
        Q("1/0")


def test_factor_examples():
    assert str(factor(12)) == "2^2*3"
    assert factor(1).factors == ()
    assert [(p, e) for p, e in factor(9991).factors] == [(97, 1), (103, 1)]


def test_factor_of_rational_has_negative_exponents():
    f = factor(Fraction(-45, 8))
    assert f.sign == -1
    assert dict(f.factors) == {2: -3, 3: 2, 5: 1}
    assert f.value() == Fraction(-45, 8)


def test_factor_rejects_zero():
    with pytest.raises(DomainError):
        factor(0)


def test_factor_budget_names_cofactor():
    n = 1000003 * 1000033
    with pytest.raises(BudgetError) as e:
        factor(n, Budgets(trial_division_bound=1000, factor_budget=1))
    assert str(n) in str(e.value)


@given(st.integers(-10**12, 10**12).filter(bool))
@settings(max_examples=150, deadline=None)
def test_factor_round_trip(n):
    f = factor(n)
    assert f.value() == n
    ps = [p for p, _ in f.factors]
    assert ps == sorted(set(ps)) and all(is_prime(p) for p in ps)


def test_legendre_examples():
    assert legendre_symbol(2, 7) == 1
    assert legendre_symbol(2, 3) == -1
    assert legendre_symbol(3, 3) == 0
    with pytest.raises(DomainError):
        legendre_symbol(3, 9)
    with pytest.raises(DomainError):
        legendre_symbol(3, 2)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_legendre_matches_squares(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(1, p):
        assert legendre_symbol(a, p) == (1 if a in squares else -1)


def test_hilbert_examples():
    assert hilbert_symbol(-1, -1, INF) == -1
    assert hilbert_symbol(-1, -1, Place(2)) == -1
    assert hilbert_symbol(2, 3, Place(3)) == -1
    for b in (2, -3, Fraction(5, 7)):
        for p in (INF, Place(2), Place(3), Place(7)):
            assert hilbert_symbol(1, b, p) == 1
    with pytest.raises(DomainError):
        hilbert_symbol(0, 3, INF)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_hilbert_against_hensel_search(p):
    for a in SQUAREFREE:
        for b in SQUAREFREE:
            assert hilbert_symbol(a, b, Place(p)) == hilbert_by_search(a, b, p), (a, b, p)


@given(nonzero_q, nonzero_q, nonzero_q, st.sampled_from([INF, Place(2), Place(3), Place(5), Place(7)]))
@settings(max_examples=200, deadline=None)
def test_hilbert_bimultiplicative_and_symmetric(a, b1, b2, v):
    assert hilbert_symbol(a, b1 * b2, v) == hilbert_symbol(a, b1, v) * hilbert_symbol(a, b2, v)
    assert hilbert_symbol(a, b1, v) == hilbert_symbol(b1, a, v)


@given(nonzero_q, nonzero_q)
@settings(max_examples=200, deadline=None)
def test_hilbert_product_formula(a, b):
    prod = 1
    for v in bad_places(a, b):
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1


@given(nonzero_q.filter(lambda q: q != 1), st.sampled_from([INF, Place(2), Place(3), Place(5)]))
@settings(max_examples=100, deadline=None)
def test_hilbert_steinberg_relations(a, v):
    assert hilbert_symbol(a, -a, v) == 1
    assert hilbert_symbol(a, 1 - a, v) == 1


def test_rational_sqrt():
    assert rational_sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert rational_sqrt(2) is None
    assert rational_sqrt(0) == 0
    assert rational_sqrt(-4) is None


def test_local_squares():
    assert is_local_square(2, Place(7))
    assert not is_local_square(2, Place(3))
    assert is_local_square(17, Place(2)) and not is_local_square(5, Place(2))
    assert is_local_square(3, INF) and not is_local_square(-3, INF)


def test_valuation_and_squarefree():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 25), 5) == -2
    assert squarefree_integer(Fraction(-8, 27)) == -6
    assert squarefree_integer(50) == 2


def test_bad_places_include_two_and_infinity():
    assert bad_places(3, Fraction(5, 7)) == [INF, Place(2), Place(3), Place(5), Place(7)]


def test_iter_rationals_counts_each_once():
    qs = list(iter_rationals(3))
    assert len(qs) == len(set(qs))
    assert set(qs) == {Fraction(n, d) for d in range(1, 4) for n in range(-3, 4)}
    assert qs[0] == 0
