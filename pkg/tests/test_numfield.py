import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from normtorsor.errors import DomainError
from normtorsor.numfield import (LEMMA_VARS, NumberField, RelQuadExt, SubfieldEmbedding, absolute_norm,
                                 closed_form_relative_norm_forms, conj_L, conjugate, element_from_lcoords,
                                 find_beta, norm_form, quadratic_field, quartic_structure, relative_norm,
                                 relative_norm_form_quartic, relnorm_to_base, sqrt_in_field,
                                 symbolic_relative_norm_forms)
from normtorsor.poly import MultiPoly, UniPoly, evaluate, resultant

K4 = NumberField([1, 0, -10, 0, 1])       # theta = sqrt2 + sqrt3
Q2 = NumberField([-2, 0, 1])
Qi = NumberField([1, 0, 1])
FIELDS = [Q2, Qi, NumberField([-2, 0, 0, 1]), NumberField([-1, -1, 0, 1]), K4, NumberField([1, 0, 0, 0, 1]),
          NumberField([-1, -1, 0, 0, 0, 1]), NumberField([1, 0, 0, 1, 0, 0, 1])]
coord = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


def rand_elem(K, rng, nonzero=True):
    while True:
        x = K([Fraction(rng.randint(-7, 7), rng.randint(1, 4)) for _ in range(K.degree)])
        if not nonzero or not x.is_zero():
            return x


def test_construction_checks():
    with pytest.raises(DomainError):
        NumberField([-4, 0, 1])
    with pytest.raises(DomainError):
        NumberField([1, 0, 2])
    with pytest.raises(DomainError):
        Q2([1, 2, 3])


def test_arithmetic_examples():
    t = Q2.gen()
    assert (1 + t) * (1 - t) == -1
    assert t.inverse() == t * Fraction(1, 2)
    with pytest.raises(DomainError):
        Q2.zero().inverse()
    with pytest.raises(DomainError):
        Q2.one() + Qi.one()


@pytest.mark.parametrize("K", FIELDS, ids=lambda K: str(K.minpoly))
def test_inverse_and_multiplicativity(K):
    rng = random.Random(K.degree)
    for _ in range(15):
        x, y = rand_elem(K, rng), rand_elem(K, rng)
        assert x * x.inverse() == K.one()
        assert absolute_norm(x * y) == absolute_norm(x) * absolute_norm(y)


def test_norm_examples():
    assert absolute_norm(K4.one()) == 1
    assert absolute_norm(Q2([3, 1])) == 7
    assert absolute_norm(Q2.zero()) == 0


@pytest.mark.parametrize("K", FIELDS, ids=lambda K: str(K.minpoly))
def test_norm_is_a_resultant(K):
    rng = random.Random(7)
    for _ in range(10):
        x = rand_elem(K, rng)
        # minpoly is monic, so N(x) = Res(f, x(theta))
        assert absolute_norm(x) == resultant(K.minpoly, UniPoly(x.coords))


def test_norm_form_examples():
    assert norm_form(Qi).to_text() == "z1^2 + z2^2"
    assert norm_form(Q2).to_text() == "z1^2 + -2*z2^2"
    z1, z2, z3 = MultiPoly.variables(3)
    assert norm_form(NumberField([-2, 0, 0, 1])) == z1 ** 3 + z2 ** 3 * 2 + z3 ** 3 * 4 - z1 * z2 * z3 * 6


@pytest.mark.parametrize("K", FIELDS, ids=lambda K: str(K.minpoly))
def test_norm_form_agrees_with_norm(K):
    rng = random.Random(11)
    nf = norm_form(K)
    assert nf.is_homogeneous(K.degree)
    for _ in range(10):
        x = rand_elem(K, rng, nonzero=False)
        assert evaluate(nf, list(x.coords)) == absolute_norm(x)


def test_sqrt_examples():
    assert sqrt_in_field(4, K4) == K4.scalar(2)
    t = K4.gen()
    assert sqrt_in_field(2, K4) == (t ** 3 - t * 9) * Fraction(1, 2)
    assert sqrt_in_field(5, Q2) is None
    assert sqrt_in_field(-1, K4) is None
    with pytest.raises(DomainError):
        sqrt_in_field(0, K4)


@pytest.mark.parametrize("a", [2, 3, 6, Fraction(3, 4), Fraction(8, 9), -1, 5])
def test_sqrt_squares_back(a):
    r = sqrt_in_field(a, K4)
    if r is None:
        assert a in (-1, 5)
    else:
        assert r * r == a


def test_sqrt_in_sextic_and_cyclotomic():
    K = NumberField([1, 0, 0, 1, 0, 0, 1])  # ninth roots of unity, contains sqrt(-3)
    r = sqrt_in_field(-3, K)
    assert r is not None and r * r == -3
    z8 = NumberField([1, 0, 0, 0, 1])
    assert sqrt_in_field(2, z8) * sqrt_in_field(2, z8) == 2
    assert sqrt_in_field(-2, z8) is not None and sqrt_in_field(3, z8) is None


def emb2():
    return SubfieldEmbedding(K4, 2, sqrt_in_field(2, K4))


def test_subfield_embedding_checks():
    with pytest.raises(DomainError):
        SubfieldEmbedding(K4, 2, sqrt_in_field(3, K4))
    e = emb2()
    assert len(e.l_basis) == 2
    s3 = sqrt_in_field(3, K4)
    with pytest.raises(DomainError):
        SubfieldEmbedding(K4, 2, e.image_of_generator, [K4.one(), K4.one() * 2])
    assert e.contains(e.image_of_generator) and not e.contains(s3)


def test_relative_norm_examples():
    e = emb2()
    s3 = sqrt_in_field(3, K4)
    L = e.sub
    assert relative_norm(s3, e) == L.scalar(-3)
    assert relative_norm(s3 + 1, e) == L.scalar(-2)


@pytest.mark.parametrize("a,other", [(2, 3), (3, 2), (6, 2)])
def test_norm_transitivity(a, other):
    e = SubfieldEmbedding(K4, a, sqrt_in_field(a, K4))
    rng = random.Random(a)
    for _ in range(15):
        x = rand_elem(K4, rng)
        assert absolute_norm(relative_norm(x, e)) == absolute_norm(x)
        assert relative_norm(e.embed(e.sub([3, 1])), e) == e.sub([3, 1]) ** 2


def test_beta_completion():
    e = emb2()
    emb_b, beta, u, v = quartic_structure(e)
    assert beta * beta == e.image_of_generator * v + u
    assert (u, v) == (3, 0)
    assert find_beta(e) == beta


def test_beta_with_nonzero_v():
    # K = Q(sqrt(1 + sqrt 2)): beta^2 = 1 + sqrt2, so v != 0
    K = NumberField([-1, 0, -2, 0, 1])
    e = SubfieldEmbedding(K, 2, sqrt_in_field(2, K))
    _, beta, u, v = quartic_structure(e)
    assert v != 0 and beta * beta == e.image_of_generator * v + u


def test_relative_norm_forms_instantiated():
    e = emb2()
    _, beta, _, _ = quartic_structure(e)
    g0, g1 = relative_norm_form_quartic(e, beta)
    names = ["y1", "y2", "y3", "y4"]
    assert g0.to_text(names) == "y1^2 + 2*y2^2 + -3*y3^2 + -6*y4^2"
    assert g1.to_text(names) == "2*y1*y2 + -6*y3*y4"


@pytest.mark.parametrize("minpoly,a", [([1, 0, -10, 0, 1], 2), ([-1, 0, -2, 0, 1], 2), ([1, 0, -10, 0, 1], 6),
                                       ([9, 0, -2, 0, 1], -1), ([1, 0, 0, 0, 1], -2)])
def test_relative_norm_forms_match_numeric_norm(minpoly, a):
    K = NumberField(minpoly)
    e = SubfieldEmbedding(K, a, sqrt_in_field(a, K))
    emb_b, beta, _, _ = quartic_structure(e)
    g0, g1 = relative_norm_form_quartic(e, beta)
    rng = random.Random(3)
    for _ in range(10):
        y = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(4)]
        n = relative_norm(element_from_lcoords(emb_b, beta, y), e)
        assert n.coords == (g0(*y), g1(*y))


def test_symbolic_forms_equal_corrected_closed_form():
    g0, g1 = symbolic_relative_norm_forms()
    c0, c1 = closed_form_relative_norm_forms()
    assert g0.to_text(LEMMA_VARS) == c0.to_text(LEMMA_VARS)
    assert g1.to_text(LEMMA_VARS) == c1.to_text(LEMMA_VARS)


def test_printed_g0_bracket_differs_from_expansion():
    # the printed formula puts -2avy3y4 inside u(...); that version is not the norm
    a, u, v, y1, y2, y3, y4 = MultiPoly.variables(7)
    printed = y1 ** 2 + a * y2 ** 2 - u * (y3 ** 2 + a * y4 ** 2 - 2 * a * v * y3 * y4)
    g0, _ = symbolic_relative_norm_forms()
    assert printed != g0
    assert printed - g0 == 2 * a * v * y3 * y4 * (u + 1)


def test_relquad_examples():
    F = RelQuadExt(Qi, 2)
    w = F(Qi.one(), Qi.scalar(Fraction(-1, 2)))
    assert relnorm_to_base(w) == Qi.scalar(Fraction(1, 2))
    assert conjugate(conjugate(w)) == w
    x = Qi([3, 1])
    assert relnorm_to_base(F(x, Qi.zero())) == x * x
    with pytest.raises(DomainError):
        RelQuadExt(K4, 2)


def test_relquad_norm_identities():
    F = RelQuadExt(Qi, 2)
    rng = random.Random(5)
    for _ in range(20):
        w = F(rand_elem(Qi, rng), rand_elem(Qi, rng, nonzero=False))
        nk = relnorm_to_base(w)
        assert w.absolute_norm() == absolute_norm(nk)
        assert absolute_norm(w.norm_to_L()) == w.absolute_norm()
        assert relnorm_to_base(w * conjugate(w)) == nk * relnorm_to_base(conjugate(w))
        assert w * w.inverse() == F(Qi.one())


def test_conj_L():
    L = quadratic_field(2)
    assert conj_L(L([1, 3])) == L([1, -3])
    assert absolute_norm(L([3, 1])) == 7
