import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings

from cremona.constructions import (
    DiagonalSpec,
    ShearSpec,
    a1_a2,
    a1_a2_inverses,
    cremona_involution,
    diagonal_map,
    monomial_map,
    rho_a1,
    rho_a2,
    shear_lambda,
    sigma_map,
)
from cremona.errors import (
    HypothesisViolationError,
    NotInGFormError,
    PreconditionError,
    ZeroPolynomialError,
)
from cremona.group_lab import parse_word, word_matrix
from cremona.lattice import LatticeMatrix
from cremona.leading import (
    LeadingPair,
    g_form,
    is_member_of_g,
    is_sl_prime,
    leading_pair,
    predict_composite_rho,
    predict_leading,
    rho,
    valuation_v,
    valuation_v_fraction,
)
from cremona.parser import parse_polynomial
from cremona.polynomial import Polynomial, substitute
from cremona.projective import AffinePolyMap, ProjectiveMap, compose
from tests.strategies import exponents, g_maps, homogeneous_polynomials, nonzero_polynomials

A1, A2 = a1_a2()
LAMBDA = shear_lambda(ShearSpec.default(4, 2)).shear


def affine(texts, m: int) -> AffinePolyMap:
    return AffinePolyMap([parse_polynomial(text, m) for text in texts])


FAMILY_P4 = {
    "a1": A1,
    "a2": A2,
    "lambda_d2": LAMBDA,
    "lambda_d3": shear_lambda(ShearSpec.default(4, 3)).shear,
    "diagonal": diagonal_map(DiagonalSpec((2, 3, 5, 7))),
    "word": monomial_map(word_matrix(parse_word("Ab"), 4)),
    "sigma_d3": sigma_map(affine(["X1", "X2 + X1^3", "X3 + X1*X2"], 3), 3),
}
FAMILY_P3 = {
    "diagonal": diagonal_map(DiagonalSpec((2, 3, 5))),
    "sigma_d2": sigma_map(affine(["X1", "X2 + X1^2"], 2), 2),
    "sigma_d3": sigma_map(affine(["X1", "X2 - 2*X1^3"], 2), 3),
}


def expanded_leading(h: Polynomial, f: ProjectiveMap) -> LeadingPair:
    return leading_pair(substitute(h, list(f.normalized().components)))


def monomials(n: int, max_degree: int):
    for degree in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(n + 1), degree):
            exps = [0] * (n + 1)
            for i in combo:
                exps[i] += 1
            yield Polynomial.monomial(n, exps)


class TestLeadingPair:
    def test_top_level_lex_max(self):
        pair = leading_pair(parse_polynomial("X0^2*X1 + X0^2*X2 + X0*X3^2", 3))
        assert pair == LeadingPair(2, (1, 0, 0))
        assert pair.as_dict() == {"d": 2, "I": [1, 0, 0]}

    def test_no_x0(self):
        assert leading_pair(parse_polynomial("X1 + X2", 2)) == LeadingPair(0, (1, 0))

    def test_zero(self):
        with pytest.raises(ZeroPolynomialError):
            leading_pair(Polynomial.zero(2))

    def test_valuation_of_fraction(self):
        f = parse_polynomial("X1^2*X2", 2)
        g = parse_polynomial("X2^3", 2)
        assert valuation_v_fraction(f, g) == (2, -2)

    @settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
    @given(nonzero_polynomials(n=3), nonzero_polynomials(n=3))
    def test_valuation_is_multiplicative(self, p, q):
        assert valuation_v(p * q) == tuple(a + b for a, b in zip(valuation_v(p), valuation_v(q)))


class TestGForm:
    def test_identity(self):
        data = g_form(ProjectiveMap.identity(3))
        assert data.d_f == 1
        assert data.I_f0 == (0, 0, 0)
        assert data.matrix.is_identity()

    def test_diagonal(self):
        data = g_form(diagonal_map(DiagonalSpec((2, 3))))
        assert data.alphas == (1, 2, 3)
        assert data.as_dict()["alphas"] == [Fraction(1), Fraction(2), Fraction(3)]

    def test_involution_is_not_in_g_form(self):
        assert g_form(cremona_involution(2)) is None
        with pytest.raises(NotInGFormError):
            rho(cremona_involution(2))

    def test_non_monomial_top_coefficient(self):
        f = ProjectiveMap([parse_polynomial(p, 2) for p in ("X0*X1 + X0*X2", "X1^2", "X2^2")])
        assert g_form(f) is None

    def test_generator_matrices(self):
        assert rho(A1) == rho_a1(4)
        assert rho(A2) == rho_a2(4)

    def test_common_factor_is_removed(self):
        f = ProjectiveMap([parse_polynomial(p, 2) for p in ("X0*X2", "X1*X2", "X2^2")])
        assert rho(f).is_identity()

    @settings(max_examples=40, deadline=None)
    @given(g_maps(), exponents(4, 3))
    def test_common_monomial_factor(self, f, exps):
        scaled = ProjectiveMap([c * Polynomial.monomial(4, exps) for c in f.components])
        expected, data = g_form(f), g_form(scaled)
        assert (data.d_f, data.I_f0, data.I_fj) == (expected.d_f, expected.I_f0, expected.I_fj)

    def test_shear_is_unipotent_on_lattice(self):
        data = g_form(LAMBDA)
        assert data.d_f == 2
        assert is_sl_prime(data.matrix)


class TestSLPrime:
    def test_generators(self):
        assert is_sl_prime(rho_a1(4))
        assert is_sl_prime(LatticeMatrix.identity(4))

    def test_column_sums_must_be_one(self):
        assert not is_sl_prime(LatticeMatrix(((2, 1), (1, 1))))

    def test_determinant_must_be_one(self):
        assert not is_sl_prime(LatticeMatrix(((0, 1), (1, 0))))


class TestPredictLeading:
    def test_worked_example(self):
        h = parse_polynomial("X0*X1", 4)
        predicted = predict_leading(h, A1)
        assert predicted == LeadingPair(1, (1, 2, 0, 0))
        assert predicted == leading_pair(substitute(h, list(A1.components)))

    def test_monomials_across_families(self):
        checked = 0
        for family, max_degree in ((FAMILY_P4, 2), (FAMILY_P3, 3)):
            for name, f in sorted(family.items()):
                for h in monomials(f.ambient_n, max_degree):
                    assert predict_leading(h, f) == expanded_leading(h, f), (name, str(h))
                    checked += 1
        assert checked >= 200

    @pytest.mark.parametrize("name", sorted(FAMILY_P4))
    @settings(max_examples=25, deadline=None)
    @given(h=homogeneous_polynomials(n=4, max_degree=3, max_terms=3))
    def test_matches_expansion_p4(self, name, h):
        f = FAMILY_P4[name]
        try:
            predicted = predict_leading(h, f)
        except HypothesisViolationError:
            assume(False)
        assert predicted == expanded_leading(h, f)

    @pytest.mark.parametrize("name", sorted(FAMILY_P3))
    @settings(max_examples=30, deadline=None)
    @given(h=homogeneous_polynomials(n=3, max_degree=3, max_terms=3))
    def test_matches_expansion_p3(self, name, h):
        f = FAMILY_P3[name]
        try:
            predicted = predict_leading(h, f)
        except HypothesisViolationError:
            assume(False)
        assert predicted == expanded_leading(h, f)

    def test_violation(self):
        with pytest.raises(HypothesisViolationError):
            predict_leading(parse_polynomial("X2 + X3", 4), A1)

    def test_inhomogeneous(self):
        with pytest.raises(PreconditionError):
            predict_leading(parse_polynomial("X0 + X1^2", 4), A1)

    def test_not_in_g_form(self):
        with pytest.raises(NotInGFormError):
            predict_leading(parse_polynomial("X0", 2), cremona_involution(2))

    def test_zero(self):
        with pytest.raises(ZeroPolynomialError):
            predict_leading(Polynomial.zero(4), A1)


class TestMembership:
    def test_explicit_inverse(self):
        a1_inv, _ = a1_a2_inverses()
        assert is_member_of_g(A1, a1_inv)
        assert not is_member_of_g(A1, A2)

    def test_shear_pair(self):
        lam, lam_inv = shear_lambda(ShearSpec.default(4, 3))
        assert is_member_of_g(lam, lam_inv)

    def test_composite_rho_reverses_order(self):
        assert predict_composite_rho(A2, A1) == rho(compose(A2, A1))
        assert predict_composite_rho(A2, A1) == rho_a1(4) @ rho_a2(4)


class TestFunctoriality:
    @settings(max_examples=100, deadline=None)
    @given(g_maps(), g_maps())
    def test_rho_reverses_composition(self, g, f):
        assert rho(compose(g, f, normalize=True)) == rho(f) @ rho(g)

    @pytest.mark.parametrize("word", ["A", "b", "AB", "aB", "bbA"])
    def test_monomial_round_trip(self, word):
        matrix = word_matrix(parse_word(word), 4)
        assert rho(monomial_map(matrix)) == matrix
