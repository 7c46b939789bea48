from fractions import Fraction

from hypothesis import strategies as st

from cremona.constructions import (
    DiagonalSpec,
    ShearSpec,
    a1_a2,
    a1_a2_inverses,
    diagonal_map,
    monomial_map,
    rho_a1,
    rho_a2,
    shear_lambda,
    sigma_map,
)
from cremona.group_lab import GroupWord, LETTER_ORDER
from cremona.polynomial import Polynomial
from cremona.projective import AffinePolyMap

small_ints = st.integers(min_value=-5, max_value=5)
nonzero_ints = small_ints.filter(bool)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=4))
nonzero_rationals = rationals.filter(bool)


def exponents(n: int, max_degree: int = 3):
    return st.lists(st.integers(min_value=0, max_value=max_degree), min_size=n + 1, max_size=n + 1).filter(
        lambda e: sum(e) <= max_degree).map(tuple)


def polynomials(n: int = 2, max_terms: int = 4, max_degree: int = 3, coefficients=rationals):
    return st.dictionaries(exponents(n, max_degree), coefficients, max_size=max_terms).map(
        lambda terms: Polynomial(n, terms))


def nonzero_polynomials(n: int = 2, max_terms: int = 3, max_degree: int = 2):
    return polynomials(n, max_terms, max_degree, nonzero_rationals).filter(lambda p: not p.is_zero)


@st.composite
def homogeneous_polynomials(draw, n: int = 4, min_degree: int = 1, max_degree: int = 3, max_terms: int = 4):
    degree = draw(st.integers(min_value=min_degree, max_value=max_degree))
    count = draw(st.integers(min_value=1, max_value=max_terms))
    terms = {}
    for _ in range(count):
        cuts = sorted(draw(st.lists(st.integers(min_value=0, max_value=degree), min_size=n, max_size=n)))
        bounds = [0] + cuts + [degree]
        exps = tuple(b - a for a, b in zip(bounds, bounds[1:]))
        terms[exps] = draw(nonzero_ints)
    return Polynomial(n, terms)


words = st.lists(st.sampled_from(LETTER_ORDER), max_size=4).map(lambda letters: GroupWord(tuple(letters)))

diagonal_scalars = st.lists(nonzero_rationals, min_size=4, max_size=4).map(tuple)


@st.composite
def triangular_automorphisms(draw, m: int = 3, d: int = 2):
    """psi_j = X_j + p_j(X_1..X_(j-1)), deg p_j <= d, без свободного члена"""
    components = []
    for j in range(1, m + 1):
        component = Polynomial.variable(m, j)
        for _ in range(draw(st.integers(min_value=0, max_value=2))):
            if j == 1:
                break
            exps = [0] * (m + 1)
            for _ in range(draw(st.integers(min_value=1, max_value=d))):
                exps[draw(st.integers(min_value=1, max_value=j - 1))] += 1
            component = component + Polynomial.monomial(m, exps, draw(nonzero_ints))
        components.append(component)
    return AffinePolyMap(components)


@st.composite
def affine_maps(draw, m: int = 2, max_degree: int = 2, max_terms: int = 3):
    components = []
    for _ in range(m):
        terms = draw(st.dictionaries(exponents(m - 1, max_degree).map(lambda e: (0,) + e), rationals,
                                     max_size=max_terms))
        components.append(Polynomial(m, terms))
    return AffinePolyMap(components)


def g_maps(n: int = 4):
    """Элементы G из реализованных семейств: мономиальные, сдвиги, диагональные, sigma"""
    fixed = [
        *a1_a2(n),
        *a1_a2_inverses(n),
        *shear_lambda(ShearSpec.default(n, 2)),
        monomial_map(rho_a1(n).power(2)),
        monomial_map(rho_a2(n).power(2)),
    ]
    return st.one_of(
        st.sampled_from(fixed),
        st.lists(nonzero_ints, min_size=n, max_size=n).map(lambda lam: diagonal_map(DiagonalSpec(tuple(lam)))),
        triangular_automorphisms(m=n - 1, d=2).map(lambda psi: sigma_map(psi, 2)),
    )
