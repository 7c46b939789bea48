# cremona/constructions.py
import logging
from dataclasses import dataclass
from fractions import Fraction
from string import Template
from typing import Dict, NamedTuple, Optional, Tuple

from cremona.errors import PreconditionError, VerificationError, ZeroPolynomialError
from cremona.lattice import LatticeMatrix, SL2Matrix
from cremona.leading import g_form, is_sl_prime
from cremona.polynomial import Polynomial, Scalar, primitive_tuple, substitute
from cremona.projective import (
    AffinePolyMap,
    ProjectiveMap,
    restrict_to_hyperplane,
    verify_inverse_pair,
)

logger = logging.getLogger(__name__)


class LogTemplates:
    SHEAR_BUILT = Template("Built shear map n=$n d=$d with lambda_d = $lambda_d")
    SHEAR_NO_INVERSE = Template("lambda_d = $lambda_d is outside the invertible shear family, no inverse")
    SIGMA_BUILT = Template("Built sigma map of degree $d for psi = $psi")
    SIGMA_INVERSE_FAILED = Template("sigma(psi^-1) does not invert sigma(psi) for psi = $psi")


@dataclass(frozen=True)
class DiagonalSpec:
    lambdas: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(x) for x in self.lambdas)
        if not values:
            raise PreconditionError("diagonal map needs at least one scalar")
        if any(x == 0 for x in values):
            raise PreconditionError(f"diagonal scalars must be nonzero, got {[str(x) for x in values]}")
        object.__setattr__(self, "lambdas", values)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def inverse(self) -> "DiagonalSpec":
        return DiagonalSpec(tuple(1 / x for x in self.lambdas))


@dataclass(frozen=True)
class ShearSpec:
    """
    Параметры сдвига Lambda
    Args:
        n: Размерность (не меньше 4)
        d: Степень (не меньше 2)
        lambda_d: Однородный многочлен степени d от X1, X2, X4..Xn
    """
    n: int
    d: int
    lambda_d: Polynomial

    def __post_init__(self):
        if self.n < 4:
            raise PreconditionError(f"shear maps need n >= 4, got {self.n}")
        if self.d < 2:
            raise PreconditionError(f"shear maps need d >= 2, got {self.d}")
        if self.lambda_d.ambient_n != self.n:
            raise PreconditionError(f"lambda_d lives in P^{self.lambda_d.ambient_n}, expected P^{self.n}")
        if self.lambda_d.is_homogeneous() != self.d:
            raise PreconditionError(f"lambda_d must be homogeneous of degree {self.d}: {self.lambda_d}")
        used = self.lambda_d.variables()
        if 0 in used or 3 in used:
            raise PreconditionError(f"lambda_d must not involve X0 or X3: {self.lambda_d}")
        pure_x2 = tuple(self.d if i == 2 else 0 for i in range(self.n + 1))
        if not self.lambda_d.coefficient(pure_x2):
            raise PreconditionError(f"lambda_d needs a nonzero X2^{self.d} term: {self.lambda_d}")

    @classmethod
    def default(cls, n: int = 4, d: int = 2) -> "ShearSpec":
        """lambda_d = X1^(d-1)*X4 + X2^d"""
        x1_x4 = [0] * (n + 1)
        x1_x4[1], x1_x4[4] = d - 1, 1
        x2 = [0] * (n + 1)
        x2[2] = d
        return cls(n, d, Polynomial(n, {tuple(x1_x4): 1, tuple(x2): 1}))


class ShearMaps(NamedTuple):
    shear: ProjectiveMap
    inverse: Optional[ProjectiveMap]


def _var(n: int, i: int) -> Polynomial:
    return Polynomial.variable(n, i)


def _mono(n: int, exps: Dict[int, int], coeff: Scalar = 1) -> Polynomial:
    vector = [0] * (n + 1)
    for i, e in exps.items():
        vector[i] += e
    return Polynomial.monomial(n, vector, coeff)


def diagonal_map(spec: DiagonalSpec) -> ProjectiveMap:
    """[X0 : l1*X1 : ... : ln*Xn]"""
    n = spec.n
    return ProjectiveMap([_var(n, 0)] + [_var(n, i).scale(spec.lambdas[i - 1]) for i in range(1, n + 1)])


def monomial_map(matrix: LatticeMatrix) -> ProjectiveMap:
    """
    Мономиальное отображение x_j -> x^(j-й столбец M)
    Args:
        matrix: Матрица из SL'_n(Z)
    Returns:
        ProjectiveMap: Взаимно простой однородный представитель
    """
    if not is_sl_prime(matrix):
        raise PreconditionError(f"matrix {matrix} is not in SL'_n(Z) (det 1, column sums 1)")
    n = matrix.size
    shift = [max(0, max(-x for x in row)) for row in matrix.rows]
    components = [Polynomial.monomial(n, (1,) + tuple(shift))]
    for column in matrix.columns():
        components.append(Polynomial.monomial(n, (0,) + tuple(x + c for x, c in zip(column, shift))))
    return ProjectiveMap(primitive_tuple(components))


def rho_a1(n: int) -> LatticeMatrix:
    """Единичная матрица с третьим столбцом (1, -1, 1, 0, ...)"""
    return _generator_matrix(n, 2, (1, -1, 1))


def rho_a2(n: int) -> LatticeMatrix:
    """Единичная матрица со вторым столбцом (-1, 1, 1, 0, ...)"""
    return _generator_matrix(n, 1, (-1, 1, 1))


def _generator_matrix(n: int, column: int, head: Tuple[int, ...]) -> LatticeMatrix:
    if n < 4:
        raise PreconditionError(f"a1 and a2 need n >= 4, got {n}")
    columns = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    columns[column] = head + (0,) * (n - len(head))
    return LatticeMatrix.from_columns(columns)


def a1_a2(n: int = 4) -> Tuple[ProjectiveMap, ProjectiveMap]:
    return monomial_map(rho_a1(n)), monomial_map(rho_a2(n))


def a1_a2_inverses(n: int = 4) -> Tuple[ProjectiveMap, ProjectiveMap]:
    return monomial_map(rho_a1(n).inverse()), monomial_map(rho_a2(n).inverse())


def cremona_involution(n: int) -> ProjectiveMap:
    """Стандартная инволюция [X1...Xn : X0X2...Xn : ...]"""
    return ProjectiveMap([
        _mono(n, {j: 1 for j in range(n + 1) if j != i}) for i in range(n + 1)
    ])


def _shear_components(n: int, d: int, lambda_d: Polynomial) -> Tuple[Polynomial, ...]:
    head = _mono(n, {0: d - 1}) + _mono(n, {1: d - 1})
    components = [head * _var(n, i) for i in range(n + 1)]
    components[4] = _mono(n, {0: d - 1, 4: 1}) + lambda_d
    return tuple(components)


def shear_lambda(spec: ShearSpec) -> ShearMaps:
    """
    Сдвиг Lambda и его явный обратный
    Returns:
        ShearMaps: Отображение и обратное (None вне обратимого подсемейства)
    """
    n, d = spec.n, spec.d
    shear = ProjectiveMap(_shear_components(n, d, spec.lambda_d)).normalized()
    logger.debug(LogTemplates.SHEAR_BUILT.substitute(n=n, d=d, lambda_d=spec.lambda_d))

    by_x4 = spec.lambda_d.coefficients_in(4)
    linear = by_x4.get(1)
    if set(by_x4) - {0, 1} or linear != _mono(n, {1: d - 1}):
        logger.warning(LogTemplates.SHEAR_NO_INVERSE.substitute(lambda_d=spec.lambda_d))
        return ShearMaps(shear, None)
    rest = by_x4.get(0, Polynomial.zero(n))
    inverse_lambda = _mono(n, {1: d - 1, 4: 1}) - rest
    inverse = ProjectiveMap(_shear_components(n, d, inverse_lambda)).normalized()
    return ShearMaps(shear, inverse)


def a2_conjugate_display(spec: ShearSpec) -> ProjectiveMap:
    """
    Явный вид a2∘Λ∘a2⁻¹:
    X_i -> X3^d (X0^(d-1) + X1^(d-1)) X_i при i != 4,
    X4 -> X0^(d-1) X3^d X4 + lambda_d(X1X3, X1X2, X4X3, ..., XnX3)
    """
    n, d = spec.n, spec.d
    x3_d = _mono(n, {3: d})
    head = (_mono(n, {0: d - 1}) + _mono(n, {1: d - 1})) * x3_d
    images = [_var(n, 0), _mono(n, {1: 1, 3: 1}), _mono(n, {1: 1, 2: 1}), _var(n, 3)]
    images += [_mono(n, {k: 1, 3: 1}) for k in range(4, n + 1)]
    components = [head * _var(n, i) for i in range(n + 1)]
    components[4] = _mono(n, {0: d - 1, 3: d, 4: 1}) + substitute(spec.lambda_d, images)
    return ProjectiveMap(components)


def _homogenize_on_x1(psi_component: Polynomial, n: int, d: int) -> Polynomial:
    # переменная k (k = 1..n-1) отображения psi соответствует X_{k+1}
    terms = {}
    for exps, coeff in psi_component.terms.items():
        weight = sum(exps)
        if weight > d:
            raise PreconditionError(
                f"psi component {psi_component} has degree {weight} above d = {d}")
        terms[(0, d - weight) + exps[1:]] = coeff
    return Polynomial(n, terms)


def sigma_map(psi: AffinePolyMap, d: int) -> ProjectiveMap:
    """
    Отображение Lambda, соответствующее автоморфизму psi пространства k^(n-1)
    Args:
        psi: Полиномиальное отображение размерности n - 1
        d: Степень, не меньше степени psi и не меньше 2
    Returns:
        ProjectiveMap: Lambda на P^n в нормализованной форме
    """
    if d < 2:
        raise PreconditionError(f"sigma maps need d >= 2, got {d}")
    n = psi.dim + 1
    components = [
        _mono(n, {0: d}) + _mono(n, {0: 1, 1: d - 1}),
        _mono(n, {0: d - 1, 1: 1}) + _mono(n, {1: d}),
    ]
    for j, comp in enumerate(psi.components, start=2):
        components.append(_mono(n, {0: d - 1, j: 1}) + _homogenize_on_x1(comp, n, d))
    logger.debug(LogTemplates.SIGMA_BUILT.substitute(d=d, psi=psi))
    return ProjectiveMap(components).normalized()


def sigma_inverse(psi: AffinePolyMap, psi_inverse: AffinePolyMap, d: int) -> ProjectiveMap:
    """
    Обратное к sigma_map(psi, d) для элементарных треугольных psi
    Raises:
        VerificationError: sigma_map(psi_inverse, d) не обращает sigma_map(psi, d)
    """
    forward = sigma_map(psi, d)
    candidate = sigma_map(psi_inverse, d)
    if not verify_inverse_pair(forward, candidate):
        logger.warning(LogTemplates.SIGMA_INVERSE_FAILED.substitute(psi=psi))
        raise VerificationError(f"sigma({psi_inverse}) is not the inverse of sigma({psi})")
    return candidate


def xi_restrict(lam: ProjectiveMap) -> AffinePolyMap:
    """
    Ограничение на гиперплоскость X0 = 0 в карте X1 != 0
    Args:
        lam: Отображение вида sigma_map
    Returns:
        AffinePolyMap: psi_j(x2, ..., xn) = Lambda_(j+1)|(X0=0) / X1^e
    Raises:
        PreconditionError: ограничение не является полиномиальным отображением
    """
    if g_form(lam) is None:
        raise PreconditionError("xi is defined on G-form maps only")
    lam = lam.normalized()
    restriction = restrict_to_hyperplane(lam, 0).components
    head = restriction[1]
    if head.is_zero:
        raise ZeroPolynomialError("component X1 vanishes on X0 = 0")
    if not head.is_monomial or head.variables() != {1}:
        raise PreconditionError(f"restriction is not a polynomial map: X1-component is {head}")
    _, scale = head.leading_term()
    m = lam.ambient_n - 1
    components = []
    for comp in restriction[2:]:
        terms = {(0,) + exps[2:]: coeff / scale for exps, coeff in comp.terms.items()}
        components.append(Polynomial(m, terms))
    return AffinePolyMap(components)


def sl2_projection(matrix: LatticeMatrix) -> SL2Matrix:
    """
    Действие матрицы на плоскости {x1 + x2 + x3 = 0} в базисе e1 - e2, e3 - e1
    Raises:
        PreconditionError: плоскость не инвариантна
    """
    n = matrix.size
    if n < 3:
        raise PreconditionError(f"sl2 projection needs n >= 3, got {n}")
    basis = [(1, -1, 0) + (0,) * (n - 3), (-1, 0, 1) + (0,) * (n - 3)]
    columns = []
    for b in basis:
        x = matrix.apply(b)
        alpha, beta = -x[1], x[2]
        if any(x[3:]) or x[0] != alpha - beta:
            raise PreconditionError(f"plane x1 + x2 + x3 = 0 is not invariant under {matrix}")
        columns.append((alpha, beta))
    return SL2Matrix(tuple(zip(*columns)))
