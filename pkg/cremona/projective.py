# cremona/projective.py
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from string import Template
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from cremona.errors import (
    DimensionMismatchError,
    PreconditionError,
    ZeroPolynomialError,
)
from cremona.polynomial import Polynomial, Scalar, primitive_tuple, substitute

logger = logging.getLogger(__name__)

SAMPLE_VALUES = (1, 2, 3, -1, -2, 0)


class LogTemplates:
    COMPOSE = Template("Composed maps of degree $outer and $inner in P^$n ($terms terms)")
    NORMALIZE = Template("Normalized map of degree $before to degree $after")
    INVERSE_FAILED = Template("Inverse check failed: $reason")
    SAMPLE_FOUND = Template("Sample point $point on X$index = 0 after $attempts attempts")
    CONTRACTION = Template("Hyperplane X$index = 0 contracts to $point")
    NO_CONTRACTION = Template("Hyperplane X$index = 0 is not contracted")


class ProjectivePoint:
    """Точка P^n, равенство с точностью до ненулевого множителя"""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[Scalar]):
        values = tuple(Fraction(c) for c in coords)
        if not any(values):
            raise ZeroPolynomialError("projective point cannot have all coordinates zero")
        self.coords = values

    @property
    def ambient_n(self) -> int:
        return len(self.coords) - 1

    def normalized(self) -> Tuple[Fraction, ...]:
        pivot = next(c for c in self.coords if c)
        return tuple(c / pivot for c in self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.normalized() == other.normalized()

    def __hash__(self) -> int:
        return hash(self.normalized())

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.normalized()) + "]"

    def __repr__(self) -> str:
        return f"ProjectivePoint({self})"


class ProjectiveMap:
    """
    Рациональное отображение P^n -> P^n, заданное (n+1) однородными многочленами
    Args:
        components: Компоненты f_0..f_n одной степени
    """

    def __init__(self, components: Sequence[Polynomial]):
        components = tuple(components)
        if not components:
            raise DimensionMismatchError("a projective map needs at least one component")
        n = components[0].ambient_n
        if len(components) != n + 1:
            raise DimensionMismatchError(
                f"map on P^{n} needs {n + 1} components, got {len(components)}")
        degrees = set()
        for i, comp in enumerate(components):
            if comp.ambient_n != n:
                raise DimensionMismatchError(f"component {i} lives in P^{comp.ambient_n}, not P^{n}")
            if comp.is_zero:
                continue
            degree = comp.is_homogeneous()
            if degree is None:
                raise PreconditionError(f"component {i} is not homogeneous: {comp}")
            degrees.add(degree)
        if not degrees:
            raise ZeroPolynomialError("all components of the map are zero")
        if len(degrees) > 1:
            raise PreconditionError(f"components have different degrees {sorted(degrees)}")
        self.ambient_n = n
        self.components = components
        self.degree = degrees.pop()

    @classmethod
    def identity(cls, n: int) -> "ProjectiveMap":
        return cls([Polynomial.variable(n, i) for i in range(n + 1)])

    @cached_property
    def _primitive(self) -> "ProjectiveMap":
        reduced = primitive_tuple(self.components)
        if reduced is self.components or reduced == self.components:
            return self
        result = ProjectiveMap(reduced)
        logger.debug(LogTemplates.NORMALIZE.substitute(before=self.degree, after=result.degree))
        result.__dict__["_primitive"] = result
        return result

    def normalized(self) -> "ProjectiveMap":
        """Взаимно простой представитель (кешируется)"""
        return self._primitive

    def __getitem__(self, index: int) -> Polynomial:
        return self.components[index]

    def __len__(self) -> int:
        return len(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        return "[" + " : ".join(str(c) for c in self.components) + "]"

    def __repr__(self) -> str:
        return f"ProjectiveMap(P^{self.ambient_n}, degree {self.degree})"


class AffinePolyMap:
    """
    Полиномиальное отображение аффинного пространства k^m
    Компоненты хранятся как многочлены от X1..Xm (показатель X0 равен нулю)
    """

    def __init__(self, components: Sequence[Polynomial]):
        components = tuple(components)
        if not components:
            raise DimensionMismatchError("an affine map needs at least one component")
        m = len(components)
        for i, comp in enumerate(components, start=1):
            if comp.ambient_n != m:
                raise DimensionMismatchError(
                    f"component {i} has {comp.ambient_n} variables, expected {m}")
            if not comp.is_zero and comp.degree_in(0):
                raise PreconditionError(f"affine component {i} uses X0: {comp}")
        self.dim = m
        self.components = components

    @classmethod
    def identity(cls, m: int) -> "AffinePolyMap":
        return cls([Polynomial.variable(m, j) for j in range(1, m + 1)])

    def degree(self) -> int:
        return max((c.total_degree() for c in self.components if not c.is_zero), default=0)

    def __call__(self, point: Sequence[Scalar]) -> Tuple[Fraction, ...]:
        values = (1,) + tuple(point)
        return tuple(c.evaluate(values) for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffinePolyMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"AffinePolyMap(k^{self.dim}, {self})"


@dataclass(frozen=True)
class HyperplaneRestriction:
    index: int
    components: Tuple[Polynomial, ...]

    @property
    def vanishes(self) -> bool:
        return all(c.is_zero for c in self.components)

    @property
    def nonzero_indices(self) -> FrozenSet[int]:
        return frozenset(i for i, c in enumerate(self.components) if not c.is_zero)


def _check_same_space(f: ProjectiveMap, g: ProjectiveMap) -> None:
    if f.ambient_n != g.ambient_n:
        raise DimensionMismatchError(f"maps live in P^{f.ambient_n} and P^{g.ambient_n}")


def compose(g: ProjectiveMap, f: ProjectiveMap, normalize: bool = False) -> ProjectiveMap:
    """
    Композиция g∘f: компоненты g_i(f_0, ..., f_n)
    Args:
        g: Внешнее отображение
        f: Внутреннее отображение
        normalize: Сократить общий множитель компонент
    Returns:
        ProjectiveMap: Представитель степени deg(g)*deg(f) (или меньше после нормализации)
    Raises:
        ZeroPolynomialError: f попадает в базисное множество g
    """
    _check_same_space(g, f)
    result = ProjectiveMap([substitute(component, f.components) for component in g.components])
    logger.debug(LogTemplates.COMPOSE.substitute(
        outer=g.degree, inner=f.degree, n=g.ambient_n,
        terms=sum(len(c) for c in result.components)))
    return result.normalized() if normalize else result


def conjugate(a: ProjectiveMap, f: ProjectiveMap, a_inverse: ProjectiveMap) -> ProjectiveMap:
    """a∘f∘a⁻¹ в нормализованной форме"""
    return compose(compose(a, f, normalize=True), a_inverse, normalize=True)


def equals_projectively(f: ProjectiveMap, g: ProjectiveMap) -> bool:
    """Совпадение как рациональных отображений: f_i*g_k == f_k*g_i"""
    _check_same_space(f, g)
    k = next(i for i, c in enumerate(f.components) if not c.is_zero)
    if g.components[k].is_zero:
        return False
    fk, gk = f.components[k], g.components[k]
    for fi, gi in zip(f.components, g.components):
        if fi * gk != fk * gi:
            return False
    return True


def verify_inverse_pair(f: ProjectiveMap, g: ProjectiveMap) -> bool:
    """
    Проверка, что g является обратным к f
    Returns:
        bool: True если f∘g и g∘f проективно тождественны
    """
    _check_same_space(f, g)
    identity = ProjectiveMap.identity(f.ambient_n)
    for outer, inner, label in ((f, g, "f∘g"), (g, f, "g∘f")):
        try:
            composite = compose(outer, inner)
        except ZeroPolynomialError:
            logger.info(LogTemplates.INVERSE_FAILED.substitute(reason=f"{label} is the zero tuple"))
            return False
        if not equals_projectively(composite, identity):
            logger.info(LogTemplates.INVERSE_FAILED.substitute(reason=f"{label} is not the identity"))
            return False
    return True


def restrict_to_hyperplane(f: ProjectiveMap, index: int) -> HyperplaneRestriction:
    if not 0 <= index <= f.ambient_n:
        raise DimensionMismatchError(f"hyperplane X{index} = 0 is outside P^{f.ambient_n}")
    return HyperplaneRestriction(
        index=index,
        components=tuple(c.set_variable(index, 0) for c in f.components),
    )


def _hyperplane_grid(n: int, index: int) -> Iterable[Tuple[int, ...]]:
    for free in itertools.product(SAMPLE_VALUES, repeat=n):
        yield free[:index] + (0,) + free[index:]


def contracts_to_point(
    f: ProjectiveMap,
    index: int,
    attempts: int = 1000,
    sample_points: Optional[Iterable[Sequence[Scalar]]] = None,
) -> Optional[ProjectivePoint]:
    """
    Проверка стягивания гиперплоскости (X_index = 0) в точку
    Args:
        f: Отображение
        index: Номер координаты гиперплоскости
        attempts: Максимум пробных точек
        sample_points: Свои пробные точки вместо детерминированной сетки
    Returns:
        Optional[ProjectivePoint]: Образ гиперплоскости, если он точка
    """
    restriction = restrict_to_hyperplane(f, index)
    if restriction.vanishes:
        raise PreconditionError(
            f"restriction to X{index} = 0 is identically zero; normalize the map first")
    grid = _hyperplane_grid(f.ambient_n, index) if sample_points is None else sample_points

    image = None
    for attempt, q in enumerate(itertools.islice(grid, attempts), start=1):
        values = tuple(c.evaluate(q) for c in restriction.components)
        if any(values):
            logger.debug(LogTemplates.SAMPLE_FOUND.substitute(
                point=list(q), index=index, attempts=attempt))
            image = values
            break
    if image is None:
        raise PreconditionError(
            f"no sample point on X{index} = 0 outside the base locus after {attempts} attempts")

    r = restriction.components
    for a, b in itertools.combinations(range(len(r)), 2):
        if r[a].scale(image[b]) != r[b].scale(image[a]):
            logger.debug(LogTemplates.NO_CONTRACTION.substitute(index=index))
            return None
    point = ProjectivePoint(image)
    logger.debug(LogTemplates.CONTRACTION.substitute(index=index, point=point))
    return point


def evaluate(f: ProjectiveMap, p: ProjectivePoint) -> ProjectivePoint:
    if p.ambient_n != f.ambient_n:
        raise DimensionMismatchError(f"point of P^{p.ambient_n} for a map on P^{f.ambient_n}")
    values = [c.evaluate(p.coords) for c in f.components]
    if not any(values):
        raise PreconditionError(f"point {p} lies in the base locus of this representative")
    return ProjectivePoint(values)


def fixes_point(f: ProjectiveMap, p: ProjectivePoint) -> bool:
    return evaluate(f, p) == p


def embed_affine(psi: AffinePolyMap) -> ProjectiveMap:
    """
    Гомогенизация аффинного отображения: f_0 = X0^D, f_j = X0^D * psi_j(X/X0)
    Args:
        psi: Полиномиальное отображение k^n
    Returns:
        ProjectiveMap: Взаимно простой представитель на P^n
    """
    n = psi.dim
    if all(c.is_zero for c in psi.components):
        raise ZeroPolynomialError("cannot embed the zero affine map")
    top = max(psi.degree(), 1)
    components = [Polynomial.monomial(n, (top,) + (0,) * n)]
    for comp in psi.components:
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for exps, coeff in comp.terms.items():
            terms[(top - sum(exps),) + exps[1:]] = coeff
        components.append(Polynomial(n, terms))
    return ProjectiveMap(primitive_tuple(components))


def compose_affine(psi: AffinePolyMap, phi: AffinePolyMap) -> AffinePolyMap:
    """psi∘phi: подстановка phi в компоненты psi"""
    if psi.dim != phi.dim:
        raise DimensionMismatchError(f"affine maps of dimension {psi.dim} and {phi.dim}")
    images = (Polynomial.constant(phi.dim, 1),) + phi.components
    return AffinePolyMap([substitute(c, images) for c in psi.components])


def _determinant(matrix: List[List[Polynomial]]) -> Polynomial:
    size = len(matrix)
    memo: Dict[Tuple[int, int], Polynomial] = {}

    def minor(row: int, used: int) -> Polynomial:
        if row == size:
            return Polynomial.constant(matrix[0][0].ambient_n, 1)
        key = (row, used)
        if key not in memo:
            total = Polynomial.zero(matrix[0][0].ambient_n)
            sign = 1
            for col in range(size):
                if used & (1 << col):
                    continue
                entry = matrix[row][col]
                if not entry.is_zero:
                    term = entry * minor(row + 1, used | (1 << col))
                    total = total + term if sign > 0 else total - term
                sign = -sign
            memo[key] = total
        return memo[key]

    return minor(0, 0)


def jacobian_det(psi: AffinePolyMap) -> Polynomial:
    """
    Якобиан det(d psi_i / d x_j)
    Returns:
        Polynomial: Точный определитель (многочлен от X1..Xm)
    """
    matrix = [[c.derivative(j) for j in range(1, psi.dim + 1)] for c in psi.components]
    return _determinant(matrix)
