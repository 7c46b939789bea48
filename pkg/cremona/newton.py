# cremona/newton.py
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from string import Template
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import sympy
from scipy.spatial import ConvexHull

from cremona.errors import PreconditionError, ZeroPolynomialError
from cremona.leading import valuation_v_fraction
from cremona.polynomial import Polynomial
from cremona.projective import ProjectiveMap

logger = logging.getLogger(__name__)

MAX_VOLUME_DIM = 4

Point = Tuple[Fraction, ...]


class LogTemplates:
    HULL = Template("Hull of $count points in R^$n has affine dimension $dim and $vertices vertices")
    DEFICIENT = Template("Polytope of affine dimension $dim in R^$n has zero volume")
    LEVEL = Template("Newton body level $level: $points points, $vertices vertices")
    STABILIZED = Template("Newton body levels 1..$levels stabilized: $stable")


def _sympy_matrix(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])


def _pivots(points: Sequence[Point]) -> Tuple[int, ...]:
    base = points[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    if not diffs:
        return ()
    _, pivots = _sympy_matrix(diffs).rref()
    return tuple(pivots)


def _extreme_points(points: Iterable[Sequence[Fraction]]) -> Tuple[Tuple[Point, ...], int]:
    unique = sorted({tuple(Fraction(x) for x in p) for p in points})
    if not unique:
        raise PreconditionError("convex hull of an empty point set")
    pivots = _pivots(unique)
    dim = len(pivots)
    if dim == 0:
        return (unique[0],), 0
    if dim == 1:
        axis = pivots[0]
        low = min(unique, key=lambda p: p[axis])
        high = max(unique, key=lambda p: p[axis])
        return tuple(sorted((low, high))), 1
    # проекция на опорные координаты инъективна на аффинной оболочке
    projected = np.array([[float(p[i]) for i in pivots] for p in unique])
    hull = ConvexHull(projected)
    return tuple(sorted(unique[i] for i in hull.vertices)), dim


@dataclass(frozen=True)
class LatticePolytope:
    """
    Выпуклый многогранник в R^n, заданный крайними точками
    Args:
        dim: Размерность объемлющего пространства n
        vertices: Крайние точки (рациональные координаты)
    """
    dim: int
    vertices: Tuple[Point, ...]
    affine_dim: int = 0

    @classmethod
    def from_points(cls, points: Iterable[Sequence], dim: int) -> "LatticePolytope":
        points = list(points)
        for p in points:
            if len(p) != dim:
                raise PreconditionError(f"point {tuple(p)} does not lie in R^{dim}")
        vertices, affine_dim = _extreme_points(points)
        logger.debug(LogTemplates.HULL.substitute(
            count=len(points), n=dim, dim=affine_dim, vertices=len(vertices)))
        return cls(dim, vertices, affine_dim)

    def contains(self, other: "LatticePolytope") -> bool:
        """other ⊆ self"""
        return LatticePolytope.from_points(self.vertices + other.vertices, self.dim) == self

    def translate(self, shift: Sequence[int]) -> "LatticePolytope":
        return LatticePolytope.from_points(
            [tuple(x + s for x, s in zip(v, shift)) for v in self.vertices], self.dim)

    def transform(self, rows: Sequence[Sequence[int]]) -> "LatticePolytope":
        """Образ под линейным отображением v -> A v"""
        return LatticePolytope.from_points(
            [tuple(sum(a * x for a, x in zip(row, v)) for row in rows) for v in self.vertices],
            self.dim)

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "affine_dim": self.affine_dim,
            "vertices": [list(v) for v in self.vertices],
        }


@dataclass(frozen=True)
class SystemGenerators:
    numerators: Tuple[Polynomial, ...]
    denominator: Polynomial

    def __post_init__(self):
        if not self.numerators:
            raise PreconditionError("a linear system needs at least one generator")
        if self.denominator.is_zero or any(p.is_zero for p in self.numerators):
            raise ZeroPolynomialError("generators and denominator must be nonzero")


def newton_polytope(h: Polynomial) -> LatticePolytope:
    """Многогранник Ньютона h в карте X0 = 1"""
    if h.is_zero:
        raise ZeroPolynomialError("zero polynomial has no Newton polytope")
    return LatticePolytope.from_points((exps[1:] for exps in h.terms), h.ambient_n)


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.dim != q.dim:
        raise PreconditionError(f"Minkowski sum of polytopes in R^{p.dim} and R^{q.dim}")
    return LatticePolytope.from_points(
        (tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices), p.dim)


def sigma_system(lam: ProjectiveMap, reading: str = "valuation") -> SystemGenerators:
    """
    Порождающие линейной системы отображения
    Args:
        lam: Отображение на P^n
        reading: 'valuation' (Lambda_i / Lambda_0, i >= 1) или 'span' (Lambda_0, Lambda_2.. / Lambda_1)
    """
    comps = lam.normalized().components
    if reading == "valuation":
        return SystemGenerators(tuple(comps[1:]), comps[0])
    if reading == "span":
        return SystemGenerators((comps[0],) + tuple(comps[2:]), comps[1])
    raise PreconditionError(f"unknown reading {reading!r}, expected 'valuation' or 'span'")


def map_newton_body(system: SystemGenerators, level: int) -> LatticePolytope:
    """
    Приближение тела Ньютона на уровне k
    Returns:
        LatticePolytope: Оболочка {sum m_i v_i / |m| : 1 <= |m| <= k} и нуля
    """
    if level < 1:
        raise PreconditionError(f"level must be >= 1, got {level}")
    values = [valuation_v_fraction(p, system.denominator) for p in system.numerators]
    n = len(values[0])
    points = {tuple(Fraction(0) for _ in range(n))}
    for size in range(1, level + 1):
        for combo in itertools.combinations_with_replacement(range(len(values)), size):
            total = [0] * n
            for index in combo:
                total = [a + b for a, b in zip(total, values[index])]
            points.add(tuple(Fraction(x, size) for x in total))
    body = LatticePolytope.from_points(points, n)
    logger.debug(LogTemplates.LEVEL.substitute(level=level, points=len(points), vertices=len(body.vertices)))
    return body


def newton_body_levels(system: SystemGenerators, max_level: int) -> Tuple[List[LatticePolytope], bool]:
    """Уровни 1..k и признак стабилизации"""
    levels = [map_newton_body(system, k) for k in range(1, max_level + 1)]
    stable = all(body == levels[0] for body in levels)
    logger.debug(LogTemplates.STABILIZED.substitute(levels=max_level, stable=stable))
    return levels, stable


def is_standard_simplex(polytope: LatticePolytope) -> bool:
    n = polytope.dim
    expected = {tuple(Fraction(0) for _ in range(n))}
    expected |= {tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)}
    return set(polytope.vertices) == expected


def normalized_volume(polytope: LatticePolytope) -> Fraction:
    """
    Решеточный объем: евклидов объем, умноженный на n!
    Returns:
        Fraction: Точный объем (0 для вырожденного многогранника)
    """
    n = polytope.dim
    if n > MAX_VOLUME_DIM:
        raise PreconditionError(f"volume is supported up to dimension {MAX_VOLUME_DIM}, got {n}")
    if polytope.affine_dim < n:
        logger.warning(LogTemplates.DEFICIENT.substitute(dim=polytope.affine_dim, n=n))
        return Fraction(0)
    vertices = polytope.vertices
    if n == 1:
        return vertices[-1][0] - vertices[0][0]
    hull = ConvexHull(np.array([[float(x) for x in v] for v in vertices]))
    apex = vertices[0]
    total = sympy.Integer(0)
    for simplex in hull.simplices:
        if 0 in simplex:
            continue
        rows = [[a - b for a, b in zip(vertices[i], apex)] for i in simplex]
        total += abs(_sympy_matrix(rows).det())
    return Fraction(int(total.p), int(total.q))
