from fractions import Fraction

import pytest

from cremona.constructions import ShearSpec, shear_lambda, sigma_map
from cremona.errors import PreconditionError, ZeroPolynomialError
from cremona.newton import (
    LatticePolytope,
    SystemGenerators,
    is_standard_simplex,
    map_newton_body,
    minkowski_sum,
    newton_body_levels,
    newton_polytope,
    normalized_volume,
    sigma_system,
)
from cremona.parser import parse_polynomial
from cremona.polynomial import Polynomial
from cremona.projective import AffinePolyMap


def F(*values):
    return tuple(Fraction(v) for v in values)


def polytope(points, dim):
    return LatticePolytope.from_points(points, dim)


UNIT_SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


class TestHull:
    def test_interior_point_dropped(self):
        p = polytope(UNIT_SQUARE + [(Fraction(1, 2), Fraction(1, 2))], 2)
        assert p.vertices == (F(0, 0), F(0, 1), F(1, 0), F(1, 1))
        assert p.affine_dim == 2

    def test_collinear_points(self):
        p = polytope([(0, 0), (1, 1), (3, 3), (2, 2)], 2)
        assert p.vertices == (F(0, 0), F(3, 3))
        assert p.affine_dim == 1

    def test_single_point(self):
        p = polytope([(1, 2), (1, 2)], 2)
        assert p.vertices == (F(1, 2),)
        assert p.affine_dim == 0

    def test_planar_points_in_space(self):
        p = polytope([(0, 0, 1), (1, 0, 1), (0, 1, 1), (Fraction(1, 3), Fraction(1, 3), 1)], 3)
        assert p.affine_dim == 2
        assert len(p.vertices) == 3

    def test_wrong_dimension(self):
        with pytest.raises(PreconditionError):
            polytope([(0, 0), (1, 0, 0)], 2)

    def test_empty(self):
        with pytest.raises(PreconditionError):
            polytope([], 2)

    def test_minkowski_sum(self):
        segment_x = polytope([(0, 0), (1, 0)], 2)
        segment_y = polytope([(0, 0), (0, 1)], 2)
        assert minkowski_sum(segment_x, segment_y) == polytope(UNIT_SQUARE, 2)

    def test_contains_translate_transform(self):
        square = polytope(UNIT_SQUARE, 2)
        triangle = polytope([(0, 0), (1, 0), (0, 1)], 2)
        assert square.contains(triangle)
        assert not triangle.contains(square)
        assert triangle.translate((1, 1)) == polytope([(1, 1), (2, 1), (1, 2)], 2)
        assert triangle.transform(((2, 0), (0, 2))) == polytope([(0, 0), (2, 0), (0, 2)], 2)


class TestVolume:
    @pytest.mark.parametrize("points, dim, volume", [
        ([(0, 0), (2, 0), (0, 2)], 2, 4),
        (UNIT_SQUARE, 2, 2),
        ([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)], 3, 6),
        ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], 3, 1),
        ([(0,), (3,)], 1, 3),
        ([(0, 0), (1, 1)], 2, 0),
    ])
    def test_normalized_volume(self, points, dim, volume):
        assert normalized_volume(polytope(points, dim)) == volume

    def test_rational_vertices(self):
        p = polytope([(0, 0), (Fraction(1, 2), 0), (0, 1)], 2)
        assert normalized_volume(p) == Fraction(1, 2)

    def test_dimension_limit(self):
        points = [tuple(int(i == j) for j in range(5)) for i in range(5)] + [(0,) * 5]
        with pytest.raises(PreconditionError):
            normalized_volume(polytope(points, 5))


class TestNewtonPolytope:
    def test_polynomial(self):
        p = newton_polytope(parse_polynomial("X0^2 + X1*X2 + X1^2", 2))
        assert p.vertices == (F(0, 0), F(1, 1), F(2, 0))

    def test_zero(self):
        with pytest.raises(ZeroPolynomialError):
            newton_polytope(Polynomial.zero(2))


class TestNewtonBody:
    def setup_method(self):
        self.shear = shear_lambda(ShearSpec.default(4, 2)).shear

    def test_valuation_reading_is_standard_simplex(self):
        levels, stable = newton_body_levels(sigma_system(self.shear), 3)
        assert stable
        assert len(levels) == 3
        assert is_standard_simplex(levels[-1])
        assert normalized_volume(levels[-1]) == 1

    def test_span_reading(self):
        body = map_newton_body(sigma_system(self.shear, "span"), 2)
        assert not is_standard_simplex(body)
        assert normalized_volume(body) == 1
        assert F(-1, 0, 0, 0) in body.vertices

    @pytest.mark.parametrize("d", [2, 3])
    def test_sigma_maps(self, d):
        psi = AffinePolyMap([parse_polynomial(p, 2) for p in ("X1", "X2 + X1^2")])
        levels, stable = newton_body_levels(sigma_system(sigma_map(psi, d)), 2)
        assert stable and is_standard_simplex(levels[0])

    def test_bad_reading(self):
        with pytest.raises(PreconditionError):
            sigma_system(self.shear, "degree")

    def test_bad_level(self):
        with pytest.raises(PreconditionError):
            map_newton_body(sigma_system(self.shear), 0)

    def test_generators(self):
        one = Polynomial.constant(2, 1)
        with pytest.raises(PreconditionError):
            SystemGenerators((), one)
        with pytest.raises(ZeroPolynomialError):
            SystemGenerators((one,), Polynomial.zero(2))
