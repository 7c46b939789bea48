import pytest

from cremona.constructions import rho_a1, rho_a2
from cremona.errors import DimensionMismatchError, PreconditionError
from cremona.lattice import LatticeMatrix, SL2Matrix


class TestLatticeMatrix:
    def test_from_columns(self):
        m = LatticeMatrix.from_columns([(1, 2), (3, 4)])
        assert m.rows == ((1, 3), (2, 4))
        assert m.column(1) == (3, 4)
        assert str(m) == "[[1, 3], [2, 4]]"

    def test_not_square(self):
        with pytest.raises(DimensionMismatchError):
            LatticeMatrix(((1, 2),))

    def test_apply_and_product(self):
        m = LatticeMatrix(((1, 2), (3, 4)))
        assert m.apply((1, 1)) == (3, 7)
        assert (m @ LatticeMatrix.identity(2)) == m
        with pytest.raises(DimensionMismatchError):
            m @ LatticeMatrix.identity(3)

    def test_unimodular_inverse(self):
        m = LatticeMatrix(((2, 1), (1, 1)))
        assert m.det() == 1
        assert m.inverse() == LatticeMatrix(((1, -1), (-1, 2)))
        assert (m @ m.inverse()).is_identity()

    def test_singular_over_z(self):
        with pytest.raises(PreconditionError):
            LatticeMatrix(((2, 0), (0, 1))).inverse()

    def test_generator_inverse(self):
        inverse = rho_a1(4).inverse()
        assert inverse.column(2) == (-1, 1, 1, 0)
        assert rho_a1(4).power(-1) == inverse

    def test_column_sums(self):
        assert rho_a1(5).column_sums() == (1,) * 5
        assert rho_a2(5).det() == 1


class TestSL2Matrix:
    def test_determinant_check(self):
        with pytest.raises(PreconditionError):
            SL2Matrix(((1, 1), (1, 1)))
        with pytest.raises(PreconditionError):
            SL2Matrix(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def test_inverse(self):
        m = SL2Matrix(((1, 1), (0, 1)))
        assert m.inverse() == SL2Matrix(((1, -1), (0, 1)))
        assert (m @ m.inverse()).is_identity()

    def test_power(self):
        m = SL2Matrix(((1, 1), (0, 1)))
        assert m.power(3) == SL2Matrix(((1, 3), (0, 1)))
        assert m.power(-2) == SL2Matrix(((1, -2), (0, 1)))
        assert isinstance(m.power(2), SL2Matrix)
