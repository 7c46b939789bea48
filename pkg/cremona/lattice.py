# cremona/lattice.py
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import sympy

from cremona.errors import DimensionMismatchError, PreconditionError

Rows = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class LatticeMatrix:
    """
    Целочисленная квадратная матрица (носитель rho(f) и элементов SL'_n(Z))
    Args:
        rows: Строки матрицы
    """
    rows: Rows

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise DimensionMismatchError(f"lattice matrix must be square, got {len(rows)} rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "LatticeMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "LatticeMatrix":
        return cls(tuple(zip(*columns)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.size)]

    def column_sums(self) -> Tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.rows))

    def _array(self) -> np.ndarray:
        return np.array(self.rows, dtype=object)

    def __matmul__(self, other: "LatticeMatrix") -> "LatticeMatrix":
        if not isinstance(other, LatticeMatrix):
            return NotImplemented
        if other.size != self.size:
            raise DimensionMismatchError(f"cannot multiply {self.size}x{self.size} by {other.size}x{other.size}")
        product = self._array().dot(other._array())
        return type(self)(tuple(tuple(int(x) for x in row) for row in product))

    def apply(self, vector: Sequence[int]) -> Tuple[int, ...]:
        if len(vector) != self.size:
            raise DimensionMismatchError(f"vector of length {len(vector)} for a {self.size}x{self.size} matrix")
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.rows)

    def det(self) -> int:
        return int(sympy.Matrix(self.rows).det())

    def inverse(self) -> "LatticeMatrix":
        """Обратная матрица над Z (только для det = ±1)"""
        if self.det() not in (1, -1):
            raise PreconditionError(f"matrix with determinant {self.det()} is not invertible over Z")
        inv = sympy.Matrix(self.rows).inv()
        return type(self)(tuple(tuple(int(inv[i, j]) for j in range(self.size)) for i in range(self.size)))

    def power(self, k: int) -> "LatticeMatrix":
        base = self if k >= 0 else self.inverse()
        result = type(self).identity(self.size)
        for _ in range(abs(k)):
            result = result @ base
        return result

    def is_identity(self) -> bool:
        return self == LatticeMatrix.identity(self.size)

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows) + "]"


class SL2Matrix(LatticeMatrix):
    """Матрица 2x2 с определителем 1"""

    def __post_init__(self):
        super().__post_init__()
        (a, b), (c, d) = self.rows if self.size == 2 else ((0, 0), (0, 0))
        if self.size != 2 or a * d - b * c != 1:
            raise PreconditionError(f"{self.rows} is not a 2x2 matrix of determinant 1")

    def det(self) -> int:
        return 1

    def inverse(self) -> "SL2Matrix":
        (a, b), (c, d) = self.rows
        return SL2Matrix(((d, -b), (-c, a)))
