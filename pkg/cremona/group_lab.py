# cremona/group_lab.py
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from string import Template
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from cremona.constructions import DiagonalSpec, monomial_map, rho_a1, rho_a2
from cremona.errors import ParseError, PreconditionError
from cremona.lattice import LatticeMatrix, SL2Matrix
from cremona.projective import ProjectiveMap, conjugate

logger = logging.getLogger(__name__)

A, A_INV, B, B_INV = 1, -1, 2, -2
LETTER_ORDER = (A, A_INV, B, B_INV)
LETTER_NAMES = {A: "A", A_INV: "a", B: "B", B_INV: "b"}
NAME_LETTERS = {name: letter for letter, name in LETTER_NAMES.items()}

Matrix = Union[LatticeMatrix, SL2Matrix]
Flat = Tuple[int, ...]


class LogTemplates:
    ENUMERATION = Template("Checking $count reduced words up to length $length")
    PARTITION_DONE = Template("Partition $letter done: $count words")
    RELATION = Template("Relation found: $left = $right")
    WITNESS = Template("Diagonal moved by word $word")
    FIXED = Template("Diagonal fixed by all words up to length $length")
    PINGPONG_BOUNDARY = Template("Ping-pong with |m| = $m needs |m| >= 2, sets may overlap")


@dataclass(frozen=True)
class GroupWord:
    """Приведенное слово в свободной группе <A, B>; a = A⁻¹, b = B⁻¹"""
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if any(x not in LETTER_NAMES for x in self.letters):
            raise ValueError(f"unknown letters in {self.letters}")
        object.__setattr__(self, "letters", reduce_letters(self.letters))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple(-x for x in reversed(self.letters)))

    def __invert__(self) -> "GroupWord":
        return self.inverse()

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(LETTER_NAMES[x] for x in self.letters) or "1"


def reduce_letters(letters: Iterable[int]) -> Tuple[int, ...]:
    stack: List[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def reduce(word: GroupWord) -> GroupWord:
    return GroupWord(reduce_letters(word.letters))


def multiply(u: GroupWord, v: GroupWord) -> GroupWord:
    return u * v


def invert(w: GroupWord) -> GroupWord:
    return w.inverse()


def length(w: GroupWord) -> int:
    return len(w)


def distance(u: GroupWord, v: GroupWord) -> int:
    """Словарная метрика d(u, v) = |u v⁻¹|"""
    return len(u * v.inverse())


def parse_word(text: str) -> GroupWord:
    """Слово из букв A, a, B, b; '1' или пустая строка дают единицу"""
    text = text.strip()
    if text in ("", "1"):
        return GroupWord()
    letters = []
    for column, char in enumerate(text, start=1):
        if char not in NAME_LETTERS:
            raise ParseError(f"unknown letter {char!r} in word {text!r}", 1, column)
        letters.append(NAME_LETTERS[char])
    return GroupWord(tuple(letters))


def count_reduced_words(max_length: int) -> int:
    """Число приведенных слов длины не больше L (включая пустое)"""
    return 2 * 3 ** max_length - 1


def _extensions(last: Optional[int]) -> Tuple[int, ...]:
    return tuple(x for x in LETTER_ORDER if last is None or x != -last)


def enumerate_reduced_words(max_length: int) -> Iterator[GroupWord]:
    """
    Все приведенные слова длины <= L: по длине, затем в порядке A, a, B, b
    Args:
        max_length: Максимальная длина L
    """
    layer: List[Tuple[int, ...]] = [()]
    yield GroupWord()
    for _ in range(max_length):
        layer = [
            word + (x,)
            for word in layer
            for x in _extensions(word[-1] if word else None)
        ]
        for word in layer:
            yield GroupWord(word)


def eval_word(word: GroupWord, image_a: Matrix, image_b: Matrix) -> Matrix:
    """Произведение образов букв слова слева направо"""
    if image_a.size != image_b.size:
        raise PreconditionError("generator images have different sizes")
    images = {A: image_a, A_INV: image_a.inverse(), B: image_b, B_INV: image_b.inverse()}
    result = type(image_a).identity(image_a.size)
    for x in word.letters:
        result = result @ images[x]
    return result


def generator_images(kind: str, n: int = 4) -> Tuple[Matrix, Matrix]:
    """
    Образы образующих свободной группы
    Args:
        kind: 'sl2' (матрицы [[1,2],[0,1]], [[1,0],[-2,1]]) или 'rho' (rho(a1)^2, rho(a2)^2)
        n: Размерность для 'rho'
    """
    if kind == "sl2":
        return SL2Matrix(((1, 2), (0, 1))), SL2Matrix(((1, 0), (-2, 1)))
    if kind == "rho":
        return rho_a1(n).power(2), rho_a2(n).power(2)
    raise PreconditionError(f"unknown generator images {kind!r}, expected 'sl2' or 'rho'")


# перечисление на плоских кортежах: без объектов LatticeMatrix во внутреннем цикле

def _flat(matrix: Matrix) -> Flat:
    return tuple(x for row in matrix.rows for x in row)


def _multiplier(size: int):
    if size == 2:
        def mul2(p: Flat, q: Flat) -> Flat:
            return (p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
                    p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3])
        return mul2
    span = range(size)

    def mul(p: Flat, q: Flat) -> Flat:
        return tuple(
            sum(p[i * size + k] * q[k * size + j] for k in span)
            for i in span for j in span
        )
    return mul


def _letter_table(image_a: Matrix, image_b: Matrix) -> Dict[int, Flat]:
    return {
        A: _flat(image_a), A_INV: _flat(image_a.inverse()),
        B: _flat(image_b), B_INV: _flat(image_b.inverse()),
    }


def _partition_hashes(first: int, table: Dict[int, Flat], size: int, max_length: int) -> Optional[Set[int]]:
    # None означает совпадение внутри ветви
    mul = _multiplier(size)
    seen: Set[int] = set()
    stack = [(table[first], first, 1)]
    while stack:
        value, last, depth = stack.pop()
        key = hash(value)
        if key in seen:
            return None
        seen.add(key)
        if depth < max_length:
            for x in _extensions(last):
                stack.append((mul(value, table[x]), x, depth + 1))
    logger.debug(LogTemplates.PARTITION_DONE.substitute(letter=LETTER_NAMES[first], count=len(seen)))
    return seen


@dataclass(frozen=True)
class RelationReport:
    distinct: bool
    words_checked: int
    witness: Optional[Tuple[GroupWord, GroupWord]] = None


def relation_search(image_a: Matrix, image_b: Matrix, max_length: int) -> RelationReport:
    """
    Точный поиск двух различных слов длины <= L с одинаковым значением
    Returns:
        RelationReport: Первая пара в детерминированном порядке перечисления
    """
    table = _letter_table(image_a, image_b)
    mul = _multiplier(image_a.size)
    identity = _flat(type(image_a).identity(image_a.size))
    seen: Dict[Flat, Tuple[int, ...]] = {identity: ()}
    layer: List[Tuple[Tuple[int, ...], Flat]] = [((), identity)]
    checked = 1
    for _ in range(max_length):
        next_layer = []
        for word, value in layer:
            for x in _extensions(word[-1] if word else None):
                child, product = word + (x,), mul(value, table[x])
                checked += 1
                if product in seen:
                    left, right = GroupWord(seen[product]), GroupWord(child)
                    logger.info(LogTemplates.RELATION.substitute(left=left, right=right))
                    return RelationReport(False, checked, (left, right))
                seen[product] = child
                next_layer.append((child, product))
        layer = next_layer
    return RelationReport(True, checked)


def no_relation_certificate(image_a: Matrix, image_b: Matrix, max_length: int, workers: int = 1) -> bool:
    """
    Проверка, что все приведенные слова длины <= L дают попарно различные матрицы
    Args:
        image_a, image_b: Образы A и B (обратимые над Z)
        max_length: Радиус L >= 1
        workers: Число потоков (ветви по первой букве)
    Returns:
        bool: True, если совпадений нет
    """
    if max_length < 1:
        raise PreconditionError(f"word length must be >= 1, got {max_length}")
    if image_a.size != image_b.size:
        raise PreconditionError("generator images have different sizes")
    logger.info(LogTemplates.ENUMERATION.substitute(
        count=count_reduced_words(max_length), length=max_length))
    table = _letter_table(image_a, image_b)
    size = image_a.size

    def run(first: int) -> Optional[Set[int]]:
        return _partition_hashes(first, table, size, max_length)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(LETTER_ORDER))) as pool:
            parts = list(pool.map(run, LETTER_ORDER))
    else:
        parts = [run(first) for first in LETTER_ORDER]

    hashes = {hash(_flat(type(image_a).identity(size)))}
    clash = any(part is None for part in parts)
    if not clash:
        for part in parts:
            if hashes & part:
                clash = True
                break
            hashes |= part
    if not clash:
        return True
    # совпадение хешей подтверждаем точным поиском
    return relation_search(image_a, image_b, max_length).distinct


def pingpong_check(m: int, samples: Optional[Sequence[Sequence[int]]] = None,
                   powers: Sequence[int] = (1, -1, 2, -2)) -> bool:
    """
    Проверка включений пинг-понга для T = [[1,m],[0,1]], S = [[1,0],[m,1]]
    Args:
        m: Параметр (m = 0 запрещен)
        samples: Ненулевые целые векторы (по умолчанию сетка |x|,|y| <= 20)
        powers: Ненулевые степени k
    Returns:
        bool: False при любом нарушении
    """
    if m == 0:
        raise PreconditionError("pingpong needs m != 0: T and S are the identity")
    if abs(m) < 2:
        logger.warning(LogTemplates.PINGPONG_BOUNDARY.substitute(m=abs(m)))
    if samples is None:
        axis = np.arange(-20, 21, dtype=np.int64)
        xs, ys = np.meshgrid(axis, axis, indexing="ij")
        grid = np.stack([xs.ravel(), ys.ravel()], axis=1)
    else:
        grid = np.asarray(samples, dtype=np.int64).reshape(-1, 2)
    grid = grid[np.any(grid != 0, axis=1)]
    x, y = grid[:, 0], grid[:, 1]
    x_side = np.abs(x) > np.abs(y)
    y_side = np.abs(y) > np.abs(x)
    for k in powers:
        if k == 0:
            continue
        # S^k переводит область |x| > |y| в |y| > |x|
        y_new = y + k * m * x
        if np.any(x_side & ~(np.abs(y_new) > np.abs(x))):
            return False
        # T^k переводит область |y| > |x| в |x| > |y|
        x_new = x + k * m * y
        if np.any(y_side & ~(np.abs(x_new) > np.abs(y))):
            return False
    return True


def word_matrix(word: GroupWord, n: int) -> LatticeMatrix:
    """E(w): значение слова на rho(a1)^2, rho(a2)^2"""
    image_a, image_b = generator_images("rho", n)
    return eval_word(word, image_a, image_b)


def conjugate_by_word(word: GroupWord, f: ProjectiveMap) -> ProjectiveMap:
    """
    Действие слова: w(f) = W∘f∘W⁻¹ с W = monomial_map(E(w))
    Returns:
        ProjectiveMap: Нормализованный представитель
    """
    matrix = word_matrix(word, f.ambient_n)
    return conjugate(monomial_map(matrix), f, monomial_map(matrix.inverse()))


@dataclass(frozen=True)
class SymbolicDiagonal:
    """
    Формальный диагональный набор lambda_i = prod_j t_j^K[j][i]
    Args:
        exponents: Матрица K размера s x n
    """
    exponents: Tuple[Tuple[int, ...], ...]

    @classmethod
    def all_equal(cls, n: int) -> "SymbolicDiagonal":
        """(t, t, ..., t)"""
        return cls(((1,) * n,))

    @classmethod
    def generic(cls, n: int) -> "SymbolicDiagonal":
        """(t_1, ..., t_n)"""
        return cls(LatticeMatrix.identity(n).rows)

    @property
    def n(self) -> int:
        return len(self.exponents[0])

    def act(self, matrix: LatticeMatrix) -> "SymbolicDiagonal":
        """K' = K·E"""
        rows = tuple(
            tuple(sum(row[j] * matrix.rows[j][i] for j in range(self.n)) for i in range(self.n))
            for row in self.exponents
        )
        return SymbolicDiagonal(rows)


def act_on_lambdas(lambdas: Sequence[Fraction], matrix: LatticeMatrix) -> Tuple[Fraction, ...]:
    """lambda'_i = prod_j lambda_j^E[j][i]"""
    result = []
    for i in range(matrix.size):
        value = Fraction(1)
        for j, lam in enumerate(lambdas):
            value *= Fraction(lam) ** matrix.rows[j][i]
        result.append(value)
    return tuple(result)


@dataclass(frozen=True)
class OrbitClassification:
    status: str
    max_length: int
    words_checked: int
    witness: Optional[GroupWord] = None
    unconditional: bool = False

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "max_length": self.max_length,
            "words_checked": self.words_checked,
            "witness": None if self.witness is None else str(self.witness),
            "unconditional": self.unconditional,
        }


def diag_orbit_classify(lam: Union[SymbolicDiagonal, DiagonalSpec], max_length: int) -> OrbitClassification:
    """
    Классификация орбиты диагонального отображения под действием слов длины <= L
    Слова перебираются по длине, внутри длины в порядке букв A, a, B, b,
    поэтому свидетель - первое такое слово; для (2, 3, 5, 7) это A
    Returns:
        OrbitClassification: fixed_up_to_L или moved с первым словом-свидетелем
    """
    if max_length < 1:
        raise PreconditionError(f"word length must be >= 1, got {max_length}")
    n = lam.n
    image_a, image_b = generator_images("rho", n)

    if isinstance(lam, SymbolicDiagonal):
        def moved(matrix: LatticeMatrix) -> bool:
            return lam.act(matrix) != lam
    else:
        def moved(matrix: LatticeMatrix) -> bool:
            return act_on_lambdas(lam.lambdas, matrix) != lam.lambdas

    unconditional = isinstance(lam, SymbolicDiagonal) and not moved(image_a) and not moved(image_b)

    table = {A: image_a, A_INV: image_a.inverse(), B: image_b, B_INV: image_b.inverse()}
    values: Dict[Tuple[int, ...], LatticeMatrix] = {(): LatticeMatrix.identity(n)}
    checked = 0
    for word in enumerate_reduced_words(max_length):
        if not word.letters:
            continue
        matrix = values[word.letters[:-1]] @ table[word.letters[-1]]
        values[word.letters] = matrix
        checked += 1
        if moved(matrix):
            logger.info(LogTemplates.WITNESS.substitute(word=word))
            return OrbitClassification("moved", max_length, checked, witness=word)
    logger.info(LogTemplates.FIXED.substitute(length=max_length))
    return OrbitClassification("fixed_up_to_L", max_length, checked, unconditional=unconditional)
