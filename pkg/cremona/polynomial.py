# cremona/polynomial.py
import logging
from fractions import Fraction
from string import Template
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from cremona.errors import (
    DimensionMismatchError,
    NotDivisibleError,
    ZeroPolynomialError,
)

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class LogTemplates:
    TUPLE_GCD = Template("Tuple gcd over $count entries (max $terms terms)")
    TUPLE_GCD_UNIT = Template("Tuple gcd is a unit after $steps steps")
    TUPLE_GCD_FACTOR = Template("Removed common factor $factor")


def _to_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"coefficient must be int or Fraction, got {type(value).__name__}")


class Polynomial:
    """
    Разреженный многочлен над Q от переменных X0..Xn
    Args:
        ambient_n: Размерность n (переменных n + 1)
        terms: Словарь вектор показателей -> коэффициент
    """

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, ambient_n: int, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        if ambient_n < 0:
            raise DimensionMismatchError(f"ambient dimension must be >= 0, got {ambient_n}")
        merged: Dict[Exponent, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != ambient_n + 1:
                raise DimensionMismatchError(
                    f"exponent vector {key} has length {len(key)}, expected {ambient_n + 1}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            merged[key] = merged.get(key, Fraction(0)) + _to_fraction(coeff)
        self._n = ambient_n
        self._terms = {k: v for k, v in merged.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, ambient_n: int, terms: Dict[Exponent, Fraction]) -> "Polynomial":
        # terms уже очищены от нулей
        poly = object.__new__(cls)
        poly._n = ambient_n
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, ambient_n: int) -> "Polynomial":
        return cls._raw(ambient_n, {})

    @classmethod
    def constant(cls, ambient_n: int, value: Scalar) -> "Polynomial":
        value = _to_fraction(value)
        return cls._raw(ambient_n, {(0,) * (ambient_n + 1): value} if value else {})

    @classmethod
    def variable(cls, ambient_n: int, index: int) -> "Polynomial":
        if not 0 <= index <= ambient_n:
            raise DimensionMismatchError(f"variable X{index} outside X0..X{ambient_n}")
        exps = [0] * (ambient_n + 1)
        exps[index] = 1
        return cls._raw(ambient_n, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, ambient_n: int, exps: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(ambient_n, {tuple(exps): coeff})

    @property
    def ambient_n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> List[Tuple[Exponent, Fraction]]:
        """Термы в каноническом порядке (убывающий lex, X0 > X1 > ... > Xn)"""
        return sorted(self._terms.items(), reverse=True)

    def __iter__(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(self.items())

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        key = max(self._terms)
        return key, self._terms[key]

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def variables(self) -> set:
        return {i for exps in self._terms for i, e in enumerate(exps) if e}

    def total_degree(self) -> int:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return max(sum(exps) for exps in self._terms)

    def is_homogeneous(self) -> Optional[int]:
        degrees = {sum(exps) for exps in self._terms}
        return degrees.pop() if len(degrees) == 1 else None

    def degree_in(self, index: int) -> int:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return max(exps[index] for exps in self._terms)

    def x0_degree(self) -> int:
        return self.degree_in(0)

    def min_exponents(self) -> Exponent:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no monomial content")
        return tuple(min(col) for col in zip(*self._terms))

    # арифметика

    def _check(self, other: "Polynomial") -> None:
        if self._n != other._n:
            raise DimensionMismatchError(
                f"ambient dimensions differ: {self._n} vs {other._n}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self._n, other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            value = out.get(exps, 0) + coeff
            if value:
                out[exps] = value
            else:
                out.pop(exps, None)
        return Polynomial._raw(self._n, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self._n, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if len(self._terms) > len(other._terms):
            big, small = self._terms, other._terms
        else:
            big, small = other._terms, self._terms
        out: Dict[Exponent, Fraction] = {}
        for ea, ca in small.items():
            for eb, cb in big.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                value = out.get(key)
                out[key] = ca * cb if value is None else value + ca * cb
        return Polynomial._raw(self._n, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "Polynomial":
        factor = _to_fraction(factor)
        if not factor:
            return Polynomial.zero(self._n)
        return Polynomial._raw(self._n, {k: v * factor for k, v in self._terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {k}")
        if self.is_monomial:
            (exps, coeff), = self._terms.items()
            return Polynomial._raw(self._n, {tuple(e * k for e in exps): coeff ** k})
        result = Polynomial.constant(self._n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self) -> "Polynomial":
        """Нормировка на старший коэффициент в каноническом порядке"""
        _, lead = self.leading_term()
        return self.scale(1 / lead)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._n == other._n and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == Polynomial.constant(self._n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    # подстановки

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self._n + 1:
            raise DimensionMismatchError(
                f"point has {len(point)} coordinates, expected {self._n + 1}")
        values = [_to_fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for value, e in zip(values, exps):
                if e:
                    term *= value ** e
            total += term
        return total

    def set_variable(self, index: int, value: Scalar) -> "Polynomial":
        value = _to_fraction(value)
        out: Dict[Exponent, Fraction] = {}
        for exps, coeff in self._terms.items():
            e = exps[index]
            if e and not value:
                continue
            key = exps[:index] + (0,) + exps[index + 1:]
            out[key] = out.get(key, 0) + coeff * value ** e
        return Polynomial._raw(self._n, {k: v for k, v in out.items() if v})

    def derivative(self, index: int) -> "Polynomial":
        out: Dict[Exponent, Fraction] = {}
        for exps, coeff in self._terms.items():
            e = exps[index]
            if e:
                key = exps[:index] + (e - 1,) + exps[index + 1:]
                out[key] = coeff * e
        return Polynomial._raw(self._n, out)

    def coefficients_in(self, index: int) -> Dict[int, "Polynomial"]:
        """Разложение по степеням X_index: степень -> коэффициент без X_index"""
        groups: Dict[int, Dict[Exponent, Fraction]] = {}
        for exps, coeff in self._terms.items():
            key = exps[:index] + (0,) + exps[index + 1:]
            groups.setdefault(exps[index], {})[key] = coeff
        return {deg: Polynomial._raw(self._n, terms) for deg, terms in groups.items()}

    def shift(self, exps: Sequence[int]) -> "Polynomial":
        """Умножение на моном X^exps (отрицательные сдвиги делят, если возможно)"""
        out: Dict[Exponent, Fraction] = {}
        for key, coeff in self._terms.items():
            new = tuple(a + b for a, b in zip(key, exps))
            if any(e < 0 for e in new):
                raise NotDivisibleError(f"monomial X^{tuple(exps)} does not divide {self}")
            out[new] = coeff
        return Polynomial._raw(self._n, out)

    # печать

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in self.items():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(f"X{i}")
                elif e > 1:
                    factors.append(f"X{i}^{e}")
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            sign = "-" if coeff < 0 else "+"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self._n}, '{self}')"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """
    Точная кольцевая операция над многочленами
    Args:
        a, b: Многочлены одной размерности
        op: 'add', 'sub' или 'mul'
    Returns:
        Polynomial: Результат без нулевых термов
    """
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_pow(a: Polynomial, k: int) -> Polynomial:
    return a ** k


def is_homogeneous(h: Polynomial) -> Optional[int]:
    return h.is_homogeneous()


def x0_degree(h: Polynomial) -> int:
    return h.x0_degree()


def substitute(h: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """
    Подстановка X_i <- images[i] с полным раскрытием скобок
    Args:
        h: Исходный многочлен
        images: (n+1) образов переменных, все одной размерности
    Returns:
        Polynomial: h(images)
    """
    if len(images) != h.ambient_n + 1:
        raise DimensionMismatchError(
            f"substitution needs {h.ambient_n + 1} images, got {len(images)}")
    target = images[0].ambient_n
    for image in images:
        if image.ambient_n != target:
            raise DimensionMismatchError("substitution images live in different dimensions")

    powers: List[Dict[int, Polynomial]] = [{1: image} for image in images]

    def power(i: int, e: int) -> Polynomial:
        cache = powers[i]
        if e not in cache:
            top = max(k for k in cache if k < e)
            value = cache[top]
            for k in range(top + 1, e + 1):
                value = value * images[i]
                cache[k] = value
        return cache[e]

    out: Dict[Exponent, Fraction] = {}
    for exps, coeff in h.terms.items():
        product = Polynomial.constant(target, coeff)
        # сначала мономиальные образы: дешевле
        order = sorted((i for i, e in enumerate(exps) if e), key=lambda i: len(images[i]))
        for i in order:
            product = product * power(i, exps[i])
            if product.is_zero:
                break
        for key, value in product.terms.items():
            total = out.get(key, 0) + value
            if total:
                out[key] = total
            else:
                out.pop(key, None)
    return Polynomial._raw(target, out)


def exact_divide(a: Polynomial, b: Polynomial) -> Polynomial:
    """
    Точное деление a / b (lex-деление с проверкой остатка)
    Raises:
        NotDivisibleError: если b не делит a
    """
    a._check(b)
    if b.is_zero:
        raise ZeroPolynomialError("division by the zero polynomial")
    if b.is_constant:
        return a.scale(1 / b.leading_term()[1])
    lead_exps, lead_coeff = b.leading_term()
    if b.is_monomial:
        return a.shift(tuple(-e for e in lead_exps)).scale(1 / lead_coeff)
    remainder = dict(a.terms)
    quotient: Dict[Exponent, Fraction] = {}
    while remainder:
        top = max(remainder)
        diff = tuple(x - y for x, y in zip(top, lead_exps))
        if any(e < 0 for e in diff):
            raise NotDivisibleError(f"{b} does not divide {a}")
        factor = remainder[top] / lead_coeff
        quotient[diff] = factor
        for exps, coeff in b.terms.items():
            key = tuple(x + y for x, y in zip(diff, exps))
            value = remainder.get(key, 0) - factor * coeff
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)
    return Polynomial._raw(a.ambient_n, quotient)


# НОД: рекурсия по содержанию и примитивной части

def _one(n: int) -> Polynomial:
    return Polynomial.constant(n, 1)


def _content(p: Polynomial, index: int) -> Polynomial:
    coefficients = sorted(p.coefficients_in(index).values(), key=len)
    g = coefficients[0]
    for c in coefficients[1:]:
        if g.is_constant:
            break
        g = _gcd(g, c)
    return _one(p.ambient_n) if g.is_constant else g


def _primitive_part(p: Polynomial, index: int) -> Polynomial:
    return exact_divide(p, _content(p, index))


def _pseudo_remainder(p: Polynomial, q: Polynomial, index: int) -> Polynomial:
    dq = q.degree_in(index)
    lcq = q.coefficients_in(index)[dq]
    n = p.ambient_n
    r = p
    while not r.is_zero:
        dr = r.degree_in(index)
        if dr < dq:
            break
        lcr = r.coefficients_in(index)[dr]
        shift = [0] * (n + 1)
        shift[index] = dr - dq
        r = lcq * r - lcr * q.shift(shift)
    return r


def _prs_gcd(p: Polynomial, q: Polynomial, index: int) -> Polynomial:
    # p, q примитивны по X_index
    if p.degree_in(index) < q.degree_in(index):
        p, q = q, p
    while True:
        r = _pseudo_remainder(p, q, index)
        if r.is_zero:
            return q
        if r.degree_in(index) == 0:
            return _one(p.ambient_n)
        p, q = q, _primitive_part(r, index)


def _gcd_without_monomials(a: Polynomial, b: Polynomial) -> Polynomial:
    n = a.ambient_n
    if a.is_constant or b.is_constant:
        return _one(n)
    if a.monic() == b.monic():
        return a
    vars_a, vars_b = a.variables(), b.variables()
    index = min(vars_a | vars_b)
    if index not in vars_a:
        return _gcd(a, _content(b, index))
    if index not in vars_b:
        return _gcd(_content(a, index), b)
    content_a, content_b = _content(a, index), _content(b, index)
    primitive_a = exact_divide(a, content_a)
    primitive_b = exact_divide(b, content_b)
    return _gcd(content_a, content_b) * _prs_gcd(primitive_a, primitive_b, index)


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    # оба ненулевые; результат определен с точностью до скаляра
    min_a, min_b = a.min_exponents(), b.min_exponents()
    common = tuple(min(x, y) for x, y in zip(min_a, min_b))
    core = _gcd_without_monomials(
        a.shift(tuple(-e for e in min_a)), b.shift(tuple(-e for e in min_b)))
    return core.shift(common)


def multivariate_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """
    НОД двух многочленов, нормированный на старший коэффициент
    Args:
        a, b: Многочлены одной размерности, не оба нулевые
    Returns:
        Polynomial: Монический НОД
    """
    a._check(b)
    if a.is_zero and b.is_zero:
        raise ZeroPolynomialError("gcd of two zero polynomials is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    return _gcd(a, b).monic()


def tuple_content(entries: Sequence[Polynomial]) -> Polynomial:
    """НОД всех элементов кортежа (монический)"""
    nonzero = sorted((p for p in entries if not p.is_zero), key=lambda p: (len(p), p.total_degree()))
    if not nonzero:
        raise ZeroPolynomialError("all entries of the tuple are zero")
    logger.debug(LogTemplates.TUPLE_GCD.substitute(
        count=len(nonzero), terms=max(len(p) for p in nonzero)))
    g = nonzero[0]
    for step, p in enumerate(nonzero[1:], start=1):
        g = _gcd(g, p)
        if g.is_constant:
            logger.debug(LogTemplates.TUPLE_GCD_UNIT.substitute(steps=step))
            break
    return g.monic()


def primitive_tuple(entries: Sequence[Polynomial]) -> Tuple[Polynomial, ...]:
    """
    Деление всех элементов на их общий НОД
    Returns:
        tuple: Взаимно простой представитель
    """
    g = tuple_content(entries)
    if g.is_constant:
        return tuple(entries)
    logger.debug(LogTemplates.TUPLE_GCD_FACTOR.substitute(factor=str(g)))
    return tuple(exact_divide(p, g) for p in entries)
