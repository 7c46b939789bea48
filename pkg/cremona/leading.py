# cremona/leading.py
import logging
from dataclasses import dataclass
from fractions import Fraction
from string import Template
from typing import Optional, Tuple

from cremona.errors import (
    HypothesisViolationError,
    NotInGFormError,
    PreconditionError,
    ZeroPolynomialError,
)
from cremona.lattice import LatticeMatrix
from cremona.polynomial import Polynomial
from cremona.projective import ProjectiveMap, verify_inverse_pair

logger = logging.getLogger(__name__)


class LogTemplates:
    NO_GFORM = Template("Map is not in G-form: $reason")
    HYPOTHESIS = Template("Leading-term hypothesis fails for $poly: $reason")


@dataclass(frozen=True)
class LeadingPair:
    d: int
    I: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {"d": self.d, "I": list(self.I)}


@dataclass(frozen=True)
class GFormData:
    """
    Данные G-формы взаимно простого представителя
    Args:
        d_f: Степень f_0 по X0
        I_f0: Остаточный показатель старшего монома f_0
        I_fj: Остаточные показатели старших мономов f_1..f_n
        alphas: Коэффициенты этих мономов
    """
    d_f: int
    I_f0: Tuple[int, ...]
    I_fj: Tuple[Tuple[int, ...], ...]
    alphas: Tuple[Fraction, ...]

    @property
    def matrix(self) -> LatticeMatrix:
        return LatticeMatrix.from_columns(
            [tuple(a - b for a, b in zip(col, self.I_f0)) for col in self.I_fj])

    def as_dict(self) -> dict:
        return {
            "d_f": self.d_f,
            "I_f0": list(self.I_f0),
            "I_fj": [list(v) for v in self.I_fj],
            "alphas": list(self.alphas),
        }


def leading_pair(h: Polynomial) -> LeadingPair:
    """
    <h> = (d_h, I_h): степень по X0 и lex-максимальный остаточный показатель на этом уровне
    Raises:
        ZeroPolynomialError: для нулевого многочлена
    """
    if h.is_zero:
        raise ZeroPolynomialError("zero polynomial has no leading pair")
    d = h.x0_degree()
    return LeadingPair(d, max(exps[1:] for exps in h.terms if exps[0] == d))


def valuation_v(h: Polynomial) -> Tuple[int, ...]:
    return leading_pair(h).I


def valuation_v_fraction(f: Polynomial, g: Polynomial) -> Tuple[int, ...]:
    """v(f/g) = I_f - I_g"""
    return tuple(a - b for a, b in zip(valuation_v(f), valuation_v(g)))


def _top_monomial(p: Polynomial, level: int) -> Optional[Tuple[Tuple[int, ...], Fraction]]:
    top = [(exps, coeff) for exps, coeff in p.terms.items() if exps[0] == level]
    if len(top) != 1:
        return None
    exps, coeff = top[0]
    return exps[1:], coeff


def g_form(f: ProjectiveMap) -> Optional[GFormData]:
    """
    Распознавание G-формы на взаимно простом представителе
    Returns:
        Optional[GFormData]: None, если форма не выполняется
    """
    f = f.normalized()
    f0 = f.components[0]
    if f0.is_zero:
        logger.debug(LogTemplates.NO_GFORM.substitute(reason="f0 is zero"))
        return None
    d_f = f0.x0_degree()
    if d_f < 1:
        logger.debug(LogTemplates.NO_GFORM.substitute(reason="f0 has no X0"))
        return None
    head = _top_monomial(f0, d_f)
    if head is None:
        logger.debug(LogTemplates.NO_GFORM.substitute(reason="top coefficient of f0 is not a monomial"))
        return None
    I_f0, alpha0 = head
    columns, alphas = [], [alpha0]
    for j, fj in enumerate(f.components[1:], start=1):
        if fj.is_zero or fj.x0_degree() != d_f - 1:
            logger.debug(LogTemplates.NO_GFORM.substitute(reason=f"f{j} has the wrong X0-degree"))
            return None
        top = _top_monomial(fj, d_f - 1)
        if top is None:
            logger.debug(LogTemplates.NO_GFORM.substitute(reason=f"top coefficient of f{j} is not a monomial"))
            return None
        columns.append(top[0])
        alphas.append(top[1])
    return GFormData(d_f=d_f, I_f0=I_f0, I_fj=tuple(columns), alphas=tuple(alphas))


def rho(f: ProjectiveMap) -> LatticeMatrix:
    """
    rho(f) = M_f: j-й столбец равен I_fj - I_f0
    Raises:
        NotInGFormError: если f не в G-форме
    """
    data = g_form(f)
    if data is None:
        raise NotInGFormError("map is not in G-form, rho is undefined")
    return data.matrix


def is_sl_prime(matrix: LatticeMatrix) -> bool:
    """det = 1 и сумма каждого столбца равна 1"""
    return all(s == 1 for s in matrix.column_sums()) and matrix.det() == 1


def is_member_of_g(f: ProjectiveMap, inverse: ProjectiveMap) -> bool:
    """Полная проверка принадлежности G по явному обратному"""
    return g_form(f) is not None and g_form(inverse) is not None and verify_inverse_pair(f, inverse)


def predict_composite_rho(g: ProjectiveMap, f: ProjectiveMap) -> LatticeMatrix:
    """Ожидаемое rho(g∘f) = rho(f)·rho(g)"""
    return rho(f) @ rho(g)


def predict_leading(h: Polynomial, f: ProjectiveMap) -> LeadingPair:
    """
    Старшая пара h(f) без раскрытия скобок
    Args:
        h: Ненулевой однородный многочлен
        f: Отображение в G-форме
    Returns:
        LeadingPair: (deg(h)(d_f - 1) + d_h, M_f I_h + deg(h) I_f0)
    Raises:
        NotInGFormError: f не в G-форме
        HypothesisViolationError: M_f I_h не строго lex-максимален на уровне d_h
    """
    if h.is_zero:
        raise ZeroPolynomialError("cannot predict the leading pair of the zero polynomial")
    degree = h.is_homogeneous()
    if degree is None:
        raise PreconditionError(f"polynomial is not homogeneous: {h}")
    data = g_form(f)
    if data is None:
        raise NotInGFormError("map is not in G-form, the leading-term formula does not apply")
    matrix = data.matrix
    pair = leading_pair(h)
    image = matrix.apply(pair.I)
    for exps in h.terms:
        if exps[0] != pair.d or exps[1:] == pair.I:
            continue
        other = matrix.apply(exps[1:])
        if other >= image:
            reason = f"M_f{list(exps[1:])} = {list(other)} is not below M_f I_h = {list(image)}"
            logger.warning(LogTemplates.HYPOTHESIS.substitute(poly=h, reason=reason))
            raise HypothesisViolationError(reason)
    return LeadingPair(
        d=degree * (data.d_f - 1) + pair.d,
        I=tuple(a + degree * b for a, b in zip(image, data.I_f0)),
    )
