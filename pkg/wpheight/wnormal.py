"""Взвешенный НОД, нормализация над Q и над алгебраическим замыканием, знаковые классы."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Tuple, Union

from sympy.ntheory import factorint

from .errors import InvalidScalarError, WeightsMismatchError
from .wcore import (
    FactoredRadical,
    WeightedTuple,
    star,
    star_radical,
    valuation,
)

__all__ = [
    'FactoredRadical', 'Mode', 'SignClass', 'NormalizedPoint',
    'wgcd', 'abs_wgcd', 'normalize', 'normalize_abs', 'sign_twist', 'canonical',
    'same_point', 'is_twist', 'is_normalized', 'is_absolutely_normalized', 'twist_scalar',
]

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    """Над каким полем ищется нормальная форма."""

    RATIONAL = 'rational'
    ABSOLUTE = 'absolute'


@dataclass(frozen=True)
class SignClass:
    """Знаковый класс k ∈ {0, 1}: координата i умножается на (−1)^{k·q_i/r_S}."""

    k: int = 0

    def __post_init__(self):
        if self.k not in (0, 1):
            raise InvalidScalarError(f"Знаковый класс должен быть 0 или 1, получено {self.k}")


@dataclass(frozen=True)
class NormalizedPoint:
    """
    Нормализованный представитель точки.

    Attributes:
        tuple: Целочисленный кортеж с wgcd = 1 (или абсолютным wgcd = 1)
        scalar: Снятый скаляр: целое для нормализации над Q, FactoredRadical — над замыканием
        mode: Mode.RATIONAL или Mode.ABSOLUTE
        sign: Применённый знаковый класс
        canonical_sign_applied: True, если выбран канонический знаковый представитель
    """

    tuple: WeightedTuple
    scalar: Union[int, FactoredRadical]
    mode: Mode = Mode.RATIONAL
    sign: SignClass = SignClass(0)
    canonical_sign_applied: bool = False

    @property
    def coords(self) -> Tuple[int, ...]:
        return self.tuple.x


def _prime_exponents(t: WeightedTuple) -> Dict[int, List[Tuple[int, int]]]:
    """
    Для каждого простого p, делящего НОД ненулевых координат, — пары (q_i, v_p(x_i)) по носителю.

    Простые вне НОД не влияют ни на wgcd, ни на абсолютный wgcd: q_i ≥ 1, и нужна
    делимость каждой ненулевой координаты.
    """
    nonzero = [(q, v) for q, v in zip(t.w.q, t.x) if v != 0]
    g = reduce(math.gcd, (abs(v) for _, v in nonzero))
    if g == 1:
        return {}
    primes = factorint(g)
    logger.debug("НОД ненулевых координат %s = %s", g, primes)
    return {p: [(q, valuation(v, p)) for q, v in nonzero] for p in sorted(primes)}


def wgcd(t: WeightedTuple) -> int:
    """
    Взвешенный НОД: наибольшее целое d, при котором d^{q_i} делит x_i для всех i.

    Нулевые координаты ограничений не накладывают.
    """
    d = 1
    for p, pairs in _prime_exponents(t).items():
        e = min(v // q for q, v in pairs)
        if e:
            d *= p ** e
    return d


def abs_wgcd(t: WeightedTuple) -> FactoredRadical:
    """
    Абсолютный взвешенный НОД ∏ p^{α_p}.

    α_p = floor(r_S · m_p) / r_S, где m_p = min v_p(x_i)/q_i по носителю; показатели
    кратны 1/r_S, поэтому каждое λ^{q_i} на носителе целое.
    """
    r_s = t.support.r_s
    factors = {}
    for p, pairs in _prime_exponents(t).items():
        m = min(Fraction(v, q) for q, v in pairs)
        alpha = Fraction(math.floor(r_s * m), r_s)
        if alpha:
            factors[p] = alpha
    return FactoredRadical(factors)


def normalize(t: WeightedTuple) -> NormalizedPoint:
    """Нормализация над Q: (1/wgcd(x)) ⋆ x."""
    d = wgcd(t)
    if d == 1:
        return NormalizedPoint(t, 1)
    return NormalizedPoint(star(Fraction(1, d), t).to_integral(), d)


def normalize_abs(t: WeightedTuple) -> NormalizedPoint:
    """Нормализация над алгебраическим замыканием: (1/wgcd‾(x)) ⋆ x."""
    s = abs_wgcd(t)
    if s.is_one:
        return NormalizedPoint(t, s, Mode.ABSOLUTE)
    return NormalizedPoint(star_radical(s.inverse(), t).to_integral(), s, Mode.ABSOLUTE)


def is_normalized(t: WeightedTuple) -> bool:
    return wgcd(t) == 1


def is_absolutely_normalized(t: WeightedTuple) -> bool:
    return abs_wgcd(t).is_one


def sign_twist(t: WeightedTuple, c: Union[SignClass, int]) -> WeightedTuple:
    """Умножает координату i на (−1)^{k·q_i/r_S}; wgcd и абсолютный wgcd не меняются."""
    if not isinstance(c, SignClass):
        c = SignClass(c)
    if c.k == 0:
        return t
    return star_radical(FactoredRadical(), t, sign=-1).to_integral()


def _canonical_sign(t: WeightedTuple) -> SignClass:
    # Первая ненулевая координата с нечётным q_i/r_S должна быть положительной.
    supp = t.support
    for i in sorted(supp.indices):
        if supp.reduced_weight(t.w, i) % 2:
            return SignClass(1 if t.x[i] < 0 else 0)
    return SignClass(0)


def canonical(t: WeightedTuple, mode: Union[Mode, str] = Mode.RATIONAL) -> NormalizedPoint:
    """
    Канонический представитель орбиты.

    Сначала нормализация (над Q или над замыканием), затем выбор знакового класса,
    при котором первая ненулевая координата с нечётным q_i/r_S положительна.
    Канонические формы совпадают тогда и только тогда, когда точки эквивалентны.
    """
    mode = Mode(mode)
    point = normalize(t) if mode is Mode.RATIONAL else normalize_abs(t)
    c = _canonical_sign(point.tuple)
    return NormalizedPoint(sign_twist(point.tuple, c), point.scalar, mode, c, True)


def _check_same_weights(a: WeightedTuple, b: WeightedTuple):
    if a.w != b.w:
        raise WeightsMismatchError(f"Разные веса: ({a.w}) и ({b.w})")


def same_point(a: WeightedTuple, b: WeightedTuple) -> bool:
    """True, если a и b задают одну точку над Q (с точностью до знакового класса)."""
    _check_same_weights(a, b)
    return canonical(a).coords == canonical(b).coords


def is_twist(a: WeightedTuple, b: WeightedTuple) -> bool:
    """True, если a и b эквивалентны над замыканием, но задают разные точки над Q."""
    _check_same_weights(a, b)
    if canonical(a, Mode.ABSOLUTE).coords != canonical(b, Mode.ABSOLUTE).coords:
        return False
    return not same_point(a, b)


def twist_scalar(a: WeightedTuple, b: WeightedTuple) -> Optional[FactoredRadical]:
    """
    Радикал λ > 0, переводящий нормализацию a в нормализацию b (с точностью до знака).

    Returns:
        FactoredRadical (показатели могут быть отрицательными) или None,
        если точки не эквивалентны над замыканием
    """
    _check_same_weights(a, b)
    if canonical(a, Mode.ABSOLUTE).coords != canonical(b, Mode.ABSOLUTE).coords:
        return None
    return abs_wgcd(normalize(b).tuple) / abs_wgcd(normalize(a).tuple)
