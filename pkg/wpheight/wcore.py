"""Базовые типы: веса, взвешенные целочисленные кортежи, действие ⋆ и p-адические оценки."""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from sympy import isprime
from sympy.ntheory import factorint, multiplicity

from .errors import (
    ArityError,
    InvalidScalarError,
    InvalidWeightsError,
    NonIntegralError,
    NonRationalResultError,
    UndefinedValuationError,
    ZeroPointError,
)


Rational = Union[int, Fraction]


DECIMAL_INT = re.compile(r'[+-]?[0-9]+')


def _as_int(value, error_cls, what: str) -> int:
    if isinstance(value, bool):
        raise error_cls(f"{what}: ожидается целое число, получено {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    if isinstance(value, str):
        text = value.strip()
        if DECIMAL_INT.fullmatch(text):
            return int(text)
    raise error_cls(f"{what}: ожидается целое число, получено {value!r}")


@dataclass(frozen=True)
class Weights:
    """Упорядоченный набор весов (q_0, ..., q_n) и их НОД ``r``."""

    q: Tuple[int, ...]

    def __post_init__(self):
        q = tuple(_as_int(v, InvalidWeightsError, 'вес') for v in self.q)
        if not q:
            raise InvalidWeightsError("Набор весов пуст")
        bad = [v for v in q if v < 1]
        if bad:
            raise InvalidWeightsError(f"Веса должны быть положительными: {bad}")
        object.__setattr__(self, 'q', q)

    @cached_property
    def r(self) -> int:
        return reduce(math.gcd, self.q)

    @classmethod
    def parse(cls, text: str) -> 'Weights':
        """Разбирает веса из строки вида ``"2,4,6,10"``."""
        parts = [p for p in text.replace(' ', '').split(',') if p]
        return cls(tuple(parts))

    def __len__(self) -> int:
        return len(self.q)

    def __iter__(self) -> Iterator[int]:
        return iter(self.q)

    def __getitem__(self, i: int) -> int:
        return self.q[i]

    def __str__(self) -> str:
        return ','.join(str(v) for v in self.q)


def make_weights(q: Iterable[int]) -> Weights:
    """
    Строит набор весов.

    Args:
        q: Положительные целые веса (q_0, ..., q_n)

    Returns:
        Weights с вычисленным r = gcd(q_0, ..., q_n)
    """
    if isinstance(q, Weights):
        return q
    if isinstance(q, str):
        return Weights.parse(q)
    return Weights(tuple(q))


def is_well_formed(w: Weights) -> bool:
    """True, если НОД весов без любого одного q_i равен 1."""
    q = w.q
    if len(q) == 1:
        return q[0] == 1
    for i in range(len(q)):
        if reduce(math.gcd, q[:i] + q[i + 1:]) != 1:
            return False
    return True


@dataclass(frozen=True)
class Support:
    """Индексы ненулевых координат и НОД их весов r_S."""

    indices: FrozenSet[int]
    r_s: int

    def reduced_weight(self, w: Weights, i: int) -> int:
        """q_i / r_S — показатель, задающий знаковый класс координаты i."""
        return w.q[i] // self.r_s


def _support(w: Weights, x: Sequence) -> Support:
    indices = frozenset(i for i, v in enumerate(x) if v != 0)
    return Support(indices, reduce(math.gcd, (w.q[i] for i in indices)))


@dataclass(frozen=True)
class WeightedTuple:
    """Целочисленный представитель точки: координаты (x_0, ..., x_n) при весах ``w``."""

    w: Weights
    x: Tuple[int, ...]

    def __post_init__(self):
        w = make_weights(self.w)
        x = tuple(_as_int(v, NonIntegralError, 'координата') for v in self.x)
        if len(x) != len(w):
            raise ArityError(f"Число координат ({len(x)}) не совпадает с числом весов ({len(w)})")
        if not any(x):
            raise ZeroPointError("Нулевой кортеж не задаёт точку")
        object.__setattr__(self, 'w', w)
        object.__setattr__(self, 'x', x)

    @classmethod
    def of(cls, weights, coords: Iterable) -> 'WeightedTuple':
        return cls(make_weights(weights), tuple(coords))

    @cached_property
    def support(self) -> Support:
        return _support(self.w, self.x)

    def __len__(self) -> int:
        return len(self.x)

    def __iter__(self) -> Iterator[int]:
        return iter(self.x)

    def __getitem__(self, i: int) -> int:
        return self.x[i]

    def __str__(self) -> str:
        return '[' + ' : '.join(str(v) for v in self.x) + ']'


@dataclass(frozen=True)
class RationalTuple:
    """Результат действия ⋆: рациональные координаты с признаком целочисленности."""

    w: Weights
    x: Tuple[Fraction, ...]

    @property
    def integral(self) -> bool:
        return all(v.denominator == 1 for v in self.x)

    @cached_property
    def support(self) -> Support:
        return _support(self.w, self.x)

    def to_integral(self) -> WeightedTuple:
        if not self.integral:
            raise NonIntegralError(f"Кортеж не целочисленный: {self}")
        return WeightedTuple(self.w, tuple(v.numerator for v in self.x))

    def __str__(self) -> str:
        return '[' + ' : '.join(str(v) for v in self.x) + ']'


Coordinates = Union[WeightedTuple, RationalTuple]


def support(t: Coordinates) -> Support:
    return t.support


def valuation(x: int, p: int) -> int:
    """
    p-адическая оценка: наибольшее e, при котором p^e делит x.

    Args:
        x: Ненулевое целое (знак не учитывается)
        p: Простое число

    Returns:
        Неотрицательное целое e
    """
    if x == 0:
        raise UndefinedValuationError("Оценка нуля не определена")
    if p < 2:
        raise UndefinedValuationError(f"Ожидается простое p, получено {p}")
    return multiplicity(p, abs(x))


def star(lam: Rational, t: Coordinates) -> RationalTuple:
    """
    Действие λ ⋆ (x_0, ..., x_n) = (λ^{q_0} x_0, ..., λ^{q_n} x_n) в точной арифметике.

    Args:
        lam: Ненулевой рациональный скаляр
        t: Взвешенный кортеж (целый или рациональный)

    Returns:
        RationalTuple; ``integral`` показывает, остались ли координаты целыми
    """
    lam = Fraction(lam)
    if lam == 0:
        raise InvalidScalarError("Скаляр λ не может быть нулём")
    return RationalTuple(t.w, tuple(lam ** q * Fraction(v) for q, v in zip(t.w.q, t.x)))


@dataclass(frozen=True)
class FactoredRadical:
    """
    Положительное вещественное число ∏ p^{α_p}, хранимое как отображение простое → показатель.

    Показатели рациональные и ненулевые; пустое отображение означает 1.
    Принимает как ``{2: Fraction(1, 2)}``, так и последовательность пар.
    """

    factors: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        items = self.factors.items() if isinstance(self.factors, Mapping) else self.factors
        merged: Dict[int, Fraction] = {}
        for p, e in items:
            p = _as_int(p, InvalidScalarError, 'простое')
            if not isprime(p):
                raise InvalidScalarError(f"{p} не является простым")
            merged[p] = merged.get(p, Fraction(0)) + Fraction(e)
        object.__setattr__(
            self, 'factors', tuple(sorted((p, e) for p, e in merged.items() if e != 0)))

    @classmethod
    def from_integer(cls, n: int) -> 'FactoredRadical':
        if n < 1:
            raise InvalidScalarError(f"Ожидается положительное целое, получено {n}")
        return cls({p: e for p, e in factorint(n).items()})

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.factors)

    def exponent(self, p: int) -> Fraction:
        return dict(self.factors).get(p, Fraction(0))

    @property
    def is_one(self) -> bool:
        return not self.factors

    @property
    def root(self) -> int:
        """Наименьшее m, при котором все m·α_p целые."""
        return reduce(lambda a, b: a * b // math.gcd(a, b),
                      (e.denominator for _, e in self.factors), 1)

    def inverse(self) -> 'FactoredRadical':
        return FactoredRadical(tuple((p, -e) for p, e in self.factors))

    def __mul__(self, other: 'FactoredRadical') -> 'FactoredRadical':
        return FactoredRadical(self.factors + other.factors)

    def __truediv__(self, other: 'FactoredRadical') -> 'FactoredRadical':
        return self * other.inverse()

    def rational_power(self, k: int) -> Fraction:
        """s^k как рациональное число; требует целых k·α_p."""
        value = Fraction(1)
        for p, e in self.factors:
            ke = k * e
            if ke.denominator != 1:
                raise NonRationalResultError(
                    f"({self})^{k} не рационально: показатель при {p} равен {ke}")
            value *= Fraction(p) ** int(ke)
        return value

    def radicand(self) -> Tuple[Fraction, int]:
        """Пара (b, m) с s = b^{1/m}."""
        m = self.root
        return self.rational_power(m), m

    def __str__(self) -> str:
        if not self.factors:
            return '1'
        parts = []
        for p, e in self.factors:
            parts.append(str(p) if e == 1 else f"{p}^({e})")
        return '·'.join(parts)


def star_radical(s: FactoredRadical, t: Coordinates, sign: int = 1) -> RationalTuple:
    """
    Действие радикального скаляра ±∏ p^{α_p} на кортеж.

    Координата i умножается на sign^{q_i/r_S} · ∏ p^{q_i·α_p}; нулевые координаты
    остаются нулевыми и не проверяются.

    Raises:
        NonRationalResultError: если q_i·α_p не целое на ненулевой координате
    """
    if sign not in (1, -1):
        raise InvalidScalarError(f"Знак должен быть ±1, получено {sign}")
    supp = t.support
    coords = []
    for i, (q, v) in enumerate(zip(t.w.q, t.x)):
        if v == 0:
            coords.append(Fraction(0))
            continue
        factor = s.rational_power(q)
        if sign == -1 and supp.reduced_weight(t.w, i) % 2:
            factor = -factor
        coords.append(factor * Fraction(v))
    return RationalTuple(t.w, tuple(coords))
