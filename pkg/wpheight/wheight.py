"""Точные взвешенные высоты, перечисление точек ограниченной высоты и твистов."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import total_ordering
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from sympy import divisors, integer_nthroot
from sympy.ntheory import factorint

from .errors import InvalidScalarError
from .wcore import FactoredRadical, Rational, Weights, WeightedTuple, make_weights, star_radical
from .wnormal import (
    Mode,
    NormalizedPoint,
    SignClass,
    _canonical_sign,
    abs_wgcd,
    canonical,
    normalize,
    normalize_abs,
    wgcd,
)

logger = logging.getLogger(__name__)

APPROX_DIGITS = 15


@total_ordering
@dataclass(frozen=True, eq=False)
class HeightValue:
    """
    Точное вещественное число b^{1/q}.

    Сравнение и хеширование — по значению: (b, q) и (b^k, q·k) равны.
    Десятичное приближение ``approx`` служит только для вывода.
    """

    base: int
    root: int = 1

    def __post_init__(self):
        if isinstance(self.base, bool) or not isinstance(self.base, int) or self.base < 0:
            raise InvalidScalarError(f"Основание высоты должно быть целым ≥ 0: {self.base!r}")
        if isinstance(self.root, bool) or not isinstance(self.root, int) or self.root < 1:
            raise InvalidScalarError(f"Показатель корня должен быть целым ≥ 1: {self.root!r}")

    def reduced(self) -> Tuple[int, int]:
        """Пара (b', q') с наименьшим q', задающая то же число."""
        if self.base in (0, 1):
            return self.base, 1
        for k in reversed(divisors(self.root)):
            b, exact = integer_nthroot(self.base, k)
            if exact:
                return int(b), self.root // k
        return self.base, self.root

    def times_root(self, n: int, k: int) -> 'HeightValue':
        """Значение n^{1/k} · self."""
        return HeightValue(n ** self.root * self.base ** k, self.root * k)

    def scaled(self, s: FactoredRadical) -> 'HeightValue':
        """Умножение на радикал с целым подкоренным выражением."""
        b, m = s.radicand()
        if b.denominator != 1:
            raise InvalidScalarError(f"Ожидается радикал целого числа: {s}")
        return self.times_root(b.numerator, m)

    @property
    def approx(self) -> str:
        with localcontext() as ctx:
            ctx.prec = APPROX_DIGITS + 10
            value = Decimal(self.base) ** (Decimal(1) / Decimal(self.root))
            return format(+value, f'.{APPROX_DIGITS}g')

    def as_float(self) -> float:
        return float(Decimal(self.approx))

    def to_json(self) -> Dict[str, Union[str, int]]:
        return {'base': str(self.base), 'root': self.root, 'approx': self.approx}

    @classmethod
    def from_json(cls, data: Dict) -> 'HeightValue':
        return cls(int(data['base']), int(data['root']))

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeightValue):
            return NotImplemented
        return cmp_height(self, other) == 0

    def __lt__(self, other: 'HeightValue') -> bool:
        if not isinstance(other, HeightValue):
            return NotImplemented
        return cmp_height(self, other) < 0

    def __hash__(self) -> int:
        return hash(self.reduced())

    def __str__(self) -> str:
        b, q = self.reduced()
        exact = str(b) if q == 1 else f"{b}^(1/{q})"
        return f"{exact} ≈ {self.approx}"


def cmp_height(a: HeightValue, b: HeightValue) -> int:
    """
    Точное трёхзначное сравнение a.base^{1/a.root} и b.base^{1/b.root}.

    Returns:
        -1, 0 или 1
    """
    m = a.root * b.root // math.gcd(a.root, b.root)
    left = a.base ** (m // a.root)
    right = b.base ** (m // b.root)
    return (left > right) - (left < right)


def cmp_bound(h: HeightValue, bound: Union[HeightValue, Rational]) -> int:
    """Сравнение высоты с границей: HeightValue или рациональным числом a/b."""
    if isinstance(bound, HeightValue):
        return cmp_height(h, bound)
    c = Fraction(bound)
    if c < 0:
        return 1
    left = h.base * c.denominator ** h.root
    right = c.numerator ** h.root
    return (left > right) - (left < right)


def _max_root(t: WeightedTuple) -> HeightValue:
    # max |x_i|^{1/q_i}; при равенстве сохраняется пара с меньшим индексом
    best = HeightValue(0, 1)
    for q, v in zip(t.w.q, t.x):
        candidate = HeightValue(abs(v), q)
        if cmp_height(candidate, best) > 0:
            best = candidate
    return best


def height(t: WeightedTuple) -> HeightValue:
    """Взвешенная высота: max |x_i|^{1/q_i} по нормализованному над Q представителю."""
    return _max_root(normalize(t).tuple)


def abs_height(t: WeightedTuple) -> HeightValue:
    """Абсолютная высота: max |x_i|^{1/q_i} по абсолютно нормализованному представителю."""
    return _max_root(normalize_abs(t).tuple)


def coordinate_bounds(w: Union[Weights, Sequence[int], str], c: Rational) -> Tuple[int, ...]:
    """
    Ящик перебора: |x_i| ≤ floor(c^{q_i}).

    Условие |x_i|^{1/q_i} ≤ c проверяется в целых числах: |x_i|·den^{q_i} ≤ num^{q_i}.
    """
    w = make_weights(w)
    c = Fraction(c)
    if c <= 0:
        return tuple(0 for _ in w.q)
    return tuple(c.numerator ** q // c.denominator ** q for q in w.q)


def _is_representative(t: WeightedTuple, mode: Mode) -> bool:
    if _canonical_sign(t).k:
        return False
    if mode is Mode.RATIONAL:
        return wgcd(t) == 1
    return abs_wgcd(t).is_one


def _scan_slice(w: Weights, mode: Mode, x0: int, rest: List[range]) -> List[NormalizedPoint]:
    scalar = 1 if mode is Mode.RATIONAL else FactoredRadical()
    found = []
    for tail in product(*rest):
        if x0 == 0 and not any(tail):
            continue
        t = WeightedTuple(w, (x0,) + tail)
        if _is_representative(t, mode):
            found.append(NormalizedPoint(t, scalar, mode, SignClass(0), True))
    return found


def enumerate_bounded(w, c: Rational, mode: Union[Mode, str] = Mode.RATIONAL,
                      workers: int = 1) -> Iterator[NormalizedPoint]:
    """
    Все канонические точки высоты ≤ c, каждая ровно один раз.

    Порядок — лексикографический по координатам и не зависит от ``workers``:
    ящик делится по первой координате, части собираются в исходном порядке.

    Args:
        w: Веса
        c: Граница высоты (целое или Fraction); при c < 1 точек нет
        mode: RATIONAL — высота 𝔥 (одна точка на Q-орбиту);
              ABSOLUTE — абсолютная высота (одна точка на орбиту над замыканием)
        workers: Число потоков перебора
    """
    w = make_weights(w)
    c = Fraction(c)
    mode = Mode(mode)
    if c < 1:
        return
    bounds = coordinate_bounds(w, c)
    logger.debug("Перебор: веса (%s), c = %s, ящик %s", w, c, bounds)
    first = range(-bounds[0], bounds[0] + 1)
    rest = [range(-b, b + 1) for b in bounds[1:]]

    if workers <= 1:
        for x0 in first:
            yield from _scan_slice(w, mode, x0, rest)
        return

    logger.debug("Перебор в %d потоках, %d частей", workers, len(first))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(lambda x0: _scan_slice(w, mode, x0, rest), first):
            yield from chunk


def count_bounded(w, c: Rational, mode: Union[Mode, str] = Mode.RATIONAL) -> int:
    return sum(1 for _ in enumerate_bounded(w, c, mode))


def twists_up_to(t: WeightedTuple, bound: Union[HeightValue, Rational]) -> List[NormalizedPoint]:
    """
    Все твисты точки с высотой ≤ bound.

    Это точки (∏ p^{k_p/r_S}) ⋆ p̄ с 0 ≤ k_p < r_S, где p̄ — абсолютно нормализованная
    каноническая форма; высота такой точки равна ∏ p^{k_p/r_S} · 𝔥̃(t).
    В ``scalar`` результата записан радикал, применённый к p̄.

    Args:
        t: Точка
        bound: Граница высоты: HeightValue или рациональное число

    Returns:
        Список, отсортированный по высоте, затем по координатам; пустой, если bound < 𝔥̃(t)
    """
    bar = canonical(t, Mode.ABSOLUTE).tuple
    h_abs = _max_root(bar)
    if cmp_bound(h_abs, bound) > 0:
        return []
    r_s = bar.support.r_s

    twists = []
    n = 1
    while cmp_bound(h_abs.times_root(n, r_s), bound) <= 0:
        exps = factorint(n)
        if all(e < r_s for e in exps.values()):
            s = FactoredRadical({p: Fraction(e, r_s) for p, e in exps.items()})
            point = canonical(star_radical(s, bar).to_integral())
            twists.append(NormalizedPoint(point.tuple, s, Mode.RATIONAL, point.sign, True))
        if r_s == 1:
            break
        n += 1
    logger.debug("Твисты %s до %s: %d", t, bound, len(twists))
    return sorted(twists, key=lambda p: (_max_root(p.tuple), p.coords))


def height_of(point: NormalizedPoint) -> HeightValue:
    """Высота уже нормализованного представителя без повторной нормализации."""
    return _max_root(point.tuple)
