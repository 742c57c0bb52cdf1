#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Юнит-тесты для модуля wheight.
Запуск: python -m unittest tests.test_wheight
"""

import math
import unittest
from fractions import Fraction

from wpheight.errors import InvalidScalarError
from wpheight.wcore import FactoredRadical, WeightedTuple, star, star_radical
from wpheight.wheight import (
    HeightValue,
    abs_height,
    cmp_bound,
    cmp_height,
    coordinate_bounds,
    count_bounded,
    enumerate_bounded,
    height,
    height_of,
    twists_up_to,
)
from wpheight.wnormal import Mode, canonical, normalize

GENUS2 = (2, 4, 6, 10)
P = (240, 1620, 119880, 46656)
TWISTS = [
    (40, 45, 555, 6),
    (80, 180, 4440, 192),
    (120, 405, 14985, 1458),
    (200, 1125, 69375, 18750),
    (240, 1620, 119880, 46656),
]


def g2(coords):
    return WeightedTuple.of(GENUS2, coords)


class TestHeightValue(unittest.TestCase):
    """Тесты HeightValue и cmp_height()."""

    def test_compare(self):
        self.assertEqual(cmp_height(HeightValue(2, 1), HeightValue(16, 4)), 0)
        self.assertEqual(cmp_height(HeightValue(40, 2), HeightValue(240, 2)), -1)
        self.assertEqual(cmp_height(HeightValue(3, 1), HeightValue(8, 2)), 1)

    def test_equal_by_value(self):
        self.assertEqual(HeightValue(2, 1), HeightValue(16, 4))
        self.assertEqual(hash(HeightValue(2, 1)), hash(HeightValue(16, 4)))
        self.assertEqual(len({HeightValue(10, 1), HeightValue(10**10, 10)}), 1)

    def test_reduced(self):
        self.assertEqual(HeightValue(2**10 * 5**10, 10).reduced(), (10, 1))
        self.assertEqual(HeightValue(240, 2).reduced(), (240, 2))
        self.assertEqual(HeightValue(1, 7).reduced(), (1, 1))

    def test_same_radical(self):
        # 3600^{1/4} = √60 < √240
        self.assertEqual(HeightValue(3600, 4), HeightValue(60, 2))
        self.assertLess(HeightValue(3600, 4), HeightValue(240, 2))

    def test_ordering(self):
        values = [HeightValue(240, 2), HeightValue(40, 2), HeightValue(7), HeightValue(2, 4)]
        self.assertEqual(sorted(values), [HeightValue(2, 4), HeightValue(40, 2),
                                          HeightValue(7), HeightValue(240, 2)])

    def test_approx(self):
        self.assertTrue(HeightValue(40, 2).approx.startswith('6.32455532033676'))
        self.assertAlmostEqual(HeightValue(40, 2).as_float(), math.sqrt(40), places=12)
        self.assertAlmostEqual(HeightValue(10**10, 10).as_float(), 10.0, places=12)

    def test_approx_large_base(self):
        h = HeightValue(10**300, 3)
        self.assertTrue(h.approx.startswith('1.00000000000000e+100'))

    def test_invalid(self):
        with self.assertRaises(InvalidScalarError):
            HeightValue(-1, 2)
        with self.assertRaises(InvalidScalarError):
            HeightValue(4, 0)

    def test_json(self):
        h = HeightValue(240, 2)
        data = h.to_json()
        self.assertEqual(data['base'], '240')
        self.assertEqual(data['root'], 2)
        self.assertEqual(HeightValue.from_json(data), h)

    def test_scaled(self):
        s = FactoredRadical({2: Fraction(1, 2), 3: Fraction(1, 2)})
        self.assertEqual(HeightValue(40, 2).scaled(s), HeightValue(240, 2))

    def test_cmp_bound_rational(self):
        self.assertEqual(cmp_bound(HeightValue(240, 2), 16), -1)
        self.assertEqual(cmp_bound(HeightValue(240, 2), 15), 1)
        self.assertEqual(cmp_bound(HeightValue(9, 2), Fraction(3)), 0)
        self.assertEqual(cmp_bound(HeightValue(2, 4), Fraction(6, 5)), -1)


class TestHeight(unittest.TestCase):
    """Тесты height() и abs_height()."""

    def test_ten(self):
        h = height(g2((4, 162, 192, 2**10 * 5**10)))
        self.assertEqual(h, HeightValue(10))
        self.assertEqual((h.base, h.root), (2**10 * 5**10, 10))

    def test_five(self):
        self.assertEqual(height(g2((4, 1296, 192, 2**10 * 5**10))), HeightValue(5))

    def test_sqrt240(self):
        h = height(g2(P))
        self.assertEqual((h.base, h.root), (240, 2))

    def test_abs_sqrt40(self):
        h = abs_height(g2(P))
        self.assertEqual((h.base, h.root), (40, 2))

    def test_single_coordinate(self):
        t = g2((0, 2, 0, 0))
        self.assertEqual(abs_height(t), HeightValue(1))
        self.assertEqual(height(t), HeightValue(2, 4))

    def test_scaling_invariant(self):
        t = g2(P)
        for lam in (2, -1, 5):
            self.assertEqual(height(star(lam, t).to_integral()), height(t))
            self.assertEqual(abs_height(star(lam, t).to_integral()), abs_height(t))

    def test_abs_not_greater(self):
        for coords in TWISTS + [(4, 162, 192, 10**10), (75, 5625, 421875, 2373046875)]:
            t = g2(coords)
            self.assertLessEqual(abs_height(t), height(t))

    def test_twists_share_abs_height(self):
        expected = abs_height(g2(P))
        for coords in TWISTS:
            self.assertEqual(abs_height(g2(coords)), expected)

    def test_height_of_normalized(self):
        point = normalize(g2((4, 1296, 192, 10**10)))
        self.assertEqual(height_of(point), HeightValue(5))


class TestEnumerateBounded(unittest.TestCase):
    """Тесты enumerate_bounded() и count_bounded()."""

    def test_projective_line(self):
        points = [p.coords for p in enumerate_bounded((1, 1), 1)]
        self.assertEqual(points, [(0, 1), (1, -1), (1, 0), (1, 1)])

    def test_weights_one_two(self):
        points = [p.coords for p in enumerate_bounded((1, 2), Fraction(3, 2))]
        self.assertEqual(points, [(0, 1), (0, 2), (1, -2), (1, -1), (1, 0), (1, 1), (1, 2)])

    def test_absolute_mode(self):
        # (0, 2) = √2 ⋆ (0, 1)
        points = [p.coords for p in enumerate_bounded((1, 2), Fraction(3, 2), 'absolute')]
        self.assertEqual(points, [(0, 1), (1, -2), (1, -1), (1, 0), (1, 1), (1, 2)])
        self.assertEqual(count_bounded((1, 2), Fraction(3, 2), Mode.ABSOLUTE), 6)

    def test_below_one(self):
        self.assertEqual(list(enumerate_bounded((1, 1), Fraction(9, 10))), [])
        self.assertEqual(count_bounded(GENUS2, 0), 0)

    def test_threads_same_order(self):
        single = [p.coords for p in enumerate_bounded((1, 2, 3), 2)]
        threaded = [p.coords for p in enumerate_bounded((1, 2, 3), 2, workers=3)]
        self.assertEqual(single, threaded)

    def test_points_are_canonical(self):
        for point in enumerate_bounded((1, 2, 3), 2):
            self.assertEqual(canonical(point.tuple).coords, point.coords)
            self.assertLessEqual(cmp_bound(height_of(point), 2), 0)

    def test_coordinate_bounds(self):
        self.assertEqual(coordinate_bounds(GENUS2, 2), (4, 16, 64, 1024))
        self.assertEqual(coordinate_bounds((1, 2, 3), Fraction(3, 2)), (1, 2, 3))
        self.assertEqual(coordinate_bounds((1, 2), 0), (0, 0))


class TestTwistsUpTo(unittest.TestCase):
    """Тесты twists_up_to()."""

    def setUp(self):
        self.p = g2(P)

    def test_all_twists(self):
        twists = twists_up_to(self.p, height(self.p))
        self.assertEqual([t.coords for t in twists], TWISTS)
        self.assertEqual(twists[0].scalar, FactoredRadical())
        self.assertEqual(twists[-1].scalar, FactoredRadical({2: Fraction(1, 2), 3: Fraction(1, 2)}))

    def test_sorted_by_height(self):
        heights = [height_of(t) for t in twists_up_to(self.p, height(self.p))]
        self.assertEqual(heights, sorted(heights))
        self.assertEqual(heights[0], abs_height(self.p))

    def test_abs_height_bound(self):
        twists = twists_up_to(self.p, abs_height(self.p))
        self.assertEqual([t.coords for t in twists], [TWISTS[0]])

    def test_below_abs_height(self):
        self.assertEqual(twists_up_to(self.p, 6), [])

    def test_rational_bound(self):
        self.assertEqual(len(twists_up_to(self.p, 16)), 5)
        self.assertEqual(len(twists_up_to(self.p, 15)), 4)

    def test_same_for_every_twist(self):
        expected = [t.coords for t in twists_up_to(self.p, height(self.p))]
        for coords in TWISTS:
            got = [t.coords for t in twists_up_to(g2(coords), height(self.p))]
            self.assertEqual(got, expected)

    def test_trivial_support_gcd(self):
        t = WeightedTuple.of((1, 2), (1, 2))
        twists = twists_up_to(t, 100)
        self.assertEqual([p.coords for p in twists], [(1, 2)])

    def test_bruteforce_small_primes(self):
        # λ = √S, S — бесквадратное из простых ≤ 7
        bar = canonical(self.p, Mode.ABSOLUTE).tuple
        bound = height(self.p)
        expected = set()
        for mask in range(16):
            primes = [p for i, p in enumerate((2, 3, 5, 7)) if mask >> i & 1]
            s = FactoredRadical({p: Fraction(1, 2) for p in primes})
            if cmp_height(abs_height(bar).scaled(s), bound) <= 0:
                expected.add(canonical(star_radical(s, bar).to_integral()).coords)
        got = {t.coords for t in twists_up_to(self.p, bound)}
        self.assertEqual(got, expected)


if __name__ == '__main__':
    unittest.main()
