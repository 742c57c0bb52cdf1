#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Юнит-тесты для модуля wnormal.
Запуск: python -m unittest tests.test_wnormal
"""

import unittest
from fractions import Fraction

from wpheight.errors import WeightsMismatchError
from wpheight.wcore import FactoredRadical, WeightedTuple, star
from wpheight.wnormal import (
    Mode,
    SignClass,
    abs_wgcd,
    canonical,
    is_absolutely_normalized,
    is_normalized,
    is_twist,
    normalize,
    normalize_abs,
    same_point,
    sign_twist,
    twist_scalar,
    wgcd,
)

GENUS2 = (2, 4, 6, 10)
HALF = (1, 2, 3, 5)
OCTAVIC = (2, 3, 4, 5, 6, 7, 8)

# y^2 = x^5 - 1 в виде (5^2·3, 5^4·3^2, 5^6·3^3, 5^10·3^5)
EX1 = (75, 5625, 421875, 2373046875)
EX5_RAW = (-2**3 * 5 * 7, 0, 2**10 * 7**4, 0, 2**15 * 7**6, 0, -2**19 * 5 * 7**8)
EX5_NORMALIZED = (-2 * 5 * 7, 0, 2**6 * 7**4, 0, 2**9 * 7**6, 0, -2**11 * 5 * 7**8)
EX7_ABS = (-5, 0, 2**4 * 7**2, 0, 2**6 * 7**3, 0, -2**7 * 5 * 7**4)

P = (240, 1620, 119880, 46656)
P1 = (120, 405, 14985, 1458)
P2 = (80, 180, 4440, 192)
PBAR = (40, 45, 555, 6)


def g2(coords):
    return WeightedTuple.of(GENUS2, coords)


class TestWgcd(unittest.TestCase):
    """Тесты wgcd()."""

    def test_example_quintic(self):
        self.assertEqual(wgcd(g2(EX1)), 5)

    def test_already_normalized(self):
        self.assertEqual(wgcd(g2(P)), 1)

    def test_octavic_with_zeros(self):
        self.assertEqual(wgcd(WeightedTuple.of(OCTAVIC, EX5_RAW)), 2)

    def test_single_nonzero_coordinate(self):
        # 2^8 = (2^2)^4
        self.assertEqual(wgcd(g2((0, 2**8, 0, 0))), 4)

    def test_sign_ignored(self):
        self.assertEqual(wgcd(g2((-75, 5625, -421875, -2373046875))), 5)

    def test_scaling(self):
        t = g2(P)
        for m in (2, 3, 10):
            self.assertEqual(wgcd(star(m, t).to_integral()), m)


class TestAbsWgcd(unittest.TestCase):
    """Тесты abs_wgcd()."""

    def test_sqrt6(self):
        self.assertEqual(abs_wgcd(g2(P)), FactoredRadical({2: Fraction(1, 2), 3: Fraction(1, 2)}))

    def test_octavic(self):
        t = WeightedTuple.of(OCTAVIC, EX5_NORMALIZED)
        self.assertEqual(abs_wgcd(t), FactoredRadical({2: Fraction(1, 2), 7: Fraction(1, 2)}))

    def test_quintic(self):
        self.assertEqual(abs_wgcd(g2(EX1)), FactoredRadical({3: Fraction(1, 2), 5: 1}))

    def test_trivial(self):
        self.assertTrue(abs_wgcd(g2((1, 1, 1, 1))).is_one)

    def test_rational_part_bounded(self):
        # e_p = floor(m_p) ≤ α_p
        for coords in (EX1, P, P1, (0, 2**8, 0, 0)):
            t = g2(coords)
            d = FactoredRadical.from_integer(wgcd(t))
            s = abs_wgcd(t)
            for p, e in d.factors:
                self.assertLessEqual(e, s.exponent(p))


class TestNormalize(unittest.TestCase):
    """Тесты normalize() и normalize_abs()."""

    def test_octavic(self):
        result = normalize(WeightedTuple.of(OCTAVIC, EX5_RAW))
        self.assertEqual(result.coords, EX5_NORMALIZED)
        self.assertEqual(result.scalar, 2)
        self.assertIs(result.mode, Mode.RATIONAL)

    def test_power_of_two(self):
        result = normalize(g2((4, 1296, 192, 10**10)))
        self.assertEqual(result.coords, (1, 81, 3, 5**10))
        self.assertEqual(result.scalar, 2)

    def test_idempotent(self):
        for coords in (EX1, P, (4, 1296, 192, 10**10)):
            once = normalize(g2(coords)).tuple
            self.assertEqual(normalize(once).tuple, once)
            self.assertEqual(normalize(once).scalar, 1)

    def test_abs_sqrt6(self):
        result = normalize_abs(g2(P))
        self.assertEqual(result.coords, PBAR)
        self.assertEqual(result.scalar, FactoredRadical({2: Fraction(1, 2), 3: Fraction(1, 2)}))
        self.assertIs(result.mode, Mode.ABSOLUTE)

    def test_abs_octavic(self):
        result = normalize_abs(WeightedTuple.of(OCTAVIC, EX5_NORMALIZED))
        self.assertEqual(result.coords, EX7_ABS)

    def test_abs_idempotent(self):
        bar = normalize_abs(WeightedTuple.of(OCTAVIC, EX5_RAW)).tuple
        self.assertEqual(normalize_abs(bar).tuple, bar)
        self.assertTrue(normalize_abs(bar).scalar.is_one)

    def test_predicates(self):
        self.assertTrue(is_normalized(g2(P)))
        self.assertFalse(is_absolutely_normalized(g2(P)))
        self.assertTrue(is_absolutely_normalized(g2(PBAR)))
        self.assertFalse(is_normalized(g2(EX1)))

    def test_absolutely_normalized_implies_normalized(self):
        for coords in (EX1, P, P1, P2, (3, 0, 0, 7)):
            bar = normalize_abs(g2(coords)).tuple
            self.assertTrue(is_normalized(bar))


class TestSignTwist(unittest.TestCase):
    """Тесты sign_twist() и SignClass."""

    def test_genus2(self):
        self.assertEqual(sign_twist(g2(P), 1).x, (-240, 1620, -119880, -46656))

    def test_single_coordinate(self):
        t = WeightedTuple.of(HALF, (0, 1, 0, 0))
        self.assertEqual(sign_twist(t, SignClass(1)).x, (0, -1, 0, 0))

    def test_identity_and_involution(self):
        t = g2(P1)
        self.assertEqual(sign_twist(t, 0), t)
        self.assertEqual(sign_twist(sign_twist(t, 1), 1), t)

    def test_keeps_wgcd(self):
        t = g2(EX1)
        twin = sign_twist(t, 1)
        self.assertEqual(wgcd(twin), wgcd(t))
        self.assertEqual(abs_wgcd(twin), abs_wgcd(t))

    def test_invalid_class(self):
        with self.assertRaises(ValueError):
            SignClass(2)


class TestCanonical(unittest.TestCase):
    """Тесты canonical()."""

    def test_single_coordinate(self):
        t = WeightedTuple.of(HALF, (0, -1, 0, 0))
        self.assertEqual(canonical(t).coords, (0, 1, 0, 0))

    def test_negative_first(self):
        result = canonical(g2((-40, 45, -555, -6)))
        self.assertEqual(result.coords, PBAR)
        self.assertEqual(result.sign, SignClass(1))
        self.assertTrue(result.canonical_sign_applied)

    def test_absolute_octavic(self):
        # q/r_S = 1, 2, 3, 4 на носителе {0, 2, 4, 6}
        result = canonical(WeightedTuple.of(OCTAVIC, EX5_RAW), Mode.ABSOLUTE)
        self.assertEqual(result.coords, (5, 0, 784, 0, -21952, 0, -1536640))

    def test_idempotent(self):
        for mode in (Mode.RATIONAL, Mode.ABSOLUTE):
            c = canonical(g2(EX1), mode).tuple
            self.assertEqual(canonical(c, mode).tuple, c)

    def test_class_function(self):
        t = g2(P1)
        expected = canonical(t).coords
        for lam in (2, -1, -3, Fraction(6)):
            self.assertEqual(canonical(star(lam, t).to_integral()).coords, expected)

    def test_mode_by_name(self):
        self.assertEqual(canonical(g2(P), 'absolute').coords, PBAR)


class TestSamePoint(unittest.TestCase):
    """Тесты same_point(), is_twist() и twist_scalar()."""

    def test_scaled(self):
        t = g2(P)
        self.assertTrue(same_point(t, star(2, t).to_integral()))

    def test_sign_twin(self):
        self.assertTrue(same_point(g2(P), sign_twist(g2(P), 1)))

    def test_twists_are_different_points(self):
        self.assertFalse(same_point(g2(P), g2(P1)))
        self.assertTrue(is_twist(g2(P), g2(P1)))
        self.assertTrue(is_twist(g2(P), g2(PBAR)))
        self.assertTrue(is_twist(g2(P2), g2(P1)))

    def test_same_point_is_not_twist(self):
        self.assertFalse(is_twist(g2(P), g2(P)))
        self.assertFalse(is_twist(g2(PBAR), sign_twist(g2(PBAR), 1)))

    def test_unrelated(self):
        self.assertFalse(is_twist(g2(P), g2(EX1)))
        self.assertIsNone(twist_scalar(g2(P), g2(EX1)))

    def test_twist_scalar(self):
        s = twist_scalar(g2(P), g2(P1))
        self.assertEqual(s, FactoredRadical({2: Fraction(-1, 2)}))
        self.assertTrue(twist_scalar(g2(P), g2(P)).is_one)

    def test_weights_mismatch(self):
        with self.assertRaises(WeightsMismatchError):
            same_point(g2(P), WeightedTuple.of(HALF, P))
        with self.assertRaises(WeightsMismatchError):
            is_twist(g2(P), WeightedTuple.of(HALF, P))


class TestWgcdOracle(unittest.TestCase):
    """Сверка wgcd с перебором делителей на фиксированных кортежах."""

    CASES = [
        ((1, 2), (12, 18)),
        ((2, 3), (36, 216)),
        ((1, 1, 1), (6, 10, 14)),
        ((2, 4, 6, 10), (0, 2**12 * 3**4, 0, 5)),
        ((3, 5), (-2**9 * 3**6, 2**15 * 3**10)),
    ]

    def test_matches_bruteforce(self):
        for q, x in self.CASES:
            t = WeightedTuple.of(q, x)
            nonzero = [(w, abs(v)) for w, v in zip(q, x) if v]
            limit = min(v for _, v in nonzero)
            best = max(d for d in range(1, limit + 1) if all(v % d**w == 0 for w, v in nonzero))
            self.assertEqual(wgcd(t), best, msg=f"{q} {x}")


if __name__ == '__main__':
    unittest.main()
