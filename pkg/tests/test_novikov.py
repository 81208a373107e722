# tests/test_novikov.py
"""Tests for class bookkeeping and the truncated Novikov series."""

import os
import random
import sys
from fractions import Fraction

import pytest
from sympy import divisor_count

# Add src to sys.path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from errors import DomainError, IncompatibleContextError, TruncationUnsoundError
from novikov import (
    HClass,
    Lattice,
    NovikovSeries,
    big_omega,
    degree,
    divisor_pairs,
    level,
    series_add,
    series_scale,
    series_truncate,
)


def C(*coords):
    return HClass(tuple(coords))


LAT2 = Lattice((Fraction(1), Fraction(3, 2)))


def _random_series(rng, energy=6, genus_bound=3):
    terms = {}
    for a in range(0, 7):
        for b in range(0, 5):
            A = C(a, b)
            if A.is_zero() or LAT2.area(A) > energy:
                continue
            for g in range(genus_bound + 1):
                if rng.random() < 0.3:
                    terms[(A, g)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return NovikovSeries(LAT2, energy, genus_bound, terms)


class TestDegreeAndLevel:
    """degree, big_omega, level, divisor_pairs."""

    @pytest.mark.parametrize("coords,expected", [((1, 0, 3), 1), ((4, 6), 2), ((12,), 12)])
    def test_degree(self, coords, expected):
        """Degree is the gcd of the coordinates."""
        assert degree(C(*coords)) == expected

    def test_zero_class_has_no_degree(self):
        """The zero class has no degree."""
        with pytest.raises(DomainError):
            degree(C(0, 0))

    @pytest.mark.parametrize("d,expected", [(1, 0), (12, 3), (64, 6), (97, 1)])
    def test_big_omega(self, d, expected):
        """Omega counts prime factors with multiplicity."""
        assert big_omega(d) == expected

    def test_level_values(self):
        """level(A, g) = Omega(degree(A)) + g."""
        assert level(C(1, 2), 0) == 0
        assert level(C(12), 2) == 5
        assert level(C(2, 4), 1) == 2

    def test_divisor_pairs_values(self):
        """Divisor pairs (d, B) with dB = A, ascending in d."""
        assert divisor_pairs(C(3, 5)) == [(1, C(3, 5))]
        assert divisor_pairs(C(6)) == [(1, C(6)), (2, C(3)), (3, C(2)), (6, C(1))]
        assert divisor_pairs(C(4, 6)) == [(1, C(4, 6)), (2, C(2, 3))]

    def test_degree_and_level_are_multiplicative(self):
        """degree(kA) = k degree(A); level(kA, g) = Omega(k) + level(A, g)."""
        rng = random.Random(3)
        for _ in range(200):
            A = C(rng.randint(1, 30), rng.randint(0, 30))
            k = rng.randint(1, 40)
            g = rng.randint(0, 4)
            assert degree(A * k) == k * degree(A)
            assert level(A * k, g) == big_omega(k) + level(A, g)

    def test_divisor_pair_count(self):
        """One divisor pair per divisor of the degree, each multiplying back to A."""
        for n in range(1, 60):
            A = C(n, 2 * n)
            pairs = divisor_pairs(A)
            assert len(pairs) == divisor_count(degree(A))
            assert all(B * d == A for d, B in pairs)


class TestLattice:
    """Area weights."""

    def test_weights_must_be_positive(self):
        """A zero area weight is rejected."""
        with pytest.raises(DomainError):
            Lattice((Fraction(1), Fraction(0)))

    def test_area_and_rank_check(self):
        """Area is the weighted coordinate sum; rank mismatches are rejected."""
        assert LAT2.area(C(2, 2)) == 5
        with pytest.raises(IncompatibleContextError):
            LAT2.area(C(1))

    def test_max_multiple(self):
        """Largest k with area(kA) inside the energy bound."""
        assert LAT2.max_multiple(C(1, 0), Fraction(5, 2)) == 2


class TestNovikovSeries:
    """Container invariants and ring operations."""

    def test_zero_coefficients_dropped(self):
        """Zero coefficients are never stored."""
        s = NovikovSeries(LAT2, 3, 1, {(C(1, 0), 0): 0, (C(1, 0), 1): Fraction(1, 2)})
        assert len(s) == 1

    def test_term_outside_window_rejected(self):
        """Terms above the energy or genus bound are truncation-unsound."""
        with pytest.raises(TruncationUnsoundError):
            NovikovSeries(LAT2, 1, 1, {(C(0, 1), 0): 1})
        with pytest.raises(TruncationUnsoundError):
            NovikovSeries(LAT2, 5, 1, {(C(1, 0), 2): 1})

    def test_window_is_divisor_closed(self):
        """Every divisor B of a stored class A = dB fits in the window too."""
        rng = random.Random(4)
        for _ in range(20):
            s = _random_series(rng, energy=Fraction(11, 2))
            for A in s.classes():
                for d, B in divisor_pairs(A):
                    assert LAT2.area(B) * d == LAT2.area(A)
                    NovikovSeries(LAT2, s.energy, s.genus_bound, {(B, 0): 1})

    def test_non_positive_area_rejected(self):
        """Classes of non-positive area are rejected."""
        with pytest.raises(DomainError):
            NovikovSeries(LAT2, 5, 1, {(C(-3, 1), 0): 1})

    def test_canonical_order(self):
        """Ascending area, then coordinates, then genus."""
        s = NovikovSeries(LAT2, 5, 2, {
            (C(0, 2), 0): 1,
            (C(3, 0), 1): 1,
            (C(3, 0), 0): 1,
            (C(1, 0), 2): 1,
        })
        assert [k for k, _ in s.items()] == [(C(1, 0), 2), (C(0, 2), 0), (C(3, 0), 0), (C(3, 0), 1)]

    def test_add_zero(self):
        """Adding the empty series changes nothing."""
        rng = random.Random(1)
        s = _random_series(rng)
        assert s + NovikovSeries(LAT2, 6, 3) == s

    def test_truncate_is_inclusive(self):
        """Truncation keeps terms with area exactly at the new bound."""
        s = NovikovSeries(LAT2, 6, 2, {(C(0, 2), 0): 1, (C(1, 2), 1): 1})
        t = series_truncate(s, energy=3)
        assert t.coeff(C(0, 2), 0) == 1
        assert t.coeff(C(1, 2), 1) == 0
        assert t.energy == 3

    def test_truncate_never_widens(self):
        """Truncating to a wider window keeps the old one."""
        s = NovikovSeries(LAT2, 4, 1)
        t = s.truncate(energy=10, genus_bound=5)
        assert (t.energy, t.genus_bound) == (4, 1)

    def test_add_is_scale_two(self):
        """s + s equals 2 s."""
        rng = random.Random(2)
        for _ in range(20):
            s = _random_series(rng)
            assert series_add(s, s) == series_scale(s, 2)

    def test_add_commutative_associative(self):
        """Addition is commutative and associative."""
        rng = random.Random(4)
        for _ in range(20):
            a, b, c = (_random_series(rng) for _ in range(3))
            assert a + b == b + a
            assert (a + b) + c == a + (b + c)

    def test_add_respects_tighter_window(self):
        """Sums live in the tighter of the two windows."""
        rng = random.Random(5)
        a = _random_series(rng, energy=6, genus_bound=3)
        b = _random_series(rng, energy=4, genus_bound=2)
        total = a + b
        assert (total.energy, total.genus_bound) == (4, 2)
        assert all(LAT2.area(A) <= 4 and g <= 2 for (A, g), _ in total.items())

    def test_incompatible_lattices(self):
        """Series over different lattices cannot be added."""
        a = NovikovSeries(LAT2, 3, 1, {(C(1, 0), 0): 1})
        b = NovikovSeries(Lattice((Fraction(1), Fraction(2))), 3, 1, {(C(1, 0), 0): 1})
        with pytest.raises(IncompatibleContextError):
            a + b

    def test_integrality(self):
        """non_integral lists the terms with a denominator."""
        s = NovikovSeries(LAT2, 3, 1, {(C(1, 0), 0): Fraction(1, 2), (C(1, 0), 1): 3})
        assert s.non_integral() == [(C(1, 0), 0)]
        assert not s.is_integral()
