# tests/test_elem_series.py
"""Tests for the elementary-cluster series and the local BPS numbers."""

import os
import sys
from fractions import Fraction

import pytest

# Add src to sys.path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from elem_series import (
    ElemSeries,
    check_local_bps,
    elem_coefficient,
    exp_series,
    genus_zero_scaling,
    gw_elem,
    local_bps,
    q_coefficients,
    resolve_backend,
    z_elem,
)
from errors import DomainError, InvalidTruncationError, UnsupportedBackendError
from exact_arith import QLaurent, q_power_bracket, sin_half_power
from partitions import partition_count


class TestZElem:
    """Disconnected series."""

    def test_genus_one_counts_partitions(self):
        """Coefficient of q^d in Z^elem_1 is p(d)."""
        z = z_elem(1, 30, "q")
        for d in range(31):
            assert z.coeff(d) == QLaurent.constant(partition_count(d))

    def test_genus_two_single_box(self):
        """A single box in genus 2 contributes its q-bracket."""
        assert z_elem(2, 1, "q").coeff(1) == q_power_bracket(1, 2)

    def test_genus_zero_leading_term(self):
        """Genus-0 coefficient of q starts at t^-2 with coefficient 1."""
        c = z_elem(0, 1, "t", 4).coeff(1)
        assert c.min_exp == -2
        assert c.leading_coefficient() == 1

    def test_constant_term_is_one(self):
        """The q^0 coefficient is 1."""
        assert z_elem(3, 2, "q").coeff(0) == QLaurent.constant(1)

    def test_genus_zero_needs_t_backend(self):
        """Genus 0 has no Q backend."""
        with pytest.raises(UnsupportedBackendError):
            z_elem(0, 2, "q")

    def test_unknown_backend(self):
        """Backend names other than q, t and auto are rejected."""
        with pytest.raises(DomainError):
            z_elem(1, 2, "x")

    def test_small_t_order(self):
        """A t-order below 2g is rejected."""
        with pytest.raises(InvalidTruncationError):
            z_elem(3, 2, "t", 4)

    def test_symmetric_integral_and_degree_bounded(self):
        """Q-coefficients are symmetric, integral and of degree <= d^2 (g-1)."""
        for g in (2, 3):
            z = z_elem(g, 6, "q")
            for d, p in enumerate(z.coeffs):
                assert p.is_symmetric()
                assert p.is_integral()
                assert p.degree() <= d * d * (g - 1)

    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_backends_agree(self, g):
        """Expanding the Q coefficients in t reproduces the t backend."""
        T = 12
        q_side = z_elem(g, 4, "q").to_t(T)
        t_side = z_elem(g, 4, "t", T)
        assert q_side.coeffs == t_side.coeffs

    def test_auto_backend(self):
        """auto picks t in genus 0 or when the requested t-order is short."""
        assert resolve_backend(0, 3, "auto", None) == "t"
        assert resolve_backend(2, 3, "auto", None) == "q"
        assert resolve_backend(2, 3, "auto", 6) == "t"
        assert resolve_backend(2, 3, "auto", 18) == "q"


class TestGwElem:
    """Connected series log Z^elem."""

    def test_genus_one_divisor_sums(self):
        """Coefficient of q^m in GW^elem_1 is sum_{k | m} 1/k."""
        gw = gw_elem(1, 8, "q")
        assert gw.coeff(4) == QLaurent.constant(Fraction(7, 4))
        for m in range(1, 9):
            expected = sum(Fraction(1, k) for k in range(1, m + 1) if m % k == 0)
            assert gw.coeff(m) == QLaurent.constant(expected)
        assert not gw.coeff(0)

    def test_genus_two_first_coefficient(self):
        """Coefficient of q in GW^elem_2 is 2 - Q - 1/Q."""
        assert gw_elem(2, 3, "q").coeff(1) == QLaurent({1: -1, -1: -1, 0: 2})

    def test_first_coefficient_is_sine_power(self):
        """Coefficient of q is exactly (2 sin(t/2))^{2g-2}, in both backends."""
        T = 10
        for g in range(0, 4):
            assert gw_elem(g, 2, "t", T).coeff(1) == sin_half_power(1, g, T)

    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_exp_inverts_log(self, g):
        """exp(log Z) = Z in the Q backend."""
        assert exp_series(gw_elem(g, 5, "q")) == z_elem(g, 5, "q")

    def test_exp_inverts_log_t_backend(self):
        """exp(log Z) = Z in the t backend."""
        T = 8
        assert exp_series(gw_elem(2, 3, "t", T)).coeffs == z_elem(2, 3, "t", T).coeffs

    def test_exp_needs_connected_series(self):
        """exp only takes connected series."""
        with pytest.raises(DomainError):
            exp_series(z_elem(1, 2, "q"))

    def test_exp_rejects_constant_term(self):
        """A connected series with a q^0 term is rejected."""
        s = ElemSeries(1, 1, "q", None, (QLaurent.constant(1), QLaurent.constant(1)), "gw")
        with pytest.raises(DomainError):
            exp_series(s)

    def test_exp_inverts_log_genus_zero(self):
        """Genus 0: exp(log Z) = Z, losing two t-orders per extra power of q."""
        T, D = 8, 3
        z = z_elem(0, D, "t", T)
        again = exp_series(gw_elem(0, D, "t", T))
        for d in range(D + 1):
            known = T - 2 * max(d - 1, 0)
            assert again.coeff(d) == z.coeff(d).truncate(known)

    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_backends_agree(self, g):
        """Both backends give the same connected coefficients."""
        T = 10
        assert gw_elem(g, 4, "q").to_t(T).coeffs == gw_elem(g, 4, "t", T).coeffs

    def test_genus_zero_connected_starts_at_t_minus_two(self):
        """Every genus-0 connected coefficient has a simple t^-2 pole."""
        gw = gw_elem(0, 5, "t", 6)
        for d in range(1, 6):
            assert gw.coeff(d).min_exp == -2

    def test_leading_normalization(self):
        """Coefficient of q t^{2g-2} is 1."""
        for g in range(5):
            assert elem_coefficient(g, 1, g, 2 * g + 2) == 1

    def test_elem_coefficient_beyond_order(self):
        """Reading past the t-order raises."""
        with pytest.raises(InvalidTruncationError):
            elem_coefficient(1, 1, 3, 4)


class TestGenusZero:
    """Genus-0 scaling and resummation."""

    def test_scaling_and_resummation(self):
        """c(h,d) = d^{2h-3} c(h,1) for d <= 6, h <= 4; c(h,1) resums (2 sin(t/2))^-2 to t^10."""
        report = genus_zero_scaling(6, 6)
        assert report.passed, report.violations
        assert report.table[(1, 0)] == 1
        assert report.table[(1, 1)] == Fraction(1, 12)
        assert report.table[(2, 0)] == Fraction(1, 8)


class TestQCoefficients:
    """Integer matrix A_{n,d}."""

    def test_genus_one(self):
        """Genus one: A_{0,d} = p(d)."""
        A = q_coefficients(1, 6)
        assert A == {(0, d): partition_count(d) for d in range(7)}

    def test_genus_two_degree_one(self):
        """Genus two, degree one: 2 - Q - 1/Q."""
        A = q_coefficients(2, 1)
        assert A == {(0, 0): 1, (-1, 1): -1, (0, 1): 2, (1, 1): -1}

    def test_degree_zero(self):
        """Degree zero is the constant 1."""
        assert q_coefficients(3, 0) == {(0, 0): 1}

    def test_genus_zero_unsupported(self):
        """Genus 0 has no integer Q matrix."""
        with pytest.raises(UnsupportedBackendError):
            q_coefficients(0, 2)


class TestLocalBps:
    """n_{d,h}(g) and the vanishing/integrality checks."""

    def test_genus_zero(self):
        """Genus 0: only n_{1,0} = 1."""
        local = local_bps(0, 6)
        assert local.support() == [(1, 0)]
        assert local.value(1, 0) == 1

    def test_genus_one(self):
        """Genus 1: n_{d,1} = 1 for every d."""
        local = local_bps(1, 8)
        assert local.support() == [(d, 1) for d in range(1, 9)]
        assert all(local.value(d, 1) == 1 for d in range(1, 9))

    def test_genus_two(self):
        """Genus 2: integral values with g <= h <= d^2 + 1."""
        local = local_bps(2, 4)
        for (d, h), v in local.table.items():
            assert v.denominator == 1
            assert h >= 2
            assert h - 1 <= d * d
        assert local.value(1, 2) == 1

    def test_needs_positive_degree(self):
        """Degree 0 is rejected."""
        with pytest.raises(DomainError):
            local_bps(1, 0)

    def test_t_order_too_small(self):
        """A t-order too small for h_max is rejected."""
        with pytest.raises(InvalidTruncationError):
            local_bps(2, 2, T=6, h_max=4)

    def test_check_genus_zero(self):
        """Genus-0 check passes with support (1, 0)."""
        report = check_local_bps(0, 10)
        assert report.passed
        assert report.support == [(1, 0)]

    def test_check_genus_one(self):
        """Genus-1 check passes with support (d, 1)."""
        report = check_local_bps(1, 20)
        assert report.passed
        assert report.support == [(d, 1) for d in range(1, 21)]

    @pytest.mark.parametrize("g", [2, 3])
    def test_check_higher_genus(self, g):
        """Integrality and both vanishing bounds for d <= 6."""
        report = check_local_bps(g, 6)
        assert report.passed, report.violations
        assert report.h_max == 36 * (g - 1) + 2
        assert all(g <= h <= d * d * (g - 1) + 1 for d, h in report.support)
