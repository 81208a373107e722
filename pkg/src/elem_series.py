# src/elem_series.py
"""
Elementary-cluster series.

    Z^elem_g  = 1 + sum_{d>=1} sum_{mu |- d} prod_{cells} (2 sin(h t/2))^{2g-2} q^d
    GW^elem_g = log Z^elem_g

and the local BPS numbers n_{d,h}(g) obtained by inverting the BPS
transform on GW^elem_g over a rank-1 lattice.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from threading import Lock
from typing import Union

from sympy import QQ
from sympy.polys.ring_series import rs_exp, rs_log
from sympy.polys.rings import PolyElement, ring

from config import DEFAULT_T_SLACK
from errors import DomainError, InternalConsistencyError, InvalidTruncationError, UnsupportedBackendError
from exact_arith import QLaurent, TLaurent, from_qq, q_power_bracket, q_to_t, sin_half_power, to_qq
from novikov import HClass, Lattice, NovikovSeries
from partitions import enumerate_partitions, hook_counts
from workers import parallel_map

logger = logging.getLogger(__name__)

Coeff = Union[QLaurent, TLaurent]

BACKENDS = ("q", "t", "auto")


def default_h_max(g: int, D: int) -> int:
    """Largest h inspected by default: one past the proved vanishing bound."""
    return max(g + 2, D * D * (g - 1) + 2)


def default_trunc(g: int, D: int) -> int:
    return 2 * default_h_max(g, D) + 2 + DEFAULT_T_SLACK


def resolve_backend(g: int, D: int, backend: str, T: int | None) -> str:
    if backend not in BACKENDS:
        raise DomainError(f"unknown backend {backend!r} (expected one of {', '.join(BACKENDS)})")
    if backend == "q" and g == 0:
        raise UnsupportedBackendError("genus 0 needs the t backend")
    if backend != "auto":
        return backend
    if g == 0:
        return "t"
    if T is None or T // 2 >= D * D * (g - 1):
        return "q"
    return "t"


@dataclass(frozen=True)
class ElemSeries:
    genus: int
    q_degree: int
    backend: str
    trunc: int | None
    coeffs: tuple[Coeff, ...]
    kind: str = "z"  # "z" (disconnected) or "gw" (connected)

    def coeff(self, d: int) -> Coeff:
        return self.coeffs[d]

    def to_t(self, T: int | None = None) -> "ElemSeries":
        """Same series in the t backend (Q coefficients are expanded with q_to_t)."""
        if self.backend == "t":
            if T is None or T >= self.trunc:
                return self
            return ElemSeries(self.genus, self.q_degree, "t", T, tuple(c.truncate(T) for c in self.coeffs), self.kind)
        if T is None:
            raise InvalidTruncationError("a t-order is needed to expand Q coefficients")
        return ElemSeries(self.genus, self.q_degree, "t", T, tuple(q_to_t(c, T) for c in self.coeffs), self.kind)


# ============================================================
# Z^elem
# ============================================================

@lru_cache(maxsize=None)
def _hook_factor_t(g: int, hook: int, mult: int, trunc: int) -> TLaurent:
    """(2 sin(hook t/2))^{(2g-2) mult}, known below t^trunc."""
    if g == 0:
        return sin_half_power(hook, 0, trunc + 2 * mult - 2) ** mult
    return sin_half_power(hook, (g - 1) * mult + 1, trunc)


def _z_coeff_q(g: int, d: int) -> QLaurent:
    total = QLaurent()
    for mu in enumerate_partitions(d):
        term = QLaurent.constant(1)
        for hook, mult in sorted(hook_counts(mu).items()):
            term = term * q_power_bracket(hook, (g - 1) * mult + 1)
        total = total + term
    return total


def _z_coeff_t(g: int, d: int, T: int) -> TLaurent:
    total_base = (2 * g - 2) * d
    if total_base >= T:
        return TLaurent.zero(T)
    total = TLaurent.zero(T)
    for mu in enumerate_partitions(d):
        term: TLaurent | None = None
        for hook, mult in sorted(hook_counts(mu).items()):
            own = (2 * g - 2) * mult
            factor = _hook_factor_t(g, hook, mult, T - (total_base - own))
            term = factor if term is None else term * factor
        total = total + term.truncate(T)
    return total


def _z_coeffs(g: int, D: int, backend: str, T: int | None) -> tuple[Coeff, ...]:
    if backend == "q":
        one: Coeff = QLaurent.constant(1)
        rest = parallel_map(lambda d: _z_coeff_q(g, d), range(1, D + 1))
    else:
        one = TLaurent.constant(1, T)
        rest = parallel_map(lambda d: _z_coeff_t(g, d, T), range(1, D + 1))
    return (one, *rest)


def z_elem(g: int, D: int, backend: str = "auto", T: int | None = None) -> ElemSeries:
    """Disconnected elementary series to q^D."""
    if g < 0 or D < 0:
        raise DomainError(f"z_elem needs g >= 0 and D >= 0 (got g={g}, D={D})")
    backend = resolve_backend(g, D, backend, T)
    if backend == "t":
        T = default_trunc(g, D) if T is None else T + (T % 2)
        if T < 2 * g:
            raise InvalidTruncationError(f"t-order {T} is below 2g = {2 * g}")
    else:
        T = None
    coeffs = _z_coeffs(g, D, backend, T)
    logger.info("z_elem: g=%d D=%d backend=%s T=%s", g, D, backend, T)
    return ElemSeries(g, D, backend, T, coeffs, "z")


# ============================================================
# LOG / EXP IN q
# ============================================================

# q is the series variable; x stands for Q (q backend) or t (t backend)
QX_RING, Q_GEN, _ = ring("q, x", QQ)


def _shift_rate(coeffs: tuple[Coeff, ...]) -> int:
    """Smallest N >= 0 with every q^d coefficient times x^{N d} free of negative powers."""
    rate = 0
    for d, c in enumerate(coeffs):
        lowest = min((e for e, _ in c.items()), default=0)
        if d and lowest < 0:
            rate = max(rate, -(lowest // d))
    return rate


def _to_ring(coeffs: tuple[Coeff, ...], rate: int) -> PolyElement:
    """sum_d c_d q^d, substituted q -> q x^rate so that it lives in QQ[q, x]."""
    return QX_RING({(d, e + rate * d): to_qq(v) for d, c in enumerate(coeffs) for e, v in c.items()})


def _from_ring(p: PolyElement, D: int, rate: int, backend: str, truncs: list[int] | None) -> list[Coeff]:
    buckets: list[dict[int, Fraction]] = [{} for _ in range(D + 1)]
    for (d, e), v in p.items():
        buckets[d][e - rate * d] = from_qq(v)
    if backend == "q":
        return [QLaurent(b) for b in buckets]
    return [TLaurent.from_dict(b, T) for b, T in zip(buckets, truncs)]


def gw_elem(g: int, D: int, backend: str = "auto", T: int | None = None) -> ElemSeries:
    """Connected elementary series GW^elem_g = log Z^elem_g to q^D."""
    if g < 0 or D < 0:
        raise DomainError(f"gw_elem needs g >= 0 and D >= 0 (got g={g}, D={D})")
    backend = resolve_backend(g, D, backend, T)
    truncs = None
    if backend == "t":
        T = default_trunc(g, D) if T is None else T + (T % 2)
        if T < 2 * g:
            raise InvalidTruncationError(f"t-order {T} is below 2g = {2 * g}")
        # genus-0 products lose two orders per extra q-factor
        inner = T + 2 * max(D - 1, 0) if g == 0 else T
        z = _z_coeffs(g, D, "t", inner)
        truncs = [T] * (D + 1)
    else:
        T = None
        z = _z_coeffs(g, D, "q", None)
    rate = _shift_rate(z)
    logs = _from_ring(rs_log(_to_ring(z, rate), Q_GEN, D + 1), D, rate, backend, truncs)
    logger.info("gw_elem: g=%d D=%d backend=%s T=%s", g, D, backend, T)
    return ElemSeries(g, D, backend, T, tuple(logs), "gw")


def exp_series(s: ElemSeries) -> ElemSeries:
    """Formal exp of a connected series back to the disconnected one."""
    if s.kind != "gw":
        raise DomainError("exp_series expects a connected (log) series")
    if s.coeffs[0]:
        raise DomainError("a connected series has no q^0 term")
    rate = _shift_rate(s.coeffs)
    truncs = None
    if s.backend == "t":
        # products of d-1 further factors with poles down to t^{-rate per q}
        truncs = [s.trunc - rate * max(d - 1, 0) for d in range(s.q_degree + 1)]
    out = _from_ring(rs_exp(_to_ring(s.coeffs, rate), Q_GEN, s.q_degree + 1), s.q_degree, rate, s.backend, truncs)
    return ElemSeries(s.genus, s.q_degree, s.backend, s.trunc, tuple(out), "z")


# ============================================================
# CACHED COEFFICIENTS
# ============================================================

# (g, T) -> t-expanded GW^elem_g coefficients for q^0..q^D
_gw_cache: dict[tuple[int, int], list[TLaurent]] = {}
_gw_lock = Lock()


def gw_elem_t(g: int, D: int, T: int) -> tuple[TLaurent, ...]:
    """t-expanded GW^elem_g coefficients for q^0..q^D, memoized per (g, T)."""
    T += T % 2
    with _gw_lock:
        coeffs = _gw_cache.get((g, T))
        if coeffs is None or len(coeffs) <= D:
            coeffs = list(gw_elem(g, D, "auto", T).to_t(T).coeffs)
            _gw_cache[(g, T)] = coeffs
        return tuple(coeffs[: D + 1])


def elem_coefficient(g: int, d: int, h: int, T: int) -> Fraction:
    """Coefficient of q^d t^{2h-2} in GW^elem_g; depends on g only, never on the lattice."""
    if 2 * h - 2 >= T:
        raise InvalidTruncationError(f"t^{2 * h - 2} is not known at t-order {T}")
    return gw_elem_t(g, d, T)[d].coeff(2 * h - 2)


# ============================================================
# LOCAL BPS NUMBERS
# ============================================================

@dataclass(frozen=True)
class LocalBps:
    genus: int
    q_degree: int
    h_max: int
    trunc: int
    table: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def value(self, d: int, h: int) -> Fraction:
        return self.table.get((d, h), Fraction(0))

    def support(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.table.items() if v)


def local_bps(g: int, D: int, T: int | None = None, h_max: int | None = None) -> LocalBps:
    """n_{d,h}(g) for d <= D and h <= h_max."""
    from gv_transform import bps_invert

    if D < 1:
        raise DomainError(f"local_bps needs D >= 1 (got {D})")
    h_max = default_h_max(g, D) if h_max is None else h_max
    T = 2 * h_max + 2 if T is None else T + (T % 2)
    if T < 2 * h_max + 2:
        raise InvalidTruncationError(f"t-order {T} cannot resolve h up to {h_max} (need {2 * h_max + 2})")
    lattice = Lattice.rank_one()
    gw_elem_t(g, D, T)
    terms = {
        (HClass((d,)), h): elem_coefficient(g, d, h, T)
        for d in range(1, D + 1)
        for h in range(h_max + 1)
    }
    gw = NovikovSeries(lattice, D, h_max, terms)
    table = bps_invert(gw, T)
    values = {(A.coords[0], h): c for (A, h), c in table.items()}
    logger.info("local_bps: g=%d D=%d h_max=%d support=%d", g, D, h_max, len(values))
    return LocalBps(g, D, h_max, T, values)


def q_coefficients(g: int, D: int) -> dict[tuple[int, int], int]:
    """Integer matrix A_{n,d} of Z^elem_g = sum A_{n,d} Q^n q^d."""
    z = z_elem(g, D, "q")
    out: dict[tuple[int, int], int] = {}
    for d, poly in enumerate(z.coeffs):
        for n, c in poly.items():
            if c.denominator != 1:
                raise InternalConsistencyError(f"A_({n},{d}) = {c} is not an integer")
            out[(n, d)] = c.numerator
    return out


# ============================================================
# CHECKS
# ============================================================

@dataclass(frozen=True)
class Violation:
    d: int
    h: int
    value: Fraction
    rule: str


@dataclass
class LocalBpsReport:
    genus: int
    q_degree: int
    h_max: int
    trunc: int
    support: list[tuple[int, int]]
    violations: list[Violation]
    table: dict[tuple[int, int], Fraction]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_local_bps(g: int, D: int, h_max: int | None = None) -> LocalBpsReport:
    """Integrality, vanishing and the genus-0/1 closed forms of n_{d,h}(g)."""
    local = local_bps(g, D, h_max=h_max)
    violations: list[Violation] = []
    for d in range(1, D + 1):
        for h in range(local.h_max + 1):
            v = local.value(d, h)
            if v.denominator != 1:
                violations.append(Violation(d, h, v, "integrality"))
            if v and h < g:
                violations.append(Violation(d, h, v, "vanishing_below_genus"))
            if v and g >= 1 and h - 1 > d * d * (g - 1):
                violations.append(Violation(d, h, v, "vanishing_above_bound"))
            if g == 0:
                expected = Fraction(1) if (d, h) == (1, 0) else Fraction(0)
                if v != expected:
                    violations.append(Violation(d, h, v, "genus0_closed_form"))
            elif g == 1:
                expected = Fraction(1) if h == 1 else Fraction(0)
                if v != expected:
                    violations.append(Violation(d, h, v, "genus1_closed_form"))
    for item in violations:
        logger.warning("n_{%d,%d}(%d) = %s violates %s", item.d, item.h, g, item.value, item.rule)
    return LocalBpsReport(g, D, local.h_max, local.trunc, local.support(), violations, dict(local.table))


@dataclass
class GenusZeroReport:
    q_degree: int
    h_max: int
    table: dict[tuple[int, int], Fraction]
    violations: list[Violation]

    @property
    def passed(self) -> bool:
        return not self.violations


def genus_zero_scaling(D: int, H: int, T: int | None = None) -> GenusZeroReport:
    """c(h,d) from GW^elem_0 with the checks c(h,d) = d^{2h-3} c(h,1) and sum_h c(h,1) t^{2h-2} = (2 sin(t/2))^{-2}."""
    T = 2 * H + 2 if T is None else T + (T % 2)
    gw_elem_t(0, D, T)
    table = {(d, h): elem_coefficient(0, d, h, T) for d in range(1, D + 1) for h in range(H + 1)}
    violations: list[Violation] = []
    for (d, h), c in sorted(table.items()):
        if c != Fraction(d) ** (2 * h - 3) * table[(1, h)]:
            violations.append(Violation(d, h, c, "genus0_scaling"))
    inverse_square = sin_half_power(1, 0, T)
    for h in range(H + 1):
        if table[(1, h)] != inverse_square.coeff(2 * h - 2):
            violations.append(Violation(1, h, table[(1, h)], "genus0_resummation"))
    return GenusZeroReport(D, H, table, violations)
