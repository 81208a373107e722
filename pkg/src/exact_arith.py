# src/exact_arith.py
"""
Exact coefficient arithmetic.

Rationals are `fractions.Fraction` everywhere; nothing is ever rounded.
Two series backends share the same coefficient field:

- QLaurent: Laurent polynomial in Q = e^{it}, exact (used while every genus is >= 1)
- TLaurent: Laurent series in t with even exponents only, carrying its own
  truncation order (mandatory once genus 0 appears)

TLaurent only tracks exponents and truncation orders. Products, inverses,
powers and the sin/cos expansions are computed in sympy's `ring("t", QQ)`
with `sympy.polys.ring_series`.
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

from sympy import QQ
from sympy.polys.ring_series import mul_xin, rs_cos, rs_mul, rs_pow, rs_series_inversion, rs_sin
from sympy.polys.rings import PolyElement, ring

from errors import (
    DomainError,
    InvalidTruncationError,
    SchemaError,
    SymmetryViolationError,
    UnsupportedBackendError,
)

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")

T_RING, T_GEN = ring("t", QQ)


def to_qq(x: Scalar):
    """Fraction or int -> element of sympy's QQ."""
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def from_qq(c) -> Fraction:
    """Element of sympy's QQ (gmpy or pure-Python ground types) -> Fraction."""
    return Fraction(int(c.numerator), int(c.denominator))




def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction. Decimal and exponent forms are rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise SchemaError(f"not a rational string: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError as e:
        raise SchemaError(f"zero denominator in {text!r}") from e


def format_rational(x: Scalar) -> str:
    """Lowest terms, "p" when the denominator is 1."""
    return str(Fraction(x))


def _even_up(n: int) -> int:
    return n + (n % 2)


# ============================================================
# Q BACKEND
# ============================================================

class QLaurent:
    """Finitely supported map exponent -> Fraction. Zero coefficients are never stored."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        clean: dict[int, Fraction] = {}
        for n, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                clean[int(n)] = c
        self._coeffs = dict(sorted(clean.items()))

    @classmethod
    def _wrap(cls, clean: dict[int, Fraction]) -> "QLaurent":
        obj = cls.__new__(cls)
        obj._coeffs = dict(sorted(clean.items()))
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> "QLaurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, n: int, c: Scalar = 1) -> "QLaurent":
        return cls({n: c})

    @property
    def coeffs(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._coeffs)

    def coeff(self, n: int) -> Fraction:
        return self._coeffs.get(n, Fraction(0))

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._coeffs.items())

    def degree(self) -> int:
        """Largest |n| with a non-zero coefficient (0 for the zero polynomial)."""
        return max((abs(n) for n in self._coeffs), default=0)

    def is_symmetric(self) -> bool:
        return all(self._coeffs.get(-n) == c for n, c in self._coeffs.items())

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs.values())

    def scale(self, c: Scalar) -> "QLaurent":
        c = Fraction(c)
        if not c:
            return QLaurent()
        return QLaurent._wrap({n: v * c for n, v in self._coeffs.items()})

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QLaurent.constant(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.items()))

    def __neg__(self) -> "QLaurent":
        return QLaurent._wrap({n: -c for n, c in self._coeffs.items()})

    def __add__(self, other: "QLaurent | Scalar") -> "QLaurent":
        if isinstance(other, (int, Fraction)):
            other = QLaurent.constant(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        out = dict(self._coeffs)
        for n, c in other._coeffs.items():
            s = out.get(n, 0) + c
            if s:
                out[n] = s
            else:
                out.pop(n, None)
        return QLaurent._wrap(out)

    __radd__ = __add__

    def __sub__(self, other: "QLaurent | Scalar") -> "QLaurent":
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "QLaurent":
        return (-self) + other

    def __mul__(self, other: "QLaurent | Scalar") -> "QLaurent":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        if self.is_integral() and other.is_integral():
            # int fast path: hook products are integral and dominate runtime
            acc: dict[int, int] = {}
            rhs = [(m, c.numerator) for m, c in other._coeffs.items()]
            for n, a in self._coeffs.items():
                a = a.numerator
                for m, b in rhs:
                    acc[n + m] = acc.get(n + m, 0) + a * b
            return QLaurent._wrap({n: Fraction(v) for n, v in acc.items() if v})
        out: dict[int, Fraction] = {}
        for n, a in self._coeffs.items():
            for m, b in other._coeffs.items():
                out[n + m] = out.get(n + m, 0) + a * b
        return QLaurent._wrap({n: v for n, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QLaurent":
        if e < 0:
            raise DomainError("negative powers are not Laurent polynomials in general")
        result = QLaurent.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __repr__(self) -> str:
        if not self._coeffs:
            return "QLaurent(0)"
        body = " + ".join(f"{c}*Q^{n}" for n, c in self._coeffs.items())
        return f"QLaurent({body})"


# ============================================================
# t BACKEND
# ============================================================

class TLaurent:
    """
    Even Laurent series in t known below `trunc`.

    Canonical form: the stored run starts at the lowest non-zero exponent
    (`min_exp`) and lists every known even exponent up to trunc - 2.
    The zero series has min_exp == trunc and no coefficients.
    """

    __slots__ = ("_base", "_coeffs", "_trunc")

    def __init__(self, min_exp: int, coeffs: Iterable[Scalar], trunc: int):
        if min_exp % 2:
            raise DomainError(f"odd exponent {min_exp}: only even powers of t are representable")
        trunc = _even_up(int(trunc))
        known = max(0, (trunc - min_exp) // 2)
        values = [Fraction(c) for c in coeffs][:known]
        values += [Fraction(0)] * (known - len(values))
        i = 0
        while i < len(values) and not values[i]:
            i += 1
        values = values[i:]
        self._base = min_exp + 2 * i if values else trunc
        self._coeffs = tuple(values)
        self._trunc = trunc

    @classmethod
    def constant(cls, c: Scalar, trunc: int) -> "TLaurent":
        return cls(0, [c], trunc)

    @classmethod
    def zero(cls, trunc: int) -> "TLaurent":
        return cls(0, [], trunc)

    @classmethod
    def from_dict(cls, terms: Mapping[int, Scalar], trunc: int) -> "TLaurent":
        """Sparse exponent -> coefficient map; exponents at or past trunc are dropped."""
        trunc = _even_up(int(trunc))
        known = {int(e): c for e, c in terms.items() if e < trunc and c}
        if not known:
            return cls.zero(trunc)
        odd = [e for e in known if e % 2]
        if odd:
            raise DomainError(f"odd exponent {odd[0]}: only even powers of t are representable")
        lo = min(known)
        return cls(lo, [known.get(e, 0) for e in range(lo, trunc, 2)], trunc)

    @classmethod
    def from_ring(cls, p: PolyElement, trunc: int, shift: int = 0) -> "TLaurent":
        """t^shift * p for p in T_RING, known below t^trunc."""
        return cls.from_dict({e + shift: from_qq(c) for (e,), c in p.items()}, trunc)

    def to_ring(self) -> PolyElement:
        """t^{-min_exp} times the series, as a T_RING element with a non-zero constant term."""
        return T_RING({(2 * i,): to_qq(c) for i, c in enumerate(self._coeffs) if c})

    @property
    def min_exp(self) -> int:
        return self._base

    @property
    def trunc(self) -> int:
        return self._trunc

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def precision(self) -> int:
        """Relative precision trunc - min_exp."""
        return self._trunc - self._base

    def coeff(self, e: int) -> Fraction:
        """Coefficient of t^e; asking at or beyond the truncation order is an error."""
        if e >= self._trunc:
            raise InvalidTruncationError(f"t^{e} requested from a series known below t^{self._trunc}")
        if e % 2 or e < self._base:
            return Fraction(0)
        return self._coeffs[(e - self._base) // 2]

    def items(self) -> Iterator[tuple[int, Fraction]]:
        for i, c in enumerate(self._coeffs):
            if c:
                yield self._base + 2 * i, c

    def leading_coefficient(self) -> Fraction:
        return self._coeffs[0] if self._coeffs else Fraction(0)

    def truncate(self, trunc: int) -> "TLaurent":
        return TLaurent(self._base, self._coeffs, min(_even_up(trunc), self._trunc))

    def rescale(self, k: Scalar) -> "TLaurent":
        """Substitute t -> k t."""
        k = Fraction(k)
        return TLaurent(
            self._base,
            [c * k ** (self._base + 2 * i) for i, c in enumerate(self._coeffs)],
            self._trunc,
        )

    def shift(self, e: int) -> "TLaurent":
        """Multiply by t^e."""
        if e % 2:
            raise DomainError("odd shifts leave the even subring")
        if not self._coeffs:
            return TLaurent.zero(self._trunc + e)
        return TLaurent(self._base + e, self._coeffs, self._trunc + e)

    def scale(self, c: Scalar) -> "TLaurent":
        c = Fraction(c)
        return TLaurent(self._base, [v * c for v in self._coeffs], self._trunc)

    def _get(self, e: int) -> Fraction:
        if e < self._base:
            return Fraction(0)
        return self._coeffs[(e - self._base) // 2]

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TLaurent):
            return NotImplemented
        return (self._base, self._coeffs, self._trunc) == (other._base, other._coeffs, other._trunc)

    def __hash__(self) -> int:
        return hash((self._base, self._coeffs, self._trunc))

    def __neg__(self) -> "TLaurent":
        return self.scale(-1)

    def __add__(self, other: "TLaurent | Scalar") -> "TLaurent":
        if isinstance(other, (int, Fraction)):
            other = TLaurent.constant(other, self._trunc)
        if not isinstance(other, TLaurent):
            return NotImplemented
        trunc = min(self._trunc, other._trunc)
        lo = min(self._base, other._base)
        return TLaurent(lo, [self._get(e) + other._get(e) for e in range(lo, trunc, 2)], trunc)

    __radd__ = __add__

    def __sub__(self, other: "TLaurent | Scalar") -> "TLaurent":
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "TLaurent":
        return (-self) + other

    def __mul__(self, other: "TLaurent | Scalar") -> "TLaurent":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TLaurent):
            return NotImplemented
        trunc = min(self._trunc + other._base, other._trunc + self._base)
        lo = self._base + other._base
        if not self._coeffs or not other._coeffs or trunc <= lo:
            return TLaurent.zero(trunc)
        product = rs_mul(self.to_ring(), other.to_ring(), T_GEN, trunc - lo)
        return TLaurent.from_ring(product, trunc, lo)

    __rmul__ = __mul__

    def inverse(self) -> "TLaurent":
        """Multiplicative inverse; relative precision is preserved."""
        if not self._coeffs:
            raise InvalidTruncationError("series vanishes to its truncation order and cannot be inverted")
        inv = rs_series_inversion(self.to_ring(), T_GEN, self.precision)
        return TLaurent.from_ring(inv, -self._base + self.precision, -self._base)

    def __pow__(self, e: int) -> "TLaurent":
        if not self._coeffs:
            if e > 0:
                return TLaurent.zero(self._trunc + (e - 1) * self._base)
            if e == 0:
                raise InvalidTruncationError("0^0 of a truncated zero series")
            raise InvalidTruncationError("series vanishes to its truncation order and cannot be inverted")
        lo = e * self._base
        power = rs_pow(self.to_ring(), e, T_GEN, self.precision)
        return TLaurent.from_ring(power, lo + self.precision, lo)

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*t^{e}" for e, c in self.items()) or "0"
        return f"TLaurent({terms} + O(t^{self._trunc}))"


# ============================================================
# SIN / COS EXPANSIONS
# ============================================================

def cos_bracket(k: int, trunc: int) -> TLaurent:
    """2 - 2cos(kt) = (2 sin(kt/2))^2, known below t^trunc."""
    trunc = _even_up(trunc)
    return TLaurent.from_ring(2 - 2 * rs_cos(k * T_GEN, T_GEN, trunc), trunc)


@lru_cache(maxsize=None)
def _unit_sin_power(h: int, trunc: int) -> TLaurent:
    """(2 sin(t/2))^{2h-2} = t^{2h-2} ((2 - 2cos t) / t^2)^{h-1}, below t^trunc."""
    lo = 2 * h - 2
    square = mul_xin(2 - 2 * rs_cos(T_GEN, T_GEN, trunc - lo + 2), 0, -2)
    return TLaurent.from_ring(rs_pow(square, h - 1, T_GEN, trunc - lo), trunc, lo)


def sin_half_power(k: int, h: int, trunc: int) -> TLaurent:
    """
    (2 sin(kt/2))^{2h-2} known below t^trunc.

    h >= 1 gives a polynomial in t^2 starting at k^{2h-2} t^{2h-2};
    h = 0 gives the inverse of the squared sine, starting at k^{-2} t^{-2}.
    """
    if k < 1 or h < 0:
        raise DomainError(f"sin_half_power needs k >= 1, h >= 0 (got k={k}, h={h})")
    if trunc < 2 * h:
        raise InvalidTruncationError(f"t-order {trunc} is below the lowest needed exponent for h={h}")
    trunc = _even_up(trunc)
    series = _unit_sin_power(h, trunc)
    return series if k == 1 else series.rescale(k)


@lru_cache(maxsize=None)
def q_power_bracket(k: int, h: int) -> QLaurent:
    """(-1)^{h-1} (Q^k + Q^{-k} - 2)^{h-1}, the Q-form of (2 sin(kt/2))^{2h-2}."""
    if h == 0:
        raise UnsupportedBackendError("genus 0 has no Laurent-polynomial form in Q; use the t backend")
    if k < 1 or h < 0:
        raise DomainError(f"q_power_bracket needs k >= 1, h >= 1 (got k={k}, h={h})")
    return QLaurent({0: 2, k: -1, -k: -1}) ** (h - 1)


@lru_cache(maxsize=None)
def _cos_coeffs(trunc: int) -> tuple[Fraction, ...]:
    """Coefficients of cos t at t^0, t^2, ..., t^{trunc-2}."""
    return TLaurent.from_ring(rs_cos(T_GEN, T_GEN, trunc), trunc).coeffs


def q_to_t(p: QLaurent, trunc: int) -> TLaurent:
    """Substitute Q = e^{it}: Q^n + Q^{-n} -> 2cos(nt), expanded below t^trunc."""
    if not p.is_symmetric():
        raise SymmetryViolationError("Q-polynomial is not symmetric under Q -> 1/Q; odd powers of t would appear")
    trunc = _even_up(trunc)
    items = list(p.items())
    cos = _cos_coeffs(trunc)
    out = [cos[e // 2] * sum((c * n ** e for n, c in items), Fraction(0)) for e in range(0, trunc, 2)]
    return TLaurent(0, out, trunc)


@lru_cache(maxsize=None)
def sinc_half_power(m: int, trunc: int) -> TLaurent:
    """(2 sin(t/2) / t)^m for any integer m, known below t^trunc."""
    trunc = _even_up(trunc)
    sine = rs_sin(T_GEN * QQ(1, 2), T_GEN, trunc + 1)
    u = mul_xin(2 * sine, 0, -1)
    return TLaurent.from_ring(rs_pow(u, m, T_GEN, trunc), trunc)
