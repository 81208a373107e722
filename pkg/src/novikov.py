# src/novikov.py
"""
Homology-class bookkeeping and the truncated Novikov-series container.

Classes are abstract integer vectors; the lattice carries the positive
area weights ω. A series stores (class, genus) -> coefficient for every term
with ω(A) <= energy and genus <= genus_bound (both bounds inclusive).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Any, Callable, Iterable, Iterator, Mapping

from sympy import divisors, factorint

from errors import DomainError, IncompatibleContextError, TruncationUnsoundError

logger = logging.getLogger(__name__)


# ============================================================
# CLASSES
# ============================================================

@dataclass(frozen=True, order=True)
class HClass:
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        if not coords:
            raise DomainError("a class needs rank >= 1")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords: int) -> "HClass":
        return cls(tuple(coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __mul__(self, k: int) -> "HClass":
        return HClass(tuple(k * c for c in self.coords))

    __rmul__ = __mul__

    def __add__(self, other: "HClass") -> "HClass":
        if self.rank != other.rank:
            raise IncompatibleContextError("classes of different rank")
        return HClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def divide(self, k: int) -> "HClass":
        if any(c % k for c in self.coords):
            raise DomainError(f"{list(self.coords)} is not divisible by {k}")
        return HClass(tuple(c // k for c in self.coords))

    def __repr__(self) -> str:
        return f"HClass{self.coords}"


def degree(A: HClass) -> int:
    """Largest k with A = kB, B integral: the gcd of the coordinates."""
    if A.is_zero():
        raise DomainError("the zero class has no degree")
    d = 0
    for c in A.coords:
        d = gcd(d, c)
    return d


def big_omega(d: int) -> int:
    """Number of prime factors of d counted with multiplicity."""
    if d < 1:
        raise DomainError(f"big_omega needs d >= 1 (got {d})")
    return sum(factorint(d).values())


def level(A: HClass, g: int) -> int:
    if g < 0:
        raise DomainError(f"negative genus {g}")
    return big_omega(degree(A)) + g


def divisor_pairs(A: HClass) -> list[tuple[int, HClass]]:
    """All (d, B) with dB = A, ascending in d; (1, A) comes first."""
    return [(k, A.divide(k)) for k in divisors(degree(A))]


# ============================================================
# LATTICE
# ============================================================

@dataclass(frozen=True)
class Lattice:
    """Shared context of a series: the rank and the area form ω."""

    area_weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        weights = tuple(Fraction(w) for w in self.area_weights)
        if not weights:
            raise DomainError("lattice rank must be >= 1")
        if any(w <= 0 for w in weights):
            raise DomainError("area weights must be positive")
        object.__setattr__(self, "area_weights", weights)

    @classmethod
    def rank_one(cls) -> "Lattice":
        return cls((Fraction(1),))

    @property
    def rank(self) -> int:
        return len(self.area_weights)

    def check(self, A: HClass) -> None:
        if A.rank != self.rank:
            raise IncompatibleContextError(f"class {list(A.coords)} has rank {A.rank}, lattice has rank {self.rank}")

    def area(self, A: HClass) -> Fraction:
        self.check(A)
        return sum((w * c for w, c in zip(self.area_weights, A.coords)), Fraction(0))

    def sort_key(self, A: HClass) -> tuple[Fraction, tuple[int, ...]]:
        """Elimination order: ascending area, then lexicographic coordinates."""
        return self.area(A), A.coords

    def max_multiple(self, A: HClass, energy: Fraction) -> int:
        """Largest k with ω(kA) <= energy."""
        return floor(Fraction(energy) / self.area(A))


# ============================================================
# SERIES
# ============================================================

TermKey = tuple[HClass, int]


def _is_zero(c: Any) -> bool:
    return not c


class NovikovSeries:
    """
    Finitely supported (HClass, genus) -> coefficient map below (energy, genus_bound).

    Coefficients are usually Fractions; any ring element with +, * and
    truthiness works (QLaurent / TLaurent for elementary data).

    The window is divisor closed: if A = dB lies inside it, area(B) = area(A) / d
    does too, so triangular solves over divisors never leave it.
    """

    label = "genus"

    def __init__(
        self,
        lattice: Lattice,
        energy: Fraction | int | str,
        genus_bound: int,
        terms: Mapping[TermKey, Any] | Iterable[tuple[TermKey, Any]] = (),
    ):
        energy = Fraction(energy)
        if energy <= 0:
            raise DomainError(f"energy bound must be positive (got {energy})")
        if genus_bound < 0:
            raise DomainError(f"{self.label} bound must be >= 0 (got {genus_bound})")
        self.lattice = lattice
        self.energy = energy
        self.genus_bound = int(genus_bound)
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[TermKey, Any] = {}
        for (A, g), c in items:
            if _is_zero(c):
                continue
            self._check_term(A, g)
            clean[(A, int(g))] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: self.term_key(kv[0])))

    def _check_term(self, A: HClass, g: int) -> None:
        area = self.lattice.area(A)
        if area <= 0:
            raise DomainError(f"class {list(A.coords)} has non-positive area {area}")
        if g < 0:
            raise DomainError(f"negative {self.label} {g} at class {list(A.coords)}")
        if area > self.energy or g > self.genus_bound:
            raise TruncationUnsoundError(
                f"term ({list(A.coords)}, {self.label}={g}) lies outside the window "
                f"E={self.energy}, {self.label}<={self.genus_bound}"
            )

    def term_key(self, key: TermKey) -> tuple:
        A, g = key
        return self.lattice.area(A), A.coords, g

    def _new(self, energy: Fraction, genus_bound: int, terms: Mapping[TermKey, Any]) -> "NovikovSeries":
        return type(self)(self.lattice, energy, genus_bound, terms)

    # ---- access ----

    def coeff(self, A: HClass, g: int) -> Any:
        return self._terms.get((A, g), Fraction(0))

    def items(self) -> Iterator[tuple[TermKey, Any]]:
        return iter(self._terms.items())

    def terms(self) -> dict[TermKey, Any]:
        return dict(self._terms)

    def classes(self) -> list[HClass]:
        seen: dict[HClass, None] = {}
        for A, _ in self._terms:
            seen.setdefault(A, None)
        return list(seen)

    def genera(self, A: HClass) -> list[int]:
        return [g for (B, g) in self._terms if B == A]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.energy == other.energy
            and self.genus_bound == other.genus_bound
            and self._terms == other._terms
        )

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(rank={self.lattice.rank}, E={self.energy}, "
            f"{self.label}<={self.genus_bound}, terms={len(self._terms)})"
        )

    # ---- ring operations ----

    def check_compatible(self, other: "NovikovSeries") -> None:
        if self.lattice != other.lattice:
            raise IncompatibleContextError("series live on different lattices (rank or area weights differ)")

    def add(self, other: "NovikovSeries") -> "NovikovSeries":
        self.check_compatible(other)
        energy = min(self.energy, other.energy)
        bound = min(self.genus_bound, other.genus_bound)
        out: dict[TermKey, Any] = {}
        for src in (self, other):
            for (A, g), c in src.items():
                if self.lattice.area(A) <= energy and g <= bound:
                    out[(A, g)] = out[(A, g)] + c if (A, g) in out else c
        return self._new(energy, bound, out)

    def scale(self, c: Fraction | int) -> "NovikovSeries":
        return self.map_coeffs(lambda v: v * c)

    def map_coeffs(self, fn: Callable[[Any], Any]) -> "NovikovSeries":
        return self._new(self.energy, self.genus_bound, {k: fn(v) for k, v in self._terms.items()})

    def truncate(self, energy: Fraction | int | None = None, genus_bound: int | None = None) -> "NovikovSeries":
        """Drop terms above the new bounds; bounds only ever shrink."""
        new_e = self.energy if energy is None else min(self.energy, Fraction(energy))
        new_g = self.genus_bound if genus_bound is None else min(self.genus_bound, genus_bound)
        kept = {
            (A, g): c
            for (A, g), c in self._terms.items()
            if self.lattice.area(A) <= new_e and g <= new_g
        }
        return self._new(new_e, new_g, kept)

    def __add__(self, other: "NovikovSeries") -> "NovikovSeries":
        return self.add(other)

    # ---- checks ----

    def non_integral(self) -> list[TermKey]:
        return [k for k, c in self._terms.items() if isinstance(c, Fraction) and c.denominator != 1]

    def is_integral(self) -> bool:
        return not self.non_integral()


def series_add(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    return a.add(b)


def series_scale(s: NovikovSeries, c: Fraction | int) -> NovikovSeries:
    return s.scale(c)


def series_truncate(s: NovikovSeries, energy: Fraction | int | None = None, genus_bound: int | None = None) -> NovikovSeries:
    return s.truncate(energy, genus_bound)
