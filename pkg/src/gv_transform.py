# src/gv_transform.py
"""
Gopakumar-Vafa (BPS) transform and its variants.

    sum GW_{A,g} t^{2g-2} q^A = sum n_{A,h} sum_k 1/k (2 sin(kt/2))^{2h-2} q^{kA}      (Calabi-Yau)
    sum GW_{A,g} t^{2g-2} q^A = sum n_{A,g} (2 sin(t/2))^{c1(A)+2g-2} t^{-c1(A)} q^A   (Fano)
    sum GW_{A,0} q^A          = sum n_{A,0} sum_d d^{k-3} q^{dA}                     (genus 0, c1(A) = 0, k insertions)
    GW_{A,0}                  = n_{A,0}                                            (genus 0, c1(A) > 0)
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from config import DEFAULT_T_SLACK
from errors import DomainError, IncompatibleContextError, InternalConsistencyError, InvalidTruncationError
from exact_arith import sin_half_power, sinc_half_power
from novikov import HClass, Lattice, NovikovSeries
from workers import parallel_map

logger = logging.getLogger(__name__)


class BpsTable(NovikovSeries):
    """n_{A,h}; same container as a GW series, indexed by h instead of genus."""

    label = "h"


def default_trunc(G: int) -> int:
    return 2 * G + 2 + DEFAULT_T_SLACK


def resolve_trunc(G: int, T: int | None) -> int:
    T = default_trunc(G) if T is None else T + (T % 2)
    if T < 2 * G + 2:
        raise InvalidTruncationError(f"t-order {T} cannot resolve genus up to {G} (need {2 * G + 2})")
    return T


# ============================================================
# TRIANGULAR SYSTEMS
# ============================================================

def _require_unit_lower_triangular(M: Sequence[Sequence[Fraction]], what: str) -> None:
    for i, row in enumerate(M):
        if row[i] != 1 or any(row[j] for j in range(i + 1, len(row))):
            raise InternalConsistencyError(f"{what} is not unit lower-triangular at row {i}")


@lru_cache(maxsize=None)
def triangular_matrix(G: int, T: int) -> tuple[tuple[Fraction, ...], ...]:
    """M[g][h] = coefficient of t^{2g-2} in (2 sin(t/2))^{2h-2}, for g, h = 0..G."""
    T = resolve_trunc(G, T)
    columns = [sin_half_power(1, h, T) for h in range(G + 1)]
    M = tuple(tuple(columns[h].coeff(2 * g - 2) for h in range(G + 1)) for g in range(G + 1))
    _require_unit_lower_triangular(M, "h-system")
    return M


def _forward_substitute(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    x: list[Fraction] = []
    for g, r in enumerate(rhs):
        x.append(r - sum((M[g][h] * x[h] for h in range(g)), Fraction(0)))
    return x


# ============================================================
# CALABI-YAU TRANSFORM
# ============================================================

def bps_forward(n: BpsTable, E: Fraction | int | None = None, G: int | None = None, T: int | None = None) -> NovikovSeries:
    """GW_{A,g} = sum over kB = A, h of n_{B,h}/k [t^{2g-2}] (2 sin(kt/2))^{2h-2}."""
    E = n.energy if E is None else min(Fraction(E), n.energy)
    G = n.genus_bound if G is None else G
    T = resolve_trunc(G, T)
    lattice = n.lattice
    out: dict[tuple[HClass, int], Fraction] = {}
    for (B, h), c in n.items():
        if h > G or lattice.area(B) > E:
            continue
        for k in range(1, lattice.max_multiple(B, E) + 1):
            s = sin_half_power(k, h, T)
            A = B * k
            for g in range(h, G + 1):
                v = s.coeff(2 * g - 2)
                if v:
                    out[(A, g)] = out.get((A, g), Fraction(0)) + c * v / k
    logger.info("bps_forward: %d BPS terms -> %d GW terms", len(n), len(out))
    return NovikovSeries(lattice, E, G, out)


def bps_invert(gw: NovikovSeries, T: int | None = None) -> BpsTable:
    """
    Unique BpsTable with bps_forward(result) == gw inside the window.

    Classes are solved in ascending (area, coords); multiple-cover contributions of a
    solved class are subtracted from its multiples before those are reached.
    """
    G = gw.genus_bound
    T = resolve_trunc(G, T)
    lattice = gw.lattice
    M = triangular_matrix(G, T)

    residual: dict[tuple[HClass, int], Fraction] = {key: Fraction(c) for key, c in gw.items()}
    heap = [(lattice.sort_key(A), A) for A in gw.classes()]
    heapq.heapify(heap)
    done: set[HClass] = set()
    out: dict[tuple[HClass, int], Fraction] = {}

    while heap:
        _, A = heapq.heappop(heap)
        if A in done:
            continue
        done.add(A)
        rhs = [residual.get((A, g), Fraction(0)) for g in range(G + 1)]
        solved = _forward_substitute(M, rhs)
        for h, v in enumerate(solved):
            if not v:
                continue
            out[(A, h)] = v
            for k in range(2, lattice.max_multiple(A, gw.energy) + 1):
                s = sin_half_power(k, h, T)
                kA = A * k
                for g in range(h, G + 1):
                    w = s.coeff(2 * g - 2)
                    if w:
                        residual[(kA, g)] = residual.get((kA, g), Fraction(0)) - v * w / k
                heapq.heappush(heap, (lattice.sort_key(kA), kA))
        logger.debug("bps_invert: solved class %s", list(A.coords))

    logger.info("bps_invert: %d GW terms -> %d BPS terms", len(gw), len(out))
    return BpsTable(lattice, gw.energy, G, out)


# ============================================================
# FANO TRANSFORM
# ============================================================

class FanoSeries(NovikovSeries):
    """GW series over classes with c1(A) > 0, for one fixed insertion list."""

    def __init__(
        self,
        lattice: Lattice,
        energy: Fraction | int | str,
        genus_bound: int,
        terms: Mapping | Iterable = (),
        chern: Sequence[int] = (),
        insertions: Sequence[int] = (),
    ):
        self.chern = tuple(int(c) for c in chern)
        if len(self.chern) != lattice.rank:
            raise IncompatibleContextError(f"chern form has rank {len(self.chern)}, lattice has rank {lattice.rank}")
        self.insertions = tuple(int(x) for x in insertions)
        super().__init__(lattice, energy, genus_bound, terms)

    def c1(self, A: HClass) -> int:
        return chern_number(self.chern, A)

    def _check_term(self, A: HClass, g: int) -> None:
        super()._check_term(A, g)
        if self.c1(A) <= 0:
            raise DomainError(f"class {list(A.coords)} has c1 = {self.c1(A)}; the Fano transform needs c1 > 0")

    def _new(self, energy, genus_bound, terms) -> "FanoSeries":
        return FanoSeries(self.lattice, energy, genus_bound, terms, self.chern, self.insertions)


def chern_number(chern: Sequence[int], A: HClass) -> int:
    if len(chern) != A.rank:
        raise IncompatibleContextError("chern form and class have different rank")
    return sum(c * a for c, a in zip(chern, A.coords))


@lru_cache(maxsize=None)
def fano_matrix(c1: int, G: int, T: int) -> tuple[tuple[Fraction, ...], ...]:
    """M[g'][g] = coefficient of t^{2g'-2} in (2 sin(t/2))^{c1+2g-2} t^{-c1}."""
    rows = []
    for gp in range(G + 1):
        rows.append(tuple(
            sinc_half_power(c1 + 2 * g - 2, T).coeff(2 * (gp - g)) if g <= gp else Fraction(0)
            for g in range(G + 1)
        ))
    M = tuple(rows)
    _require_unit_lower_triangular(M, f"Fano system (c1={c1})")
    return M


def fano_invert(f: FanoSeries, T: int | None = None) -> BpsTable:
    """Per-class triangular solve; classes never mix."""
    G = f.genus_bound
    T = resolve_trunc(G, T)

    def solve(A: HClass) -> list[tuple[tuple[HClass, int], Fraction]]:
        M = fano_matrix(f.c1(A), G, T)
        rhs = [Fraction(f.coeff(A, g)) for g in range(G + 1)]
        return [((A, g), v) for g, v in enumerate(_forward_substitute(M, rhs)) if v]

    out: dict[tuple[HClass, int], Fraction] = {}
    for chunk in parallel_map(solve, f.classes()):
        out.update(chunk)
    logger.info("fano_invert: %d classes, %d BPS terms", len(f.classes()), len(out))
    return BpsTable(f.lattice, f.energy, G, out)


def fano_forward(
    n: BpsTable,
    chern: Sequence[int],
    T: int | None = None,
    insertions: Sequence[int] = (),
) -> FanoSeries:
    G = n.genus_bound
    T = resolve_trunc(G, T)
    out: dict[tuple[HClass, int], Fraction] = {}
    for (A, g), c in n.items():
        c1 = chern_number(chern, A)
        if c1 <= 0:
            raise DomainError(f"class {list(A.coords)} has c1 = {c1}; the Fano transform needs c1 > 0")
        M = fano_matrix(c1, G, T)
        for gp in range(g, G + 1):
            if M[gp][g]:
                out[(A, gp)] = out.get((A, gp), Fraction(0)) + c * M[gp][g]
    return FanoSeries(n.lattice, n.energy, G, out, chern, insertions)


def split_by_chern(series: NovikovSeries, chern: Sequence[int], insertions: Sequence[int] = ()) -> tuple[NovikovSeries, FanoSeries]:
    """Calabi-Yau part (c1 = 0) and Fano part (c1 > 0); c1 < 0 terms must vanish."""
    cy: dict = {}
    fano: dict = {}
    for (A, g), c in series.items():
        c1 = chern_number(chern, A)
        if c1 < 0:
            raise DomainError(f"class {list(A.coords)} has c1 = {c1} < 0 but a non-zero invariant")
        (cy if c1 == 0 else fano)[(A, g)] = c
    return (
        NovikovSeries(series.lattice, series.energy, series.genus_bound, cy),
        FanoSeries(series.lattice, series.energy, series.genus_bound, fano, chern, insertions),
    )


# ============================================================
# DIMENSION
# ============================================================

def expected_dimension(c1A: int, dim_x: int, g: int, insertion_dims: Sequence[int] = ()) -> int:
    """iota = 2 c1(A) + (dim X - 6)(1 - g) + 2k - sum dim(gamma_i)."""
    if dim_x < 6 or dim_x % 2:
        raise DomainError(f"dim X must be an even integer >= 6 (got {dim_x})")
    if any(d < 2 for d in insertion_dims):
        raise DomainError("insertion classes of dimension < 2 pair to zero")
    k = len(insertion_dims)
    return 2 * c1A + (dim_x - 6) * (1 - g) + 2 * k - sum(insertion_dims)


@dataclass(frozen=True)
class DimensionViolation:
    cls: HClass
    genus: int
    value: Fraction
    iota: int
    rule: str = "dimension"


def dimension_violations(
    series: NovikovSeries,
    chern: Sequence[int],
    dim_x: int = 6,
    insertion_dims: Sequence[int] = (),
) -> list[DimensionViolation]:
    """Non-zero coefficients sitting on a moduli space of non-zero expected dimension."""
    found = []
    for (A, g), c in series.items():
        iota = expected_dimension(chern_number(chern, A), dim_x, g, insertion_dims)
        if iota:
            found.append(DimensionViolation(A, g, Fraction(c), iota))
            logger.warning("class %s genus %d: expected dimension %d, coefficient %s", list(A.coords), g, iota, c)
    return found


def fano_dimension_violations(f: FanoSeries, dim_x: int = 6) -> list[DimensionViolation]:
    return dimension_violations(f, f.chern, dim_x, f.insertions)


# ============================================================
# ASPINWALL-MORRISON (GENUS 0)
# ============================================================

def _am_weight(d: int, k: int) -> Fraction:
    return Fraction(d) ** (k - 3)


def am_invert(gw0: NovikovSeries, k: int) -> dict[HClass, Fraction]:
    """n_{A,0} = GW_{A,0} - sum_{dB = A, d >= 2} n_{B,0} d^{k-3}, ascending in area."""
    if k < 0:
        raise DomainError(f"insertion count must be >= 0 (got {k})")
    if any(g for (_, g), _c in gw0.items()):
        raise DomainError("the Aspinwall-Morrison transform takes genus-0 data only")
    lattice = gw0.lattice
    residual: dict[HClass, Fraction] = {A: Fraction(c) for (A, _), c in gw0.items()}
    heap = [(lattice.sort_key(A), A) for A in residual]
    heapq.heapify(heap)
    done: set[HClass] = set()
    out: dict[HClass, Fraction] = {}
    while heap:
        _, A = heapq.heappop(heap)
        if A in done:
            continue
        done.add(A)
        v = residual.get(A, Fraction(0))
        if not v:
            continue
        out[A] = v
        for d in range(2, lattice.max_multiple(A, gw0.energy) + 1):
            dA = A * d
            residual[dA] = residual.get(dA, Fraction(0)) - v * _am_weight(d, k)
            heapq.heappush(heap, (lattice.sort_key(dA), dA))
    return dict(sorted(out.items(), key=lambda kv: lattice.sort_key(kv[0])))


def am_forward(n: Mapping[HClass, Fraction], lattice: Lattice, energy: Fraction | int, k: int) -> NovikovSeries:
    energy = Fraction(energy)
    out: dict[tuple[HClass, int], Fraction] = {}
    for A, c in n.items():
        if not c or lattice.area(A) > energy:
            continue
        for d in range(1, lattice.max_multiple(A, energy) + 1):
            key = (A * d, 0)
            out[key] = out.get(key, Fraction(0)) + Fraction(c) * _am_weight(d, k)
    return NovikovSeries(lattice, energy, 0, out)


@dataclass
class GenusZeroInversion:
    bps: dict[HClass, Fraction]
    chern: tuple[int, ...]
    insertions: int
    insertion_dims: tuple[int, ...]
    dim_x: int
    violations: list[DimensionViolation] = field(default_factory=list)

    def c1(self, A: HClass) -> int:
        return chern_number(self.chern, A)

    @property
    def integral(self) -> bool:
        return all(c.denominator == 1 for c in self.bps.values())


def genus_zero_invert(
    gw0: NovikovSeries,
    chern: Sequence[int] | None = None,
    k: int | None = None,
    dim_x: int = 6,
    insertion_dims: Sequence[int] | None = None,
) -> GenusZeroInversion:
    """
    Genus-0 GV transform with k insertions: Aspinwall-Morrison on c1 = 0 classes,
    n_{A,0} = GW_{A,0} on c1 > 0 classes.

    Without explicit insertion dimensions the k insertions are divisors.
    """
    if insertion_dims is None:
        if k is None:
            raise DomainError("give the insertion count or the insertion dimensions")
        dims = (2,) * k
    else:
        dims = tuple(int(x) for x in insertion_dims)
        if k is None:
            k = len(dims)
        elif k != len(dims):
            raise DomainError(f"{len(dims)} insertion dimensions for {k} insertions")
    if k < 0:
        raise DomainError(f"insertion count must be >= 0 (got {k})")
    if any(g for (_, g), _c in gw0.items()):
        raise DomainError("the genus-0 transform takes genus-0 data only")
    chern = tuple(chern) if chern is not None else (0,) * gw0.lattice.rank
    cy, fano = split_by_chern(gw0, chern, dims)
    table = am_invert(cy, k)
    table.update({A: Fraction(c) for (A, _), c in fano.items()})
    lattice = gw0.lattice
    bps = dict(sorted(table.items(), key=lambda kv: lattice.sort_key(kv[0])))
    n = NovikovSeries(lattice, gw0.energy, 0, {(A, 0): c for A, c in bps.items()})
    violations = dimension_violations(n, chern, dim_x, dims)
    logger.info("genus_zero_invert: %d Calabi-Yau and %d Fano classes, k=%d", len(cy.classes()), len(fano.classes()), k)
    return GenusZeroInversion(bps, chern, k, dims, dim_x, violations)
