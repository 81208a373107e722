# src/structure_solver.py
"""
Elementary-count extraction.

A GW series is written uniquely as GW = sum e_{A,g} GW^elem_g(q^A, t).
Since GW^elem_g(q^A) = t^{2g-2} q^A (1 + higher order), the e_{A,g} come out
of a triangular elimination in ascending (area, coords, genus); the BPS
numbers then follow from n_{A,h} = sum_{dB=A} sum_g e_{B,g} n_{d,h}(g).
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from errors import IncompleteLocalDataError, InternalConsistencyError
from elem_series import LocalBps, elem_coefficient, gw_elem_t, local_bps
from gv_transform import BpsTable, resolve_trunc, bps_invert
from novikov import HClass, NovikovSeries, level

logger = logging.getLogger(__name__)


class ElemCounts(NovikovSeries):
    """e_{A,g}; integrality is reported per term, never assumed."""

    label = "genus"

    def verdicts(self) -> dict[tuple[HClass, int], bool]:
        return {key: Fraction(c).denominator == 1 for key, c in self.items()}


def _max_degree(series: NovikovSeries) -> int:
    return max((series.lattice.max_multiple(A, series.energy) for A in series.classes()), default=1)


def _prefetch(genera: range, D: int, T: int) -> None:
    for g in genera:
        gw_elem_t(g, D, T)


def solve_elem_counts(gw: NovikovSeries, T: int | None = None) -> ElemCounts:
    G = gw.genus_bound
    T = resolve_trunc(G, T)
    lattice = gw.lattice
    _prefetch(range(G + 1), _max_degree(gw), T)

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
        top = lattice.max_multiple(A, gw.energy)
        for g in range(G + 1):
            e = residual.get((A, g), Fraction(0))
            if not e:
                continue
            out[(A, g)] = e
            logger.debug("e_{%s,%d} = %s (level %d)", list(A.coords), g, e, level(A, g))
            for d in range(1, top + 1):
                dA = A * d
                for gp in range(g + 1 if d == 1 else 0, G + 1):
                    c = elem_coefficient(g, d, gp, T)
                    if c:
                        residual[(dA, gp)] = residual.get((dA, gp), Fraction(0)) - e * c
                if d > 1:
                    heapq.heappush(heap, (lattice.sort_key(dA), dA))

    logger.info("solve_elem_counts: %d GW terms -> %d elementary counts", len(gw), len(out))
    return ElemCounts(lattice, gw.energy, G, out)


def synthesize(e: NovikovSeries, energy=None, genus_bound: int | None = None, T: int | None = None) -> NovikovSeries:
    """GW = sum e_{A,g} GW^elem_g(q^A, t), truncated to the window."""
    energy = e.energy if energy is None else Fraction(energy)
    G = e.genus_bound if genus_bound is None else genus_bound
    T = resolve_trunc(G, T)
    lattice = e.lattice
    D = max((lattice.max_multiple(A, energy) for A in e.classes()), default=1)
    _prefetch(range(G + 1), max(D, 1), T)
    out: dict[tuple[HClass, int], Fraction] = {}
    for (A, g), v in e.items():
        if g > G:
            continue
        for d in range(1, lattice.max_multiple(A, energy) + 1):
            for gp in range(G + 1):
                c = elem_coefficient(g, d, gp, T)
                if c:
                    key = (A * d, gp)
                    out[key] = out.get(key, Fraction(0)) + Fraction(v) * c
    return NovikovSeries(lattice, energy, G, out)


def assemble_bps(
    e: ElemCounts,
    local: Mapping[int, LocalBps] | None = None,
    D_local: int | None = None,
    T: int | None = None,
) -> BpsTable:
    """n_{A,h} = sum_{dB=A} sum_{g<=h} e_{B,g} n_{d,h}(g)."""
    H = e.genus_bound
    lattice = e.lattice
    D_needed = _max_degree(e)
    if local is None:
        D_local = D_needed if D_local is None else D_local
        T = resolve_trunc(H, T)
        genera = sorted({g for (_, g), _c in e.items()})
        local = {g: local_bps(g, D_local, T=T, h_max=H) for g in genera}

    out: dict[tuple[HClass, int], Fraction] = {}
    for (B, g), v in e.items():
        table = local.get(g)
        top = lattice.max_multiple(B, e.energy)
        if table is None or table.q_degree < top or table.h_max < H:
            raise IncompleteLocalDataError(
                f"local BPS numbers for genus {g} are needed up to d={top}, h={H}"
            )
        for d in range(1, top + 1):
            for h in range(g, H + 1):
                n = table.value(d, h)
                if n:
                    key = (B * d, h)
                    out[key] = out.get(key, Fraction(0)) + Fraction(v) * n
    return BpsTable(lattice, e.energy, H, out)


@dataclass
class PipelineReport:
    elem_counts: ElemCounts
    bps: BpsTable
    bps_direct: BpsTable
    cross_check: str
    violations: list[dict] = field(default_factory=list)

    @property
    def integral(self) -> bool:
        return self.elem_counts.is_integral() and self.bps.is_integral()


def full_pipeline(gw: NovikovSeries, T: int | None = None, strict: bool = True) -> PipelineReport:
    """Solve for e, assemble n from it, and cross-check against the direct inversion."""
    T = resolve_trunc(gw.genus_bound, T)
    e = solve_elem_counts(gw, T)
    assembled = assemble_bps(e, T=T)
    direct = bps_invert(gw, T)
    cross_check = "agree" if assembled == direct else "disagree"
    if cross_check == "disagree":
        logger.error("assembled and directly inverted BPS tables differ")
        if strict:
            raise InternalConsistencyError("assembled and directly inverted BPS tables differ")

    violations: list[dict] = []
    for (A, g) in e.non_integral():
        violations.append({"class": A, "index": g, "value": e.coeff(A, g), "rule": "elem_count_integrality"})
    for (A, h) in assembled.non_integral():
        violations.append({"class": A, "index": h, "value": assembled.coeff(A, h), "rule": "bps_integrality"})
    for item in violations:
        logger.warning("%s: class %s index %d value %s", item["rule"], list(item["class"].coords), item["index"], item["value"])
    return PipelineReport(e, assembled, direct, cross_check, violations)
