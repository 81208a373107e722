# src/cli/commands.py
"""Command handlers. Each returns the process exit code (0 ok, 1 report-level violations)."""

import logging
import sys
from argparse import Namespace

from pydantic import BaseModel

from elem_series import check_local_bps, gw_elem, local_bps, z_elem
from exact_arith import parse_rational
from gv_transform import (
    bps_forward,
    bps_invert,
    dimension_violations,
    expected_dimension,
    fano_dimension_violations,
    fano_invert,
    genus_zero_invert,
)
from schemas import (
    BpsDocument,
    DimensionReport,
    FanoDocument,
    FanoReport,
    GenusZeroDocument,
    SeriesDocument,
    am_report_from,
    bps_from_document,
    bps_to_document,
    check_report_from,
    dimension_violation_doc,
    dump_document,
    elem_series_to_document,
    fano_from_document,
    load_document,
    local_bps_to_document,
    series_from_document,
    series_to_document,
    solve_report_from,
)
from structure_solver import full_pipeline

logger = logging.getLogger(__name__)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _emit(doc: BaseModel, args: Namespace, report: bool = False) -> None:
    """Artifacts always go out; reports are skipped on stdout with --quiet."""
    text = dump_document(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        return
    if report and args.quiet:
        return
    sys.stdout.write(text + "\n")


# ======== elem ========

def cmd_elem(args: Namespace) -> int:
    if args.series == "local":
        local = local_bps(args.genus, args.qdeg, T=args.trunc)
        _emit(local_bps_to_document(local), args)
        return 0
    build = z_elem if args.series == "z" else gw_elem
    series = build(args.genus, args.qdeg, args.backend, args.trunc)
    _emit(elem_series_to_document(series), args)
    return 0


# ======== bps ========

def cmd_bps(args: Namespace) -> int:
    text = _read_input(args.input)
    if args.invert:
        gw = series_from_document(load_document(text, SeriesDocument))
        table = bps_invert(gw, args.trunc)
        _emit(bps_to_document(table), args)
        if not table.is_integral():
            logger.warning("%d non-integral BPS numbers", len(table.non_integral()))
            return 1
        return 0
    table = bps_from_document(load_document(text, BpsDocument))
    energy = parse_rational(args.energy) if args.energy is not None else None
    gw = bps_forward(table, energy, args.genus_max, args.trunc)
    _emit(series_to_document(gw), args)
    return 0


# ======== solve ========

def cmd_solve(args: Namespace) -> int:
    gw = series_from_document(load_document(_read_input(args.input), SeriesDocument))
    report = full_pipeline(gw, args.trunc, strict=False)
    _emit(solve_report_from(report), args, report=True)
    ok = report.integral and report.cross_check == "agree"
    return 0 if ok else 1


# ======== check ========

def cmd_check(args: Namespace) -> int:
    report = check_local_bps(args.genus, args.qdeg, h_max=args.h_max)
    _emit(check_report_from(report), args, report=True)
    return 0 if report.passed else 1


# ======== fano ========

def cmd_fano(args: Namespace) -> int:
    doc = load_document(_read_input(args.input), FanoDocument)
    cy, fano = fano_from_document(doc)
    cy_table = bps_invert(cy, args.trunc)
    fano_table = fano_invert(fano, args.trunc)
    violations = dimension_violations(cy, doc.chern, 6, doc.insertions) + fano_dimension_violations(fano)
    report = FanoReport(
        calabi_yau=bps_to_document(cy_table),
        fano=bps_to_document(fano_table),
        violations=[dimension_violation_doc(v) for v in violations],
    )
    _emit(report, args, report=True)
    ok = not violations and cy_table.is_integral() and fano_table.is_integral()
    return 0 if ok else 1


# ======== am ========

def cmd_am(args: Namespace) -> int:
    doc = load_document(_read_input(args.input), GenusZeroDocument)
    gw0 = series_from_document(doc)
    result = genus_zero_invert(gw0, doc.chern, args.insertions, args.dim_x, doc.insertions)
    _emit(am_report_from(result, gw0.energy), args, report=True)
    return 0 if result.integral and not result.violations else 1


# ======== dim ========

def cmd_dim(args: Namespace) -> int:
    iota = expected_dimension(args.c1, args.dim_x, args.genus, args.insertion_dims)
    _emit(
        DimensionReport(c1=args.c1, dim_x=args.dim_x, genus=args.genus, insertions=args.insertion_dims, iota=iota),
        args,
        report=True,
    )
    return 0


COMMANDS = {
    "elem": cmd_elem,
    "bps": cmd_bps,
    "solve": cmd_solve,
    "check": cmd_check,
    "fano": cmd_fano,
    "am": cmd_am,
    "dim": cmd_dim,
}
