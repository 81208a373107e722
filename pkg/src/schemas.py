# src/schemas.py
"""
JSON documents (pydantic models) and converters to/from the domain objects.

Rationals always travel as strings "p/q" or "p".
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from errors import SchemaError
from exact_arith import QLaurent, TLaurent, format_rational, parse_rational
from elem_series import ElemSeries, LocalBps, LocalBpsReport
from gv_transform import BpsTable, DimensionViolation, FanoSeries, GenusZeroInversion, split_by_chern
from novikov import HClass, Lattice, NovikovSeries, level
from structure_solver import ElemCounts, PipelineReport

RATIONAL_PATTERN = r"^-?\d+(/\d+)?$"

M = TypeVar("M", bound=BaseModel)


def _no_zero_denominator(v: str) -> str:
    if "/" in v and int(v.split("/")[1]) == 0:
        raise ValueError(f"zero denominator in {v!r}")
    return v


class _Doc(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")


# ============================================================
# SERIES DOCUMENTS
# ============================================================

class SeriesTerm(_Doc):
    coords: list[int] = Field(..., alias="class", min_length=1)
    genus: int = Field(..., ge=0)
    coeff: str = Field(..., pattern=RATIONAL_PATTERN)

    @field_validator("coeff")
    @classmethod
    def coeff_has_denominator(cls, v: str) -> str:
        return _no_zero_denominator(v)


class BpsTerm(_Doc):
    coords: list[int] = Field(..., alias="class", min_length=1)
    h: int = Field(..., ge=0)
    coeff: str = Field(..., pattern=RATIONAL_PATTERN)

    @field_validator("coeff")
    @classmethod
    def coeff_has_denominator(cls, v: str) -> str:
        return _no_zero_denominator(v)


class _WindowDoc(_Doc):
    rank: int = Field(..., ge=1)
    area_weights: list[str]
    energy: str = Field(..., pattern=RATIONAL_PATTERN)
    genus_max: int = Field(..., ge=0)

    @field_validator("area_weights")
    @classmethod
    def weights_are_rationals(cls, v: list[str]) -> list[str]:
        for w in v:
            parse_rational(w)
        return v

    @field_validator("energy")
    @classmethod
    def energy_has_denominator(cls, v: str) -> str:
        return _no_zero_denominator(v)

    @model_validator(mode="after")
    def ranks_match(self):
        if len(self.area_weights) != self.rank:
            raise ValueError(f"area_weights has {len(self.area_weights)} entries, rank is {self.rank}")
        for term in getattr(self, "terms", []):
            if len(term.coords) != self.rank:
                raise ValueError(f"class {term.coords} does not have rank {self.rank}")
        return self


class SeriesDocument(_WindowDoc):
    terms: list[SeriesTerm] = []


class BpsDocument(_WindowDoc):
    terms: list[BpsTerm] = []


class FanoDocument(SeriesDocument):
    chern: list[int]
    insertions: list[int] = []

    @model_validator(mode="after")
    def chern_rank_matches(self):
        if len(self.chern) != self.rank:
            raise ValueError(f"chern has {len(self.chern)} entries, rank is {self.rank}")
        return self


class GenusZeroDocument(SeriesDocument):
    """Genus-0 input; no chern form means every class has c1 = 0, no insertion dims means divisors."""

    chern: Optional[list[int]] = None
    insertions: Optional[list[int]] = None

    @model_validator(mode="after")
    def chern_rank_matches(self):
        if self.chern is not None and len(self.chern) != self.rank:
            raise ValueError(f"chern has {len(self.chern)} entries, rank is {self.rank}")
        return self


def load_document(text: str, model: Type[M]) -> M:
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise SchemaError(f"{model.__name__}: {e.errors(include_url=False)}") from e


def dump_document(doc: BaseModel) -> str:
    return doc.model_dump_json(by_alias=True, indent=2)


def _lattice(doc: _WindowDoc) -> Lattice:
    return Lattice(tuple(parse_rational(w) for w in doc.area_weights))


def _collect(pairs) -> dict:
    out: dict = {}
    for key, value in pairs:
        if key in out:
            where = list(key[0].coords) if isinstance(key[0], HClass) else key[0]
            raise SchemaError(f"duplicate term at {where}, index {key[1]}")
        out[key] = value
    return out


def series_from_document(doc: SeriesDocument, cls: type[NovikovSeries] = NovikovSeries) -> NovikovSeries:
    terms = _collect(((HClass(tuple(t.coords)), t.genus), parse_rational(t.coeff)) for t in doc.terms)
    return cls(_lattice(doc), parse_rational(doc.energy), doc.genus_max, terms)


def bps_from_document(doc: BpsDocument) -> BpsTable:
    terms = _collect(((HClass(tuple(t.coords)), t.h), parse_rational(t.coeff)) for t in doc.terms)
    return BpsTable(_lattice(doc), parse_rational(doc.energy), doc.genus_max, terms)


def fano_from_document(doc: FanoDocument) -> tuple[NovikovSeries, FanoSeries]:
    """Calabi-Yau part (c1 = 0) and Fano part (c1 > 0) of the document's series."""
    return split_by_chern(series_from_document(doc), doc.chern, doc.insertions)


def _window(series: NovikovSeries) -> dict:
    return {
        "rank": series.lattice.rank,
        "area_weights": [format_rational(w) for w in series.lattice.area_weights],
        "energy": format_rational(series.energy),
        "genus_max": series.genus_bound,
    }


def series_to_document(series: NovikovSeries) -> SeriesDocument:
    terms = [
        SeriesTerm(coords=list(A.coords), genus=g, coeff=format_rational(c))
        for (A, g), c in series.items()
    ]
    return SeriesDocument(**_window(series), terms=terms)


def bps_to_document(table: NovikovSeries) -> BpsDocument:
    terms = [
        BpsTerm(coords=list(A.coords), h=h, coeff=format_rational(c))
        for (A, h), c in table.items()
    ]
    return BpsDocument(**_window(table), terms=terms)


# ============================================================
# ELEMENTARY SERIES
# ============================================================

class TLaurentDoc(_Doc):
    min_exp: int
    trunc: int
    coeffs: list[str]


class ElemTerm(_Doc):
    d: int
    q: Optional[dict[str, str]] = None
    t: Optional[TLaurentDoc] = None


class ElemSeriesDocument(_Doc):
    kind: Literal["z", "gw"]
    genus: int
    q_degree: int
    backend: Literal["q", "t"]
    trunc: Optional[int] = None
    terms: list[ElemTerm]


def qlaurent_to_dict(p: QLaurent) -> dict[str, str]:
    return {str(n): format_rational(c) for n, c in p.items()}


def qlaurent_from_dict(raw: dict[str, str]) -> QLaurent:
    try:
        return QLaurent({int(n): parse_rational(c) for n, c in raw.items()})
    except ValueError as e:
        raise SchemaError(str(e)) from e


def tlaurent_to_doc(s: TLaurent) -> TLaurentDoc:
    return TLaurentDoc(min_exp=s.min_exp, trunc=s.trunc, coeffs=[format_rational(c) for c in s.coeffs])


def tlaurent_from_doc(doc: TLaurentDoc) -> TLaurent:
    return TLaurent(doc.min_exp, [parse_rational(c) for c in doc.coeffs], doc.trunc)


def elem_series_to_document(s: ElemSeries) -> ElemSeriesDocument:
    terms = []
    for d, c in enumerate(s.coeffs):
        if s.backend == "q":
            terms.append(ElemTerm(d=d, q=qlaurent_to_dict(c)))
        else:
            terms.append(ElemTerm(d=d, t=tlaurent_to_doc(c)))
    return ElemSeriesDocument(kind=s.kind, genus=s.genus, q_degree=s.q_degree, backend=s.backend, trunc=s.trunc, terms=terms)


def elem_series_from_document(doc: ElemSeriesDocument) -> ElemSeries:
    if [t.d for t in doc.terms] != list(range(doc.q_degree + 1)):
        raise SchemaError(f"terms must list d = 0..{doc.q_degree} in order")
    if doc.backend == "t" and doc.trunc is None:
        raise SchemaError("a t-backend series needs its t-order")
    coeffs = []
    for term in doc.terms:
        if doc.backend == "q":
            if term.q is None or term.t is not None:
                raise SchemaError(f"term d={term.d}: the q backend stores a 'q' map only")
            coeffs.append(qlaurent_from_dict(term.q))
        else:
            if term.t is None or term.q is not None:
                raise SchemaError(f"term d={term.d}: the t backend stores a 't' series only")
            coeffs.append(tlaurent_from_doc(term.t))
    return ElemSeries(doc.genus, doc.q_degree, doc.backend, doc.trunc, tuple(coeffs), doc.kind)


class LocalBpsTerm(_Doc):
    d: int
    h: int
    value: str


class LocalBpsDocument(_Doc):
    genus: int
    q_degree: int
    h_max: int
    t_order: int
    terms: list[LocalBpsTerm]


def local_bps_to_document(local: LocalBps) -> LocalBpsDocument:
    return LocalBpsDocument(
        genus=local.genus,
        q_degree=local.q_degree,
        h_max=local.h_max,
        t_order=local.trunc,
        terms=[LocalBpsTerm(d=d, h=h, value=format_rational(v)) for (d, h), v in sorted(local.table.items())],
    )


def local_bps_from_document(doc: LocalBpsDocument) -> LocalBps:
    table = _collect(((t.d, t.h), parse_rational(t.value)) for t in doc.terms)
    return LocalBps(doc.genus, doc.q_degree, doc.h_max, doc.t_order, table)


# ============================================================
# REPORTS
# ============================================================

class ViolationDoc(_Doc):
    d: int
    h: int
    value: str
    rule: str


class CheckReport(_Doc):
    genus: int
    q_degree: int
    h_max: int
    t_order: int
    passed: bool
    support: list[list[int]]
    violations: list[ViolationDoc]
    table: list[LocalBpsTerm]


def check_report_from(report: LocalBpsReport) -> CheckReport:
    return CheckReport(
        genus=report.genus,
        q_degree=report.q_degree,
        h_max=report.h_max,
        t_order=report.trunc,
        passed=report.passed,
        support=[[d, h] for d, h in report.support],
        violations=[ViolationDoc(d=v.d, h=v.h, value=format_rational(v.value), rule=v.rule) for v in report.violations],
        table=[LocalBpsTerm(d=d, h=h, value=format_rational(v)) for (d, h), v in sorted(report.table.items())],
    )


class ElemCountEntry(_Doc):
    coords: list[int] = Field(..., alias="class")
    genus: int
    coeff: str
    level: int
    integral: bool


class BpsEntry(_Doc):
    coords: list[int] = Field(..., alias="class")
    h: int
    coeff: str
    integral: bool


class SolveViolation(_Doc):
    coords: list[int] = Field(..., alias="class")
    index: int
    value: str
    rule: str


class SolveReport(_Doc):
    elem_counts: list[ElemCountEntry]
    bps: list[BpsEntry]
    integral: bool
    violations: list[SolveViolation]
    cross_check: Literal["agree", "disagree"]


def solve_report_from(report: PipelineReport) -> SolveReport:
    e: ElemCounts = report.elem_counts
    verdicts = e.verdicts()
    return SolveReport(
        elem_counts=[
            ElemCountEntry(coords=list(A.coords), genus=g, coeff=format_rational(c), level=level(A, g), integral=verdicts[(A, g)])
            for (A, g), c in e.items()
        ],
        bps=[
            BpsEntry(coords=list(A.coords), h=h, coeff=format_rational(c), integral=Fraction(c).denominator == 1)
            for (A, h), c in report.bps.items()
        ],
        integral=report.integral,
        violations=[
            SolveViolation(coords=list(v["class"].coords), index=v["index"], value=format_rational(v["value"]), rule=v["rule"])
            for v in report.violations
        ],
        cross_check=report.cross_check,
    )


class DimensionViolationDoc(_Doc):
    coords: list[int] = Field(..., alias="class")
    genus: int
    value: str
    iota: int
    rule: str


class FanoReport(_Doc):
    calabi_yau: BpsDocument
    fano: BpsDocument
    violations: list[DimensionViolationDoc]


def dimension_violation_doc(v: DimensionViolation) -> DimensionViolationDoc:
    return DimensionViolationDoc(coords=list(v.cls.coords), genus=v.genus, value=format_rational(v.value), iota=v.iota, rule=v.rule)


class AmEntry(_Doc):
    coords: list[int] = Field(..., alias="class")
    c1: int
    coeff: str


class AmReport(_Doc):
    insertions: int
    insertion_dims: list[int]
    dim_x: int
    energy: str
    bps: list[AmEntry]
    integral: bool
    violations: list[DimensionViolationDoc]


def am_report_from(result: GenusZeroInversion, energy: Fraction) -> AmReport:
    return AmReport(
        insertions=result.insertions,
        insertion_dims=list(result.insertion_dims),
        dim_x=result.dim_x,
        energy=format_rational(energy),
        bps=[AmEntry(coords=list(A.coords), c1=result.c1(A), coeff=format_rational(c)) for A, c in result.bps.items()],
        integral=result.integral,
        violations=[dimension_violation_doc(v) for v in result.violations],
    )


class DimensionReport(_Doc):
    c1: int
    dim_x: int
    genus: int
    insertions: list[int]
    iota: int


class ErrorDocument(_Doc):
    error: str
    message: str
