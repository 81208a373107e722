# tests/test_schemas.py
"""Tests for the JSON documents and their converters."""

import json
import os
import sys
from fractions import Fraction

import pytest

# Add src to sys.path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from elem_series import gw_elem, local_bps, z_elem
from errors import DomainError, SchemaError
from exact_arith import TLaurent, sin_half_power
from gv_transform import FanoSeries
from novikov import HClass, Lattice, NovikovSeries
from schemas import (
    ElemSeriesDocument,
    FanoDocument,
    GenusZeroDocument,
    LocalBpsDocument,
    SeriesDocument,
    dump_document,
    elem_series_from_document,
    elem_series_to_document,
    fano_from_document,
    load_document,
    local_bps_from_document,
    local_bps_to_document,
    series_from_document,
    series_to_document,
    tlaurent_from_doc,
    tlaurent_to_doc,
)


def _doc(**overrides) -> str:
    base = {"rank": 1, "area_weights": ["1"], "energy": "2", "genus_max": 1,
            "terms": [{"class": [1], "genus": 0, "coeff": "3/6"}]}
    base.update(overrides)
    return json.dumps(base)


def _reload(doc, model):
    return load_document(dump_document(doc), model)


class TestSeriesDocument:
    """Validation and conversion of series documents."""

    def test_coefficients_in_lowest_terms(self):
        """'3/6' is read as 1/2 and written back as "1/2"."""
        series = series_from_document(load_document(_doc(), SeriesDocument))
        assert series.coeff(HClass((1,)), 0) == Fraction(1, 2)
        text = dump_document(series_to_document(series))
        assert '"1/2"' in text and '"class"' in text

    def test_rank_mismatch(self):
        """A class with the wrong number of coordinates is rejected."""
        with pytest.raises(SchemaError):
            load_document(_doc(terms=[{"class": [1, 0], "genus": 0, "coeff": "1"}]), SeriesDocument)

    def test_zero_denominator(self):
        """A zero denominator is rejected."""
        with pytest.raises(SchemaError):
            load_document(_doc(energy="1/0"), SeriesDocument)

    def test_unknown_field(self):
        """Unknown keys are rejected."""
        with pytest.raises(SchemaError):
            load_document(_doc(extra=1), SeriesDocument)

    def test_duplicate_terms(self):
        """The same (class, genus) twice is rejected."""
        terms = [{"class": [1], "genus": 0, "coeff": "1"}, {"class": [1], "genus": 0, "coeff": "2"}]
        with pytest.raises(SchemaError):
            series_from_document(load_document(_doc(terms=terms), SeriesDocument))

    def test_document_round_trip(self):
        """A rank-two series survives dump and load."""
        series = NovikovSeries(Lattice((Fraction(1), Fraction(3, 2))), 3, 1, {
            (HClass((0, 2)), 1): Fraction(-7, 3), (HClass((1, 0)), 0): 4,
        })
        again = series_from_document(load_document(dump_document(series_to_document(series)), SeriesDocument))
        assert again == series


class TestFanoDocument:
    """chern and insertions."""

    def test_split_by_chern(self):
        """c1 = 0 terms land in the Calabi-Yau part, c1 > 0 terms in the Fano part."""
        terms = [{"class": [1, 0], "genus": 0, "coeff": "1"}, {"class": [0, 1], "genus": 1, "coeff": "2/3"}]
        text = _doc(rank=2, area_weights=["1", "1"], terms=terms, chern=[0, 2], insertions=[4])
        cy, fano = fano_from_document(load_document(text, FanoDocument))
        assert cy.terms() == {(HClass((1, 0)), 0): 1}
        assert isinstance(fano, FanoSeries)
        assert fano.terms() == {(HClass((0, 1)), 1): Fraction(2, 3)}
        assert fano.chern == (0, 2) and fano.insertions == (4,)

    def test_chern_rank_checked(self):
        """chern must have one entry per lattice coordinate."""
        with pytest.raises(SchemaError):
            load_document(_doc(chern=[1, 1]), FanoDocument)

    def test_negative_c1(self):
        """A non-zero term at c1 < 0 is rejected."""
        with pytest.raises(DomainError):
            fano_from_document(load_document(_doc(chern=[-1]), FanoDocument))


class TestGenusZeroDocument:
    """Optional chern form and insertion dimensions."""

    def test_defaults(self):
        """Without chern or insertions both fields stay unset."""
        doc = load_document(_doc(genus_max=0), GenusZeroDocument)
        assert doc.chern is None and doc.insertions is None

    def test_chern_rank_checked(self):
        """A chern form of the wrong rank is rejected."""
        with pytest.raises(SchemaError):
            load_document(_doc(genus_max=0, chern=[1, 0]), GenusZeroDocument)


class TestTLaurentDoc:
    """Truncated t-series documents."""

    def test_round_trip(self):
        """A series and the zero series survive the document form."""
        s = sin_half_power(2, 0, 8)
        assert tlaurent_from_doc(tlaurent_to_doc(s)) == s
        assert tlaurent_to_doc(TLaurent.zero(4)).coeffs == []


class TestElemSeriesDocument:
    """Elementary series in either backend."""

    def test_q_backend_round_trip(self):
        """GW^elem_2 in Q survives dump and load."""
        s = gw_elem(2, 3, "q")
        assert elem_series_from_document(_reload(elem_series_to_document(s), ElemSeriesDocument)) == s

    def test_t_backend_round_trip(self):
        """Genus-0 GW^elem in t, poles included, survives dump and load."""
        s = gw_elem(0, 3, "t", 6)
        again = elem_series_from_document(_reload(elem_series_to_document(s), ElemSeriesDocument))
        assert again == s
        assert again.coeff(2).min_exp == -2

    def test_terms_must_be_in_order(self):
        """Terms out of d order are rejected."""
        doc = elem_series_to_document(z_elem(1, 2, "q"))
        doc.terms.reverse()
        with pytest.raises(SchemaError):
            elem_series_from_document(doc)

    def test_backend_field_mismatch(self):
        """A q-backend document carrying t series is rejected."""
        doc = elem_series_to_document(z_elem(1, 2, "t", 6))
        doc.backend = "q"
        with pytest.raises(SchemaError):
            elem_series_from_document(doc)

    def test_t_backend_needs_order(self):
        """A t-backend document without its t-order is rejected."""
        doc = elem_series_to_document(z_elem(1, 2, "t", 6))
        doc.trunc = None
        with pytest.raises(SchemaError):
            elem_series_from_document(doc)


class TestLocalBpsDocument:
    """Local BPS tables."""

    def test_round_trip(self):
        """n_{d,h}(2) for d <= 3 survives dump and load."""
        local = local_bps(2, 3)
        assert local_bps_from_document(_reload(local_bps_to_document(local), LocalBpsDocument)) == local

    def test_duplicate_term(self):
        """The same (d, h) twice is rejected."""
        text = json.dumps({"genus": 1, "q_degree": 1, "h_max": 3, "t_order": 8,
                           "terms": [{"d": 1, "h": 1, "value": "1"}, {"d": 1, "h": 1, "value": "2"}]})
        with pytest.raises(SchemaError):
            local_bps_from_document(load_document(text, LocalBpsDocument))
