"""
Test suite for _documents.py
Tests JSON encoding and the schema errors raised while decoding
"""

import json
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "scripts"))

import pytest
import sympy

from _colouring import C, W, check_axioms, natural_colouring, q_colouring, sequence, slot_polynomial, tabulate
from _documents import (
    POLY_KN,
    POLY_N,
    RATIONAL,
    decode_colouring,
    decode_element,
    decode_rational,
    decode_sequence,
    decode_series,
    decode_slot_polynomial,
    decode_vector,
    decode_word,
    dumps,
    encode_axiom_report,
    encode_colouring,
    encode_element,
    encode_error,
    encode_rational,
    encode_sequence,
    encode_series,
    encode_slot_polynomial,
    encode_vector,
    loads,
)
from _errors import AxiomViolation, InputSchemaError, NonzeroRemainder
from _exactalg import K, N, SeriesH, bipoly_from_expr, poly_from_expr
from _pbw import from_word, straightening_context
from _verma import XMINUS, XPLUS, basis_vector, classical_verma


def series_n(*layers):
    return SeriesH(tuple(poly_from_expr(layer) for layer in layers))


class TestSerialization:
    """Test dumps and loads"""

    def test_sorted_keys_and_newline(self):
        text = dumps({"b": 1, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")

    def test_invalid_json(self):
        with pytest.raises(InputSchemaError) as excinfo:
            loads("{not json")
        assert excinfo.value.stage == "parse"


class TestRationals:
    """Rationals travel as 'p/q' strings"""

    def test_encode(self):
        assert encode_rational(Fraction(-1, 6)) == "-1/6"
        assert encode_rational(Fraction(5)) == "5"

    def test_integers_drop_denominator(self):
        assert encode_rational(Fraction(0)) == "0"
        assert encode_rational(Fraction(-12, 4)) == "-3"
        assert decode_rational(encode_rational(Fraction(-3))) == Fraction(-3)

    def test_decode(self):
        assert decode_rational("2/4") == Fraction(1, 2)
        assert decode_rational(3) == Fraction(3)

    @pytest.mark.parametrize("raw", ["1/0", "abc", 1.5, True, None])
    def test_malformed(self, raw):
        with pytest.raises(InputSchemaError):
            decode_rational(raw)


class TestSeries:
    """Test series documents over the three coefficient rings"""

    def test_poly_n_layout(self):
        doc = encode_series(series_n(N**2 - 1, 0), POLY_N)
        assert doc == {"order": 1, "coeffs": [["-1", "0", "1"], []]}

    def test_poly_kn_layout(self):
        s = SeriesH((bipoly_from_expr(K * N + 2),))
        doc = encode_series(s, POLY_KN)
        assert doc["coeffs"][0] == [
            {"kpow": 0, "npow": 0, "coeff": "2"},
            {"kpow": 1, "npow": 1, "coeff": "1"},
        ]
        assert decode_series(doc, POLY_KN) == s

    def test_wrong_coefficient_count(self):
        with pytest.raises(InputSchemaError):
            decode_series({"order": 2, "coeffs": ["1", "0"]}, RATIONAL)

    def test_order_mismatch(self):
        with pytest.raises(InputSchemaError):
            decode_series({"order": 1, "coeffs": ["1", "0"]}, RATIONAL, order=2)

    def test_negative_power(self):
        raw = {"order": 0, "coeffs": [[{"kpow": -1, "npow": 0, "coeff": "1"}]]}
        with pytest.raises(InputSchemaError):
            decode_series(raw, POLY_KN)

    def test_missing_field(self):
        with pytest.raises(InputSchemaError) as excinfo:
            decode_series({"coeffs": []}, RATIONAL)
        assert "order" in str(excinfo.value)


class TestColourings:
    """Test colouring files"""

    def test_closed_round_trip(self):
        psi = q_colouring(2)
        decoded = decode_colouring(json.loads(dumps(encode_colouring(psi))))
        assert decoded.hcoeffs == psi.hcoeffs
        assert not decoded.axioms_verified

    def test_tabulated_round_trip(self):
        table = tabulate(natural_colouring(1), 2, -1, 1)
        decoded = decode_colouring(encode_colouring(table))
        assert decoded.values == table.values

    def test_unknown_kind(self):
        with pytest.raises(InputSchemaError):
            decode_colouring({"order": 0, "kind": "spline"})

    def test_incomplete_table(self):
        doc = {"order": 0, "kind": "tabulated", "kmax": 1, "nmin": 0, "nmax": 1, "values": []}
        with pytest.raises(InputSchemaError):
            decode_colouring(doc)

    def test_wrong_leading_layer(self):
        doc = {"order": 0, "kind": "closed", "hcoeffs": [[{"kpow": 1, "npow": 0, "coeff": "1"}]]}
        with pytest.raises(AxiomViolation):
            decode_colouring(doc)


class TestSlotPolynomials:
    """Test perturbation documents"""

    def test_round_trip(self):
        P = slot_polynomial(C * W - sympy.Rational(1, 2) * W**2 + 3, 2)
        assert decode_slot_polynomial(encode_slot_polynomial(P)) == P

    def test_layer_count(self):
        with pytest.raises(InputSchemaError):
            decode_slot_polynomial({"order": 1, "coeffs": [[]]})


class TestSequences:
    """Test sequence documents"""

    def test_layout(self):
        f = sequence(1, [series_n(N, 1), series_n(0, 0)], cutoff=1)
        doc = encode_sequence(f)
        assert doc["d"] == 1
        assert doc["kmax"] == 2
        assert doc["cutoff"] == 1
        assert doc["flags"] == {"verma_type_verified": False, "summable_verified": False, "regular_verified": False}
        assert decode_sequence(doc) == f

    def test_entry_count(self):
        doc = {"d": 0, "order": 0, "kmax": 2, "entries": [{"order": 0, "coeffs": [["1"]]}]}
        with pytest.raises(InputSchemaError):
            decode_sequence(doc)

    def test_bad_flags(self):
        doc = {"d": 0, "order": 0, "kmax": 0, "entries": [{"order": 0, "coeffs": [[]]}], "flags": {"x": 1}}
        with pytest.raises(InputSchemaError):
            decode_sequence(doc)

    def test_nonzero_beyond_cutoff(self):
        doc = {"d": 0, "order": 0, "kmax": 1, "entries": [{"order": 0, "coeffs": [["1"]]}] * 2, "cutoff": 0}
        with pytest.raises(InputSchemaError):
            decode_sequence(doc)


class TestVectorsAndWords:
    """Test vector and word documents"""

    def test_symbolic_vector(self):
        v = basis_vector(2, classical_verma(1)).scale(series_n(N, 0))
        doc = encode_vector(v)
        assert doc["weight"] == "symbolic"
        assert decode_vector(doc) == v

    def test_concrete_vector(self):
        doc = {"weight": 4, "order": 0, "terms": [{"k": 1, "coeff": {"order": 0, "coeffs": ["1/2"]}}]}
        v = decode_vector(doc)
        assert v.weight == 4
        assert v.as_dict() == {1: SeriesH((Fraction(1, 2),))}

    def test_bad_weight(self):
        with pytest.raises(InputSchemaError):
            decode_vector({"weight": "n", "order": 0, "terms": []})

    def test_repeated_index(self):
        term = {"k": 1, "coeff": {"order": 0, "coeffs": ["1"]}}
        with pytest.raises(InputSchemaError):
            decode_vector({"weight": 1, "order": 0, "terms": [term, term]})

    def test_word(self):
        assert decode_word(["Xplus", "H"]) == ["Xplus", "H"]
        with pytest.raises(InputSchemaError):
            decode_word(["Xplus", "E"])
        with pytest.raises(InputSchemaError):
            decode_word("Xplus")


class TestElements:
    """Test element documents"""

    def test_named_colouring(self):
        context = straightening_context(natural_colouring(1), 6)
        doc = encode_element(from_word([XPLUS, XMINUS], context))
        assert doc["colouring"] == "natural"
        assert [(t["a"], t["b"]) for t in doc["terms"]] == [(0, 0), (1, 1)]
        assert decode_element(doc, context) == from_word([XPLUS, XMINUS], context)

    def test_no_context(self):
        doc = encode_element(from_word([XMINUS], None, order=0))
        assert doc["colouring"] is None

    def test_repeated_term(self):
        term = {"a": 0, "b": 0, "poly_series": {"order": 0, "coeffs": [["1"]]}}
        with pytest.raises(InputSchemaError):
            decode_element({"order": 0, "terms": [term, term]})


class TestReports:
    """Test report and error documents"""

    def test_axiom_report(self):
        doc = encode_axiom_report(check_axioms(natural_colouring(1)))
        assert doc == {"passed": True, "symbolic": True, "violations": []}

    def test_error_strips_stage_prefix(self):
        doc = encode_error(NonzeroRemainder("remainder n", stage="stage k=2"))
        assert doc == {"error": "NonzeroRemainder", "stage": "stage k=2", "message": "remainder n"}

    def test_error_without_stage(self):
        doc = encode_error(InputSchemaError("bad"))
        assert doc == {"error": "InputSchemaError", "stage": None, "message": "bad"}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
