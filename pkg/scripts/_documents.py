"""
JSON Documents
Encoding and validated decoding of series, colourings, sequences, vectors and elements.
Rationals travel as "p/q" strings; every dump sorts its keys.
"""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

from sympy import QQ, Poly

from _colouring import C, CLOSED, TABULATED, W, AxiomReport, CoeffSeq, Colouring
from _errors import ColouredAlgebraError, InputSchemaError
from _exactalg import (
    SeriesH,
    bipoly_from_terms,
    bipoly_terms,
    poly_coefficients,
    poly_n,
    to_fraction,
    to_sympy,
)
from _pbw import AlgebraElement, StraighteningContext
from _verma import GENERATORS, VermaVector

logger = logging.getLogger(__name__)

RATIONAL = "rational"
POLY_N = "poly_n"
POLY_KN = "poly_kn"


def dumps(doc: Any) -> str:
    """Canonical serialization: UTF-8 JSON, keys sorted, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputSchemaError(f"invalid JSON: {e}", stage="parse") from None


def _require(doc: Any, key: str, types, where: str) -> Any:
    if not isinstance(doc, dict):
        raise InputSchemaError(f"expected an object, got {type(doc).__name__}", stage=where)
    if key not in doc:
        raise InputSchemaError(f"missing field '{key}'", stage=where)
    value = doc[key]
    if not isinstance(value, types) or (isinstance(value, bool) and bool not in _as_tuple(types)):
        raise InputSchemaError(f"field '{key}' has type {type(value).__name__}", stage=where)
    return value


def _as_tuple(types) -> tuple:
    return types if isinstance(types, tuple) else (types,)


def _non_negative(value: int, name: str, where: str) -> int:
    if value < 0:
        raise InputSchemaError(f"field '{name}' must be non-negative", stage=where)
    return value


# ---------------------------------------------------------------------------
# Scalars, polynomials and series
# ---------------------------------------------------------------------------


def encode_rational(value: Fraction) -> str:
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decode_rational(raw: Any, where: str = "rational") -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise InputSchemaError(f"rational must be an integer or a 'p/q' string, got {raw!r}", stage=where)
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise InputSchemaError(f"malformed rational {raw!r}", stage=where) from None


def encode_poly_n(p: Poly) -> List[str]:
    return [encode_rational(c) for c in poly_coefficients(p)]


def decode_poly_n(raw: Any, where: str = "poly_n") -> Poly:
    if not isinstance(raw, list):
        raise InputSchemaError("polynomial in n must be a list of coefficients", stage=where)
    return poly_n([decode_rational(c, where) for c in raw])


def encode_poly_kn(P: Poly) -> List[Dict]:
    return [{"kpow": kpow, "npow": npow, "coeff": encode_rational(c)} for kpow, npow, c in bipoly_terms(P)]


def decode_poly_kn(raw: Any, where: str = "poly_kn") -> Poly:
    if not isinstance(raw, list):
        raise InputSchemaError("polynomial in (k, n) must be a list of terms", stage=where)
    terms = []
    for record in raw:
        kpow = _non_negative(_require(record, "kpow", int, where), "kpow", where)
        npow = _non_negative(_require(record, "npow", int, where), "npow", where)
        terms.append((kpow, npow, decode_rational(_require(record, "coeff", (int, str), where), where)))
    return bipoly_from_terms(terms)


_ENCODERS = {RATIONAL: encode_rational, POLY_N: encode_poly_n, POLY_KN: encode_poly_kn}
_DECODERS = {RATIONAL: decode_rational, POLY_N: decode_poly_n, POLY_KN: decode_poly_kn}


def encode_series(s: SeriesH, ring: str) -> Dict:
    return {"order": s.order, "coeffs": [_ENCODERS[ring](c) for c in s.coeffs]}


def decode_series(raw: Any, ring: str, order: Optional[int] = None, where: str = "series") -> SeriesH:
    """
    Decode a SeriesH document

    Args:
        raw: {"order": M, "coeffs": [...]} with M+1 coefficients
        ring: RATIONAL, POLY_N or POLY_KN
        order: Expected order, when the enclosing document fixes it
        where: Stage name for errors

    Returns:
        The series
    """
    found = _non_negative(_require(raw, "order", int, where), "order", where)
    coeffs = _require(raw, "coeffs", list, where)
    if order is not None and found != order:
        raise InputSchemaError(f"series of order {found} where order {order} is required", stage=where)
    if len(coeffs) != found + 1:
        raise InputSchemaError(f"order {found} needs {found + 1} coefficients, got {len(coeffs)}", stage=where)
    return SeriesH(tuple(_DECODERS[ring](c, where) for c in coeffs))


# ---------------------------------------------------------------------------
# Colourings, slot polynomials and sequences
# ---------------------------------------------------------------------------


def encode_colouring(psi: Colouring) -> Dict:
    if psi.is_closed:
        return {"order": psi.order, "kind": CLOSED, "hcoeffs": [encode_poly_kn(P) for P in psi.hcoeffs]}
    return {
        "order": psi.order,
        "kind": TABULATED,
        "kmax": psi.kmax,
        "nmin": psi.nmin,
        "nmax": psi.nmax,
        "values": [{"k": k, "n": n, "series": encode_series(s, RATIONAL)} for (k, n), s in psi.values],
    }


def decode_colouring(raw: Any) -> Colouring:
    """Decode a colouring file; the result is not axiom-verified."""
    where = "colouring"
    order = _non_negative(_require(raw, "order", int, where), "order", where)
    kind = _require(raw, "kind", str, where)
    try:
        if kind == CLOSED:
            hcoeffs = _require(raw, "hcoeffs", list, where)
            return Colouring(order=order, kind=CLOSED, hcoeffs=tuple(decode_poly_kn(P, where) for P in hcoeffs))
        if kind == TABULATED:
            values = []
            for record in _require(raw, "values", list, where):
                key = (_require(record, "k", int, where), _require(record, "n", int, where))
                values.append((key, decode_series(_require(record, "series", dict, where), RATIONAL, order, where)))
            return Colouring(
                order=order,
                kind=TABULATED,
                kmax=_require(raw, "kmax", int, where),
                nmin=_require(raw, "nmin", int, where),
                nmax=_require(raw, "nmax", int, where),
                values=tuple(values),
            )
    except ColouredAlgebraError:
        raise
    except ValueError as e:
        raise InputSchemaError(str(e), stage=where) from None
    raise InputSchemaError(f"unknown colouring kind '{kind}'", stage=where)


def encode_slot_polynomial(P: SeriesH) -> Dict:
    layers = []
    for layer in P.coeffs:
        layers.append(
            [
                {"cpow": cpow, "wpow": wpow, "coeff": encode_rational(c)}
                for (cpow, wpow), c in sorted(layer.terms())
                if c != 0
            ]
        )
    return {"order": P.order, "coeffs": layers}


def decode_slot_polynomial(raw: Any) -> SeriesH:
    where = "slot polynomial"
    order = _non_negative(_require(raw, "order", int, where), "order", where)
    layers = _require(raw, "coeffs", list, where)
    if len(layers) != order + 1:
        raise InputSchemaError(f"order {order} needs {order + 1} layers", stage=where)
    decoded = []
    for layer in layers:
        if not isinstance(layer, list):
            raise InputSchemaError("each layer must be a list of terms", stage=where)
        rep = {}
        for record in layer:
            cpow = _non_negative(_require(record, "cpow", int, where), "cpow", where)
            wpow = _non_negative(_require(record, "wpow", int, where), "wpow", where)
            coeff = decode_rational(_require(record, "coeff", (int, str), where), where)
            rep[(cpow, wpow)] = rep.get((cpow, wpow), Fraction(0)) + coeff
        expr = sum((to_sympy(coeff) * C**cpow * W**wpow for (cpow, wpow), coeff in rep.items()), 0 * C)
        decoded.append(Poly(expr, C, W, domain=QQ))
    return SeriesH(tuple(decoded))


def encode_sequence(f: CoeffSeq) -> Dict:
    return {
        "d": f.d,
        "order": f.order,
        "kmax": f.kmax,
        "entries": [encode_series(s, POLY_N) for s in f.entries],
        "cutoff": f.cutoff,
        "flags": f.flags(),
    }


def decode_sequence(raw: Any) -> CoeffSeq:
    where = "sequence"
    d = _non_negative(_require(raw, "d", int, where), "d", where)
    order = _non_negative(_require(raw, "order", int, where), "order", where)
    kmax = _require(raw, "kmax", int, where)
    entries = _require(raw, "entries", list, where)
    if len(entries) != kmax - d + 1:
        raise InputSchemaError(f"indices {d}..{kmax} need {kmax - d + 1} entries, got {len(entries)}", stage=where)
    cutoff = raw.get("cutoff")
    if cutoff is not None and (isinstance(cutoff, bool) or not isinstance(cutoff, int)):
        raise InputSchemaError("field 'cutoff' must be an integer or null", stage=where)
    flags = raw.get("flags", {})
    if not isinstance(flags, dict) or not all(isinstance(v, bool) for v in flags.values()):
        raise InputSchemaError("field 'flags' must map names to booleans", stage=where)
    try:
        return CoeffSeq(
            d=d,
            order=order,
            entries=tuple(decode_series(s, POLY_N, order, where) for s in entries),
            cutoff=cutoff,
            verma_type_verified=flags.get("verma_type_verified", False),
            summable_verified=flags.get("summable_verified", False),
            regular_verified=flags.get("regular_verified", False),
        )
    except ColouredAlgebraError:
        raise
    except ValueError as e:
        raise InputSchemaError(str(e), stage=where) from None


# ---------------------------------------------------------------------------
# Vectors, words and elements
# ---------------------------------------------------------------------------


def encode_vector(v: VermaVector) -> Dict:
    ring = POLY_N if v.symbolic else RATIONAL
    return {
        "weight": "symbolic" if v.symbolic else v.weight,
        "order": v.order,
        "terms": [{"k": k, "coeff": encode_series(c, ring)} for k, c in v.terms],
    }


def decode_vector(raw: Any) -> VermaVector:
    where = "vector"
    weight = _require(raw, "weight", (int, str), where)
    if isinstance(weight, str):
        if weight != "symbolic":
            raise InputSchemaError(f"weight must be an integer or 'symbolic', got {weight!r}", stage=where)
        weight = None
    order = _non_negative(_require(raw, "order", int, where), "order", where)
    ring = POLY_N if weight is None else RATIONAL
    terms = []
    for record in _require(raw, "terms", list, where):
        k = _non_negative(_require(record, "k", int, where), "k", where)
        terms.append((k, decode_series(_require(record, "coeff", dict, where), ring, order, where)))
    if len({k for k, _ in terms}) != len(terms):
        raise InputSchemaError("repeated basis index", stage=where)
    return VermaVector(weight, order, tuple(terms))


def decode_word(raw: Any) -> List[str]:
    if not isinstance(raw, list) or not all(isinstance(g, str) for g in raw):
        raise InputSchemaError("a word is a list of generator names", stage="word")
    unknown = [g for g in raw if g not in GENERATORS]
    if unknown:
        raise InputSchemaError(f"unknown generator(s) {unknown}, expected {list(GENERATORS)}", stage="word")
    return list(raw)


def _colouring_reference(context: Optional[StraighteningContext]) -> Any:
    if context is None:
        return None
    if context.psi.name in ("natural", "q"):
        return context.psi.name
    return encode_colouring(context.psi)


def encode_element(x: AlgebraElement) -> Dict:
    return {
        "order": x.order,
        "colouring": _colouring_reference(x.context),
        "terms": [{"a": a, "b": b, "poly_series": encode_series(s, POLY_N)} for (a, b), s in sorted(x.terms.items())],
    }


def decode_element(raw: Any, context: Optional[StraighteningContext] = None) -> AlgebraElement:
    """Decode an element document; the caller supplies the context its colouring names."""
    where = "element"
    order = _non_negative(_require(raw, "order", int, where), "order", where)
    terms = {}
    for record in _require(raw, "terms", list, where):
        key = (
            _non_negative(_require(record, "a", int, where), "a", where),
            _non_negative(_require(record, "b", int, where), "b", where),
        )
        if key in terms:
            raise InputSchemaError(f"repeated term {key}", stage=where)
        terms[key] = decode_series(_require(record, "poly_series", dict, where), POLY_N, order, where)
    return AlgebraElement(order, terms, context)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def encode_axiom_report(report: AxiomReport) -> Dict:
    return report.to_dict()


def encode_error(error: ColouredAlgebraError) -> Dict:
    message = str(error)
    if error.stage and message.startswith(f"{error.stage}: "):
        message = message[len(error.stage) + 2 :]
    return {"error": type(error).__name__, "stage": error.stage, "message": message}
