"""
PBW Normal Forms in U_h(psi)
Elements are sums of (X^-)^a (X^+)^b p_{a,b}(H); products are straightened with
p(H) X^± = X^± p(H ± 2) and X^+ X^- = sum_a (X^-)^a (X^+)^a xi^a(H), xi the straightening
sequence truncated at its summability cutoff
"""

import logging
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from sympy import QQ, Poly

from _colouring import Colouring, CoeffSeq, natural_colouring, q_colouring
from _errors import CutoffUnavailable, MissingStraightening, MixedContext, NotHomogeneous, OrderMismatch
from _exactalg import N, SeriesH, qnumber, series_mul, series_shift
from _ltimes import solve_b_trivialization, solve_straightening
from _verma import GENERATORS, XMINUS, XPLUS, H

logger = logging.getLogger(__name__)

Terms = Dict[Tuple[int, int], SeriesH]


def _one(order: int) -> SeriesH:
    return SeriesH.constant(Poly(1, N, domain=QQ), order)


def _add_into(terms: Terms, key: Tuple[int, int], series: SeriesH) -> None:
    if key in terms:
        total = terms[key] + series
        if total.is_zero():
            del terms[key]
        else:
            terms[key] = total
    elif not series.is_zero():
        terms[key] = series


class StraighteningContext:
    """
    The algebra U_h(psi) at truncation order M: a colouring with its straightening sequence

    Normal forms of X^+ (X^-)^i and (X^+)^b (X^-)^c are memoized per h-order budget.
    """

    def __init__(self, psi: Colouring, xi: Optional[CoeffSeq]):
        if xi is None:
            raise MissingStraightening("no straightening sequence supplied")
        if xi.cutoff is None:
            raise CutoffUnavailable("the straightening sequence has no certified summability cutoff")
        if xi.d != 0 or xi.order != psi.order:
            raise ValueError("straightening sequences live in Coeff_0 at the colouring's order")
        self.psi = psi
        self.xi = xi
        self.order = psi.order
        self.cutoff = xi.cutoff
        self._raised: Dict[Tuple[int, int], Terms] = {}
        self._reordered: Dict[Tuple[int, int, int], Terms] = {}

    def __eq__(self, other) -> bool:
        if not isinstance(other, StraighteningContext):
            return NotImplemented
        return self.order == other.order and self.psi == other.psi

    def __hash__(self) -> int:
        return hash((self.order, self.psi))

    def __repr__(self) -> str:
        return f"StraighteningContext({self.psi.name}, order={self.order}, cutoff={self.cutoff})"

    def raise_past(self, i: int, budget: int) -> Terms:
        """Normal form of X^+ (X^-)^i modulo h^(budget+1)."""
        if i == 0:
            return {(0, 1): _one(budget)}
        key = (i, budget)
        cached = self._raised.get(key)
        if cached is not None:
            return cached

        terms: Terms = {}
        for a in range(0, self.cutoff + 1):
            coeff = self.xi.entry(a).truncate(budget)
            valuation = coeff.valuation()
            if valuation is None:
                continue
            # p(H) (X^-)^(i-1) = (X^-)^(i-1) p(H - 2(i-1))
            weight = series_shift(coeff, -2 * (i - 1))
            for (p, q), s in self.reorder(a, i - 1, budget - valuation).items():
                _add_into(terms, (p + a, q), series_mul(s.pad(budget), weight))
        self._raised[key] = terms
        return terms

    def reorder(self, b: int, c: int, budget: int) -> Terms:
        """Normal form of (X^+)^b (X^-)^c modulo h^(budget+1)."""
        if b == 0 or c == 0:
            return {(c, b): _one(budget)}
        key = (b, c, budget)
        cached = self._reordered.get(key)
        if cached is not None:
            return cached

        terms: Terms = {}
        for (i, j), s in self.reorder(b - 1, c, budget).items():
            valuation = s.valuation()
            for (alpha, beta), t in self.raise_past(i, budget - valuation).items():
                # t(H) (X^+)^j = (X^+)^j t(H + 2j)
                _add_into(terms, (alpha, beta + j), series_mul(series_shift(t.pad(budget), 2 * j), s))
        self._reordered[key] = terms
        logger.debug(f"Reordered (X+)^{b} (X-)^{c} at budget {budget}: {len(terms)} term(s)")
        return terms


def straightening_context(psi: Colouring, kmax: int) -> StraighteningContext:
    """Solve the straightening equation for psi and wrap it as a context, shared per (psi, kmax)."""
    key = ("straightening", kmax)
    context = psi._cache.get(key)
    if context is None:
        context = StraighteningContext(psi, solve_straightening(psi, kmax))
        psi._cache[key] = context
    return context


class AlgebraElement:
    """A normal-ordered element sum (X^-)^a (X^+)^b p_{a,b}(H) with p over PolyN read in H"""

    def __init__(
        self,
        order: int,
        terms: Optional[Mapping[Tuple[int, int], SeriesH]] = None,
        context: Optional[StraighteningContext] = None,
    ):
        self.order = order
        self.context = context
        if context is not None and context.order != order:
            raise OrderMismatch(f"context of order {context.order} for an element of order {order}")
        self.terms: Terms = {}
        for (a, b), series in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in term ({a}, {b})")
            if series.order != order:
                raise OrderMismatch(f"term ({a}, {b}) has order {series.order}, expected {order}")
            if not series.is_zero():
                self.terms[(a, b)] = series

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms and self.context == other.context

    def __repr__(self) -> str:
        return f"AlgebraElement(order={self.order}, terms={sorted(self.terms)})"

    def _combine(self, other: "AlgebraElement", sign: int) -> "AlgebraElement":
        if self.order != other.order:
            raise OrderMismatch(f"elements of orders {self.order} and {other.order} combined")
        terms = dict(self.terms)
        for key, series in other.terms.items():
            _add_into(terms, key, series if sign > 0 else -series)
        return AlgebraElement(self.order, terms, _common_context(self, other))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, 1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, -1)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.order, {key: -s for key, s in self.terms.items()}, self.context)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def scale(self, value) -> "AlgebraElement":
        """Multiply every coefficient by a rational constant."""
        return AlgebraElement(self.order, {key: s * value for key, s in self.terms.items()}, self.context)

    def degree(self) -> int:
        """Common degree b - a of a homogeneous element; 0 for the zero element."""
        degrees = {b - a for (a, b) in self.terms}
        if len(degrees) > 1:
            raise NotHomogeneous(f"element mixes degrees {sorted(degrees)}")
        return degrees.pop() if degrees else 0


def _common_context(x: AlgebraElement, y: AlgebraElement) -> Optional[StraighteningContext]:
    if x.context is not None and y.context is not None and x.context != y.context:
        raise MixedContext(f"elements of {x.context} and {y.context} combined")
    return x.context if x.context is not None else y.context


def identity(order: int, context: Optional[StraighteningContext] = None) -> AlgebraElement:
    return AlgebraElement(order, {(0, 0): _one(order)}, context)


def generator(g: str, order: int, context: Optional[StraighteningContext] = None) -> AlgebraElement:
    """
    Single-term element for a generator

    Args:
        g: "H", "Xminus" or "Xplus"
        order: Truncation order M
        context: Optional straightening context to attach

    Returns:
        H -> (0,0) with polynomial H; X^- -> (1,0) with 1; X^+ -> (0,1) with 1
    """
    if g == H:
        return AlgebraElement(order, {(0, 0): SeriesH.constant(Poly(N, N, domain=QQ), order)}, context)
    if g == XMINUS:
        return AlgebraElement(order, {(1, 0): _one(order)}, context)
    if g == XPLUS:
        return AlgebraElement(order, {(0, 1): _one(order)}, context)
    raise ValueError(f"unknown generator '{g}', expected one of {', '.join(GENERATORS)}")


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """
    Normal form of the product x y

    Args:
        x: Left factor
        y: Right factor of the same order

    Returns:
        x y in normal order, exact modulo h^(M+1)

    Raises:
        MissingStraightening: if an X^+ must pass an X^- and neither factor carries a context
        MixedContext: if the factors belong to different algebras
    """
    if x.order != y.order:
        raise OrderMismatch(f"elements of orders {x.order} and {y.order} multiplied")
    context = _common_context(x, y)
    order = x.order
    terms: Terms = {}
    for (a, b), p in x.terms.items():
        for (c, d), q in y.terms.items():
            # (X^-)^a (X^+)^b p(H) (X^-)^c (X^+)^d q(H) = (X^-)^a [(X^+)^b (X^-)^c] (X^+)^d p(H-2c+2d) q(H)
            tail = series_mul(series_shift(p, 2 * d - 2 * c), q)
            if tail.is_zero():
                continue
            if b > 0 and c > 0:
                if context is None:
                    raise MissingStraightening("X^+ X^- must be straightened but no context is attached")
                middle = context.reorder(b, c, order)
            else:
                middle = {(c, b): _one(order)}
            for (i, j), s in middle.items():
                _add_into(terms, (a + i, j + d), series_mul(series_shift(s, 2 * d), tail))
    return AlgebraElement(order, terms, context)


def from_word(word: Sequence[str], context: Optional[StraighteningContext], order: Optional[int] = None) -> AlgebraElement:
    """Normal form of the product of the generators of a word, left to right; the empty word is 1."""
    if order is None:
        if context is None:
            raise MissingStraightening("an order or a context is needed to build a word")
        order = context.order
    result = identity(order, context)
    for g in word:
        result = multiply(result, generator(g, order, context))
    return result


def linear_combination(pieces: Iterable[Tuple[int, AlgebraElement]], order: int) -> AlgebraElement:
    result = AlgebraElement(order)
    for coefficient, element in pieces:
        result = result + element.scale(coefficient)
    return result


def is_zero(x: AlgebraElement) -> bool:
    """Whether every stored series vanishes modulo h^(M+1)."""
    return all(series.is_zero() for series in x.terms.values())


def quantum_commutator(order: int, kmax: int = 12) -> AlgebraElement:
    """Normal form of X^+ X^- - X^- X^+ in U_h(psi_q)."""
    context = straightening_context(q_colouring(order), kmax)
    return from_word([XPLUS, XMINUS], context) - from_word([XMINUS, XPLUS], context)


def quantum_relation_check(order: int, kmax: int = 12) -> bool:
    """
    Check [X^+, X^-] = [H]_q in U_h(psi_q) at truncation order M

    Returns:
        True when the commutator is the single (0, 0) term qnumber(H, M)
    """
    commutator = quantum_commutator(order, kmax)
    expected = AlgebraElement(order, {(0, 0): qnumber(None, order)}, commutator.context)
    holds = commutator == expected
    logger.info(f"Quantum relation at order {order}: {'holds' if holds else 'FAILS'}")
    return holds


def b_trivialization_image(psi: Colouring, kmax: int) -> AlgebraElement:
    """
    The image sum_{a>=1} (X^-)^(a-1) (X^+)^a xi^a(H) of X^+, with N ⋉ xi = psi, in U_h(N)

    Args:
        psi: Axiom-verified closed-form colouring
        kmax: Solve horizon

    Returns:
        Element of the classical algebra whose symbol on V_h(n, N) is psi
    """
    xi = solve_b_trivialization(psi, kmax)
    last = xi.cutoff
    if last is None:
        last = xi.kmax
        logger.warning(f"b-trivialization sequence shows no zero tail; image exact on b_0..b_{kmax} only")
    terms = {(a - 1, a): xi.entry(a) for a in range(1, last + 1)}
    context = straightening_context(natural_colouring(psi.order), kmax)
    return AlgebraElement(psi.order, terms, context)
