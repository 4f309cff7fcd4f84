"""
Deformed Verma Modules
Actions of H, X^- and X^+ on V_h(n, psi) and on the simple modules S(n), symbols of
homogeneous elements, and the vanishing and intertwiner checks built on them
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ, Poly

from _colouring import CoeffSeq, Colouring, check_verma_type, evaluate, natural_colouring
from _errors import NotHomogeneous, OrderMismatch, SymbolicUnsupported
from _exactalg import N, SeriesH, poly_eval, series_mul, series_shift

logger = logging.getLogger(__name__)

H = "H"
XMINUS = "Xminus"
XPLUS = "Xplus"
GENERATORS = (H, XMINUS, XPLUS)

DEFORMED = "deformed"
SIMPLE = "simple"
CLASSICAL = "classical"


@dataclass(frozen=True)
class ModuleSpec:
    """
    A module to act on: V_h(n, psi), the classical Verma module V_h(n, N), or S(n)

    weight None means a symbolic highest weight n.
    """

    kind: str
    order: int
    weight: Optional[int] = None
    colouring: Optional[Colouring] = None

    def __post_init__(self):
        if self.kind == CLASSICAL and self.colouring is None:
            object.__setattr__(self, "colouring", natural_colouring(self.order))
        if self.kind == SIMPLE:
            if self.weight is None or self.weight < 0:
                raise ValueError("simple modules need a non-negative integer highest weight")
        elif self.kind in (DEFORMED, CLASSICAL):
            if self.colouring is None:
                raise ValueError("a deformed Verma module needs a colouring")
            if self.colouring.order != self.order:
                raise OrderMismatch(f"colouring of order {self.colouring.order} in a module of order {self.order}")
            if self.weight is None and not self.colouring.is_closed:
                raise SymbolicUnsupported("symbolic highest weight needs a closed-form colouring")
        else:
            raise ValueError(f"unknown module kind '{self.kind}'")

    @property
    def symbolic(self) -> bool:
        return self.weight is None


def deformed_verma(psi: Colouring, n: Optional[int] = None) -> ModuleSpec:
    return ModuleSpec(kind=DEFORMED, order=psi.order, weight=n, colouring=psi)


def classical_verma(order: int, n: Optional[int] = None) -> ModuleSpec:
    return ModuleSpec(kind=CLASSICAL, order=order, weight=n)


def simple_module(n: int, order: int) -> ModuleSpec:
    return ModuleSpec(kind=SIMPLE, order=order, weight=n)


@dataclass(frozen=True)
class VermaVector:
    """A finitely supported combination of basis vectors b_k, sorted by k with no zero coefficients"""

    weight: Optional[int]
    order: int
    terms: Tuple[Tuple[int, SeriesH], ...] = field(default=())

    def __post_init__(self):
        kept = []
        for k, coeff in sorted(self.terms, key=lambda item: item[0]):
            if k < 0:
                raise ValueError(f"basis index must be non-negative, got {k}")
            if coeff.order != self.order:
                raise OrderMismatch(f"coefficient of order {coeff.order} in a vector of order {self.order}")
            if not coeff.is_zero():
                kept.append((k, coeff))
        object.__setattr__(self, "terms", tuple(kept))

    @property
    def symbolic(self) -> bool:
        return self.weight is None

    def as_dict(self) -> Dict[int, SeriesH]:
        return dict(self.terms)

    def coefficient(self, k: int) -> SeriesH:
        return self.as_dict().get(k, _scalar(self.weight, self.order, 0))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "VermaVector") -> None:
        if self.weight != other.weight or self.order != other.order:
            raise ValueError("vectors from different modules combined")

    def __add__(self, other: "VermaVector") -> "VermaVector":
        self._check(other)
        merged = self.as_dict()
        for k, coeff in other.terms:
            merged[k] = merged[k] + coeff if k in merged else coeff
        return VermaVector(self.weight, self.order, tuple(merged.items()))

    def __neg__(self) -> "VermaVector":
        return VermaVector(self.weight, self.order, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "VermaVector") -> "VermaVector":
        return self + (-other)

    def scale(self, factor: SeriesH) -> "VermaVector":
        return VermaVector(self.weight, self.order, tuple((k, series_mul(c, factor)) for k, c in self.terms))


def _scalar(weight: Optional[int], order: int, value: int) -> SeriesH:
    if weight is None:
        return SeriesH.constant(Poly(value, N, domain=QQ), order)
    return SeriesH.constant(Fraction(value), order)


def zero_vector(module: ModuleSpec) -> VermaVector:
    return VermaVector(module.weight, module.order)


def basis_vector(k: int, module: ModuleSpec) -> VermaVector:
    """b_k with coefficient 1."""
    return VermaVector(module.weight, module.order, ((k, _scalar(module.weight, module.order, 1)),))


def _check_compatible(v: VermaVector, module: ModuleSpec) -> None:
    if v.order != module.order:
        raise OrderMismatch(f"vector of order {v.order} acted on in a module of order {module.order}")
    if v.weight != module.weight:
        raise ValueError(f"vector of weight {v.weight} acted on in a module of weight {module.weight}")


def _weight_of(k: int, module: ModuleSpec) -> SeriesH:
    # H . b_k = (n - 2k) b_k
    if module.symbolic:
        return SeriesH.constant(Poly(N - 2 * k, N, domain=QQ), module.order)
    return SeriesH.constant(Fraction(module.weight - 2 * k), module.order)


def _raising_coefficient(k: int, module: ModuleSpec) -> SeriesH:
    # X^+ . b_k = psi^k(n) b_{k-1}
    if module.kind == SIMPLE:
        n = module.weight
        return SeriesH.constant(Fraction(k * (n - k + 1)), module.order)
    return evaluate(module.colouring, k, module.weight)


def act_generator(g: str, v: VermaVector, module: ModuleSpec) -> VermaVector:
    """
    Act with one generator

    Args:
        g: "H", "Xminus" or "Xplus"
        v: Vector of the module
        module: Module acted on

    Returns:
        g . v
    """
    _check_compatible(v, module)
    terms: List[Tuple[int, SeriesH]] = []
    for k, coeff in v.terms:
        if g == H:
            terms.append((k, series_mul(coeff, _weight_of(k, module))))
        elif g == XMINUS:
            if module.kind == SIMPLE and k == module.weight:
                continue
            terms.append((k + 1, coeff))
        elif g == XPLUS:
            if k == 0:
                continue
            terms.append((k - 1, series_mul(coeff, _raising_coefficient(k, module))))
        else:
            raise ValueError(f"unknown generator '{g}'")
    return VermaVector(v.weight, v.order, tuple(terms))


def act_word(word: Sequence[str], v: VermaVector, module: ModuleSpec) -> VermaVector:
    """Act with a word of generators; the last letter acts first."""
    for g in reversed(word):
        v = act_generator(g, v, module)
    return v


def act_words(combination: Iterable[Tuple[int, Sequence[str]]], v: VermaVector, module: ModuleSpec) -> VermaVector:
    """Act with an integer combination of words, given as (coefficient, word) pairs."""
    result = zero_vector(module)
    for coefficient, word in combination:
        image = act_word(word, v, module)
        result = result + image.scale(_scalar(module.weight, module.order, coefficient))
    return result


def _diagonal_value(p: SeriesH, k: int, module: ModuleSpec) -> SeriesH:
    # p(H) . b_k = p(n - 2k) b_k
    if module.symbolic:
        return series_shift(p, -2 * k)
    return p.map(lambda c: poly_eval(c, module.weight - 2 * k))


def act_element(x, v: VermaVector, module: ModuleSpec) -> VermaVector:
    """
    Act with a normal-ordered element sum (X^-)^a (X^+)^b p_{a,b}(H)

    Args:
        x: AlgebraElement (anything exposing ``order`` and ``terms`` keyed by (a, b))
        v: Finitely supported vector
        module: Module acted on

    Returns:
        x . v, exact since (X^+)^b kills b_k for b > k
    """
    _check_compatible(v, module)
    if x.order != module.order:
        raise OrderMismatch(f"element of order {x.order} acted on in a module of order {module.order}")
    result = zero_vector(module)
    for k, coeff in v.terms:
        for (a, b), p in sorted(x.terms.items()):
            if b > k:
                continue
            image = VermaVector(v.weight, v.order, ((k, series_mul(coeff, _diagonal_value(p, k, module))),))
            image = act_word([XMINUS] * a + [XPLUS] * b, image, module)
            result = result + image
    return result


def element_degree(x) -> int:
    """Degree b - a shared by every term; the zero element has degree 0."""
    degrees = {b - a for (a, b) in x.terms}
    if len(degrees) > 1:
        raise NotHomogeneous(f"element mixes degrees {sorted(degrees)}")
    return degrees.pop() if degrees else 0


def symbol_of(x, psi: Colouring, kmax: int) -> CoeffSeq:
    """
    The sequence psi(x) with x . b_k = psi(x)^k(n) b_{k-d} on V_h(n, psi), symbolic n

    Args:
        x: Homogeneous AlgebraElement of degree d
        psi: Closed-form colouring
        kmax: Largest index read off

    Returns:
        psi(x) in Coeff_{max(d, 0)}

    Raises:
        NotHomogeneous: if x mixes degrees
    """
    d = element_degree(x)
    start = max(d, 0)
    module = deformed_verma(psi)
    entries = []
    for k in range(start, kmax + 1):
        image = act_element(x, basis_vector(k, module), module)
        entries.append(image.coefficient(k - d))
    symbol = CoeffSeq(d=start, order=psi.order, entries=tuple(entries), regular_verified=True)
    report = check_verma_type(symbol)
    if not report.passed:
        logger.warning(f"Symbol fails the Verma-type conditions at {report.violations[:3]}")
    return CoeffSeq(
        d=start,
        order=psi.order,
        entries=symbol.entries,
        verma_type_verified=report.passed,
        regular_verified=True,
    )


def kills_all_vermas(x, psi: Colouring, kmax: int) -> bool:
    """
    Whether x acts by zero on b_0..b_kmax of V_h(n, psi) for symbolic n

    True certifies membership in the Tannaka ideal only up to the (kmax, order) horizon.
    """
    module = deformed_verma(psi)
    for k in range(kmax + 1):
        if not act_element(x, basis_vector(k, module), module).is_zero():
            logger.debug(f"Element survives on b_{k}")
            return False
    return True


def verma_intertwiner_check(psi: Colouring, n: int, kmax: int) -> bool:
    """
    Check that b_k -> b_{n+1+k} from V_h(-n-2, psi) to V_h(n, psi) commutes with H, X^-, X^+

    Args:
        psi: Colouring; a tabulated one must cover the indices and weights reached
        n: Non-negative highest weight
        kmax: Largest source index checked

    Returns:
        True when every generator commutes with the map on b_0..b_kmax
    """
    if n < 0:
        raise ValueError("the intertwiner exists for non-negative n only")
    source = deformed_verma(psi, -n - 2)
    target = deformed_verma(psi, n)

    def embed(v: VermaVector) -> VermaVector:
        return VermaVector(n, v.order, tuple((k + n + 1, c) for k, c in v.terms))

    for k in range(kmax + 1):
        for g in GENERATORS:
            mapped_after = embed(act_generator(g, basis_vector(k, source), source))
            acted_after = act_generator(g, basis_vector(k + n + 1, target), target)
            if mapped_after != acted_after:
                logger.debug(f"Intertwiner fails for {g} at n={n}, k={k}")
                return False
    return True


# [X^+, X^-] - H as a combination of words
CLASSICAL_RELATION = ((1, (XPLUS, XMINUS)), (-1, (XMINUS, XPLUS)), (-1, (H,)))


def classical_separation_check(nmax: int, kmax: int, order: int) -> Dict:
    """
    Check that [X^+, X^-] - H kills every V_h(n, N) and every S(n), n <= nmax, while X^+ does not

    Returns:
        Report with one boolean per check and an overall "passed"
    """
    verma = classical_verma(order)
    kills_vermas = all(
        act_words(CLASSICAL_RELATION, basis_vector(k, verma), verma).is_zero() for k in range(kmax + 1)
    )
    kills_simples = True
    for n in range(nmax + 1):
        simple = simple_module(n, order)
        if not all(act_words(CLASSICAL_RELATION, basis_vector(k, simple), simple).is_zero() for k in range(n + 1)):
            kills_simples = False
    xplus_survives = not act_generator(XPLUS, basis_vector(1, verma), verma).is_zero()
    report = {
        "relation_kills_vermas": kills_vermas,
        "relation_kills_simples": kills_simples,
        "xplus_survives": xplus_survives,
    }
    report["passed"] = all(report.values())
    logger.info(f"Classical separation check: {report}")
    return report
