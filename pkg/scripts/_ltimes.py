"""
Ltimes Product and Triangular Solver
(psi ⋉ xi)^k(n) = sum_{a=d}^{k} (prod_{b=k-a+1}^{k} psi^b(n)) xi^a(n-2k), and the unique
quasi-regular solution of psi ⋉ xi = theta for theta of Verma type
"""

import dataclasses
import logging
from typing import Dict, Optional, Tuple

from sympy import QQ, Poly

from _colouring import (
    Colouring,
    CoeffSeq,
    check_summable,
    check_verma_type,
    colouring_as_sequence,
    evaluate,
    natural_colouring,
    require_verified,
    shift_down,
    shift_up,
    twist_up,
    weight_shift,
)
from _errors import NonzeroRemainder, SymbolicUnsupported, WindowExceeded
from _exactalg import N, SeriesH, falling_factorial, poly_divide_exact, series_invert, series_mul, series_shift

logger = logging.getLogger(__name__)


class LtimesContext:
    """
    Cached prefix products of a closed-form colouring

    product(k, a) = prod_{b=k-a+1}^{k} psi^b(n); the full prefix product(k, k) factors as
    n(n-1)...(n-k+1) * F_k(n) with F_k a unit whose h^0 coefficient is k!.
    """

    def __init__(self, psi: Colouring):
        require_verified(psi)
        if not psi.is_closed:
            raise SymbolicUnsupported("the ltimes product needs a closed-form colouring")
        self.psi = psi
        self.order = psi.order
        self._products: Dict[Tuple[int, int], SeriesH] = {}
        self._unit_inverses: Dict[int, SeriesH] = {}

    def one(self) -> SeriesH:
        return SeriesH.constant(Poly(1, N, domain=QQ), self.order)

    def product(self, k: int, a: int) -> SeriesH:
        if a == 0:
            return self.one()
        key = (k, a)
        cached = self._products.get(key)
        if cached is None:
            cached = series_mul(self.product(k, a - 1), evaluate(self.psi, k - a + 1))
            self._products[key] = cached
        return cached

    def unit_inverse(self, k: int) -> SeriesH:
        """F_k^{-1}, inverse of the prefix product divided by the falling factorial."""
        cached = self._unit_inverses.get(k)
        if cached is None:
            divisor = falling_factorial(k)
            unit = self.product(k, k).map(lambda p: poly_divide_exact(p, divisor))
            cached = series_invert(unit)
            self._unit_inverses[k] = cached
            logger.debug(f"Cached unit inverse F_{k}^-1")
        return cached


def context_for(psi: Colouring) -> LtimesContext:
    """The shared LtimesContext of a colouring, built on first use."""
    context = psi._cache.get("ltimes")
    if context is None:
        context = LtimesContext(psi)
        psi._cache["ltimes"] = context
    return context


def ltimes(psi: Colouring, xi: CoeffSeq) -> CoeffSeq:
    """
    The sequence psi ⋉ xi on d <= k <= xi.kmax

    Args:
        psi: Axiom-verified closed-form colouring
        xi: Sequence in Coeff_d

    Returns:
        psi ⋉ xi in Coeff_d; of Verma type since psi is a verified colouring
    """
    context = context_for(psi)
    entries = []
    for k in range(xi.d, xi.kmax + 1):
        total = SeriesH.constant(Poly(0, N, domain=QQ), xi.order)
        for a in range(xi.d, k + 1):
            term = xi.entry(a)
            if term.is_zero():
                continue
            total = total + series_mul(context.product(k, a), series_shift(term, -2 * k))
        entries.append(total)
    return CoeffSeq(
        d=xi.d,
        order=xi.order,
        entries=tuple(entries),
        verma_type_verified=True,
        regular_verified=True,
    )


def _solve_base(context: LtimesContext, theta: CoeffSeq) -> CoeffSeq:
    """Triangular recursion for d = 0."""
    xi = []
    for k in range(0, theta.kmax + 1):
        residual = theta.entry(k)
        for a in range(k):
            if xi[a].is_zero():
                continue
            residual = residual - series_mul(context.product(k, a), series_shift(xi[a], -2 * k))
        corrected = series_mul(residual, context.unit_inverse(k))
        divisor = falling_factorial(k)
        try:
            shifted = corrected.map(lambda p: poly_divide_exact(p, divisor))
        except NonzeroRemainder as e:
            raise NonzeroRemainder(f"{e}; the right-hand side is not of Verma type", stage=f"stage k={k}") from None
        xi.append(series_shift(shifted, 2 * k))
        logger.debug(f"Solved stage k={k}")
    return CoeffSeq(d=0, order=theta.order, entries=tuple(xi), regular_verified=True)


def _solve_reduced(context: LtimesContext, theta: CoeffSeq) -> CoeffSeq:
    if theta.d == 0:
        return _solve_base(context, theta)
    lowered = _solve_reduced(context, twist_up(context.psi, theta))
    return shift_down(weight_shift(lowered, 2))


def solve(psi: Colouring, theta: CoeffSeq) -> CoeffSeq:
    """
    Unique quasi-regular solution xi of psi ⋉ xi = theta on d <= k <= theta.kmax

    Args:
        psi: Axiom-verified closed-form colouring
        theta: Sequence of Verma type in Coeff_d

    Returns:
        The solution in Coeff_d, with a summability cutoff attached when one is observed

    Raises:
        AxiomsUnverified: if psi has not been verified
        NonzeroRemainder: if theta is not of Verma type
    """
    context = context_for(psi)
    if not theta.verma_type_verified:
        report = check_verma_type(theta)
        if not report.passed:
            condition, k, n = report.violations[0]
            raise NonzeroRemainder(f"{condition} condition fails at k={k}, n={n}", stage="verma type")
        theta = dataclasses.replace(theta, verma_type_verified=True)

    logger.info(f"Solving psi ⋉ xi = theta at d={theta.d}, kmax={theta.kmax}, order={theta.order}")
    xi = _solve_reduced(context, theta)
    xi = dataclasses.replace(xi, regular_verified=True)

    try:
        cutoff = check_summable(xi)
    except WindowExceeded:
        logger.debug("No zero tail inside the solve horizon; solution left without a cutoff")
        return xi
    logger.info(f"Solution found with summability cutoff {cutoff}")
    return dataclasses.replace(xi, cutoff=cutoff, summable_verified=True)


def straightening_rhs(psi: Colouring, kmax: int) -> CoeffSeq:
    """psi[+1] in Coeff_0 on 0 <= k <= kmax."""
    return shift_up(colouring_as_sequence(psi, kmax + 1))


def _require_cutoff(xi: CoeffSeq) -> CoeffSeq:
    if xi.cutoff is None:
        raise WindowExceeded(f"no zero tail up to k={xi.kmax}; enlarge kmax")
    return xi


def solve_straightening(psi: Colouring, kmax: int) -> CoeffSeq:
    """
    The straightening sequence: regular summable xi in Coeff_0 with psi ⋉ xi = psi[+1]

    Raises:
        WindowExceeded: if the solution shows no zero tail within kmax
    """
    return _require_cutoff(solve(psi, straightening_rhs(psi, kmax)))


def solve_b_trivialization(psi: Colouring, kmax: int) -> CoeffSeq:
    """
    The regular solution xi in Coeff_1 of N ⋉ xi = psi, N the natural colouring

    Args:
        psi: Axiom-verified closed-form colouring
        kmax: Solve horizon

    Returns:
        xi with h^0 layer (1, 0, 0, ...)
    """
    require_verified(psi)
    return solve(natural_colouring(psi.order), colouring_as_sequence(psi, kmax))


def verify_solution(psi: Colouring, xi: CoeffSeq, theta: CoeffSeq, kmax: Optional[int] = None) -> bool:
    """
    Check psi ⋉ xi = theta entrywise on d <= k <= kmax; entries of xi past its range count as zero

    Returns:
        True when every compared entry agrees modulo h^(M+1)
    """
    kmax = theta.kmax if kmax is None else min(kmax, theta.kmax)
    if xi.d != theta.d:
        logger.debug(f"Solution base index {xi.d} differs from right-hand side base index {theta.d}")
        return False
    padded = CoeffSeq(d=xi.d, order=xi.order, entries=tuple(xi.entry_or_zero(k) for k in range(xi.d, kmax + 1)))
    product = ltimes(psi, padded)
    for k in range(theta.d, kmax + 1):
        if product.entry(k) != theta.entry(k):
            logger.debug(f"Solution check fails at k={k}")
            return False
    return True


def observed_degree_bound(xi: CoeffSeq) -> Dict[int, Optional[int]]:
    """Per h-order m, the largest stored k with a nonzero h^m coefficient (None when all vanish)."""
    bound: Dict[int, Optional[int]] = {}
    for m in range(xi.order + 1):
        bound[m] = None
        for k in range(xi.d, xi.kmax + 1):
            if not xi.entry(k).coefficient(m).is_zero:
                bound[m] = k
    return bound
