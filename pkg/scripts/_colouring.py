"""
Colourings and Coefficient Sequences
Closed-form and tabulated colourings with axiom checks (C1-C3), and the sequence
spaces Coeff_d with their shift [+1]/[-1] and twist {+1}/{-1} maps
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy
from sympy import QQ, Poly

from _errors import AxiomsUnverified, AxiomViolation, NonzeroRemainder, OutOfWindow, SymbolicUnsupported, WindowExceeded
from _exactalg import (
    K,
    N,
    SeriesH,
    bipoly_eval_k,
    bipoly_from_expr,
    bipoly_substitute,
    poly_divide_exact,
    poly_from_expr,
    qnumber,
    series_eval,
    series_invert,
    series_mul,
    series_shift,
)

logger = logging.getLogger(__name__)

CLOSED = "closed"
TABULATED = "tabulated"

# Slot generators of perturbation polynomials P(c, w)
C = sympy.Symbol("c")
W = sympy.Symbol("w")

# c = k(n-k+1) and w = n-2k as polynomials in (k, n)
SLOT_C = bipoly_from_expr(K * (N - K + 1))
SLOT_W = bipoly_from_expr(N - 2 * K)

_ZERO_KN = bipoly_from_expr(0)


def _zero_series_n(order: int) -> SeriesH:
    return SeriesH.constant(Poly(0, N, domain=QQ), order)


def _verma_substitutions() -> Tuple[Tuple[Poly, Poly], Tuple[Poly, Poly]]:
    # (k, n) -> (n+k+1, n) and (k, n) -> (k, -n-2)
    reflect_k = (bipoly_from_expr(N + K + 1), bipoly_from_expr(N))
    reflect_n = (bipoly_from_expr(K), bipoly_from_expr(-N - 2))
    return reflect_k, reflect_n


# ---------------------------------------------------------------------------
# Colourings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Colouring:
    """
    A colouring psi^k(n), either in closed form (one PolyKN per h-order) or tabulated
    on a finite window of (k, n) values.
    """

    order: int
    kind: str
    hcoeffs: Tuple[Poly, ...] = ()
    kmax: int = 0
    nmin: int = 0
    nmax: int = 0
    values: Tuple[Tuple[Tuple[int, int], SeriesH], ...] = ()
    axioms_verified: bool = False
    name: str = field(default="custom", compare=False)
    # filled lazily without a lock; every entry is a pure function of the fields above
    _cache: Dict = field(init=False, default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})
        if self.order < 0:
            raise ValueError("order must be non-negative")

        if self.kind == CLOSED:
            if len(self.hcoeffs) != self.order + 1:
                raise ValueError(f"closed colouring of order {self.order} needs {self.order + 1} h-coefficients")
            object.__setattr__(self, "hcoeffs", tuple(self.hcoeffs))
            if self.hcoeffs[0] != SLOT_C:
                raise AxiomViolation("h^0 coefficient must equal k(n-k+1)", stage="C1")
        elif self.kind == TABULATED:
            if self.kmax < 1 or self.nmin > self.nmax:
                raise ValueError("tabulated colouring needs kmax >= 1 and nmin <= nmax")
            lookup = dict(self.values)
            for k in range(1, self.kmax + 1):
                for n in range(self.nmin, self.nmax + 1):
                    series = lookup.get((k, n))
                    if series is None:
                        raise ValueError(f"tabulated colouring is missing the value at (k={k}, n={n})")
                    if series.order != self.order:
                        raise ValueError(f"value at (k={k}, n={n}) has order {series.order}, expected {self.order}")
            object.__setattr__(self, "values", tuple(sorted(lookup.items(), key=lambda item: item[0])))
            self._cache["values"] = lookup
        else:
            raise ValueError(f"unknown colouring kind '{self.kind}'")

    @property
    def is_closed(self) -> bool:
        return self.kind == CLOSED


def natural_colouring(order: int) -> Colouring:
    """The natural colouring k(n-k+1), constant in h."""
    hcoeffs = (SLOT_C,) + (_ZERO_KN,) * order
    return Colouring(order=order, kind=CLOSED, hcoeffs=hcoeffs, axioms_verified=True, name="natural")


def q_colouring(order: int) -> Colouring:
    """
    The q-colouring [k]_q [n-k+1]_q with q = exp(h)

    Args:
        order: Truncation order M

    Returns:
        Closed-form colouring, axiom-checked
    """
    left = qnumber(bipoly_from_expr(K), order)
    right = qnumber(bipoly_from_expr(N - K + 1), order)
    product = series_mul(left, right)
    colouring = Colouring(order=order, kind=CLOSED, hcoeffs=product.coeffs, name="q")
    return verify_colouring(colouring)


def slot_polynomial(expr, order: int) -> SeriesH:
    """A perturbation P(c, w) constant in h, from a sympy expression in c and w."""
    return SeriesH.constant(Poly(expr, C, W, domain=QQ), order)


def slot_invariance_holds() -> bool:
    """
    Check that c = k(n-k+1) and w = n-2k are invariant under both Verma substitutions

    Returns:
        True if (k, n) -> (n+k+1, n) and (k, n) -> (k, -n-2) give -k(n+k+1) and -n-2k-2
    """
    (rk, rn), (sk, sn) = _verma_substitutions()
    expected_c = bipoly_from_expr(-K * (N + K + 1))
    expected_w = bipoly_from_expr(-N - 2 * K - 2)
    return (
        bipoly_substitute(SLOT_C, rk, rn) == expected_c
        and bipoly_substitute(SLOT_C, sk, sn) == expected_c
        and bipoly_substitute(SLOT_W, rk, rn) == expected_w
        and bipoly_substitute(SLOT_W, sk, sn) == expected_w
    )


def perturbed_colouring(P: SeriesH, order: int) -> Colouring:
    """
    The regular colouring psi^k(n) = c (1 + h P(c, w)) with c = k(n-k+1), w = n-2k

    Args:
        P: Series over polynomials in the slots (c, w)
        order: Truncation order M

    Returns:
        Closed-form colouring, axiom-checked

    Raises:
        AxiomViolation: if the constructed colouring fails check_axioms
    """
    if not slot_invariance_holds():
        raise AxiomViolation("slot polynomials are not invariant under the Verma substitutions")

    layers = P.pad(max(order - 1, 0)).coeffs
    hcoeffs = [SLOT_C]
    for m in range(1, order + 1):
        hcoeffs.append(SLOT_C * bipoly_substitute(layers[m - 1], SLOT_C, SLOT_W))
    colouring = Colouring(order=order, kind=CLOSED, hcoeffs=tuple(hcoeffs), name="perturbed")
    return verify_colouring(colouring)


def tabulate(psi: Colouring, kmax: int, nmin: int, nmax: int) -> Colouring:
    """Tabulated copy of a closed-form colouring on a window."""
    values = tuple(((k, n), evaluate(psi, k, n)) for k in range(1, kmax + 1) for n in range(nmin, nmax + 1))
    return Colouring(order=psi.order, kind=TABULATED, kmax=kmax, nmin=nmin, nmax=nmax, values=values)


def evaluate(psi: Colouring, k: int, n: Optional[int] = None) -> SeriesH:
    """
    The series psi^k(n)

    Args:
        psi: Colouring
        k: Positive index
        n: Integer weight, or None for symbolic n (closed form only)

    Returns:
        Series over Fraction for concrete n, over PolyN for symbolic n

    Raises:
        OutOfWindow: tabulated access outside the stored window
        SymbolicUnsupported: symbolic n on a tabulated colouring
    """
    if k < 1:
        raise ValueError(f"colouring index must be positive, got k={k}")

    if psi.kind == TABULATED:
        if n is None:
            raise SymbolicUnsupported("tabulated colourings have no symbolic values")
        value = psi._cache["values"].get((k, n))
        if value is None:
            raise OutOfWindow(f"(k={k}, n={n}) outside window k<={psi.kmax}, {psi.nmin}<=n<={psi.nmax}")
        return value

    key = ("symbolic", k)
    symbolic = psi._cache.get(key)
    if symbolic is None:
        symbolic = SeriesH(tuple(bipoly_eval_k(P, k) for P in psi.hcoeffs))
        psi._cache[key] = symbolic
    if n is None:
        return symbolic
    return series_eval(symbolic, n)


def unit_part_inverse(psi: Colouring, k: int) -> SeriesH:
    """
    Inverse of the unit g^k(n) in the factorization psi^{k+1}(n) = (k+1)(n-k) g^k(n)

    Args:
        psi: Closed-form colouring
        k: Non-negative index

    Returns:
        (g^k)^{-1} as a series over PolyN
    """
    key = ("unit_inverse", k)
    cached = psi._cache.get(key)
    if cached is not None:
        return cached
    divisor = poly_from_expr((k + 1) * (N - k))
    try:
        unit = evaluate(psi, k + 1).map(lambda p: poly_divide_exact(p, divisor))
    except NonzeroRemainder as e:
        raise AxiomViolation(f"psi^{k + 1}(n) is not divisible by (n-{k}): {e}", stage="C2") from None
    cached = series_invert(unit)
    psi._cache[key] = cached
    return cached


@dataclass
class AxiomFailure:
    """One failed axiom instance"""

    axiom: str
    k: Optional[int] = None
    n: Optional[int] = None
    order: Optional[int] = None
    detail: str = ""

    def to_dict(self) -> Dict:
        return {"axiom": self.axiom, "k": self.k, "n": self.n, "order": self.order, "detail": self.detail}


@dataclass
class AxiomReport:
    """Outcome of check_axioms; symbolic is True when the checks were polynomial identities"""

    symbolic: bool
    violations: List[AxiomFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict:
        return {
            "passed": self.passed,
            "symbolic": self.symbolic,
            "violations": [v.to_dict() for v in self.violations],
        }


def _check_closed(psi: Colouring) -> AxiomReport:
    report = AxiomReport(symbolic=True)
    if psi.hcoeffs[0] != SLOT_C:
        residual = psi.hcoeffs[0] - SLOT_C
        report.violations.append(AxiomFailure("C1", order=0, detail=str(residual.as_expr())))

    (rk, rn), (sk, sn) = _verma_substitutions()
    at_n_plus_1 = (bipoly_from_expr(N + 1), bipoly_from_expr(N))
    for m, P in enumerate(psi.hcoeffs):
        c2 = bipoly_substitute(P, *at_n_plus_1)
        if not c2.is_zero:
            report.violations.append(AxiomFailure("C2", order=m, detail=str(c2.as_expr())))
        c3 = bipoly_substitute(P, rk, rn) - bipoly_substitute(P, sk, sn)
        if not c3.is_zero:
            report.violations.append(AxiomFailure("C3", order=m, detail=str(c3.as_expr())))
    return report


def _check_tabulated(psi: Colouring, kmax: int, nmin: int, nmax: int) -> AxiomReport:
    report = AxiomReport(symbolic=False)
    kmax = min(kmax, psi.kmax)
    nmin = max(nmin, psi.nmin)
    nmax = min(nmax, psi.nmax)
    lookup = psi._cache["values"]

    for k in range(1, kmax + 1):
        for n in range(nmin, nmax + 1):
            leading = lookup[(k, n)].coefficient(0)
            if leading != Fraction(k * (n - k + 1)):
                report.violations.append(AxiomFailure("C1", k=k, n=n, order=0, detail=f"h^0 coefficient {leading}"))

    for n in range(max(nmin, 0), nmax + 1):
        if n + 1 <= kmax and not lookup[(n + 1, n)].is_zero():
            report.violations.append(AxiomFailure("C2", k=n + 1, n=n, detail="psi^{n+1}(n) is nonzero"))
        for k in range(1, kmax - n):
            if -n - 2 < nmin:
                break
            if lookup[(n + k + 1, n)] != lookup[(k, -n - 2)]:
                report.violations.append(AxiomFailure("C3", k=k, n=n, detail="psi^{n+k+1}(n) != psi^k(-n-2)"))
    return report


def check_axioms(psi: Colouring, kmax: int = 12, nmin: int = -12, nmax: int = 12) -> AxiomReport:
    """
    Check the colouring axioms C1-C3

    Args:
        psi: Colouring to check
        kmax: Largest index for pointwise checks (tabulated only)
        nmin: Smallest weight for pointwise checks (tabulated only)
        nmax: Largest weight for pointwise checks (tabulated only)

    Returns:
        AxiomReport; closed forms are checked as polynomial identities for all k, n at once
    """
    if psi.is_closed:
        report = _check_closed(psi)
    else:
        report = _check_tabulated(psi, kmax, nmin, nmax)
    logger.debug(f"Axiom check ({psi.kind}): {len(report.violations)} violation(s)")
    return report


def verify_colouring(psi: Colouring, kmax: int = 12, nmin: int = -12, nmax: int = 12) -> Colouring:
    """Return a copy of psi flagged as axiom-verified, or raise AxiomViolation."""
    if psi.axioms_verified:
        return psi
    report = check_axioms(psi, kmax, nmin, nmax)
    if not report.passed:
        first = report.violations[0]
        raise AxiomViolation(f"{len(report.violations)} violation(s), first at k={first.k}, n={first.n}", stage=first.axiom)
    return dataclasses.replace(psi, axioms_verified=True)


def require_verified(psi: Colouring) -> None:
    if not psi.axioms_verified:
        raise AxiomsUnverified("colouring axioms have not been verified")


# ---------------------------------------------------------------------------
# Coefficient sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoeffSeq:
    """
    An element f = (f^k)_{k >= d} of Coeff_d, stored for d <= k <= kmax as series over PolyN
    """

    d: int
    order: int
    entries: Tuple[SeriesH, ...]
    cutoff: Optional[int] = None
    verma_type_verified: bool = False
    summable_verified: bool = False
    regular_verified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.d < 0:
            raise ValueError("base index d must be non-negative")
        for s in self.entries:
            if s.order != self.order:
                raise ValueError(f"entry of order {s.order} in a sequence of order {self.order}")
        if self.cutoff is not None:
            for k in range(self.cutoff + 1, self.kmax + 1):
                if not self.entry(k).is_zero():
                    raise ValueError(f"entry k={k} is nonzero beyond the cutoff {self.cutoff}")

    @property
    def kmax(self) -> int:
        return self.d + len(self.entries) - 1

    def entry(self, k: int) -> SeriesH:
        if k < self.d or k > self.kmax:
            raise IndexError(f"index k={k} outside stored range {self.d}..{self.kmax}")
        return self.entries[k - self.d]

    def entry_or_zero(self, k: int) -> SeriesH:
        """Stored entry, or the zero series outside the stored range."""
        if self.d <= k <= self.kmax:
            return self.entries[k - self.d]
        return _zero_series_n(self.order)

    def flags(self) -> Dict[str, bool]:
        return {
            "verma_type_verified": self.verma_type_verified,
            "summable_verified": self.summable_verified,
            "regular_verified": self.regular_verified,
        }


def sequence(d: int, entries: List[SeriesH], order: Optional[int] = None, **flags) -> CoeffSeq:
    """Build a CoeffSeq, taking the order from the first entry when not given."""
    if order is None:
        if not entries:
            raise ValueError("order is required for an empty sequence")
        order = entries[0].order
    return CoeffSeq(d=d, order=order, entries=tuple(entries), **flags)


def zero_sequence(d: int, kmax: int, order: int) -> CoeffSeq:
    return CoeffSeq(d=d, order=order, entries=tuple(_zero_series_n(order) for _ in range(d, kmax + 1)))


def colouring_as_sequence(psi: Colouring, kmax: int) -> CoeffSeq:
    """Reinterpret a closed-form colouring as the sequence (psi^k)_{k>=1} in Coeff_1."""
    entries = [evaluate(psi, k) for k in range(1, kmax + 1)]
    return CoeffSeq(
        d=1,
        order=psi.order,
        entries=tuple(entries),
        verma_type_verified=psi.axioms_verified,
        regular_verified=psi.is_closed,
    )


def shift_up(f: CoeffSeq) -> CoeffSeq:
    """[+1]: Coeff_{d+1} -> Coeff_d, (f[+1])^k = f^{k+1}; keeps the Verma-type flag."""
    if f.d < 1:
        raise ValueError("shift_up needs a sequence with d >= 1")
    return dataclasses.replace(f, d=f.d - 1, cutoff=None if f.cutoff is None else f.cutoff - 1)


def shift_down(f: CoeffSeq) -> CoeffSeq:
    """[-1]: Coeff_d -> Coeff_{d+1}, (f[-1])^k = f^{k-1}; clears the Verma-type flag."""
    return dataclasses.replace(
        f,
        d=f.d + 1,
        cutoff=None if f.cutoff is None else f.cutoff + 1,
        verma_type_verified=False,
    )


def weight_shift(f: CoeffSeq, c: int) -> CoeffSeq:
    """Entrywise substitution n -> n + c; only the summability data survive."""
    return CoeffSeq(
        d=f.d,
        order=f.order,
        entries=tuple(series_shift(s, c) for s in f.entries),
        cutoff=f.cutoff,
        summable_verified=f.summable_verified,
        regular_verified=f.regular_verified,
    )


def twist_down(psi: Colouring, f: CoeffSeq) -> CoeffSeq:
    """
    {-1}: Coeff_d -> Coeff_{d+1}, (f{-1})^k(n) = psi^k(n) f^{k-1}(n)

    Args:
        psi: Axiom-verified closed-form colouring
        f: Sequence in Coeff_d

    Returns:
        Sequence in Coeff_{d+1} stored up to kmax + 1
    """
    require_verified(psi)
    entries = [series_mul(f.entry(k - 1), evaluate(psi, k)) for k in range(f.d + 1, f.kmax + 2)]
    return CoeffSeq(
        d=f.d + 1,
        order=f.order,
        entries=tuple(entries),
        cutoff=None if f.cutoff is None else f.cutoff + 1,
        verma_type_verified=f.verma_type_verified and psi.is_closed,
        summable_verified=f.summable_verified,
        regular_verified=f.regular_verified and psi.is_closed,
    )


def twist_up(psi: Colouring, theta: CoeffSeq) -> CoeffSeq:
    """
    {+1}: the unique quasi-regular sequence with twist_down(psi, result) = theta

    Args:
        psi: Axiom-verified closed-form colouring
        theta: Sequence of Verma type in Coeff_{d+1}, d >= 0

    Returns:
        Sequence in Coeff_d stored up to theta.kmax - 1

    Raises:
        NonzeroRemainder: if (n-k) does not divide theta^{k+1}; theta is then not of Verma type
    """
    require_verified(psi)
    if theta.d < 1:
        raise ValueError("twist_up needs a sequence with d >= 1")
    d = theta.d - 1
    entries = []
    for k in range(d, theta.kmax):
        divisor = poly_from_expr((k + 1) * (N - k))
        corrected = series_mul(theta.entry(k + 1), unit_part_inverse(psi, k))
        try:
            entries.append(corrected.map(lambda p: poly_divide_exact(p, divisor)))
        except NonzeroRemainder as e:
            raise NonzeroRemainder(f"{e}; the sequence is not of Verma type", stage=f"twist_up k={k}") from None
    return CoeffSeq(
        d=d,
        order=theta.order,
        entries=tuple(entries),
        cutoff=None if theta.cutoff is None else max(theta.cutoff - 1, d - 1),
        verma_type_verified=theta.verma_type_verified,
        summable_verified=theta.summable_verified,
        regular_verified=theta.regular_verified,
    )


@dataclass
class VermaTypeReport:
    """Violations of the vanishing strip and reflection conditions on a window"""

    nmax: int
    violations: List[Tuple[str, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict:
        return {
            "passed": self.passed,
            "nmax": self.nmax,
            "violations": [{"condition": c, "k": k, "n": n} for c, k, n in self.violations],
        }


def check_verma_type(f: CoeffSeq, nmax: Optional[int] = None) -> VermaTypeReport:
    """
    Check the Verma-type conditions at concrete weights n = 0..nmax

    Args:
        f: Sequence with PolyN entries
        nmax: Largest weight checked, defaults to f.kmax

    Returns:
        VermaTypeReport listing (condition, k, n) for each violation
    """
    nmax = f.kmax if nmax is None else nmax
    report = VermaTypeReport(nmax=nmax)
    for n in range(0, nmax + 1):
        for k in range(max(n + 1, f.d), min(n + f.d, f.kmax) + 1):
            if not series_eval(f.entry(k), n).is_zero():
                report.violations.append(("strip", k, n))
        for k in range(f.d, f.kmax - n):
            if series_eval(f.entry(n + k + 1), n) != series_eval(f.entry(k), -n - 2):
                report.violations.append(("reflection", k, n))
    return report


def check_summable(f: CoeffSeq, order: Optional[int] = None) -> int:
    """
    Least cutoff a with f^k = 0 mod h^(order+1) for all a < k <= kmax

    Args:
        f: Sequence to examine
        order: Truncation order, defaults to f.order

    Returns:
        The cutoff; d-1 for an identically zero sequence

    Raises:
        WindowExceeded: if the last stored entry is nonzero, so no zero tail is observed
    """
    order = f.order if order is None else order
    last_nonzero = f.d - 1
    for k in range(f.d, f.kmax + 1):
        if not f.entry(k).truncate(order).is_zero():
            last_nonzero = k
    if f.entries and last_nonzero == f.kmax:
        raise WindowExceeded(f"entry k={f.kmax} is nonzero; enlarge kmax to observe a zero tail")
    return last_nonzero


def with_cutoff(f: CoeffSeq) -> CoeffSeq:
    """Attach the certified summability cutoff; polynomial entries make the result regular."""
    cutoff = check_summable(f)
    return dataclasses.replace(f, cutoff=cutoff, summable_verified=True, regular_verified=True)
