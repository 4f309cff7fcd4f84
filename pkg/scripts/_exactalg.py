"""
Exact Arithmetic Kernels
Rationals, polynomials in n and in (k, n), and truncated power series in h

PolyN values are sympy polynomials over QQ in the single generator ``n`` (read as H
in the algebra); PolyKN values are sympy polynomials over QQ in ``(k, n)``. A SeriesH
holds M+1 coefficients over one of these rings or over Fraction, and every identity
between series holds modulo h^(M+1).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple, Union

import sympy
from sympy import QQ, Poly
from sympy.polys.polyerrors import ExactQuotientFailed

from _errors import NonzeroRemainder, NotAUnit, OrderMismatch

logger = logging.getLogger(__name__)

N = sympy.Symbol("n")
K = sympy.Symbol("k")

Coefficient = Union[Fraction, Poly]


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------


def to_fraction(value: Any) -> Fraction:
    """
    Convert an exact rational value to a Fraction

    Args:
        value: int, Fraction, "p/q" string or sympy rational

    Returns:
        The value as a Fraction in lowest terms
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def to_sympy(value: Any) -> sympy.Rational:
    """Convert an exact rational value to a sympy Rational."""
    fraction = to_fraction(value)
    return sympy.Rational(fraction.numerator, fraction.denominator)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def poly_n(coeffs: Sequence[Any]) -> Poly:
    """
    Build a PolyN from coefficients listed lowest power first

    Args:
        coeffs: Rational-like coefficients; an empty sequence is the zero polynomial

    Returns:
        Polynomial in n over QQ
    """
    values = [to_sympy(c) for c in coeffs]
    if not values:
        return Poly(0, N, domain=QQ)
    return Poly.from_list(list(reversed(values)), N, domain=QQ)


def poly_from_expr(expr: Any) -> Poly:
    """PolyN from a sympy expression in n."""
    return Poly(expr, N, domain=QQ)


def bipoly_from_expr(expr: Any) -> Poly:
    """PolyKN from a sympy expression in k and n."""
    return Poly(expr, K, N, domain=QQ)


def bipoly_from_terms(terms: Iterable[Tuple[int, int, Any]]) -> Poly:
    """
    Build a PolyKN from (k-power, n-power, coefficient) records

    Args:
        terms: Records; repeated monomials are summed

    Returns:
        Polynomial in (k, n) over QQ
    """
    rep: dict = {}
    for kpow, npow, coeff in terms:
        if kpow < 0 or npow < 0:
            raise ValueError(f"negative exponent ({kpow}, {npow})")
        rep[(kpow, npow)] = rep.get((kpow, npow), 0) + to_sympy(coeff)
    rep = {monomial: c for monomial, c in rep.items() if c != 0}
    if not rep:
        return Poly(0, K, N, domain=QQ)
    return Poly.from_dict(rep, K, N, domain=QQ)


def poly_coefficients(p: Poly) -> List[Fraction]:
    """Coefficients of a PolyN lowest power first; the zero polynomial has none."""
    if p.is_zero:
        return []
    return [to_fraction(c) for c in reversed(p.all_coeffs())]


def bipoly_terms(P: Poly) -> List[Tuple[int, int, Fraction]]:
    """Nonzero (k-power, n-power, coefficient) records of a PolyKN, sorted by monomial."""
    return sorted((kpow, npow, to_fraction(c)) for (kpow, npow), c in P.terms() if c != 0)


def as_polyn(p: Poly) -> Poly:
    """Re-home a univariate polynomial onto the generator n over QQ."""
    if p.gens == (N,) and p.domain == QQ:
        return p
    return Poly(p.as_expr(), N, domain=QQ)


def poly_divide_exact(p: Poly, q: Poly) -> Poly:
    """
    Divide p by q exactly

    Args:
        p: Dividend
        q: Nonzero divisor

    Returns:
        r with q * r = p

    Raises:
        NonzeroRemainder: if q does not divide p
    """
    if q.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    try:
        return p.exquo(q)
    except ExactQuotientFailed:
        raise NonzeroRemainder(f"{q.as_expr()} does not divide {p.as_expr()}") from None


def poly_shift(p: Poly, c: int) -> Poly:
    """Return the PolyN n -> p(n + c)."""
    if c == 0 or p.is_zero:
        return p
    return p.shift(c)


def poly_eval(p: Poly, n: int) -> Fraction:
    """Evaluate a PolyN at an integer."""
    return to_fraction(p.eval(n))


def bipoly_eval_k(P: Poly, k: int) -> Poly:
    """Specialize a PolyKN at an integer k, giving a PolyN."""
    return as_polyn(P.eval(K, k))


def bipoly_eval(P: Poly, k: int, n: int) -> Fraction:
    """Evaluate a PolyKN at integers (k, n)."""
    return poly_eval(bipoly_eval_k(P, k), n)


def bipoly_substitute(P: Poly, kvalue: Poly, nvalue: Poly) -> Poly:
    """
    Substitute k -> kvalue and n -> nvalue simultaneously in a PolyKN

    Args:
        P: Polynomial in (k, n)
        kvalue: PolyKN replacing k
        nvalue: PolyKN replacing n

    Returns:
        The composed PolyKN
    """
    result = Poly(0, K, N, domain=QQ)
    for (kpow, npow), c in P.terms():
        if c == 0:
            continue
        result = result + (kvalue**kpow) * (nvalue**npow) * c
    return result


def compose(p: Poly, q: Poly) -> Poly:
    """Horner composition p(q) of a univariate p with a polynomial q in any generators."""
    result = q * 0
    for c in p.all_coeffs():
        result = result * q + c
    return result


def falling_factorial(k: int) -> Poly:
    """The PolyN n (n-1) ... (n-k+1); the empty product is 1."""
    result = Poly(1, N, domain=QQ)
    for b in range(1, k + 1):
        result = result * Poly(N - b + 1, N, domain=QQ)
    return result


# ---------------------------------------------------------------------------
# Truncated power series in h
# ---------------------------------------------------------------------------


def _is_zero(c: Coefficient) -> bool:
    if isinstance(c, Poly):
        return c.is_zero
    return c == 0


def _zero_like(c: Coefficient) -> Coefficient:
    if isinstance(c, Poly):
        return c * 0
    return Fraction(0)


def _ring_constant(like: Coefficient, value: Fraction) -> Coefficient:
    if isinstance(like, Poly):
        return Poly(to_sympy(value), *like.gens, domain=QQ)
    return Fraction(value)


def _times(x: Coefficient, y: Coefficient) -> Coefficient:
    if isinstance(x, Poly) and not isinstance(y, Poly):
        return x * to_sympy(y)
    if isinstance(y, Poly) and not isinstance(x, Poly):
        return y * to_sympy(x)
    return x * y


@dataclass(frozen=True)
class SeriesH:
    """Element of R[[h]] / h^(M+1) with coefficients over Fraction, PolyN or PolyKN"""

    coeffs: Tuple[Coefficient, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least its h^0 coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: Any, order: int) -> "SeriesH":
        """The series value + 0 h + ... + 0 h^M."""
        if not isinstance(value, Poly):
            value = to_fraction(value)
        return cls((value,) + (_zero_like(value),) * order)

    @classmethod
    def monomial(cls, value: Any, power: int, order: int) -> "SeriesH":
        """The series value * h^power, truncated at order."""
        if not isinstance(value, Poly):
            value = to_fraction(value)
        zero = _zero_like(value)
        return cls(tuple(value if m == power else zero for m in range(order + 1)))

    def zero(self) -> "SeriesH":
        """The zero series of the same ring and order."""
        z = _zero_like(self.coeffs[0])
        return SeriesH((z,) * len(self.coeffs))

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def valuation(self) -> Optional[int]:
        """Smallest m with a nonzero h^m coefficient, None for the zero series."""
        for m, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return m
        return None

    def coefficient(self, m: int) -> Coefficient:
        return self.coeffs[m]

    def truncate(self, order: int) -> "SeriesH":
        if order > self.order:
            raise OrderMismatch(f"cannot truncate order {self.order} to higher order {order}")
        return SeriesH(self.coeffs[: order + 1])

    def pad(self, order: int) -> "SeriesH":
        """Extend with zero coefficients up to the given order."""
        if order < self.order:
            return self.truncate(order)
        z = _zero_like(self.coeffs[0])
        return SeriesH(self.coeffs + (z,) * (order - self.order))

    def map(self, fn: Callable[[Coefficient], Coefficient]) -> "SeriesH":
        return SeriesH(tuple(fn(c) for c in self.coeffs))

    def _check(self, other: "SeriesH") -> None:
        if self.order != other.order:
            raise OrderMismatch(f"series of orders {self.order} and {other.order} combined")

    def __add__(self, other: "SeriesH") -> "SeriesH":
        self._check(other)
        return SeriesH(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "SeriesH") -> "SeriesH":
        self._check(other)
        return SeriesH(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "SeriesH":
        return SeriesH(tuple(-c for c in self.coeffs))

    def __mul__(self, other: Any) -> "SeriesH":
        if isinstance(other, SeriesH):
            return series_mul(self, other)
        if not isinstance(other, Poly):
            other = to_fraction(other)
        return SeriesH(tuple(_times(c, other) for c in self.coeffs))

    __rmul__ = __mul__


def series_mul(a: SeriesH, b: SeriesH) -> SeriesH:
    """
    Cauchy product truncated at the common order

    Args:
        a: Left factor
        b: Right factor of the same order

    Returns:
        a * b modulo h^(M+1)

    Raises:
        OrderMismatch: if the orders differ
    """
    if a.order != b.order:
        raise OrderMismatch(f"series of orders {a.order} and {b.order} multiplied")
    order = a.order
    zero = _zero_like(_times(a.coeffs[0], b.coeffs[0]))
    out = [zero] * (order + 1)
    for i, x in enumerate(a.coeffs):
        if _is_zero(x):
            continue
        for j in range(order + 1 - i):
            y = b.coeffs[j]
            if _is_zero(y):
                continue
            out[i + j] = out[i + j] + _times(x, y)
    return SeriesH(tuple(out))


def series_invert(a: SeriesH) -> SeriesH:
    """
    Invert a unit of R[[h]] by the term-by-term recursion on h-order

    Args:
        a: Series whose h^0 coefficient is a nonzero constant

    Returns:
        b with a * b = 1 modulo h^(M+1)

    Raises:
        NotAUnit: if the h^0 coefficient is zero or non-constant
    """
    a0 = a.coeffs[0]
    if isinstance(a0, Poly):
        if a0.is_zero or not a0.is_ground:
            raise NotAUnit(f"h^0 coefficient {a0.as_expr()} is not a nonzero constant")
        inverse0 = 1 / to_fraction(a0.LC())
    else:
        if a0 == 0:
            raise NotAUnit("h^0 coefficient is zero")
        inverse0 = 1 / to_fraction(a0)

    out = [_ring_constant(a0, inverse0)]
    for m in range(1, a.order + 1):
        acc = _zero_like(a0)
        for i in range(1, m + 1):
            if _is_zero(a.coeffs[i]):
                continue
            acc = acc + _times(a.coeffs[i], out[m - i])
        out.append(_times(acc, -inverse0))
    return SeriesH(tuple(out))


def series_shift(s: SeriesH, c: int) -> SeriesH:
    """Substitute n -> n + c in every coefficient of a series over PolyN."""
    if c == 0:
        return s
    return s.map(lambda p: poly_shift(p, c))


def series_eval(s: SeriesH, n: int) -> SeriesH:
    """Evaluate a series over PolyN at an integer, giving a series over Fraction."""
    return s.map(lambda p: poly_eval(p, n))


# ---------------------------------------------------------------------------
# q-numbers
# ---------------------------------------------------------------------------


def _sinh_quotient_denominator(order: int) -> SeriesH:
    # sinh(h) / h
    return SeriesH(tuple(Fraction(1, factorial(m + 1)) if m % 2 == 0 else Fraction(0) for m in range(order + 1)))


@lru_cache(maxsize=None)
def _qnumber_layers(order: int) -> SeriesH:
    """[n]_q as a series over PolyN: (sinh(n h) / h) * (h / sinh(h))."""
    numerator = SeriesH(
        tuple(
            Poly(N ** (m + 1) / factorial(m + 1), N, domain=QQ) if m % 2 == 0 else Poly(0, N, domain=QQ)
            for m in range(order + 1)
        )
    )
    return series_mul(numerator, series_invert(_sinh_quotient_denominator(order)))


def qnumber(arg: Union[int, Poly, None], order: int) -> SeriesH:
    """
    Truncated expansion of [arg]_q = sinh(arg h) / sinh(h) with q = exp(h)

    Args:
        arg: Integer, polynomial argument (PolyN or PolyKN), or None for the generator n
        order: Truncation order M

    Returns:
        Series over Fraction for an integer argument, over the argument's ring otherwise
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if arg is None:
        return _qnumber_layers(order)
    if isinstance(arg, Poly):
        return _qnumber_layers(order).map(lambda layer: compose(layer, arg))
    j = int(arg)
    numerator = SeriesH(
        tuple(Fraction(j ** (m + 1), factorial(m + 1)) if m % 2 == 0 else Fraction(0) for m in range(order + 1))
    )
    return series_mul(numerator, series_invert(_sinh_quotient_denominator(order)))
