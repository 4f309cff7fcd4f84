"""
Shared Utilities for the coloured Kac-Moody scripts
Seeded generators for perturbations, sequences, words and elements
"""

import logging
import random
from fractions import Fraction
from typing import List, Optional

from sympy import QQ, Poly

from _colouring import C, W, CoeffSeq, Colouring, perturbed_colouring
from _config import Config
from _exactalg import N, SeriesH, poly_n
from _pbw import AlgebraElement, StraighteningContext, from_word
from _verma import GENERATORS

logger = logging.getLogger(__name__)


def make_rng(seed: Optional[int] = None) -> random.Random:
    """
    Create a private random generator

    Args:
        seed: Seed value, defaults to Config.SEED

    Returns:
        random.Random seeded for reproducible draws
    """
    return random.Random(Config.SEED if seed is None else seed)


def random_rational(rng: random.Random, bound: int = 3) -> Fraction:
    """Rational with numerator in [-bound, bound] and denominator in [1, bound]."""
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_slot_polynomial(rng: random.Random, order: int, degree: int = 2) -> SeriesH:
    """
    Random perturbation P(c, w), constant in h, of total degree at most ``degree``

    Args:
        rng: Random generator
        order: Truncation order of the colouring it will perturb
        degree: Largest total degree in (c, w)

    Returns:
        Series over polynomials in (c, w)
    """
    expr = 0
    for cpow in range(degree + 1):
        for wpow in range(degree + 1 - cpow):
            if rng.random() < 0.5:
                expr += random_rational(rng) * C**cpow * W**wpow
    layer = Poly(expr, C, W, domain=QQ)
    zero = Poly(0, C, W, domain=QQ)
    return SeriesH((layer,) + (zero,) * max(order - 1, 0))


def random_colourings(count: int, order: int, seed: Optional[int] = None, degree: int = 2) -> List[Colouring]:
    """Draw ``count`` perturbed colourings from one seed."""
    rng = make_rng(seed)
    colourings = []
    for _ in range(count):
        colourings.append(perturbed_colouring(random_slot_polynomial(rng, order, degree), order))
    logger.debug(f"Generated {count} perturbed colouring(s) at order {order}")
    return colourings


def random_poly_n(rng: random.Random, degree: int = 2) -> Poly:
    return poly_n([random_rational(rng) for _ in range(degree + 1)])


def random_regular_sequence(
    rng: random.Random, d: int, kmax: int, order: int, support: int = 3, degree: int = 2
) -> CoeffSeq:
    """
    Random sequence in Coeff_d with polynomial entries on d <= k < d + support and zero beyond

    Args:
        rng: Random generator
        d: Base index
        kmax: Last stored index
        order: Truncation order
        support: Number of leading indices that may be nonzero
        degree: Degree bound of each h-coefficient in n

    Returns:
        A regular, finitely supported CoeffSeq
    """
    entries = []
    for k in range(d, kmax + 1):
        if k < d + support:
            entries.append(SeriesH(tuple(random_poly_n(rng, degree) for _ in range(order + 1))))
        else:
            entries.append(SeriesH.constant(Poly(0, N, domain=QQ), order))
    return CoeffSeq(d=d, order=order, entries=tuple(entries), regular_verified=True)


def random_word(rng: random.Random, max_length: int = 6) -> List[str]:
    """Random word over H, Xminus, Xplus of length 0..max_length."""
    return [rng.choice(GENERATORS) for _ in range(rng.randint(0, max_length))]


def random_element(rng: random.Random, context: StraighteningContext, words: int = 2, max_length: int = 3) -> AlgebraElement:
    """Random rational combination of the normal forms of a few short words."""
    result = AlgebraElement(context.order, context=context)
    for _ in range(words):
        result = result + from_word(random_word(rng, max_length), context).scale(random_rational(rng))
    return result


def plant_value(psi: Colouring, k: int, n: int, value: SeriesH) -> Colouring:
    """Copy of a tabulated colouring with the value at (k, n) replaced."""
    values = tuple(((key, value) if key == (k, n) else (key, s)) for key, s in psi.values)
    return Colouring(order=psi.order, kind=psi.kind, kmax=psi.kmax, nmin=psi.nmin, nmax=psi.nmax, values=values)
