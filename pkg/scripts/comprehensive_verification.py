"""
Comprehensive Verification for coloured Kac-Moody computations
Full acceptance run over straightening, the quantum relation, the solver and the modules
"""

import logging
import sys
import time
from datetime import datetime
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from _colouring import (
    C,
    W,
    CoeffSeq,
    check_axioms,
    evaluate,
    natural_colouring,
    perturbed_colouring,
    q_colouring,
    slot_polynomial,
    tabulate,
    twist_down,
)
from _config import Config
from _documents import dumps
from _exactalg import K, N, SeriesH, bipoly_from_expr, poly_from_expr, qnumber, series_mul
from _ltimes import ltimes, solve, solve_straightening, straightening_rhs, verify_solution
from _pbw import b_trivialization_image, from_word, generator, quantum_commutator, quantum_relation_check, straightening_context
from _shared_utilities import make_rng, plant_value, random_colourings, random_regular_sequence, random_word
from _verma import (
    XPLUS,
    act_element,
    act_word,
    basis_vector,
    classical_separation_check,
    classical_verma,
    deformed_verma,
    verma_intertwiner_check,
    zero_vector,
)

# Configure logging
logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

GENERATED_COLOURINGS = 20


def _series_n(*layers) -> SeriesH:
    return SeriesH(tuple(poly_from_expr(layer) for layer in layers))


def _pbw_colourings(order: int) -> List:
    return [natural_colouring(order), q_colouring(order)] + [
        perturbed_colouring(slot_polynomial(P, order), order) for P in (1, W, C)
    ]


def check_natural_straightening() -> Tuple[bool, Dict]:
    """solve_straightening(N, kmax=12, M=6) is (n, 1, 0, ..., 0)."""
    xi = solve_straightening(natural_colouring(6), 12)
    zero = _series_n(*([0] * 7))
    expected = [_series_n(N, *([0] * 6)), _series_n(1, *([0] * 6))] + [zero] * 11
    return list(xi.entries) == expected, {"cutoff": xi.cutoff}


def check_quantum_straightening() -> Tuple[bool, Dict]:
    """solve_straightening(psi_q, kmax=12, M=6) is ([n]_q, 1, 0, ...), certified by the q-identity."""
    order = 6
    xi = solve_straightening(q_colouring(order), 12)
    one = _series_n(1, *([0] * order))
    solved = xi.entry(0) == qnumber(None, order) and xi.entry(1) == one and all(s.is_zero() for s in xi.entries[2:])

    def q(expr):
        return qnumber(bipoly_from_expr(expr), order)

    lhs = series_mul(q(K + 1), q(N - K)) - series_mul(q(K), q(N - K + 1))
    identity = lhs == q(N - 2 * K)
    return solved and identity, {"solution_matches": solved, "q_identity": identity}


def check_quantum_relation() -> Tuple[bool, Dict]:
    """[X^+, X^-] = [H]_q at M in {0, 2, 4, 6}, with the explicit h^2 layer at M=2."""
    results = {str(order): quantum_relation_check(order) for order in (0, 2, 4, 6)}
    commutator = quantum_commutator(2)
    expected = _series_n(N, 0, (N**3 - N) / 6)
    layer_ok = set(commutator.terms) == {(0, 0)} and commutator.terms[(0, 0)] == expected
    results["order_2_layers"] = layer_ok
    return all(results.values()), results


def check_solver_round_trip() -> Tuple[bool, Dict]:
    """Round trip for psi[+1] and for twisted random right-hand sides, then uniqueness checks."""
    order, kmax = 4, 10
    rng = make_rng()
    round_trips = 0
    unique = 0
    colourings = random_colourings(GENERATED_COLOURINGS, order)
    for psi in colourings:
        theta = straightening_rhs(psi, kmax)
        xi = solve(psi, theta)
        if verify_solution(psi, xi, theta):
            round_trips += 1

        base = random_regular_sequence(rng, 0, kmax - 1, order)
        twisted = twist_down(psi, ltimes(psi, base))
        eta = solve(psi, twisted)
        if verify_solution(psi, eta, twisted):
            round_trips += 1

        bumped = list(xi.entries)
        bumped[1] = bumped[1] + SeriesH.monomial(poly_from_expr(1), 1, order)
        if not verify_solution(psi, CoeffSeq(d=xi.d, order=order, entries=tuple(bumped)), theta):
            unique += 1
    passed = round_trips == 2 * len(colourings) and unique == len(colourings)
    return passed, {"round_trips": round_trips, "uniqueness_failures_detected": unique}


def check_action_coherence(words: int = 100) -> Tuple[bool, Dict]:
    """Normal forms of random words act on b_0..b_8 as the words themselves."""
    order = 4
    rng = make_rng()
    sample = [random_word(rng, 6) for _ in range(words)]
    mismatches = 0
    for psi in _pbw_colourings(order):
        context = straightening_context(psi, Config.KMAX)
        module = deformed_verma(psi)
        for word in sample:
            element = from_word(word, context)
            for k in range(9):
                v = basis_vector(k, module)
                if act_element(element, v, module) != act_word(word, v, module):
                    mismatches += 1
    return mismatches == 0, {"words": words, "mismatches": mismatches}


def check_b_trivialization() -> Tuple[bool, Dict]:
    """The b-trivialization image of X^+ acts on V_h(n, N) with the colouring psi."""
    order, kmax = 4, 10
    module = classical_verma(order)
    results = {}
    image = b_trivialization_image(natural_colouring(order), kmax)
    results["natural_is_xplus"] = image.terms == generator(XPLUS, order).terms
    for name, psi in zip(("q", "p_1", "p_w", "p_c"), _pbw_colourings(order)[1:]):
        image = b_trivialization_image(psi, kmax)
        ok = True
        for k in range(kmax + 1):
            acted = act_element(image, basis_vector(k, module), module)
            if k == 0:
                expected = zero_vector(module)
            else:
                expected = basis_vector(k - 1, module).scale(evaluate(psi, k))
            ok = ok and acted == expected
        results[name] = ok
    return all(results.values()), results


def check_axiom_suite() -> Tuple[bool, Dict]:
    """Symbolic checks at M <= 8, and three planted violations located."""
    results = {}
    results["symbolic"] = all(
        check_axioms(natural_colouring(m)).passed and check_axioms(q_colouring(m)).passed for m in range(9)
    )
    table = tabulate(natural_colouring(2), 6, -8, 8)
    plants = {
        "C1": (2, 5, SeriesH((Fraction(9), Fraction(0), Fraction(0)))),
        "C2": (1, 0, SeriesH((Fraction(0), Fraction(1), Fraction(0)))),
        "C3": (1, -2, SeriesH((Fraction(-2), Fraction(1), Fraction(0)))),
    }
    expected_location = {"C1": (2, 5), "C2": (1, 0), "C3": (1, 0)}
    for axiom, (k, n, value) in plants.items():
        report = check_axioms(plant_value(table, k, n, value), 6, -8, 8)
        found = [(v.k, v.n) for v in report.violations if v.axiom == axiom]
        results[axiom] = found == [expected_location[axiom]] and len(report.violations) == 1
    return all(results.values()), results


def check_intertwiners() -> Tuple[bool, Dict]:
    """b_k -> b_{n+1+k} intertwines for n = 0..5 and all test colourings."""
    order, kmax = 4, 10
    colourings = [natural_colouring(order), q_colouring(order)] + random_colourings(GENERATED_COLOURINGS, order)
    failures = 0
    for psi in colourings:
        for n in range(Config.INTERTWINER_NMAX + 1):
            if not verma_intertwiner_check(psi, n, kmax):
                failures += 1
    return failures == 0, {"colourings": len(colourings), "failures": failures}


def check_classical_separation() -> Tuple[bool, Dict]:
    report = classical_separation_check(8, Config.KMAX, 4)
    return report["passed"], report


CHECKS: List[Tuple[str, Callable[[], Tuple[bool, Dict]]]] = [
    ("natural_straightening", check_natural_straightening),
    ("quantum_straightening", check_quantum_straightening),
    ("quantum_relation", check_quantum_relation),
    ("solver_round_trip", check_solver_round_trip),
    ("action_coherence", check_action_coherence),
    ("b_trivialization", check_b_trivialization),
    ("axiom_suite", check_axiom_suite),
    ("intertwiners", check_intertwiners),
    ("classical_separation", check_classical_separation),
]


def run_comprehensive_verification() -> Dict:
    """
    Run every acceptance check

    Returns:
        Dictionary with per-check results, timings and an overall status
    """
    logger.info("Starting comprehensive verification...")

    is_valid, errors = Config.validate()
    if not is_valid:
        logger.error("Configuration validation failed:")
        for error in errors:
            logger.error(f"  - {error}")
        return {"status": "error", "errors": errors}

    results = {"timestamp": datetime.now().isoformat(), "status": "success", "checks": {}}
    for name, check in CHECKS:
        logger.info(f"Running {name}...")
        started = time.perf_counter()
        try:
            passed, details = check()
        except Exception as e:
            logger.error(f"{name} raised {type(e).__name__}: {e}")
            passed, details = False, {"error": type(e).__name__, "message": str(e)}
        elapsed = round(time.perf_counter() - started, 3)
        results["checks"][name] = {"passed": passed, "seconds": elapsed, "details": details}
        logger.info(f"{name}: {'passed' if passed else 'FAILED'} in {elapsed}s")

    failed = [name for name, outcome in results["checks"].items() if not outcome["passed"]]
    if failed:
        results["status"] = "failed"
        logger.warning(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    else:
        logger.info("All checks passed")
    return results


if __name__ == "__main__":
    results = run_comprehensive_verification()
    sys.stdout.write(dumps(results))
    sys.exit(0 if results["status"] == "success" else 1)
