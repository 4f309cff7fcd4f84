"""
Coloured Kac-Moody command line
Verification and computation pipeline with JSON input and output

Usage:
    python scripts/coloured_km.py <command> [--order M] [--kmax K] [--nmin A] [--nmax B]
        [--colouring natural|q|file:PATH] [--in PATH] [--out PATH] [--seed S]

Exit status: 0 on success or a passing check, 1 on a failing check or a library error,
2 on malformed input or arguments.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from _colouring import Colouring, check_axioms, natural_colouring, perturbed_colouring, q_colouring, verify_colouring
from _config import Config
from _documents import (
    POLY_N,
    decode_colouring,
    decode_sequence,
    decode_slot_polynomial,
    decode_vector,
    decode_word,
    dumps,
    encode_axiom_report,
    encode_colouring,
    encode_element,
    encode_error,
    encode_sequence,
    encode_series,
    encode_slot_polynomial,
    encode_vector,
    loads,
)
from _errors import ColouredAlgebraError, InputSchemaError
from _exactalg import qnumber
from _ltimes import solve, solve_b_trivialization, solve_straightening
from _pbw import AlgebraElement, from_word, quantum_commutator, straightening_context
from _shared_utilities import make_rng, random_slot_polynomial
from _verma import act_word, deformed_verma

logger = logging.getLogger(__name__)

COMMANDS = ("verify", "solve", "straighten", "btriv", "act", "normal-form", "quantum-check", "generate")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise InputSchemaError(message, stage="arguments")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="coloured_km", description="Exact computations in rank-one coloured Kac-Moody algebras")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--order", type=int, default=Config.ORDER, help="truncation order M")
    parser.add_argument("--kmax", type=int, default=Config.KMAX, help="solve and basis horizon")
    parser.add_argument("--nmin", type=int, default=Config.NMIN, help="smallest weight for pointwise checks")
    parser.add_argument("--nmax", type=int, default=Config.NMAX, help="largest weight for pointwise checks")
    parser.add_argument("--colouring", default="natural", help="natural, q, or file:PATH")
    parser.add_argument("--in", dest="input", default=None, help="input document")
    parser.add_argument("--out", default=None, help="output path, stdout when absent")
    parser.add_argument("--seed", type=int, default=Config.SEED, help="seed for generated inputs")
    return parser


def _read_document(path: Optional[str], command: str) -> Any:
    if path is None:
        raise InputSchemaError(f"'{command}' needs an input document (--in)", stage="arguments")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputSchemaError(f"cannot read {path}: {e.strerror}", stage="input") from None
    return loads(text)


def load_colouring(choice: str, order: int) -> Colouring:
    """
    Resolve the --colouring flag

    Args:
        choice: "natural", "q", "file:PATH" or a bare path
        order: Order for the built-in colourings

    Returns:
        Colouring; built-ins are verified, files are not
    """
    if choice == "natural":
        return natural_colouring(order)
    if choice == "q":
        return q_colouring(order)
    path = choice[len("file:") :] if choice.startswith("file:") else choice
    return decode_colouring(_read_document(path, "colouring"))


def _command_verify(args, psi: Colouring) -> Tuple[int, Dict]:
    report = check_axioms(psi, args.kmax, args.nmin, args.nmax)
    return (EXIT_OK if report.passed else EXIT_FAILED), encode_axiom_report(report)


def _command_solve(args) -> Tuple[int, Dict]:
    theta = decode_sequence(_read_document(args.input, "solve"))
    # Verma type of a file input is always re-checked
    theta = dataclasses.replace(theta, verma_type_verified=False)
    psi = verify_colouring(load_colouring(args.colouring, theta.order))
    return EXIT_OK, encode_sequence(solve(psi, theta))


def _command_act(args, psi: Colouring) -> Tuple[int, Dict]:
    doc = _read_document(args.input, "act")
    if not isinstance(doc, dict) or "word" not in doc or "vector" not in doc:
        raise InputSchemaError("expected an object with 'word' and 'vector'", stage="act")
    word = decode_word(doc["word"])
    vector = decode_vector(doc["vector"])
    module = deformed_verma(psi, vector.weight)
    return EXIT_OK, encode_vector(act_word(word, vector, module))


def _command_normal_form(args, psi: Colouring) -> Tuple[int, Dict]:
    doc = _read_document(args.input, "normal-form")
    if not isinstance(doc, dict) or "word" not in doc:
        raise InputSchemaError("expected an object with 'word'", stage="normal-form")
    word = decode_word(doc["word"])
    context = straightening_context(verify_colouring(psi), args.kmax)
    return EXIT_OK, encode_element(from_word(word, context))


def _command_quantum_check(args) -> Tuple[int, Dict]:
    commutator = quantum_commutator(args.order, args.kmax)
    expected = qnumber(None, args.order)
    holds = commutator == AlgebraElement(args.order, {(0, 0): expected}, commutator.context)
    doc = {
        "holds": holds,
        "order": args.order,
        "commutator": encode_element(commutator),
        "expected": encode_series(expected, POLY_N),
    }
    return (EXIT_OK if holds else EXIT_FAILED), doc


def _command_generate(args) -> Tuple[int, Dict]:
    if args.input is not None:
        P = decode_slot_polynomial(_read_document(args.input, "generate"))
    else:
        P = random_slot_polynomial(make_rng(args.seed), args.order)
    psi = perturbed_colouring(P, args.order)
    return EXIT_OK, {"colouring": encode_colouring(psi), "perturbation": encode_slot_polynomial(P)}


def dispatch(args) -> Tuple[int, Dict]:
    if args.order < 0:
        raise InputSchemaError("--order must be non-negative", stage="arguments")
    if args.kmax < 1:
        raise InputSchemaError("--kmax must be at least 1", stage="arguments")
    if args.nmin > args.nmax:
        raise InputSchemaError("--nmin must not exceed --nmax", stage="arguments")

    if args.command == "solve":
        return _command_solve(args)
    if args.command == "quantum-check":
        return _command_quantum_check(args)
    if args.command == "generate":
        return _command_generate(args)

    psi = load_colouring(args.colouring, args.order)
    if args.command == "verify":
        return _command_verify(args, psi)
    if args.command == "act":
        return _command_act(args, psi)
    if args.command == "normal-form":
        return _command_normal_form(args, psi)
    if args.command == "straighten":
        return EXIT_OK, encode_sequence(solve_straightening(verify_colouring(psi), args.kmax))
    return EXIT_OK, encode_sequence(solve_b_trivialization(verify_colouring(psi), args.kmax))


def run(argv: List[str]) -> Tuple[int, Dict]:
    """
    Execute one invocation

    Args:
        argv: Command-line arguments without the program name

    Returns:
        tuple: (exit_status, output_document)
    """
    command = argv[0] if argv else None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        logger.info(f"Running '{command}'")
        status, doc = dispatch(args)
    except InputSchemaError as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT, encode_error(e)
    except ColouredAlgebraError as e:
        logger.error(f"'{command}' failed: {e}")
        doc = encode_error(e)
        if doc["stage"] is None:
            doc["stage"] = command
        return EXIT_FAILED, doc
    logger.info(f"'{command}' finished with status {status}")
    return status, doc


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    argv = sys.argv[1:] if argv is None else argv
    status, doc = run(argv)
    text = dumps(doc)

    out_parser = argparse.ArgumentParser(add_help=False)
    out_parser.add_argument("--out", default=None)
    out = out_parser.parse_known_args(argv)[0].out
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
