"""Command-line interface.

Exit codes: 0 success, 1 a check suite failed, 2 parse or usage error,
3 ground set beyond the exhaustive limit, 4 decomposition failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .checks import SUITES, run_suite
from .decompose import DecompositionError, decompose, to_certificate
from .fpras import AccuracyUnderflow, estimate, format_result
from .io import ParseError, format_certificate, format_instance, read_certificate, read_instance
from .matroid import BinaryMatroid, GroundSetTooLarge, WeightedMatroid
from .tutte import EXHAUSTIVE_LIMIT_ENV, tutte_exact

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SIZE = 3
EXIT_DECOMPOSITION = 4


def _eps(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < val <= 1:
        raise argparse.ArgumentTypeError(f"eps must lie in (0, 1], got {text}")
    return val


def _count(text: str) -> int:
    val = int(text)
    if val < 0:
        raise argparse.ArgumentTypeError("count must be non-negative")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isingmat", description=(
        "Ising partition functions (the q = 2 Tutte value) of binary matroids."))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact value by subset enumeration")
    p.add_argument("path")

    p = sub.add_parser("estimate", help="recursive estimate over a decomposition")
    p.add_argument("path")
    p.add_argument("--eps", type=_eps, required=True, help="accuracy in (0, 1]")
    p.add_argument("--cert", help="certificate file; otherwise the decomposition is searched")
    p.add_argument("--oracle", choices=("exact", "noisy"), default="exact")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for the noisy oracle")

    p = sub.add_parser("decompose", help="print a decomposition certificate")
    p.add_argument("path")

    p = sub.add_parser("check", help="run a named property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_count, default=None, help="number of random cases (suite default if omitted)")
    return parser


def _format_value(value) -> list[str]:
    if isinstance(value, Fraction):
        return [f"value: {value}", f"decimal: {float(value)!r}"]
    return [f"value: {value!r}", f"decimal: {float(value)!r}"]


def cmd_exact(args) -> int:
    w = read_instance(args.path)
    value = tutte_exact(w)
    lines = _format_value(value) + [f"elements: {w.size}", f"subsets: {2 ** w.size}"]
    print("\n".join(lines))
    return EXIT_OK


def cmd_estimate(args) -> int:
    w = read_instance(args.path)
    cert = read_certificate(args.cert) if args.cert else None
    seed = args.seed if args.seed is not None else 0
    result = estimate(w, args.eps, cert, oracle=args.oracle, seed=seed)
    print(format_result(result))
    return EXIT_OK


def cmd_decompose(args) -> int:
    w = read_instance(args.path)
    tree = decompose(w.matroid)
    print(format_certificate(to_certificate(tree)))
    return EXIT_OK


def cmd_check(args) -> int:
    result = run_suite(args.suite, seed=args.seed, count=args.count)
    print(result.report())
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


def _matroid_text(m: BinaryMatroid) -> str:
    text = format_instance(WeightedMatroid.uniform(m))
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("WEIGHTS")) + "\n"


COMMANDS = {"exact": cmd_exact, "estimate": cmd_estimate, "decompose": cmd_decompose, "check": cmd_check}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GroundSetTooLarge as exc:
        print(f"error: {exc}; raise {EXHAUSTIVE_LIMIT_ENV} to override", file=sys.stderr)
        return EXIT_SIZE
    except DecompositionError as exc:
        print(f"error: decomposition failed: {exc}", file=sys.stderr)
        if exc.matroid is not None:
            print(f"stuck piece at {exc.path}:", file=sys.stderr)
            print(_matroid_text(exc.matroid), file=sys.stderr, end="")
        return EXIT_DECOMPOSITION
    except AccuracyUnderflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
