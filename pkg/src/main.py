"""lattice-ist - inverse spectral toolkit for the half-line discrete Schrodinger operator

Each pipeline subcommand reads one JSON document (stdin, or --input) and
writes one JSON document to stdout. Diagnostics go to stderr.

Exit codes: 0 ok, 1 golden case failed, 2 bad input, 3 computation failed,
4 unusual spectrum, 5 inconsistent spectrum.
"""

import argparse
import json
import logging
import os
import sys

# Add project root to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from pydantic import ValidationError

from src.spectral import engine
from src.spectral.errors import InvalidSpectrum, SpectralError
from src.spectral.tev_inverse import Method

logger = logging.getLogger("lattice_ist")

EXIT_OK = 0
EXIT_GOLDEN_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_COMPUTE = 3


def _read_document(path):
    if path in (None, "-"):
        return json.loads(sys.stdin.read())
    with open(path) as fh:
        return json.load(fh)


def _emit(doc: dict):
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def cmd_forward(args) -> int:
    _emit(engine.run_forward(_read_document(args.input)))
    return EXIT_OK


def cmd_invert(args) -> int:
    report, code = engine.run_invert(_read_document(args.input), args.method)
    _emit(report)
    return code


def cmd_marchenko(args) -> int:
    _emit(engine.run_marchenko(_read_document(args.input)))
    return EXIT_OK


def cmd_gl(args) -> int:
    _emit(engine.run_gl(_read_document(args.input)))
    return EXIT_OK


def cmd_examples(args) -> int:
    report, code = engine.run_examples(args.only)
    for case in report["cases"]:
        mark = "PASS" if case["passed"] else "FAIL"
        print(f"  [{mark}] {case['name']} {case['title']} (max residual {case['max_residual']:.2e})", file=sys.stderr)
        if case["error"]:
            print(f"    Error: {case['error']}", file=sys.stderr)
    _emit(report)
    return code


def cmd_unusual_b3(args) -> int:
    _emit(engine.run_unusual_b3(args.gamma, args.epsilon))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lattice-ist", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def pipeline(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-i", "--input", default=None, help="JSON document path (default: stdin)")
        p.set_defaults(handler=handler)
        return p

    pipeline("forward", cmd_forward, "potential -> Jost data, bound states, transmission eigenvalues")
    invert = pipeline("invert", cmd_invert, "transmission eigenvalues -> potential")
    invert.add_argument("--method", choices=[m.value for m in Method], default=Method.MARCHENKO.value)
    pipeline("marchenko", cmd_marchenko, "Jost function f0 -> potential via Marchenko")
    pipeline("gl", cmd_gl, "Jost function or spectral data -> potential via Gel'fand-Levitan")

    examples = sub.add_parser("examples", help="run the worked golden cases")
    examples.add_argument("--only", default=None, help="run a single case, e.g. 6.6")
    examples.set_defaults(handler=cmd_examples)

    family = sub.add_parser("unusual-b3", help="b=3 potentials sharing an unusual spectrum")
    family.add_argument("--gamma", type=float, required=True)
    family.add_argument("--epsilon", type=float, required=True)
    family.set_defaults(handler=cmd_unusual_b3)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except (json.JSONDecodeError, ValidationError, engine.DocumentKindError, InvalidSpectrum, KeyError, OSError) as exc:
        logger.error(f"Bad input: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (SpectralError, ValueError, ArithmeticError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
