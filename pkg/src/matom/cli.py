"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 structural invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InputError, InvariantViolation
from .matrix import (
    BUILTIN_EXAMPLES,
    KERNELS,
    NonnegativeMatrix,
    builtin_example,
    discretize_kernel,
    kernel_spec,
    load_kernel_spec,
    load_matrix_market,
)
from .report import build_report, export_dot, serialize_report
from .spectral import Tolerances


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are input errors (exit 1)
        self.print_usage(sys.stderr)
        raise InputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="matom",
        description=(
            "Atomic and spectral structure of a nonnegative matrix: atoms, their "
            "order, distinguished/critical atoms, nonnegative eigencone, ascent, "
            "and cyclic decompositions."
        ),
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", metavar="PATH",
                        help="Matrix Market file, or a JSON kernel spec "
                             '{"kernel": ..., "grid": ...}')
    source.add_argument("--example", metavar="NAME",
                        help=f"built-in example, one of {', '.join(BUILTIN_EXAMPLES)}")
    source.add_argument("--kernel", metavar="NAME", choices=sorted(KERNELS),
                        help="kernel operator on [0,1], discretized on --grid cells")
    parser.add_argument("--grid", type=int, default=4, metavar="M",
                        help="grid size for kernel discretization (default 4)")
    parser.add_argument("--report", metavar="PATH",
                        help="write the JSON report here ('-' for stdout)")
    parser.add_argument("--dot", metavar="PATH",
                        help="write a Graphviz DOT rendering of the atom poset")
    parser.add_argument("--power", type=int, metavar="N",
                        help="also compute cyclic decompositions under the N-th power")
    parser.add_argument("--exact", action="store_true",
                        help="use the exact rational backend")
    parser.add_argument("--oracle", action="store_true",
                        help="run brute-force enumeration cross-checks (n <= 16)")
    parser.add_argument("--rtol", type=float, default=1e-10,
                        help="relative eigen-residual tolerance (default 1e-10)")
    parser.add_argument("--atol", type=float, default=1e-9, dest="atol_factor",
                        help="radius-tie tolerance, relative to rho(T) (default 1e-9)")
    parser.add_argument("--pos-tol", type=float, default=1e-12, dest="pos_tol_factor",
                        help="support detection tolerance for vectors (default 1e-12)")
    parser.add_argument("--support-threshold", type=float, default=1e-12,
                        help="relative entry cut for the support graph (default 1e-12)")
    return parser


def _load_input(args) -> tuple[NonnegativeMatrix, dict]:
    backend = "exact" if args.exact else "float"
    if args.example is not None:
        matrix = builtin_example(args.example, grid=args.grid, backend=backend)
        return matrix, {"source": "example", "name": args.example, "grid": args.grid}
    if args.kernel is not None:
        matrix = discretize_kernel(kernel_spec(args.kernel, args.grid), backend=backend)
        return matrix, {"source": "kernel", "name": args.kernel, "grid": args.grid}
    path = Path(args.input)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        spec = load_kernel_spec(text)
        matrix = discretize_kernel(spec, backend=backend)
        return matrix, {"source": "kernel-spec", "name": spec.name, "grid": spec.grid,
                        "path": str(path)}
    return load_matrix_market(text, backend=backend), {
        "source": "matrix-market", "path": str(path)}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.grid < 1:
            raise InputError("--grid must be at least 1")
        if args.power is not None and args.power < 1:
            raise InputError("--power must be at least 1")
        matrix, descriptor = _load_input(args)
        descriptor["backend"] = matrix.backend
        tol = Tolerances(
            rtol=args.rtol,
            atol_factor=args.atol_factor,
            pos_tol_factor=args.pos_tol_factor,
            support_threshold=args.support_threshold,
        )
        outcome = build_report(matrix, tol=tol, power=args.power,
                               with_oracle=args.oracle, descriptor=descriptor)
        text = serialize_report(outcome.report)
        if args.report == "-":
            sys.stdout.write(text)
        elif args.report:
            Path(args.report).write_text(text)
        if args.dot:
            Path(args.dot).write_text(export_dot(outcome.report))
        if not args.report and not args.dot:
            sys.stdout.write(text)
    except InvariantViolation as exc:
        print(f"matom: invariant violation: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError) as exc:
        print(f"matom: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
