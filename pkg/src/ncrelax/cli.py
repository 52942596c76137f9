"""Command-line interface.

Exit codes: 0 success, 1 unreadable or malformed input, 2 generation or
numerical failure, 3 problem suspected infeasible, 4 iteration limit hit.
Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from pathlib import Path

from .algebra import format_word
from .bench import run_bench
from .problem import ProblemDef, ProblemParseError, parse_problem
from .relaxation import RelaxationError
from .rewrite import DEFAULT_MAX_PASSES, RewriteError
from .sdpa import SDPAError, read_sdpa, to_sdp, write_sdpa
from .solver import INFEASIBLE, MAX_ITER, NumericalFailure, SolverOptions, solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_GENERATION = 2
EXIT_INFEASIBLE = 3
EXIT_MAX_ITER = 4

log = logging.getLogger("ncrelax")


def _max_passes() -> int:
    raw = os.environ.get("NCRELAX_MAX_PASSES")
    if not raw:
        return DEFAULT_MAX_PASSES
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise SystemExit(f"NCRELAX_MAX_PASSES must be a positive integer, got {raw!r}")
    return value


def _err(message: str) -> None:
    print(f"ncrelax: {message}", file=sys.stderr)


def _load(path: str) -> ProblemDef:
    text = Path(path).read_text()
    return parse_problem(text)


def _relax(problem: ProblemDef):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rel = problem.relaxation(max_passes=_max_passes())
    for w in caught:
        _err(f"warning: {w.message}")
    return rel


def cmd_generate(args) -> int:
    try:
        problem = _load(args.input)
    except (OSError, ProblemParseError, RewriteError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    try:
        rel = _relax(problem)
    except (RelaxationError, RewriteError) as exc:
        _err(str(exc))
        return EXIT_GENERATION
    sdp = to_sdp(rel)
    out = args.output or str(Path(args.input).with_suffix(".dat-s"))
    try:
        with open(out, "w") as fh:
            write_sdpa(sdp, fh)
    except OSError as exc:
        _err(str(exc))
        return EXIT_INPUT
    print(f"variables: {sdp.nvars}")
    print("blocks: " + " ".join(str(s) for s in sdp.block_sizes))
    if rel.objective_shift:
        print(f"objective_shift: {rel.objective_shift!r}")
    return EXIT_OK


def cmd_solve(args) -> int:
    shift = 0.0
    try:
        if args.input.endswith(".dat-s"):
            with open(args.input) as fh:
                sdp = read_sdpa(fh)
        else:
            problem = _load(args.input)
    except (OSError, ProblemParseError, RewriteError, SDPAError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    if not args.input.endswith(".dat-s"):
        try:
            rel = _relax(problem)
        except (RelaxationError, RewriteError) as exc:
            _err(str(exc))
            return EXIT_GENERATION
        sdp = to_sdp(rel)
        shift = rel.objective_shift
    opts = SolverOptions(tol_gap=args.tol, max_iter=args.max_iter)
    try:
        sol = solve(sdp, opts)
    except NumericalFailure as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_GENERATION
    _err(f"status: {sol.status} after {sol.iterations} iterations")
    print((sol.primal_obj + shift, sol.dual_obj + shift))
    if sol.status == INFEASIBLE:
        return EXIT_INFEASIBLE
    if sol.status == MAX_ITER:
        return EXIT_MAX_ITER
    return EXIT_OK


def cmd_info(args) -> int:
    try:
        problem = _load(args.input)
    except (OSError, ProblemParseError, RewriteError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    try:
        rel = _relax(problem)
    except (RelaxationError, RewriteError) as exc:
        _err(str(exc))
        return EXIT_GENERATION
    names = problem.names
    print("variables: " + " ".join(v.name + ("" if v.hermitian else "(nonhermitian)") for v in problem.variables))
    print(f"order: {rel.order}")
    print("basis: " + " ".join(format_word(w, names) for w in rel.basis))
    print(f"moments: {rel.nvars}")
    print("blocks: " + " ".join(str(s) for s in rel.block_sizes))
    print(f"localizing_blocks: {len(rel.localizing_blocks)}")
    print(f"substitutions: {len(problem.substitutions)}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if any(n < 2 for n in args.n):
        _err("bench needs -n of at least 2")
        return EXIT_INPUT
    print("n,blocks,variables,milliseconds")
    for n in args.n:
        try:
            row, _ = run_bench(n, args.mode, args.order, args.all_subs)
        except (RelaxationError, RewriteError) as exc:
            _err(str(exc))
            return EXIT_GENERATION
        print(row.csv())
        sys.stdout.flush()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncrelax",
                                     description="Sparse SDP relaxations of noncommutative polynomial problems.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write the relaxation in sparse SDPA format")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output .dat-s path (default: input with .dat-s suffix)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve the relaxation with the built-in solver")
    p.add_argument("input", help="problem file, or an SDPA file ending in .dat-s")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("info", help="describe the relaxation without writing it")
    p.add_argument("input")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("bench", help="benchmark problem sizes as CSV")
    p.add_argument("-n", type=int, nargs="+", required=True, help="variable count(s)")
    p.add_argument("--mode", choices=("subs", "eqs"), default="subs")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--all-subs", action="store_true", help="also turn X_i^2 = 1 into substitutions")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else
                        logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
