"""Command-line interface.

Every subcommand prints a single JSON report on stdout; diagnostics go to
stderr. Exit codes: 0 ok, 2 malformed input, 3 space is not a product grid,
4 internal solver failure, 5 inadmissible certificate, 6 zero residual.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bolt import dvp_bound, load_bolt_file
from .boltgraph import build_graph, find_extremal_bolt, max_mean_cycle
from .exceptions import (
    InputError,
    NotProductSpace,
    SignViolation,
    SolverError,
    ZeroResidual,
)
from .solver import solve_ds, solve_lp
from .space import (
    SumElement,
    build_explicit,
    build_grid,
    build_ridge,
    evaluate_sum,
    load_space_file,
    write_space_file,
)

EXIT_OK, EXIT_INPUT, EXIT_NOT_PRODUCT, EXIT_SOLVER, EXIT_SIGN, EXIT_ZERO = 0, 2, 3, 4, 5, 6


class _Fail(Exception):
    def __init__(self, code, message, report=None):
        super().__init__(message)
        self.code = code
        self.report = report


def _load_instance(path, need_f=True):
    space, f = load_space_file(path)
    if need_f and f is None:
        raise InputError(f"{path} carries no function values 'f'")
    return space, f


def _load_sum_element(path, space):
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read sum element file {path}: {exc}") from exc
    if isinstance(obj, dict) and "g" not in obj and isinstance(obj.get("witness"), dict):
        obj = obj["witness"]
    if not isinstance(obj, dict) or not isinstance(obj.get("g"), list) or not isinstance(obj.get("h"), list):
        raise InputError(f"{path} needs arrays 'g' and 'h'")
    u = SumElement(obj["g"], obj["h"])
    u.check_shape(space)
    return u


def _digest(space):
    return {"n": space.n, "n_s": space.n_s, "n_p": space.n_p}


def cmd_solve(args):
    space, f = _load_instance(args.input)
    try:
        if args.method == "ds":
            sol = solve_ds(space, f, args.tol, args.max_sweeps)
        else:
            sol = solve_lp(space, f)
    except NotProductSpace as exc:
        raise _Fail(EXIT_NOT_PRODUCT, str(exc)) from exc
    body = sol.to_dict()
    return {
        "instance": _digest(space),
        "results": {k: body[k] for k in ("error", "dual_value", "method", "n_iter")},
        "witness": body["witness"],
    }


def cmd_dual(args):
    space, f = _load_instance(args.input)
    dual = max_mean_cycle(build_graph(space, f))
    return {
        "instance": _digest(space),
        "results": {"dual_value": dual.value, "no_cycle": dual.no_cycle},
        "witness": {"bolt": None if dual.witness is None else dual.witness.to_dict()},
    }


def cmd_certify(args):
    space, f = _load_instance(args.input)
    bolt = load_bolt_file(args.bolt, space)
    u = _load_sum_element(args.u, space)
    try:
        bound = dvp_bound(space, f, u, bolt, tol=args.tol)
    except SignViolation as exc:
        i, j = exc.pair
        raise _Fail(
            EXIT_SIGN,
            f"{exc} (points {bolt.points[i]} and {bolt.points[j]})",
            {"instance": _digest(space), "results": {"admissible": False, "offending_positions": [i, j]}},
        ) from exc
    error = solve_lp(space, f).error
    return {
        "instance": _digest(space),
        "results": {
            "admissible": True,
            "bound": bound,
            "error": error,
            "bound_le_error": bound <= error + args.tol,
        },
        "witness": {"bolt": bolt.to_dict(), **u.to_dict()},
    }


def cmd_check_best(args):
    space, f = _load_instance(args.input)
    u = _load_sum_element(args.u, space)
    residual = f - evaluate_sum(space, u)
    try:
        bolt = find_extremal_bolt(space, residual, args.tol)
    except ZeroResidual as exc:
        raise _Fail(
            EXIT_ZERO,
            "u reproduces f exactly; it is trivially best with error 0",
            {"instance": _digest(space), "results": {"best": True, "max_residual": 0.0}},
        ) from exc
    return {
        "instance": _digest(space),
        "results": {"best": bolt is not None, "max_residual": float(np.max(np.abs(residual)))},
        "witness": {"bolt": None if bolt is None else bolt.to_dict()},
    }


def _generate(args, rng):
    if args.kind in ("grid", "ridge"):
        if args.nx < 1 or args.ny < 1:
            raise InputError("--nx and --ny must be positive")
        grid = build_grid(args.nx, args.ny)
        if args.kind == "grid":
            space = grid
        else:
            space = build_ridge(grid.coords, (1.0, 1.0), (1.0, -1.0), 1e-9)
    else:
        if args.n < 1:
            raise InputError("--n must be positive")
        k = max(1, args.n // 3)
        space = build_explicit(rng.integers(0, k, args.n), rng.integers(0, k, args.n))

    if args.fn == "random":
        return space, rng.uniform(-1.0, 1.0, space.n)
    if space.coords is None:
        raise InputError(f"--fn {args.fn} needs coordinates; use --kind grid or ridge")
    x, y = space.coords[:, 0], space.coords[:, 1]
    if args.fn == "product":
        return space, x * y
    return space, 1.0 / (1.0 + 25.0 * (x**2 + y**2))


def cmd_gen(args):
    if not args.output:
        raise InputError("gen needs --output")
    rng = np.random.default_rng(args.seed)
    space, f = _generate(args, rng)
    write_space_file(args.output, space, f)
    return {"instance": _digest(space), "results": {"path": str(args.output), "kind": args.kind, "fn": args.fn}}


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--output", default=None, help="also write the report (gen: the space file) here")

    parser = argparse.ArgumentParser(prog="boltapprox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="best approximation and its error")
    p.add_argument("input")
    p.add_argument("--method", choices=("lp", "ds"), default="lp")
    p.add_argument("--max-sweeps", type=int, default=10_000)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("dual", parents=[common], help="maximum bolt functional")
    p.add_argument("input")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("certify", parents=[common], help="lower bound from a closed bolt and a sum element")
    p.add_argument("input")
    p.add_argument("bolt")
    p.add_argument("u")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check-best", parents=[common], help="test a sum element for optimality")
    p.add_argument("input")
    p.add_argument("u")
    p.set_defaults(func=cmd_check_best)

    p = sub.add_parser("gen", parents=[common], help="write a test instance")
    p.add_argument("kind", choices=("grid", "ridge", "random"))
    p.add_argument("--nx", type=int, default=2)
    p.add_argument("--ny", type=int, default=2)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--fn", choices=("product", "runge", "random"), default="random")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)
    return parser


def _emit(report, args, operation, started):
    report = {
        "tool": "boltapprox",
        "version": __version__,
        "operation": operation,
        **report,
        "timing_ms": (time.perf_counter() - started) * 1e3,
    }
    text = json.dumps(report)
    print(text)
    if args.output and operation != "gen":
        Path(args.output).write_text(text + "\n", encoding="utf-8")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    started = time.perf_counter()
    try:
        report = args.func(args)
    except _Fail as exc:
        print(f"boltapprox: {exc}", file=sys.stderr)
        if exc.report is not None:
            _emit(exc.report, args, args.command, started)
        return exc.code
    except NotProductSpace as exc:
        print(f"boltapprox: {exc}", file=sys.stderr)
        return EXIT_NOT_PRODUCT
    except InputError as exc:
        print(f"boltapprox: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"boltapprox: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(report, args, args.command, started)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
