"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 the inverse does not exist or a
hypothesis is violated, 3 a numerical guard tripped, 4 a verification or
fixture replay failed. Errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import classical, minkowski, representations, solvers, verify
from .classical import GinvKind
from .core import DEFAULT_TOL, Tolerances, hs_decompose
from .errors import MdmpError, ParseError, ShapeMismatch
from .fixtures import ASSERTIONS, FIXTURE_TOL, run_assertions
from .io import read_matrix, read_vector, write_matrix

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NOT_EXISTS = 2
EXIT_NUMERIC = 3
EXIT_FAILED = 4

MDMP_ROUTE_NAMES = ("definitional", "hs", "fullrank", "composite", "limit", "integral")
SYSTEMS = ("penrose", "minkowski", "drazin", "mdmp", "characterizations")


@dataclass
class CliConfig:
    tolerances: Tolerances = DEFAULT_TOL
    schedule: representations.LimitSchedule = field(default_factory=representations.LimitSchedule)
    output_format: str = "json"
    precision: int = 17

    def __post_init__(self):
        if not 3 <= self.precision <= 17:
            raise ParseError(f"precision must be in [3, 17], got {self.precision}")


class _Parser(argparse.ArgumentParser):
    # usage errors are malformed input, not nonexistence
    def error(self, message):
        self.print_usage(sys.stderr)
        _emit_error({"error": "UsageError", "message": message}, EXIT_PARSE)
        sys.exit(EXIT_PARSE)


def _emit_error(payload: dict, code: int) -> None:
    payload = {**payload, "exit_code": code}
    sys.stderr.write(json.dumps(payload, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _config(args) -> CliConfig:
    changes = {}
    if getattr(args, "tol", None) is not None and args.command != "reproduce":
        changes["eq_rel_tol"] = args.tol
    if args.rank_tol is not None:
        changes["rank_rel_tol"] = args.rank_tol
    try:
        tol = DEFAULT_TOL.replace(**changes)
        sched = representations.LimitSchedule(
            lambda_start=args.lambda_start, decay=args.decay, max_steps=args.max_steps
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    fmt = args.format or ("pretty" if args.command == "reproduce" else "json")
    return CliConfig(tol, sched, fmt, args.precision)


def _compute(A, kind: str, route: str | None, formula: str, cfg: CliConfig):
    tol = cfg.tolerances
    route = route or "definitional"
    if kind == GinvKind.MDMP:
        if route == "definitional":
            return minkowski.mdmp(A, tol)
        if route == "hs":
            return minkowski.MDMP_ROUTES["hs"](A, tol)
        if route == "fullrank":
            return minkowski.mdmp_fullrank(A, tol)
        if route == "composite":
            return minkowski.mdmp_composite(A, tol)[0]
        if route == "limit":
            return representations.mdmp_limit(A, formula, cfg.schedule, tol).value
        return representations.mdmp_integral(A, tol=tol)
    if kind == GinvKind.Minkowski and route == "limit":
        return representations.minkowski_limit(A, cfg.schedule, tol).value
    if kind == GinvKind.Drazin and route == "hs":
        return classical.drazin_hs(hs_decompose(A, tol), tol)
    if route != "definitional":
        raise ParseError(f"route {route!r} is not available for kind {kind!r}")
    fn = {
        GinvKind.MoorePenrose: classical.moore_penrose,
        GinvKind.Drazin: classical.drazin,
        GinvKind.Group: classical.group_inverse,
        GinvKind.DMP: classical.dmp,
        GinvKind.Minkowski: minkowski.minkowski_inverse,
        GinvKind.DualMDMP: minkowski.dual_mdmp,
        GinvKind.MCore: minkowski.m_core,
    }[GinvKind(kind)]
    return fn(A, tol)


def cmd_compute(args, cfg: CliConfig, out) -> int:
    A = read_matrix(args.input)
    kind = GinvKind(args.kind)
    if kind not in (GinvKind.MoorePenrose, GinvKind.Minkowski) and A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"{kind.value} needs a square matrix, got shape {A.shape}")
    X = _compute(A, kind, args.route, args.formula, cfg)
    write_matrix(X, out, cfg.output_format, cfg.precision)
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig, out) -> int:
    A, X = read_matrix(args.A), read_matrix(args.X)
    tol = cfg.tolerances
    if args.system == "characterizations":
        reports = verify.check_characterizations(A, X, tol)
        passed = all(r.passed for r in reports)
        payload = {"passed": passed, "reports": [r.to_dict() for r in reports]}
        out.write(json.dumps(payload, indent=2) + "\n")
        return EXIT_OK if passed else EXIT_FAILED
    check = {
        "penrose": verify.check_penrose,
        "minkowski": verify.check_minkowski,
        "drazin": verify.check_drazin,
        "mdmp": verify.check_mdmp_system,
    }[args.system]
    report = check(A, X, tol)
    out.write(report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_solve(args, cfg: CliConfig, out) -> int:
    A, b = read_matrix(args.A), read_vector(args.b)
    tol = cfg.tolerances
    if args.mode == "projected":
        v = read_vector(args.v) if args.v else None
        res = solvers.solve_projected(A, b, v, tol)
        x, payload = (res.particular if res.x is None else res.x), res.to_dict()
    elif args.mode == "leastnorm":
        res = solvers.least_norm_min(A, b, tol)
        x, payload = res.x, res.to_dict()
    else:
        bases = None
        if args.V or args.W:
            if not (args.V and args.W):
                raise ParseError("--V and --W must be given together")
            V, W = read_matrix(args.V), read_matrix(args.W)
            bases = solvers.ComplementBases(V, W, A.shape[0] - V.shape[1])
        x = solvers.cramer_solve(A, b, bases, tol)
        payload = {"x": solvers._vec(x)}
    if cfg.output_format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        write_matrix(x, out, cfg.output_format, cfg.precision)
        if "min_value" in payload:
            out.write(f"min_value = {payload['min_value']:.{cfg.precision}g}\n")
    return EXIT_OK


def cmd_reproduce(args, cfg: CliConfig, out) -> int:
    if args.list:
        for a in ASSERTIONS:
            out.write(f"{a.name:32s} {a.description}\n")
        return EXIT_OK
    fixture_tol = FIXTURE_TOL if args.tol is None else args.tol
    outcomes = run_assertions(cfg.tolerances, fixture_tol)
    if cfg.output_format == "json":
        out.write(json.dumps([o.to_dict() for o in outcomes], indent=2) + "\n")
    else:
        for o in outcomes:
            err = "-" if o.error is None else f"{o.error:.2e}"
            mark = "PASS" if o.passed else "FAIL"
            out.write(f"{mark}  {o.name:32s} err={err:>9s}  tol={o.threshold:.0e}  {o.detail}\n")
        n_fail = sum(not o.passed for o in outcomes)
        out.write(f"{len(outcomes) - n_fail}/{len(outcomes)} assertions passed\n")
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAILED


def cmd_generate(args, cfg: CliConfig, out) -> int:
    rng = np.random.default_rng(args.seed)
    try:
        A = verify.random_instance(args.n, args.index, rng, cfg.tolerances, complex_entries=args.complex)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    write_matrix(A, out, cfg.output_format, cfg.precision)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="relative equation tolerance (reproduce: fixture tolerance, default 1e-4)")
    common.add_argument("--rank-tol", type=float, default=None, help="relative singular-value cutoff")
    common.add_argument("--format", choices=("json", "matrix-market", "pretty"), default=None,
                        help="output format (default json; pretty for reproduce)")
    common.add_argument("--precision", type=int, default=17, help="digits for output, 3..17")
    common.add_argument("--lambda-start", type=float, default=1e-2)
    common.add_argument("--decay", type=float, default=0.1)
    common.add_argument("--max-steps", type=int, default=10)

    parser = _Parser(prog="minkdmp", description="m-DMP and related generalized inverses in Minkowski space")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common], help="compute a generalized inverse")
    p.add_argument("input", help="Matrix Market or JSON file, '-' for stdin")
    p.add_argument("--kind", choices=[k.value for k in GinvKind], default="mdmp")
    p.add_argument("--route", choices=MDMP_ROUTE_NAMES, default=None)
    p.add_argument("--formula", choices=representations.LIMIT_FORMULAS, default="left-shift",
                   help="limit expression for --route limit")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", parents=[common], help="check a candidate inverse")
    p.add_argument("A")
    p.add_argument("X")
    p.add_argument("--system", choices=SYSTEMS, default="mdmp")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="solve a linear system with the m-DMP inverse")
    p.add_argument("A")
    p.add_argument("b")
    p.add_argument("--mode", choices=("projected", "leastnorm", "cramer"), default="projected")
    p.add_argument("--v", help="vector for the general solution (projected mode)")
    p.add_argument("--V", help="basis of N(A^k) (cramer mode)")
    p.add_argument("--W", help="matrix with N(W) = R(A^k) (cramer mode)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reproduce", parents=[common], help="replay the worked examples")
    p.add_argument("--list", action="store_true", help="list assertions without running them")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("generate", parents=[common], help="draw a random instance")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--index", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--complex", action="store_true")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg, out)
    except MdmpError as exc:
        _emit_error(exc.to_dict(), exc.exit_code)
        return exc.exit_code
    except (ValueError, np.linalg.LinAlgError) as exc:
        _emit_error({"error": type(exc).__name__, "message": str(exc)}, EXIT_NUMERIC)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
