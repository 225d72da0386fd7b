"""Batch command-line front end over the JSON formats.

One subcommand per workbench operation; every run writes exactly one JSON
document to standard output and diagnostics to standard error.  Exit codes:
0 success, 1 negative verdict (separated / infeasible / none found /
undefined), 2 usage or input error (including malformed JSON, reported with
its location), 3 resource cap exceeded.

The operation-enumeration cap can be set with --op-cap (wins) or the
WCLONE_OP_CAP environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import serialize
from .counterexamples import (
    BracketedParam,
    mu_minus,
    mu_plus,
    narrowing_check,
    omega_family,
    sqrt2_bracket,
)
from .errors import CapExceededError, WcloneError
from .galois import (
    GaloisWorkspace,
    ImpMember,
    express_from_certificate,
    imp_membership,
    wclone_membership,
)
from .improve import improvement_rows, find_weighted_polymorphism, is_weighted_polymorphism, pol
from .rational import format_value, parse_rat
from .reductions import reduce_opt, reduce_scale
from .vcsp import delta, solve
from .wrel import Language, tables_equal


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise _UsageError("no such file: %s" % path)
    except json.JSONDecodeError as exc:
        raise _UsageError(
            "malformed JSON in %s at line %d column %d: %s"
            % (path, exc.lineno, exc.colno, exc.msg)
        )


class _UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(serialize.dumps(obj))


def _bracket_from_args(args) -> BracketedParam:
    if args.lower is not None or args.upper is not None:
        if args.lower is None or args.upper is None:
            raise _UsageError("--lower and --upper must be given together")
        return BracketedParam(parse_rat(args.lower), parse_rat(args.upper))
    return sqrt2_bracket(args.level)


def _cmd_pol(args) -> int:
    language = serialize.language_from_json(_load_json(args.language))
    ops = pol(language, args.arity, cap=args.op_cap)
    _emit(
        {
            "d": language.d,
            "k": args.arity,
            "count": len(ops),
            "operations": [serialize.operation_to_json(op) for op in ops],
        }
    )
    return 0


def _cmd_wpol_check(args) -> int:
    omega = serialize.weighting_from_json(_load_json(args.weighting))
    rel = serialize.wrel_from_json(_load_json(args.relation))
    verdict = is_weighted_polymorphism(omega, rel)
    _emit({"weighted_polymorphism": verdict})
    return 0 if verdict else 1


def _cmd_wpol_find(args) -> int:
    language = serialize.language_from_json(_load_json(args.language))
    require = None
    if args.require_positive:
        require = serialize.operation_from_json(_load_json(args.require_positive))
    omega = find_weighted_polymorphism(language, args.arity, require, cap=args.op_cap)
    if omega is None:
        _emit({"found": False})
        return 1
    _emit({"found": True, "weighting": serialize.weighting_to_json(omega)})
    return 0


def _cmd_improve_rows(args) -> int:
    language = serialize.language_from_json(_load_json(args.language))
    basis, rows = improvement_rows(language, args.arity, cap=args.op_cap)
    _emit(
        {
            "basis": [serialize.operation_to_json(op) for op in basis],
            "rows": [
                {
                    "gamma": row.gamma_name,
                    "x": [list(col) for col in row.x.columns],
                    "vector": [format_value(v) for v in row.vector],
                }
                for row in rows
            ],
        }
    )
    return 0


def _cmd_imp_member(args) -> int:
    language = serialize.language_from_json(_load_json(args.language))
    rho = serialize.wrel_from_json(_load_json(args.relation))
    verdict = imp_membership(language, rho, cap=args.op_cap)
    _emit(serialize.imp_verdict_to_json(verdict))
    return 0 if verdict.kind == "member" else 1


def _cmd_express(args) -> int:
    language = serialize.language_from_json(_load_json(args.language))
    rho = serialize.wrel_from_json(_load_json(args.relation))
    verdict = serialize.imp_verdict_from_json(_load_json(args.verdict))
    if not isinstance(verdict, ImpMember):
        raise _UsageError("express needs a member verdict")
    workspace = None if verdict.empty else GaloisWorkspace(language, rho, cap=args.op_cap)
    rebuilt = express_from_certificate(verdict, workspace)
    matches = tables_equal(rebuilt, rho)
    _emit({"relation": serialize.wrel_to_json(rebuilt), "matches": matches})
    return 0 if matches else 1


def _cmd_wclone_member(args) -> int:
    omegas = serialize.weighting_set_from_json(_load_json(args.weightings))
    mu = serialize.weighting_from_json(_load_json(args.candidate))
    verdict = wclone_membership(omegas, mu, clone_arity_cap=args.clone_arity_cap, cap=args.op_cap)
    _emit(serialize.wclone_verdict_to_json(verdict))
    return 0 if verdict.kind == "member" else 1


def _cmd_solve(args) -> int:
    inst = serialize.instance_from_json(_load_json(args.instance))
    optimum, argmin = solve(inst, cap=args.assignment_cap)
    _emit(
        {
            "optimum": format_value(optimum),
            "argmin": list(argmin) if argmin is not None else None,
        }
    )
    return 0


def _cmd_delta(args) -> int:
    inst = serialize.instance_from_json(_load_json(args.instance))
    gap = delta(inst, cap=args.assignment_cap)
    _emit({"delta": format_value(gap) if gap is not None else None})
    return 0 if gap is not None else 1


def _reduction_meta(report) -> dict:
    params = {
        key: (format_value(v) if not isinstance(v, (int, str, tuple)) else v)
        for key, v in report.params.items()
    }
    if "scalings" in params:
        params["scalings"] = [format_value(c) for c in report.params["scalings"]]
    return {
        "params": params,
        "provenance": [[kind, copies] for kind, copies in report.provenance],
    }


def _cmd_reduce_opt(args) -> int:
    inst = serialize.instance_from_json(_load_json(args.instance))
    report = reduce_opt(inst, args.gamma, opt_name=args.opt_name)
    _emit(
        {
            "instance": serialize.instance_to_json(report.instance),
            "meta": _reduction_meta(report),
        }
    )
    return 0


def _cmd_reduce_scale(args) -> int:
    inst = serialize.instance_from_json(_load_json(args.instance))
    scalings = [parse_rat(c) for c in _load_json(args.scalings)]
    report = reduce_scale(inst, scalings, parse_rat(args.epsilon))
    _emit(
        {
            "instance": serialize.instance_to_json(report.instance),
            "meta": _reduction_meta(report),
        }
    )
    return 0


def _cmd_counterexample(args) -> int:
    bracket = _bracket_from_args(args)
    if args.what == "relations":
        language = Language(
            3, {"lower": mu_minus(bracket.lower), "upper": mu_plus(bracket.upper)}
        )
        _emit(serialize.language_to_json(language))
        return 0
    if args.what == "weightings":
        family = omega_family(bracket)
        _emit(
            {
                "bracket": [format_value(bracket.lower), format_value(bracket.upper)],
                "weightings": {
                    "base": serialize.weighting_to_json(family.base),
                    "unary_upper": serialize.weighting_to_json(family.unary_upper),
                    "binary_lower": serialize.weighting_to_json(family.binary_lower),
                },
                "escape_witness": serialize.weighting_to_json(family.escape_witness),
                "violation_point": list(family.violation_point),
            }
        )
        return 0
    report = narrowing_check(bracket, k=args.arity, cap=args.op_cap)
    _emit(
        {
            "bracket": [format_value(bracket.lower), format_value(bracket.upper)],
            "k": report.k,
            "verified": report.verified,
            "points": [
                {
                    "x": list(p.x),
                    "upper_farkas": [format_value(v) for v in p.upper_farkas],
                    "lower_farkas": [format_value(v) for v in p.lower_farkas],
                }
                for p in report.points
            ],
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wclone",
        description="Weighted-clone workbench: exact certificates over JSON files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--op-cap", type=int, default=None, help="operation enumeration cap")
        return p

    p = add("pol", _cmd_pol, help="k-ary polymorphisms of a language")
    p.add_argument("--language", required=True)
    p.add_argument("--arity", type=int, required=True)

    p = add("wpol-check", _cmd_wpol_check, help="is the weighting a weighted polymorphism?")
    p.add_argument("--weighting", required=True)
    p.add_argument("--relation", required=True)

    p = add("wpol-find", _cmd_wpol_find, help="search for a weighted polymorphism by LP")
    p.add_argument("--language", required=True)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--require-positive", default=None, help="operation JSON file")

    p = add("improve-rows", _cmd_improve_rows, help="polymorphism basis and gamma[X] rows")
    p.add_argument("--language", required=True)
    p.add_argument("--arity", type=int, required=True)

    p = add("imp-member", _cmd_imp_member, help="weighted relational clone membership")
    p.add_argument("--language", required=True)
    p.add_argument("--relation", required=True)

    p = add("express", _cmd_express, help="re-run a member recipe and compare")
    p.add_argument("--language", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--verdict", required=True)

    p = add("wclone-member", _cmd_wclone_member, help="bounded weighted clone membership")
    p.add_argument("--weightings", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--clone-arity-cap", type=int, default=None)

    p = add("solve", _cmd_solve, help="exact brute-force optimum")
    p.add_argument("--instance", required=True)
    p.add_argument("--assignment-cap", type=int, default=None)

    p = add("delta", _cmd_delta, help="least gap between distinct finite values")
    p.add_argument("--instance", required=True)
    p.add_argument("--assignment-cap", type=int, default=None)

    p = add("reduce-opt", _cmd_reduce_opt, help="replace Opt(gamma) constraints by copies")
    p.add_argument("--instance", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--opt-name", default=None)

    p = add("reduce-scale", _cmd_reduce_scale, help="drop scale factors at epsilon error")
    p.add_argument("--instance", required=True)
    p.add_argument("--scalings", required=True, help="JSON list of rational strings")
    p.add_argument("--epsilon", required=True)

    p = add("counterexample", _cmd_counterexample, help="emit the bracketed families")
    p.add_argument("--what", choices=("relations", "weightings", "narrowing"), required=True)
    p.add_argument("--lower", default=None)
    p.add_argument("--upper", default=None)
    p.add_argument("--level", type=int, default=2, help="sqrt(2) bracket level when no bounds given")
    p.add_argument("--arity", type=int, default=1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except _UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print("resource cap exceeded: %s" % exc, file=sys.stderr)
        return 3
    except (ValueError, KeyError, WcloneError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
