"""Command line interface.

Every command reads a JSON instance file and prints a JSON report::

    {"command": ..., "result": ..., "certificates": ..., "timings": ...,
     "params": ..., "warnings": [...]}

Exit codes: 0 success, 1 invalid input, 2 budget exceeded, 3 a ``verify``
run found the two sides of a reduction disagreeing.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__, oracles
from .exact import Budget, BudgetExceeded, exact_ucat, exact_ucat_strong, ucat_leq, ucat_strong_leq
from .gadgets import coloring_gadget, verify_reduction, vertex_cover_gadget
from .graph import (
    InstanceError,
    bits,
    format_rational,
    instance_to_dict,
    is_tree,
    loads_instance,
    subdivide,
)
from .tree import greedy_decompose, ucat_infinity_tree
from .unimodality import is_strong_decomposition, is_unimodal

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_DISAGREE = 3


class UsageError(ValueError):
    """Valid JSON, but the request does not make sense for it."""


class _Parser(argparse.ArgumentParser):
    # bad flags are invalid input; exit 2 is reserved for budgets
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ helpers

def _read(path: str, need_values: bool = True):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError("file", f"cannot read {path}: {exc.strerror}") from exc
    g, f = loads_instance(text)
    if need_values and f is None:
        raise InstanceError("values", "missing")
    return g, f


def _budget(args) -> Budget:
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InstanceError("config", str(exc)) from exc
        if not isinstance(cfg, dict):
            raise InstanceError("config", "expected a JSON object")
    env = os.environ.get("UCAT_BUDGET_VERTICES")
    vertices = args.budget_vertices or (int(env) if env else None) or cfg.get("budget_vertices")
    kw = {
        "max_vertices": vertices,
        "max_k": args.max_k or cfg.get("max_k"),
        "max_pivots": args.max_pivots or cfg.get("max_pivots"),
    }
    return Budget(**{k: v for k, v in kw.items() if v is not None})


def _components_doc(dec) -> list:
    return [{"root": c.root, "support": bits(c.support),
             "values": [format_rational(x) for x in c.values]} for c in dec.components]


def _parse_p(text: str):
    if text in ("inf", "infinity"):
        return "inf"
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("p must be a positive integer or 'inf'")
    if p < 1:
        raise argparse.ArgumentTypeError("p must be a positive integer or 'inf'")
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return n


# ----------------------------------------------------------------- commands

def cmd_check(args, budget):
    g, f = _read(args.file)
    verdict = is_unimodal(g, f)
    result = {"unimodal": verdict.ok}
    certs = {}
    if not verdict.ok:
        result["witness"] = verdict.reason
        w = verdict.witness
        certs["witness"] = list(w) if isinstance(w, (tuple, list)) else w
    return result, certs, []


def cmd_decompose(args, budget):
    g, f = _read(args.file)
    if f.is_zero():
        raise UsageError("the zero function has no decomposition to report")
    warnings = []
    certs = {}
    if args.method == "tree":
        if not is_tree(g):
            raise UsageError("method 'tree' needs an acyclic connected graph; use --method exact")
        h, fh, _ = subdivide(g, f, args.refine)
        if args.p == "inf":
            return {"count": ucat_infinity_tree(h, fh), "p": "inf", "method": "tree"}, {}, []
        dec = greedy_decompose(h, fh.power(args.p))
        count = len(dec)
        result = {"count": count, "method": "tree", "p": args.p, "refinement": args.refine,
                  "exact": True, "strong": bool(is_strong_decomposition(h, dec.functions()))}
        if args.k is not None:
            result["decision"] = count <= args.k
        certs["components"] = _components_doc(dec)
        if args.refine:
            certs["graph"] = instance_to_dict(h)
        return result, certs, warnings
    if args.p == "inf":
        raise UsageError("p = inf is only available with --method tree")
    if args.k is not None:
        if args.strong:
            if args.refine:
                raise UsageError("the strong search runs on the unrefined graph")
            dec = ucat_strong_leq(g, f.power(args.p), args.k, budget)
            if not dec.ok:
                warnings.append("strong search incomplete: negative answer rests on LP-vertex search")
        else:
            dec = ucat_leq(g, f.power(args.p), args.k, args.refine, budget)
            if not is_tree(g):
                warnings.append(f"upper bound at refinement {args.refine}")
        result = {"decision": dec.ok, "k": args.k, "method": "exact", "p": args.p,
                  "refinement": args.refine, "strong": args.strong}
        if dec.certificate is not None:
            result["count"] = len(dec.certificate)
            certs["components"] = _components_doc(dec.certificate)
        return result, certs, warnings
    if args.strong:
        if args.refine:
            raise UsageError("the strong search runs on the unrefined graph")
        res = exact_ucat_strong(g, f, args.p, budget)
    else:
        res = exact_ucat(g, f, args.p, args.refine, budget)
    result = {"count": res.value, "method": "exact", "p": args.p, "refinement": res.refinement,
              "exact": res.exact, "strong": res.strong,
              "raised_above_weak": res.raised_above_weak}
    certs["components"] = _components_doc(res.certificate)
    if res.refinement:
        certs["graph"] = instance_to_dict(res.graph)
    return result, certs, list(res.warnings)


def cmd_gadget(args, budget):
    g, _ = _read(args.file, need_values=False)
    if args.kind == "coloring":
        gadget = coloring_gadget(g, args.k if args.k is not None else 3)
    else:
        gadget = vertex_cover_gadget(g)
    return gadget.to_dict(), {}, []


def cmd_verify(args, budget):
    g, _ = _read(args.file, need_values=False)
    params = {"k": args.k} if args.k is not None else {}
    report = verify_reduction(args.kind, g, params, budget)
    result = {"kind": report.kind, "lhs": report.lhs, "rhs": report.rhs, "agree": report.agree}
    return result, report.certificates, []


def cmd_oracle(args, budget):
    g, _ = _read(args.file, need_values=False)
    if args.problem == "vc":
        ans = oracles.min_vertex_cover(g)
        return {"problem": "vertex-cover", "value": ans.value}, {"cover": sorted(ans.witness)}, []
    if args.k is not None:
        ans = oracles.chromatic_decision(g, args.k)
        return ({"problem": "coloring", "k": args.k, "value": ans.value},
                {"coloring": ans.witness}, [])
    chi = oracles.chromatic_number(g)
    ans = oracles.chromatic_decision(g, chi)
    return {"problem": "coloring", "value": chi}, {"coloring": ans.witness}, []


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="pretty", action="store_false",
                     help="compact JSON report (default)")
    out.add_argument("--pretty", dest="pretty", action="store_true",
                     help="indented JSON report")
    common.add_argument("--budget-vertices", type=_positive, default=None,
                        help="largest graph the exact solver accepts after refinement "
                             "(default 14, or $UCAT_BUDGET_VERTICES)")
    common.add_argument("--max-k", type=_positive, default=None,
                        help="largest summand count the exact solver tries (default 6)")
    common.add_argument("--max-pivots", type=_positive, default=None,
                        help="simplex pivot cap per LP")
    common.add_argument("--threads", type=_positive, default=1,
                        help="worker cap; the solvers are single-threaded")
    common.add_argument("--config", default=None,
                        help="JSON file with budget_vertices / max_k / max_pivots")

    parser = _Parser(
        prog="ucat", description="Unimodal decompositions of functions on graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="is the function unimodal?")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", parents=[common], help="minimal unimodal decomposition")
    p.add_argument("file")
    p.add_argument("--method", choices=("tree", "exact"), default="exact")
    p.add_argument("--p", type=_parse_p, default=1)
    p.add_argument("--k", type=_nonnegative, default=None,
                   help="decide whether at most k summands suffice")
    p.add_argument("--refine", type=_nonnegative, default=0,
                   help="subdivide every edge this many times first")
    p.add_argument("--strong", action="store_true", help="require a strong decomposition")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("gadget", parents=[common], help="build a reduction instance")
    p.add_argument("kind", choices=("coloring", "vertex-cover"))
    p.add_argument("file")
    p.add_argument("--k", type=_positive, default=None, help="colours (coloring, default 3)")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("verify", parents=[common], help="check a reduction on one graph")
    p.add_argument("kind", choices=("coloring", "vertex-cover", "two-trees", "tree-cover"))
    p.add_argument("file")
    p.add_argument("--k", type=_positive, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", parents=[common], help="brute-force classical solvers")
    p.add_argument("problem", choices=("vc", "coloring"))
    p.add_argument("file")
    p.add_argument("--k", type=_nonnegative, default=None)
    p.set_defaults(func=cmd_oracle)
    return parser


def _echo(args) -> dict:
    skip = {"func", "pretty"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def run(argv=None) -> tuple[int, dict]:
    """Parse ``argv``, run the command, return ``(exit_code, report)``."""
    return _run(build_parser().parse_args(argv))


def _run(args) -> tuple[int, dict]:
    start = time.perf_counter()
    report = {"command": _echo(args), "result": None, "certificates": {}, "timings": {},
              "params": {}, "warnings": []}
    code = EXIT_OK
    try:
        budget = _budget(args)
        report["params"] = {"budget_vertices": budget.max_vertices, "max_k": budget.max_k,
                            "max_pivots": budget.max_pivots, "threads": args.threads,
                            "refinement": getattr(args, "refine", 0)}
        result, certs, warnings = args.func(args, budget)
        report["result"] = result
        report["certificates"] = certs
        report["warnings"] = warnings
        if args.command == "verify" and not result["agree"]:
            code = EXIT_DISAGREE
    except InstanceError as exc:
        report["error"] = {"kind": "invalid-input", "field": exc.field, "message": str(exc)}
        code = EXIT_INVALID
    except UsageError as exc:
        report["error"] = {"kind": "invalid-input", "message": str(exc)}
        code = EXIT_INVALID
    except BudgetExceeded as exc:
        report["error"] = {"kind": "budget-exceeded", "parameter": exc.parameter,
                           "limit": exc.limit, "message": str(exc)}
        code = EXIT_BUDGET
    except oracles.OracleBudgetExceeded as exc:
        report["error"] = {"kind": "budget-exceeded", "parameter": "oracle_vertices",
                           "limit": oracles.MAX_ORACLE_VERTICES, "message": str(exc)}
        code = EXIT_BUDGET
    except ValueError as exc:
        report["error"] = {"kind": "invalid-input", "message": str(exc)}
        code = EXIT_INVALID
    report["timings"] = {"total_seconds": round(time.perf_counter() - start, 6)}
    return code, report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, report = _run(args)
    print(json.dumps(report, indent=2 if args.pretty else None, default=_jsonable))
    if "error" in report:
        print(f"ucat: {report['error']['message']}", file=sys.stderr)
    return code


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    return str(obj)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
