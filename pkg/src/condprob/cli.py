"""Command-line front end.

Exit codes: 0 success/compatible, 1 incompatible or infeasible (certificate
JSON on stdout), 2 malformed input (message on stderr).
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from . import io
from .algebra import buchberger_verify, induced_generators, universal_gb
from .core import EventFamily, TermOrder, VarId, prioritize
from .errors import ConvergenceError, IncompatibleError, InfeasibleError, InputError, LimitError
from .geometry import (
    FiberProblem,
    delta_E,
    matus_W,
    moment_nu,
    project_v,
    simplex_moment,
    solve_fiber,
)
from .graph import build_graph, incidence_matrix
from .relations import (
    DEFAULT_TOL,
    RVSpec,
    besag_binomial,
    besag_table,
    check_axioms,
    check_variety,
    reconstruct_joint,
    rv_event_family,
)

SUBCOMMANDS = ("gb", "check", "reconstruct", "polytope", "moment", "fiber", "rv", "besag")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise InputError(f"expected a comma-separated integer list, got {text!r}") from None


def _sets(text: str) -> list[list[int]]:
    """``"1,3;2"`` -> [[1, 3], [2]]; an empty item is the empty set."""
    return [_int_list(part) for part in text.split(";")]


_VAR = re.compile(r"^(?:p_\{?)?(\d+)\|([\d.]+)\}?$")


def _parse_var(token: str) -> VarId:
    match = _VAR.match(token.strip())
    if not match:
        raise InputError(f"cannot parse variable {token!r}; use forms like 2|123 or 2|1.2.10")
    i, ev = match.groups()
    event = tuple(int(x) for x in ev.split(".")) if "." in ev else tuple(int(c) for c in ev)
    return VarId(int(i), tuple(sorted(event)))


def _parse_order(spec: str | None, priority: str | None, family: EventFamily) -> TermOrder | None:
    if spec is None and priority is None:
        return None
    variables = list(family.variables)
    first = [_parse_var(t) for t in priority.split(",") if t.strip()] if priority else []
    unknown = [v for v in first if v not in variables]
    if unknown:
        raise InputError(f"priority names variables outside the family: {[v.name() for v in unknown]}")
    order = prioritize(variables, first)
    spec = spec or "lex"
    if spec == "lex":
        return TermOrder.lex(order)
    if spec == "grevlex":
        return TermOrder.grevlex(order)
    if spec.startswith("weight:"):
        weights = _int_list(spec[len("weight:"):])
        if len(weights) != len(variables):
            raise InputError(f"weight order needs {len(variables)} weights (canonical variable order)")
        return TermOrder.weighted(dict(zip(variables, weights)), order)
    raise InputError(f"unknown order {spec!r}")


def _family(args) -> EventFamily:
    if not args.events:
        raise InputError("--events is required")
    return io.family_from_json(io.load_json(args.events))


def _table(args):
    if not args.table:
        raise InputError("--table is required")
    return io.table_from_json(io.load_json(args.table))


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(obj))


def cmd_gb(args) -> int:
    family = _family(args)
    basis = induced_generators(family) if args.induced_only else universal_gb(family)
    order = _parse_order(args.order, args.priority, family)
    verdict = buchberger_verify(basis, order) if order is not None else None
    if verdict is not None and not verdict.ok:
        _emit({
            "groebner": False,
            "order": order.describe(),
            "failing_pair": [io.binomial_to_json(b) for b in verdict.pair],
            "failing_pair_text": [b.name() for b in verdict.pair],
            "remainder": verdict.remainder.name(),
        })
        return 1
    if args.format == "json":
        out = io.basis_to_json(basis)
        if verdict is not None:
            out["groebner"] = True
            out["order"] = order.describe()
        _emit(out)
    else:
        sys.stdout.write(basis.text())
    return 0


def cmd_check(args) -> int:
    family = _family(args)
    table = _table(args)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    mode = args.mode or "both"
    report = None
    if mode in ("axioms", "both"):
        report = check_axioms(family, table, tol)
    if mode in ("variety", "both"):
        basis = induced_generators(family) if args.induced_only else universal_gb(family)
        rv = check_variety(family, table, basis, tol)
        report = rv if report is None else report.merge(rv)
    _emit(io.report_to_json(report))
    return 0 if report.compatible else 1


def cmd_reconstruct(args) -> int:
    family = _family(args)
    table = _table(args)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    try:
        result = reconstruct_joint(family, table, tol)
    except IncompatibleError as exc:
        out = io.report_to_json(exc.report)
        out["message"] = str(exc)
        _emit(out)
        return 1
    if hasattr(result, "dof"):
        _emit(io.underdetermined_to_json(result))
    else:
        _emit(io.joint_to_json(result))
    return 0


def cmd_polytope(args) -> int:
    family = _family(args)
    _emit(io.polytope_to_json(delta_E(family), args.output or "both"))
    return 0


def cmd_moment(args) -> int:
    which = args.map or "nu"
    out: dict = {"map": which}
    if which == "mu":
        if args.vector is not None:
            vec = io.vector_from_json([x for x in args.vector.split(",")])
        elif args.joint:
            vec = io.vector_from_json(io.load_json(args.joint))
        else:
            raise InputError("--map mu needs --vector or --joint")
        out["vector"] = [io.encode_value(x) for x in simplex_moment(vec)]
    elif which == "nu":
        family = _family(args)
        table = _table(args)
        point = moment_nu(family, table)
        a = incidence_matrix(build_graph(family))
        out["rows"] = a.row_names()
        out["vector"] = [io.encode_value(x) for x in point]
        out["target"] = [io.encode_value(x) for x in project_v(family, point)]
    elif which == "W":
        table = _table(args)
        m = _family(args).m if args.events else max(v.i for v in table.values)
        out["vector"] = [io.encode_value(x) for x in matus_W(table, m)]
    else:
        raise InputError(f"unknown map {which!r}")
    out["tolerance"] = args.tol
    _emit(out)
    return 0


def cmd_fiber(args) -> int:
    family = _family(args)
    if args.target is None:
        raise InputError("--target is required (comma list or JSON path)")
    if re.fullmatch(r"[\d\s.,/eE+-]+", args.target):
        target = [float(io.decode_exact(t)) if "/" in t else float(t) for t in args.target.split(",")]
    else:
        target = [float(x) for x in io.vector_from_json(io.load_json(args.target))]
    tol = args.tol if args.tol is not None else 1e-10
    try:
        sol = solve_fiber(FiberProblem(family, tuple(target), tol, args.max_iter))
    except (InfeasibleError, ConvergenceError) as exc:
        kind = "infeasible" if isinstance(exc, InfeasibleError) else "no_convergence"
        _emit({"error": kind, "message": str(exc), "tolerance": tol})
        return 1
    out = io.table_to_json(sol.table, family)
    out.update({"tolerance": tol, "residual": sol.residual, "iterations": sol.iterations,
                "theta": [float(x) for x in sol.theta]})
    _emit(out)
    return 0


def _rv_spec(args) -> RVSpec:
    if not args.arities:
        raise InputError("--arities is required")
    sets = _sets(args.sets) if args.sets is not None else []
    return RVSpec(tuple(_int_list(args.arities)), tuple(tuple(s) for s in sets))


def cmd_rv(args) -> int:
    spec = _rv_spec(args)
    rv = rv_event_family(spec)
    out = io.family_to_json(rv.family)
    out["labels"] = [
        {"event": list(e), "S": list(rv.event_labels[e][0]), "x_S": list(rv.event_labels[e][1])}
        for e in rv.family.events
    ]
    out["states"] = [spec.state_name(s) for s in spec.states()]
    _emit(out)
    return 0


def cmd_besag(args) -> int:
    spec = _rv_spec(args)
    if args.x is None or args.y is None:
        raise InputError("--x and --y are required")
    rel = besag_binomial(spec, _int_list(args.x), _int_list(args.y))
    out = {
        "family": io.family_to_json(rel.family),
        "binomial": io.binomial_to_json(rel.binomial),
        "text": rel.text(),
        "configurations": [spec.state_name(c) for c in rel.configurations],
    }
    table = None
    if args.table:
        table = _table(args)
    elif args.joint:
        table = besag_table(spec, rel, io.joint_from_json(io.load_json(args.joint)))
    code = 0
    if table is not None:
        table.require_complete(rel.family)
        lhs = rel.binomial.plus.evaluate(table.values)
        rhs = rel.binomial.minus.evaluate(table.values)
        tol = args.tol if args.tol is not None else DEFAULT_TOL
        holds = lhs == rhs if table.mode == "exact" else abs(lhs - rhs) <= tol
        out["evaluation"] = {"lhs": io.encode_value(lhs), "rhs": io.encode_value(rhs),
                             "residual": io.encode_value(lhs - rhs), "holds": holds}
        code = 0 if holds else 1
    _emit(out)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="condprob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--events")
        p.add_argument("--table")
        p.add_argument("--joint")
        p.add_argument("--tol", type=float)
        p.add_argument("--format", choices=("json", "text"), default="text" if name == "gb" else "json")
        if name in ("gb", "check"):
            p.add_argument("--induced-only", action="store_true")
        if name == "gb":
            p.add_argument("--order")
            p.add_argument("--priority")
        if name == "check":
            p.add_argument("--mode", choices=("axioms", "variety", "both"))
        if name == "polytope":
            p.add_argument("--output", choices=("vertices", "hrep", "both"))
        if name == "moment":
            p.add_argument("--map", choices=("nu", "W", "mu"))
            p.add_argument("--vector")
        if name == "fiber":
            p.add_argument("--target")
            p.add_argument("--max-iter", type=int, default=200)
        if name in ("rv", "besag"):
            p.add_argument("--arities")
            p.add_argument("--sets")
        if name == "besag":
            p.add_argument("--x")
            p.add_argument("--y")
    return parser


def run(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        if args.command is None:
            raise InputError(f"a subcommand is required: {', '.join(SUBCOMMANDS)}")
        return globals()[f"cmd_{args.command}"](args)
    except (InputError, LimitError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
