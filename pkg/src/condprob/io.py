"""JSON and text formats for families, tables, joints, bases, graphs and polytopes.

Exact values are written as ``"a/b"`` strings, floats as JSON numbers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import PROVENANCES, GroebnerBasis
from .core import Binomial, CPTable, EventFamily, Monomial, VarId, as_rational, make_event_family
from .errors import InputError
from .geometry import LatticePolytope
from .graph import BipartiteGraph, IncidenceMatrix
from .relations import CompatibilityReport, JointDistribution, Underdetermined, Violation


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def encode_value(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return float(x)


def decode_exact(x) -> Fraction:
    if isinstance(x, float):
        raise InputError(f"exact mode expects 'a/b' strings, got the float {x!r}")
    return as_rational(x)


def decode_float(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise InputError(f"not a number: {x!r}")
    if isinstance(x, str):
        return float(as_rational(x))
    return float(x)


# families

def family_to_json(family: EventFamily) -> dict:
    return {"m": family.m, "events": [list(e) for e in family.events]}


def family_from_json(data) -> EventFamily:
    if not isinstance(data, dict) or "m" not in data or "events" not in data:
        raise InputError('event family JSON needs "m" and "events"')
    if not isinstance(data["events"], list):
        raise InputError('"events" must be a list of integer lists')
    return make_event_family(data["m"], data["events"])


# tables

def table_to_json(table: CPTable, family: EventFamily | None = None) -> dict:
    keys = family.variables if family is not None else sorted(table.values, key=lambda v: v.key)
    entries = [{"i": v.i, "event": list(v.event), "value": encode_value(table[v])} for v in keys]
    out: dict = {"mode": table.mode, "entries": entries}
    if table.version_chosen:
        out["version_chosen"] = [list(e) for e in sorted(table.version_chosen, key=lambda e: (len(e), e))]
    return out


def table_from_json(data) -> CPTable:
    if not isinstance(data, dict) or "entries" not in data:
        raise InputError('table JSON needs "entries"')
    mode = data.get("mode", "exact")
    if mode not in ("exact", "float"):
        raise InputError(f"unknown table mode {mode!r}")
    decode = decode_exact if mode == "exact" else decode_float
    values = {}
    for entry in data["entries"]:
        try:
            var = VarId(int(entry["i"]), tuple(sorted(int(k) for k in entry["event"])))
            value = decode(entry["value"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad table entry {entry!r}: {exc}") from None
        if var in values:
            raise InputError(f"duplicate table entry for {var.name()}")
        values[var] = value
    chosen = frozenset(tuple(e) for e in data.get("version_chosen", []))
    return CPTable(values, mode, chosen)


# joints

def joint_to_json(joint: JointDistribution) -> dict:
    return {"m": joint.m, "p": [encode_value(x) for x in joint.p]}


def joint_from_json(data) -> JointDistribution:
    if not isinstance(data, dict) or "p" not in data:
        raise InputError('joint JSON needs "p"')
    raw = data["p"]
    if any(isinstance(x, float) for x in raw):
        p = tuple(decode_float(x) for x in raw)
    else:
        p = tuple(decode_exact(x) for x in raw)
    if "m" in data and data["m"] != len(p):
        raise InputError(f'joint has m={data["m"]} but {len(p)} probabilities')
    return JointDistribution(p)


def vector_from_json(data) -> list:
    """A raw vector from ``{"p": [...]}``/``{"vector": [...]}``/``{"target": [...]}`` or a list."""
    if isinstance(data, dict):
        for key in ("target", "vector", "p"):
            if key in data:
                data = data[key]
                break
    if not isinstance(data, list):
        raise InputError("expected a JSON list of numbers")
    if any(isinstance(x, float) for x in data):
        return [decode_float(x) for x in data]
    return [decode_exact(x) for x in data]


# binomials and bases

def monomial_to_json(m: Monomial) -> list:
    return [{"i": v.i, "event": list(v.event), "exp": e} for v, e in m.items]


def monomial_from_json(data) -> Monomial:
    try:
        return Monomial({VarId(int(t["i"]), tuple(sorted(t["event"]))): int(t.get("exp", 1)) for t in data})
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad monomial {data!r}: {exc}") from None


def binomial_to_json(b: Binomial) -> dict:
    return {"plus": monomial_to_json(b.plus), "minus": monomial_to_json(b.minus)}


def binomial_from_json(data) -> Binomial:
    if not isinstance(data, dict) or "plus" not in data or "minus" not in data:
        raise InputError('binomial JSON needs "plus" and "minus"')
    return Binomial(monomial_from_json(data["plus"]), monomial_from_json(data["minus"]))


def basis_to_json(basis: GroebnerBasis) -> dict:
    return {
        "family": family_to_json(basis.family),
        "provenance": basis.provenance,
        "binomials": [binomial_to_json(b) for b in basis.binomials],
    }


def basis_from_json(data, family: EventFamily | None = None) -> GroebnerBasis:
    """Read a basis object, or a bare list of binomials when ``family`` is given."""
    if isinstance(data, list):
        if family is None:
            raise InputError("a bare binomial list needs its event family")
        return GroebnerBasis(tuple(binomial_from_json(b) for b in data), family, "external")
    if not isinstance(data, dict) or "binomials" not in data:
        raise InputError('basis JSON needs "binomials"')
    fam = family_from_json(data["family"]) if "family" in data else family
    if fam is None:
        raise InputError("basis JSON has no family")
    prov = data.get("provenance", "external")
    if prov not in PROVENANCES:
        raise InputError(f"unknown provenance {prov!r}")
    return GroebnerBasis(tuple(binomial_from_json(b) for b in data["binomials"]), fam, prov)


def basis_to_text(basis: GroebnerBasis) -> str:
    return basis.text()


# graph and matrix exports

def graph_to_json(g: BipartiteGraph) -> dict:
    return {"edges": [{"event": list(v.event), "i": v.i} for v in g.edges]}


def matrix_to_json(a: IncidenceMatrix) -> dict:
    return {
        "rows": a.row_names(),
        "columns": [v.name() for v in a.column_labels],
        "entries": [list(r) for r in a.entries],
    }


# polytopes

def polytope_to_json(poly: LatticePolytope, output: str = "both") -> dict:
    out: dict = {"dim": poly.dim_ambient}
    if poly.equality_sum is not None:
        out["equality_sum"] = poly.equality_sum
    if output in ("vertices", "both") and poly.vertices is not None:
        out["vertices"] = [list(v) for v in poly.vertices]
    if output in ("hrep", "both") and poly.inequalities is not None:
        out["inequalities"] = [{"J": list(s), "bound": b} for s, b in poly.inequalities]
    return out


def polytope_from_json(data) -> LatticePolytope:
    if not isinstance(data, dict):
        raise InputError("polytope JSON must be an object")
    verts = tuple(tuple(v) for v in data["vertices"]) if "vertices" in data else None
    ineqs = None
    if "inequalities" in data:
        ineqs = tuple((tuple(q["J"]), q["bound"]) for q in data["inequalities"])
    dim = data.get("dim")
    if dim is None:
        dim = len(verts[0]) if verts else max(max(s) for s, _ in ineqs)
    return LatticePolytope(dim, verts, data.get("equality_sum"), ineqs)


# reports

def _relation_json(rel):
    if isinstance(rel, Binomial):
        return {"binomial": binomial_to_json(rel), "text": rel.name()}
    return {"text": rel.name()}


def violation_to_json(v: Violation) -> dict:
    return {
        "kind": v.kind,
        "relation": _relation_json(v.relation),
        "lhs": encode_value(v.lhs),
        "rhs": encode_value(v.rhs),
        "residual": encode_value(v.residual),
    }


def report_to_json(report: CompatibilityReport) -> dict:
    out = {
        "compatible": report.compatible,
        "axioms_pass": report.axioms_pass,
        "variety_pass": report.variety_pass,
        "mode": report.mode,
        "violation_count": len(report.violations),
        "first_violation": violation_to_json(report.violations[0]) if report.violations else None,
        "violations": [violation_to_json(v) for v in report.violations],
    }
    if report.tol is not None:
        out["tolerance"] = report.tol
    return out


def underdetermined_to_json(u: Underdetermined) -> dict:
    return {"underdetermined": True, "components": [list(c) for c in u.components], "dof": u.dof}
