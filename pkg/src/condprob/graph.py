"""The labeled bipartite event graph, its incidence matrix, and its cycles.

Vertices are ``("u", event)`` for each conditioned-upon event and
``("v", i)`` for each singleton appearing in some event. Every edge is
directed ``u_I -> v_i`` and carries the variable p_{i|I}.
"""

from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .core import Binomial, EventFamily, Monomial, VarId, canonicalize_binomial, event_key, format_event
from .errors import InputError, LimitError

Vertex = tuple  # ("u", event) or ("v", i)

DEFAULT_CYCLE_CAP = 200_000
DEFAULT_MINOR_CAP = 5_000_000


def vertex_key(vertex: Vertex) -> tuple:
    kind, label = vertex
    return (0, event_key(label)) if kind == "u" else (1, label)


def vertex_name(vertex: Vertex) -> str:
    kind, label = vertex
    return f"u_{format_event(label)}" if kind == "u" else f"v_{label}"


@dataclass(frozen=True)
class BipartiteGraph:
    family: EventFamily

    @cached_property
    def u_vertices(self) -> tuple[Vertex, ...]:
        return tuple(("u", e) for e in self.family.events)

    @cached_property
    def v_vertices(self) -> tuple[Vertex, ...]:
        return tuple(("v", i) for i in self.family.support)

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        return self.u_vertices + self.v_vertices

    @cached_property
    def edges(self) -> tuple[VarId, ...]:
        """Edges in canonical variable order; edge p_{i|I} joins u_I and v_i."""
        return self.family.variables

    @cached_property
    def adjacency(self) -> dict[Vertex, tuple[Vertex, ...]]:
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for var in self.edges:
            adj[("u", var.event)].append(("v", var.i))
            adj[("v", var.i)].append(("u", var.event))
        return {v: tuple(sorted(ns, key=vertex_key)) for v, ns in adj.items()}

    def edge_between(self, a: Vertex, b: Vertex) -> VarId | None:
        if a[0] == b[0]:
            return None
        u, v = (a, b) if a[0] == "u" else (b, a)
        if v[1] in u[1]:
            return VarId(v[1], u[1])
        return None

    def has_edge(self, a: Vertex, b: Vertex) -> bool:
        return self.edge_between(a, b) is not None

    def components(self) -> list[tuple[Vertex, ...]]:
        """Connected components, each sorted, in order of their least vertex."""
        seen: set = set()
        out = []
        for start in self.vertices:
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adjacency[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(tuple(sorted(comp, key=vertex_key)))
        return out

    def to_dot(self) -> str:
        lines = ["digraph G {"]
        for u in self.u_vertices:
            lines.append(f'  "{vertex_name(u)}" [shape=box, label="{format_event(u[1])}"];')
        for v in self.v_vertices:
            lines.append(f'  "{vertex_name(v)}" [shape=circle, label="{v[1]}"];')
        for var in self.edges:
            lines.append(
                f'  "{vertex_name(("u", var.event))}" -> "{vertex_name(("v", var.i))}" '
                f'[label="{var.name()}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(family: EventFamily) -> BipartiteGraph:
    return BipartiteGraph(family)


@dataclass(frozen=True)
class IncidenceMatrix:
    """0/1 vertex-edge incidence matrix.

    Rows are the singleton vertices v_i (sorted) followed by the event
    vertices u_I (canonical order); columns follow the canonical variable
    order.
    """

    row_labels: tuple[Vertex, ...]
    column_labels: tuple[VarId, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_labels), len(self.column_labels))

    @property
    def num_v_rows(self) -> int:
        return sum(1 for r in self.row_labels if r[0] == "v")

    def column(self, var: VarId) -> list[int]:
        k = self.column_labels.index(var)
        return [row[k] for row in self.entries]

    def apply(self, vector: Sequence) -> list:
        """A @ vector, exact when the entries of ``vector`` are exact."""
        if len(vector) != len(self.column_labels):
            raise InputError("vector length does not match column count")
        return [sum((a * x for a, x in zip(row, vector) if a), 0) for row in self.entries]

    def apply_table(self, values) -> list:
        return self.apply([values[v] for v in self.column_labels])

    def to_array(self):
        import numpy as np

        return np.array(self.entries, dtype=int)

    def row_names(self) -> list[str]:
        return [str(r[1]) if r[0] == "v" else format_event(r[1]) for r in self.row_labels]


def incidence_matrix(g: BipartiteGraph) -> IncidenceMatrix:
    rows = g.v_vertices + g.u_vertices
    index = {r: k for k, r in enumerate(rows)}
    entries = [[0] * len(g.edges) for _ in rows]
    for col, var in enumerate(g.edges):
        entries[index[("v", var.i)]][col] = 1
        entries[index[("u", var.event)]][col] = 1
    return IncidenceMatrix(tuple(rows), tuple(g.edges), tuple(tuple(r) for r in entries))


@dataclass(frozen=True)
class Cycle:
    """A simple cycle stored in canonical form.

    ``vertices`` starts at the least event vertex and heads toward the smaller
    of its two cycle neighbours; the closing edge back to ``vertices[0]`` is
    implicit.
    """

    vertices: tuple[Vertex, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def steps(self) -> list[tuple[Vertex, Vertex]]:
        vs = self.vertices
        return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]

    @property
    def orientation(self) -> tuple[bool, ...]:
        """Per step, True when the step runs along the edge direction u -> v."""
        return tuple(a[0] == "u" for a, _ in self.steps)

    @property
    def edge_labels(self) -> tuple[VarId, ...]:
        out = []
        for a, b in self.steps:
            u, v = (a, b) if a[0] == "u" else (b, a)
            out.append(VarId(v[1], u[1]))
        return tuple(out)

    @property
    def events(self) -> tuple:
        return tuple(x[1] for x in self.vertices if x[0] == "u")

    def sort_key(self) -> tuple:
        return (len(self.vertices), tuple(vertex_key(x) for x in self.vertices))

    def name(self) -> str:
        names = [vertex_name(x) for x in self.vertices]
        return "(" + ", ".join(names + [names[0]]) + ")"


def canonical_cycle(sequence: Sequence[Vertex]) -> Cycle:
    """Canonical rotation/reflection of a closed vertex sequence (closing vertex omitted)."""
    seq = list(sequence)
    n = len(seq)
    if n < 4 or n % 2:
        raise InputError(f"a bipartite cycle needs even length >= 4, got {n}")
    if len(set(seq)) != n:
        raise InputError("cycle repeats a vertex")
    start = min((k for k in range(n) if seq[k][0] == "u"), key=lambda k: vertex_key(seq[k]))
    fwd = [seq[(start + k) % n] for k in range(n)]
    bwd = [seq[(start - k) % n] for k in range(n)]
    best = fwd if vertex_key(fwd[1]) <= vertex_key(bwd[1]) else bwd
    return Cycle(tuple(best))


def is_cycle_of(g: BipartiteGraph, c: Cycle) -> bool:
    return all(g.has_edge(a, b) for a, b in c.steps)


def has_chord(g: BipartiteGraph, c: Cycle) -> bool:
    vs = c.vertices
    n = len(vs)
    for a in range(n):
        for b in range(a + 2, n):
            if a == 0 and b == n - 1:
                continue
            if g.has_edge(vs[a], vs[b]):
                return True
    return False


def enumerate_cycles(g: BipartiteGraph, max_length: int | None = None,
                     cap: int = DEFAULT_CYCLE_CAP) -> list[Cycle]:
    """All simple cycles, optionally of length at most ``max_length``.

    Depth-first search from each vertex through higher-ranked vertices only,
    keeping one of the two traversal directions. Raises :class:`LimitError`
    once more than ``cap`` cycles have been found.
    """
    if max_length is not None and (max_length < 0 or max_length % 2):
        raise InputError(f"max_length must be even and nonnegative, got {max_length}")
    order = sorted(g.vertices, key=vertex_key)
    rank = {v: k for k, v in enumerate(order)}
    nbrs = [[rank[y] for y in g.adjacency[v]] for v in order]
    limit = len(order) if max_length is None else max_length
    found: list[tuple[int, ...]] = []

    for s in range(len(order)):
        path = [s]
        on_path = [False] * len(order)
        on_path[s] = True
        stack = [iter(nbrs[s])]
        while stack:
            step = next(stack[-1], None)
            if step is None:
                stack.pop()
                on_path[path.pop()] = False
                continue
            if step == s:
                if len(path) >= 4 and path[1] < path[-1]:
                    found.append(tuple(path))
                    if len(found) > cap:
                        raise LimitError(f"more than {cap} cycles; raise the cap or bound the length")
                continue
            if step < s or on_path[step] or len(path) >= limit:
                continue
            path.append(step)
            on_path[step] = True
            stack.append(iter(nbrs[step]))

    cycles = {canonical_cycle([order[k] for k in p]) for p in found}
    return sorted(cycles, key=Cycle.sort_key)


def enumerate_induced_cycles(g: BipartiteGraph, cap: int = DEFAULT_CYCLE_CAP) -> list[Cycle]:
    """Chordless cycles, by filtering the full enumeration."""
    return [c for c in enumerate_cycles(g, cap=cap) if not has_chord(g, c)]


def cycle_binomial(c: Cycle, canonical: bool = True) -> Binomial:
    """Edges traversed along their direction go to ``plus``, the rest to ``minus``."""
    plus, minus = [], []
    for forward, var in zip(c.orientation, c.edge_labels):
        (plus if forward else minus).append(var)
    b = Binomial(Monomial.of(*plus), Monomial.of(*minus))
    return canonicalize_binomial(b) if canonical else b


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def determinant(m: Sequence[Sequence[int]]) -> int:
    return _bareiss_det([list(r) for r in m])


class UnimodularityResult(NamedTuple):
    ok: bool
    rows: tuple[int, ...] | None = None
    cols: tuple[int, ...] | None = None
    det: int | None = None


def check_total_unimodularity(a, max_minor_dim: int | None = None,
                              cap: int = DEFAULT_MINOR_CAP) -> UnimodularityResult:
    """Check that every square minor of size up to ``max_minor_dim`` is -1, 0 or 1.

    ``a`` is an :class:`IncidenceMatrix` or any integer matrix given as rows.
    On failure the offending row and column index sets are returned.
    """
    rows = [list(r) for r in (a.entries if isinstance(a, IncidenceMatrix) else a)]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    bound = min(nr, nc)
    if max_minor_dim is None:
        max_minor_dim = bound
    if max_minor_dim > bound:
        raise LimitError(f"max_minor_dim {max_minor_dim} exceeds min(rows, cols) = {bound}")
    total = sum(comb(nr, k) * comb(nc, k) for k in range(1, max_minor_dim + 1))
    if total > cap:
        raise LimitError(f"{total} minors to check exceeds the cap of {cap}")
    for k in range(1, max_minor_dim + 1):
        for rs in itertools.combinations(range(nr), k):
            sub_rows = [rows[r] for r in rs]
            for cs in itertools.combinations(range(nc), k):
                d = _bareiss_det([[row[c] for c in cs] for row in sub_rows])
                if d not in (-1, 0, 1):
                    return UnimodularityResult(False, rs, cs, d)
    return UnimodularityResult(True)

