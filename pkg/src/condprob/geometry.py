"""Generalized permutohedra of event families, moment maps, and max-entropy fibers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .core import CPTable, EventFamily, VarId
from .errors import ConvergenceError, InfeasibleError, InputError, LimitError
from .graph import build_graph, incidence_matrix

MAX_ORDERS_M = 10
MAX_HREP_M = 16
MAX_HREP_VERTEX_M = 5


def submodular_w(family: EventFamily, subset) -> int:
    """Number of events meeting ``subset``."""
    s = set(subset)
    return sum(1 for e in family.events if s.intersection(e))


def nonempty_subsets(m: int):
    for k in range(1, m + 1):
        yield from itertools.combinations(range(1, m + 1), k)


def is_submodular(family: EventFamily) -> bool:
    """Exhaustive check of w(I) + w(J) >= w(I ∩ J) + w(I ∪ J)."""
    subsets = [frozenset()] + [frozenset(s) for s in nonempty_subsets(family.m)]
    w = {s: submodular_w(family, s) for s in subsets}
    return all(w[a] + w[b] >= w[a & b] + w[a | b] for a in subsets for b in subsets)


@dataclass(frozen=True)
class LatticePolytope:
    """Polytope given by vertices and/or by sum(x) = equality_sum and sum_{i in J} x_i <= bound."""

    dim_ambient: int
    vertices: tuple[tuple, ...] | None = None
    equality_sum: object = None
    inequalities: tuple[tuple[tuple[int, ...], object], ...] | None = None

    def satisfies_hrep(self, x: Sequence, tol: float | None = None) -> bool:
        """Exact membership when ``tol`` is None, else within ``tol``."""
        if self.inequalities is None:
            raise InputError("polytope has no H-representation")
        if len(x) != self.dim_ambient:
            return False
        slack = tol or 0
        if abs(sum(x) - self.equality_sum) > slack:
            return False
        return all(sum(x[j - 1] for j in subset) <= bound + slack for subset, bound in self.inequalities)

    def tight_sets(self, x: Sequence, tol: float | None = None) -> list[tuple[int, ...]]:
        slack = tol or 0
        return [s for s, bound in self.inequalities if abs(sum(x[j - 1] for j in s) - bound) <= slack]

    def max_over_vertices(self, c: Sequence):
        return max(sum(ci * xi for ci, xi in zip(c, v)) for v in self.vertices)


def _argmax_vertex(family: EventFamily, rank: Mapping[int, int]) -> tuple[int, ...]:
    x = [0] * family.m
    for event in family.events:
        top = max(event, key=rank.__getitem__)
        x[top - 1] += 1
    return tuple(x)


def delta_E_vertices(family: EventFamily) -> LatticePolytope:
    """Vertices of the Minkowski sum of the event simplices.

    For each total order of [m], every event contributes the unit vector of
    its top-ranked element.
    """
    if family.m > MAX_ORDERS_M:
        raise LimitError(f"m = {family.m} exceeds {MAX_ORDERS_M}; m! orders would be enumerated")
    verts = set()
    for perm in itertools.permutations(range(1, family.m + 1)):
        rank = {i: -k for k, i in enumerate(perm)}
        verts.add(_argmax_vertex(family, rank))
    return LatticePolytope(family.m, tuple(sorted(verts, reverse=True)), len(family.events))


def delta_E_hrep(family: EventFamily) -> LatticePolytope:
    """sum(x) = w([m]) and sum_{j in J} x_j <= w(J) for every nonempty J."""
    if family.m > MAX_HREP_M:
        raise LimitError(f"m = {family.m} exceeds {MAX_HREP_M}; 2^m inequalities would be listed")
    ineqs = tuple((s, submodular_w(family, s)) for s in nonempty_subsets(family.m))
    return LatticePolytope(family.m, None, submodular_w(family, range(1, family.m + 1)), ineqs)


def delta_E(family: EventFamily) -> LatticePolytope:
    v, h = delta_E_vertices(family), delta_E_hrep(family)
    return LatticePolytope(family.m, v.vertices, h.equality_sum, h.inequalities)


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    n = len(rows)
    a = [r[:] + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((k for k in range(c, n) if a[k][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        for k in range(n):
            if k != c and a[k][c] != 0:
                f = a[k][c] / a[c][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[c])]
    return [a[k][n] / a[k][k] for k in range(n)]


def hrep_vertices(poly: LatticePolytope) -> list[tuple]:
    """Exact extreme points of an H-representation, by solving every basis of tight rows."""
    m = poly.dim_ambient
    if m > MAX_HREP_VERTEX_M:
        raise LimitError(f"exact H-vertex enumeration is limited to m <= {MAX_HREP_VERTEX_M}")
    ineqs = list(poly.inequalities)
    found = set()
    ones = [Fraction(1)] * m
    for combo in itertools.combinations(ineqs, m - 1):
        rows = [ones] + [[Fraction(1 if j + 1 in s else 0) for j in range(m)] for s, _ in combo]
        rhs = [Fraction(poly.equality_sum)] + [Fraction(b) for _, b in combo]
        x = _solve_exact(rows, rhs)
        if x is not None and poly.satisfies_hrep(x):
            found.add(tuple(x))
    return sorted(found, reverse=True)


def v_rows(family: EventFamily) -> tuple[int, ...]:
    return family.support


def embed_v(family: EventFamily, v_part: Sequence) -> tuple:
    """Place values indexed by the family's singleton vertices into R^m."""
    x = [0] * family.m
    for i, val in zip(family.support, v_part):
        x[i - 1] = val
    return tuple(x)


def project_v(family: EventFamily, point: Sequence) -> tuple:
    """V-coordinates of a point in incidence-row coordinates, embedded in R^m."""
    return embed_v(family, point[: len(family.support)])


def mconv_vertices(family: EventFamily) -> LatticePolytope:
    """Vertices of the Minkowski sum of the incidence-column simplices.

    Coordinates follow the incidence matrix rows: singletons in the
    family's support, then one coordinate per event, which is always 1.
    """
    base = delta_E_vertices(family)
    ones = (1,) * len(family.events)
    lifted = tuple(tuple(v[i - 1] for i in family.support) + ones for v in base.vertices)
    return LatticePolytope(len(family.support) + len(family.events), lifted)


def mconv_points(family: EventFamily, cap: int = 200_000) -> list[tuple]:
    """A @ p for every point-mass choice p (one element per event); mconv is their hull."""
    a = incidence_matrix(build_graph(family))
    total = math.prod(len(e) for e in family.events)
    if total > cap:
        raise LimitError(f"{total} point-mass choices exceeds the cap of {cap}")
    out = set()
    for choice in itertools.product(*family.events):
        picked = {VarId(i, e) for i, e in zip(choice, family.events)}
        out.add(tuple(a.apply([1 if v in picked else 0 for v in a.column_labels])))
    return sorted(out, reverse=True)


def moment_nu(family: EventFamily, z) -> tuple:
    """Normalize |z| within each event, then apply the incidence matrix.

    Returns coordinates in incidence-row order: singletons in the support,
    then one (always 1) coordinate per event.
    """
    values = z.values if isinstance(z, CPTable) else dict(z)
    normalized = {}
    for event in family.events:
        mags = [abs(values[VarId(i, event)]) for i in event]
        total = sum(mags)
        if total == 0:
            raise InputError(f"z vanishes on event {list(event)}")
        for i, mag in zip(event, mags):
            normalized[VarId(i, event)] = mag / total
    return tuple(incidence_matrix(build_graph(family)).apply_table(normalized))


def matus_W(table: CPTable, m: int) -> tuple:
    """W_i = sum over j != i of p_{i|ij}; needs every 2-subset of [m]."""
    out = []
    for i in range(1, m + 1):
        total = 0
        for j in range(1, m + 1):
            if j == i:
                continue
            var = VarId(i, tuple(sorted((i, j))))
            if var not in table:
                raise InputError(f"pair table is missing {var.name()}")
            total = total + table[var]
        out.append(total)
    return tuple(out)


def pairs_family(m: int) -> EventFamily:
    return EventFamily(m, tuple(itertools.combinations(range(1, m + 1), 2)))


def simplex_moment(y: Sequence) -> tuple:
    mags = [abs(v) for v in y]
    total = sum(mags)
    if total == 0:
        raise InputError("moment map of the zero vector")
    return tuple(v / total for v in mags)


# max-entropy fiber solve

def softmax_table(family: EventFamily, theta: Sequence[float],
                  supports: Mapping | None = None) -> CPTable:
    """p_{i|I} = exp(theta_i) / sum_{j in I} exp(theta_j); theta is indexed by singleton 1..m."""
    theta = np.asarray(theta, dtype=float)
    values = {}
    for event in family.events:
        live = supports[event] if supports else event
        t = np.array([theta[i - 1] for i in live])
        t = np.exp(t - t.max())
        t /= t.sum()
        for i in event:
            values[VarId(i, event)] = 0.0
        for i, p in zip(live, t):
            values[VarId(i, event)] = float(p)
    return CPTable(values, "float")


def _logsumexp(t: np.ndarray) -> float:
    top = t.max()
    return float(top + np.log(np.exp(t - top).sum()))


def dual_objective(family: EventFamily, theta, b, supports: Mapping | None = None) -> float:
    """F(theta) = sum_I log sum_{j in I} e^{theta_j} - theta . b."""
    theta = np.asarray(theta, dtype=float)
    total = 0.0
    for event in family.events:
        live = supports[event] if supports else event
        total += _logsumexp(theta[[i - 1 for i in live]])
    return total - float(theta @ np.asarray(b, dtype=float))


def dual_gradient(family: EventFamily, theta, b, supports: Mapping | None = None) -> np.ndarray:
    """A p(theta) - b on the singleton coordinates."""
    grad = -np.asarray(b, dtype=float).copy()
    for event in family.events:
        live = supports[event] if supports else event
        idx = [i - 1 for i in live]
        t = np.asarray(theta, dtype=float)[idx]
        s = np.exp(t - t.max())
        grad[idx] += s / s.sum()
    return grad


def dual_hessian(family: EventFamily, theta, supports: Mapping | None = None) -> np.ndarray:
    """Sum over events of the softmax covariance diag(s) - s s^T."""
    hess = np.zeros((family.m, family.m))
    for event in family.events:
        live = supports[event] if supports else event
        idx = [i - 1 for i in live]
        t = np.asarray(theta, dtype=float)[idx]
        s = np.exp(t - t.max())
        s /= s.sum()
        hess[np.ix_(idx, idx)] += np.diag(s) - np.outer(s, s)
    return hess


def kl_to_uniform(family: EventFamily, table: CPTable) -> float:
    """sum p log p - sum p log(1/|I|), with 0 log 0 = 0."""
    total = 0.0
    for event in family.events:
        for i in event:
            p = float(table[VarId(i, event)])
            if p > 0:
                total += p * math.log(p) - p * math.log(1.0 / len(event))
    return total


@dataclass(frozen=True)
class FiberProblem:
    family: EventFamily
    target: tuple  # length m, singleton coordinates
    tolerance: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        target = tuple(float(x) for x in self.target)
        if len(target) != self.family.m:
            raise InputError(f"target needs {self.family.m} coordinates, got {len(target)}")
        if self.tolerance <= 0:
            raise InputError("tolerance must be positive")
        object.__setattr__(self, "target", target)


class FiberSolution(NamedTuple):
    table: CPTable
    theta: np.ndarray
    iterations: int
    residual: float
    objective_trace: tuple
    supports: dict


def _restricted_supports(problem: FiberProblem) -> dict:
    """Shrink each event to the elements a tight face still allows; checks feasibility."""
    family, b, tol = problem.family, problem.target, problem.tolerance
    hrep = delta_E_hrep(family)
    if abs(sum(b) - hrep.equality_sum) > tol:
        raise InfeasibleError(f"target sums to {sum(b)}, expected {hrep.equality_sum}")
    tight = []
    for s, bound in hrep.inequalities:
        lhs = sum(b[j - 1] for j in s)
        if lhs > bound + tol:
            raise InfeasibleError(f"target violates sum over {list(s)} <= {bound} (got {lhs})")
        if lhs >= bound - tol:
            tight.append(set(s))
    supports = {}
    for event in family.events:
        live = set(event)
        for s in tight:
            if s.intersection(event):
                live &= s
        if not live:
            raise InfeasibleError(f"target leaves no admissible mass on event {list(event)}")
        supports[event] = tuple(sorted(live))
    return supports


def _gauge(family: EventFamily, supports: dict) -> tuple[list[int], list[int]]:
    """Free and pinned singleton indices (0-based): one pin per connected block."""
    parent = {i: i for i in family.support}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for live in supports.values():
        for i in live[1:]:
            parent[find(i)] = find(live[0])
    used = sorted({i for live in supports.values() for i in live})
    blocks: dict[int, list[int]] = {}
    for i in used:
        blocks.setdefault(find(i), []).append(i)
    pinned = sorted(max(block) for block in blocks.values())
    free = [i for i in used if i not in pinned]
    return [i - 1 for i in free], [i - 1 for i in pinned]


def solve_fiber(problem: FiberProblem) -> FiberSolution:
    """Maximum-entropy point of the fiber over ``problem.target``.

    Damped Newton on the convex dual F, started at theta = 0 with one
    coordinate per connected block pinned at 0. Targets on the boundary are
    first reduced to the face they lie on.
    """
    family, b = problem.family, np.array(problem.target)
    supports = _restricted_supports(problem)
    free, _ = _gauge(family, supports)
    theta = np.zeros(family.m)
    stop = problem.tolerance / 10
    trace = [dual_objective(family, theta, b, supports)]
    iterations = 0
    while True:
        grad = dual_gradient(family, theta, b, supports)
        used = sorted({i - 1 for live in supports.values() for i in live})
        if not free or np.max(np.abs(grad[used])) <= stop:
            break
        if iterations >= problem.max_iter:
            raise ConvergenceError(f"no convergence in {problem.max_iter} Newton steps "
                                   f"(gradient {np.max(np.abs(grad)):.3e})")
        iterations += 1
        g = grad[free]
        h = dual_hessian(family, theta, supports)[np.ix_(free, free)]
        try:
            step = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(h, -g, rcond=None)[0]
        direction = np.zeros(family.m)
        direction[free] = step
        f0, slope, t = trace[-1], float(g @ step), 1.0
        if -slope <= 1e-12 * max(1.0, abs(f0)):
            # objective changes are below rounding: judge the full step by the gradient
            cand = theta + direction
            new = dual_gradient(family, cand, b, supports)
            if np.max(np.abs(new[used])) >= np.max(np.abs(grad[used])):
                break
            theta = cand
            trace.append(min(f0, dual_objective(family, cand, b, supports)))
            continue
        while True:
            cand = theta + t * direction
            f1 = dual_objective(family, cand, b, supports)
            if f1 <= f0 + 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-10:
                # rounding floor: keep the full step only if it shrinks the gradient
                cand = theta + direction
                f1 = dual_objective(family, cand, b, supports)
                new = dual_gradient(family, cand, b, supports)
                if np.max(np.abs(new[used])) >= np.max(np.abs(grad[used])):
                    raise ConvergenceError("line search failed before reaching tolerance")
                break
        theta = cand
        trace.append(f1)
    table = softmax_table(family, theta, supports)
    a = incidence_matrix(build_graph(family))
    pushed = embed_v(family, a.apply_table(table.values)[: len(family.support)])
    residual = float(np.max(np.abs(np.array(pushed) - b)))
    if residual > problem.tolerance:
        raise ConvergenceError(f"residual {residual:.3e} exceeds tolerance {problem.tolerance:.1e}")
    return FiberSolution(table, theta, iterations, residual, tuple(trace), supports)


def fiber_max_entropy(problem: FiberProblem) -> CPTable:
    return solve_fiber(problem).table
