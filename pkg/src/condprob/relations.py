"""Probability-facing checks: axioms, cycle relations, reconstruction, Bayes' rule,
and the random-variable specialization."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .algebra import GroebnerBasis
from .core import (
    Binomial,
    CPTable,
    EventFamily,
    Monomial,
    Polynomial,
    VarId,
    as_rational,
    make_event_family,
)
from .errors import DegenerateBinomialError, IncompatibleError, InputError
from .graph import build_graph

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    relation: object  # Binomial or Polynomial
    lhs: object
    rhs: object
    residual: object
    kind: str = "variety"

    def describe(self) -> str:
        return f"{self.relation}: {self.lhs} != {self.rhs} (residual {self.residual})"


@dataclass(frozen=True)
class CompatibilityReport:
    """Outcome of axiom and/or cycle-relation checks.

    A flag is None when that check was not run.
    """

    axioms_pass: bool | None = None
    variety_pass: bool | None = None
    violations: tuple[Violation, ...] = ()
    mode: str = "exact"
    tol: float | None = None

    @property
    def compatible(self) -> bool:
        return self.axioms_pass is not False and self.variety_pass is not False

    @property
    def first_violation(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def merge(self, other: CompatibilityReport) -> CompatibilityReport:
        return CompatibilityReport(
            self.axioms_pass if other.axioms_pass is None else other.axioms_pass,
            self.variety_pass if other.variety_pass is None else other.variety_pass,
            self.violations + other.violations,
            self.mode,
            self.tol,
        )


@dataclass(frozen=True)
class JointDistribution:
    """A probability vector on singleton events 1..m."""

    p: tuple

    def __post_init__(self):
        p = tuple(self.p)
        if not p:
            raise InputError("empty joint distribution")
        exact = all(not isinstance(x, float) for x in p)
        if exact:
            p = tuple(as_rational(x) for x in p)
        if any(x < 0 for x in p):
            raise InputError("joint distribution has negative entries")
        total = sum(p)
        if (exact and total != 1) or (not exact and abs(total - 1) > DEFAULT_TOL):
            raise InputError(f"joint distribution sums to {total}, not 1")
        object.__setattr__(self, "p", p)

    @property
    def m(self) -> int:
        return len(self.p)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, x in enumerate(self.p) if x > 0)

    def __getitem__(self, i: int):
        """1-based probability of singleton ``i``."""
        return self.p[i - 1]

    def mass(self, event) -> object:
        return sum((self.p[i - 1] for i in event), 0)


def _close(x, y, mode: str, tol: float) -> bool:
    return x == y if mode == "exact" else abs(x - y) <= tol


def conditionals_from_joint(joint: JointDistribution, family: EventFamily) -> CPTable:
    """p_{i|I} = p_i / P(I); a zero-mass event gets the uniform version and is flagged."""
    if joint.m != family.m:
        raise InputError(f"joint has {joint.m} outcomes, family has m={family.m}")
    exact = not isinstance(joint.p[0], float)
    values, chosen = {}, set()
    for event in family.events:
        mass = joint.mass(event)
        for i in event:
            if mass == 0:
                values[VarId(i, event)] = Fraction(1, len(event)) if exact else 1.0 / len(event)
            else:
                values[VarId(i, event)] = joint[i] / mass
        if mass == 0:
            chosen.add(event)
    return CPTable(values, "exact" if exact else "float", frozenset(chosen))


def check_axioms(family: EventFamily, table: CPTable, tol: float = DEFAULT_TOL) -> CompatibilityReport:
    """Normalization on every event and the product rule on every nested pair."""
    table.require_complete(family)
    mode = table.mode
    violations = []
    for v in (v for v in family.variables if table[v] < 0):
        violations.append(Violation(Polynomial.variable(v), table[v], 0, table[v], "nonnegativity"))
    for event in family.events:
        total = sum((table[VarId(i, event)] for i in event), 0)
        if not _close(total, 1, mode, tol):
            rel = Polynomial.linear_form(VarId(i, event) for i in event) - Polynomial.constant(1)
            violations.append(Violation(rel, total, 1, total - 1, "normalization"))
    for small, big in family.nested_pairs():
        mass = sum((table[VarId(j, big)] for j in small), 0)
        for i in small:
            lhs = table[VarId(i, big)]
            rhs = table[VarId(i, small)] * mass
            if not _close(lhs, rhs, mode, tol):
                rel = Polynomial.variable(VarId(i, big)) - Polynomial.variable(VarId(i, small)) * \
                    Polynomial.linear_form(VarId(j, big) for j in small)
                violations.append(Violation(rel, lhs, rhs, lhs - rhs, "product_rule"))
    return CompatibilityReport(axioms_pass=not violations, violations=tuple(violations),
                               mode=mode, tol=None if mode == "exact" else tol)


def check_variety(family: EventFamily, table: CPTable, basis: GroebnerBasis,
                  tol: float = DEFAULT_TOL) -> CompatibilityReport:
    """Evaluate every basis binomial; each nonzero residual is a certificate."""
    table.require_complete(family)
    if basis.family != family:
        raise InputError("basis was built for a different family")
    mode = table.mode
    violations = []
    for b in basis.binomials:
        lhs, rhs = b.plus.evaluate(table.values), b.minus.evaluate(table.values)
        if not _close(lhs, rhs, mode, tol):
            violations.append(Violation(b, lhs, rhs, lhs - rhs))
    return CompatibilityReport(variety_pass=not violations, violations=tuple(violations),
                               mode=mode, tol=None if mode == "exact" else tol)


@dataclass(frozen=True)
class Underdetermined:
    """The event graph is disconnected; relative masses across components are free."""

    components: tuple[tuple[int, ...], ...]
    dof: int


def reconstruct_joint(family: EventFamily, table: CPTable,
                      tol: float = DEFAULT_TOL) -> JointDistribution | Underdetermined:
    """Recover the joint from strictly positive conditionals.

    Ratios p_j / p_i = p_{j|I} / p_{i|I} are propagated along a spanning
    forest of the event graph; the result is re-conditioned and compared
    with the input, raising :class:`IncompatibleError` on mismatch.
    """
    table.require_complete(family)
    if family.support != tuple(range(1, family.m + 1)):
        raise InputError("reconstruction needs every singleton to lie in some event")
    if not table.restrict(family).is_positive():
        raise InputError("reconstruction supports strictly positive tables only")

    g = build_graph(family)
    comps = g.components()
    if len(comps) > 1:
        singles = tuple(tuple(v[1] for v in c if v[0] == "v") for c in comps)
        return Underdetermined(singles, len(comps) - 1)

    weight = {1: Fraction(1) if table.mode == "exact" else 1.0}
    queue = [1]
    while queue:
        i = queue.pop(0)
        for _, event in g.adjacency[("v", i)]:
            for j in event:
                if j not in weight:
                    weight[j] = weight[i] * table[VarId(j, event)] / table[VarId(i, event)]
                    queue.append(j)
    total = sum(weight.values())
    p = tuple(weight[i] / total for i in range(1, family.m + 1))
    if table.mode == "float":
        joint = JointDistribution(tuple(float(x) for x in p))
    else:
        joint = JointDistribution(p)

    rederived = conditionals_from_joint(joint, family)
    bad = []
    for v in family.variables:
        if not _close(table[v], rederived[v], table.mode, tol):
            rel = Polynomial.variable(v)
            bad.append(Violation(rel, table[v], rederived[v], table[v] - rederived[v], "reconstruction"))
    if bad:
        report = CompatibilityReport(variety_pass=False, violations=tuple(bad), mode=table.mode)
        raise IncompatibleError(f"table is incompatible: {len(bad)} entries disagree with the "
                                f"reconstructed joint, first {bad[0].describe()}", report)
    return joint


def _mass(table: CPTable, part, given) -> object:
    given = tuple(sorted(given))
    return sum((table[VarId(i, given)] for i in sorted(part)), 0)


class BayesCheck(NamedTuple):
    ok: bool
    lhs: object
    rhs: object


def bayes_rule_check(family: EventFamily, table: CPTable, a, b,
                     tol: float = DEFAULT_TOL) -> BayesCheck:
    """p_{A∩B|B} == p_{A∩B|A} p_A / p_B with p_{X|Y} = sum_{i in X} p_{i|Y}."""
    a, b = tuple(sorted(set(a))), tuple(sorted(set(b)))
    if not family.contains_ground:
        raise InputError("Bayes' rule needs the ground event [m] in the family")
    for s in (a, b):
        if s not in family.events:
            raise InputError(f"event {list(s)} is not in the family")
    table.require_complete(family)
    ground = family.ground
    inter = set(a) & set(b)
    p_b = _mass(table, b, ground)
    if p_b == 0:
        raise InputError(f"p_B is zero for B={list(b)}")
    lhs = _mass(table, inter, b)
    rhs = _mass(table, inter, a) * _mass(table, a, ground) / p_b
    return BayesCheck(_close(lhs, rhs, table.mode, tol), lhs, rhs)


def summed_bayes_check(table: CPTable, i: int, small, big, tol: float = DEFAULT_TOL) -> BayesCheck:
    """p_{i|K} p_{J|J} == p_{J|K} p_{i|J} for i in J, J a subset of K."""
    small, big = tuple(sorted(small)), tuple(sorted(big))
    lhs = table[VarId(i, big)] * _mass(table, small, small)
    rhs = _mass(table, small, big) * table[VarId(i, small)]
    return BayesCheck(_close(lhs, rhs, table.mode, tol), lhs, rhs)


@dataclass(frozen=True)
class RVSpec:
    """Discrete random variables X_1..X_n and the variable subsets conditioned upon.

    ``conditioning_sets`` holds 1-based variable subsets (possibly empty).
    States of X_k are ``0..d_k-1`` unless labels are given.
    """

    arities: tuple[int, ...]
    conditioning_sets: tuple[tuple[int, ...], ...] = ()
    labels: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        arities = tuple(int(d) for d in self.arities)
        if not arities or any(d < 2 for d in arities):
            raise InputError("every arity must be at least 2")
        n = len(arities)
        sets = []
        for s in self.conditioning_sets:
            s = tuple(sorted(set(int(k) for k in s)))
            if any(not 1 <= k <= n for k in s):
                raise InputError(f"conditioning set {list(s)} is outside [1, {n}]")
            sets.append(s)
        object.__setattr__(self, "arities", arities)
        object.__setattr__(self, "conditioning_sets", tuple(dict.fromkeys(sets)))
        if self.labels is not None:
            labels = tuple(tuple(str(x) for x in lab) for lab in self.labels)
            if len(labels) != n or any(len(lab) != d for lab, d in zip(labels, arities)):
                raise InputError("labels must give one name per state of every variable")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.arities)

    @property
    def m(self) -> int:
        out = 1
        for d in self.arities:
            out *= d
        return out

    def states(self) -> list[tuple[int, ...]]:
        """All joint states in mixed-radix order (first variable most significant)."""
        return list(itertools.product(*(range(d) for d in self.arities)))

    def index(self, state: Sequence[int]) -> int:
        """1-based singleton number of a joint state."""
        state = tuple(state)
        if len(state) != self.n or any(not 0 <= x < d for x, d in zip(state, self.arities)):
            raise InputError(f"invalid state {state}")
        k = 0
        for x, d in zip(state, self.arities):
            k = k * d + x
        return k + 1

    def state_name(self, state: Sequence[int]) -> str:
        if self.labels is None:
            return "".join(str(x) for x in state)
        return ",".join(self.labels[k][x] for k, x in enumerate(state))


@dataclass(frozen=True)
class RVEvents:
    """An event family built from random variables plus its labels.

    ``event_labels`` maps each event to its (S, x_S) pair, where ``x_S``
    is a tuple of states aligned with the sorted variable set ``S``.
    """

    spec: RVSpec
    family: EventFamily
    event_labels: Mapping[tuple, tuple] = field(default_factory=dict)

    def event_of(self, assignment: Mapping[int, int]) -> tuple[int, ...]:
        """E(x_S): singletons whose states agree with ``assignment`` (1-based variables)."""
        return tuple(
            self.spec.index(s) for s in self.spec.states()
            if all(s[k - 1] == x for k, x in assignment.items())
        )

    def conditional_form(self, target: Mapping[int, int], given: Mapping[int, int]) -> Polynomial:
        """p_{x_A|x_B} as the linear form over E(x_A) ∩ E(x_B) given E(x_B)."""
        cond = self.event_of(given)
        if cond not in self.family.events:
            raise InputError(f"E(x_B) = {list(cond)} is not an event of the family")
        inside = set(self.event_of(target)) & set(cond)
        return Polynomial.linear_form(VarId(i, cond) for i in sorted(inside))


def rv_event_family(spec: RVSpec) -> RVEvents:
    """One event E(x_S) per conditioning set S and partial state x_S, if |E(x_S)| >= 2."""
    labels = {}
    subsets = []
    for s in spec.conditioning_sets:
        for partial in itertools.product(*(range(spec.arities[k - 1]) for k in s)):
            assignment = dict(zip(s, partial))
            event = tuple(
                spec.index(x) for x in spec.states()
                if all(x[k - 1] == v for k, v in assignment.items())
            )
            if len(event) < 2:
                continue
            labels[event] = (s, partial)
            subsets.append(list(event))
    family = make_event_family(spec.m, subsets)
    return RVEvents(spec, family, labels)


class BesagRelation(NamedTuple):
    family: EventFamily
    binomial: Binomial
    configurations: tuple[tuple[int, ...], ...]

    def path_variables(self) -> tuple[list[VarId], list[VarId]]:
        """Both sides of the binomial in path order, ground variable first."""
        last = self.family.m
        ground = tuple(range(1, last + 1))
        plus = [VarId(1, ground)] + [VarId(j + 1, (j, j + 1)) for j in range(1, last)]
        minus = [VarId(last, ground)] + [VarId(j, (j, j + 1)) for j in range(1, last)]
        return plus, minus

    def text(self, sep: str = " ") -> str:
        plus, minus = self.path_variables()
        side = lambda vs: sep.join(v.name(self.family.m) for v in vs)
        return f"{side(plus)} - {side(minus)}"


def besag_binomial(spec: RVSpec, x: Sequence[int], y: Sequence[int]) -> BesagRelation:
    """Cleared-denominator Besag ratio identity as a cycle binomial.

    Singleton j is the configuration (x_1..x_{j-1}, y_j..y_n), so 1 is ``y``
    and n+1 is ``x``. The family is {[n+1]} together with the pairs {j, j+1},
    and the binomial is p_1 prod_j p_{j+1|j,j+1} - p_{n+1} prod_j p_{j|j,j+1},
    returned in that orientation.
    """
    x, y = tuple(x), tuple(y)
    n = spec.n
    for state in (x, y):
        spec.index(state)
    same = [k + 1 for k in range(n) if x[k] == y[k]]
    if same:
        raise InputError(f"x and y agree on variables {same}; the path would repeat a state")
    if n == 1:
        raise DegenerateBinomialError("with one variable the pair {1,2} is the ground event and "
                                      "the relation is identically zero")
    configs = tuple(x[:j] + y[j:] for j in range(n + 1))
    family = make_event_family(n + 1, [list(range(1, n + 2))] + [[j, j + 1] for j in range(1, n + 1)])
    plus, minus = BesagRelation(family, None, configs).path_variables()
    return BesagRelation(family, Binomial(Monomial.of(*plus), Monomial.of(*minus)), configs)


def besag_table(spec: RVSpec, relation: BesagRelation, joint: JointDistribution) -> CPTable:
    """Conditionals on the Besag family induced by a joint over all RV states."""
    if joint.m != spec.m:
        raise InputError(f"joint has {joint.m} outcomes, the variables have {spec.m} states")
    masses = [joint[spec.index(c)] for c in relation.configurations]
    total = sum(masses)
    if total == 0:
        raise InputError("the Besag path has zero probability")
    path_joint = JointDistribution(tuple(q / total for q in masses))
    return conditionals_from_joint(path_joint, relation.family)
