"""Binomial ideal machinery for relations among conditional probabilities.

The toric ideal of an event family is represented by its cycle binomials,
which form a universal Groebner basis. Everything here is exact: coefficients
are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .core import (
    ONE,
    Binomial,
    EventFamily,
    Monomial,
    Polynomial,
    TermOrder,
    VarId,
    as_polynomial,
    canonicalize_binomial,
)
from .errors import InputError, LimitError
from .graph import (
    DEFAULT_CYCLE_CAP,
    IncidenceMatrix,
    build_graph,
    cycle_binomial,
    enumerate_cycles,
    enumerate_induced_cycles,
    incidence_matrix,
)

PROVENANCES = ("universal_cycles", "induced_only", "external")


def in_kernel(b: Binomial, a: IncidenceMatrix) -> bool:
    return all(x == 0 for x in a.apply(b.exponent_vector(a.column_labels)))


@dataclass(frozen=True)
class GroebnerBasis:
    """Canonically ordered, duplicate-free binomials of a family's toric ideal.

    Construction rejects binomials outside the kernel of the incidence matrix.
    """

    binomials: tuple[Binomial, ...]
    family: EventFamily
    provenance: str = "external"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise InputError(f"unknown provenance {self.provenance!r}")
        canon = {canonicalize_binomial(b) for b in self.binomials}
        a = incidence_matrix(build_graph(self.family))
        known = set(self.family.variables)
        for b in canon:
            if not b.variables <= known:
                raise InputError(f"{b} uses variables outside the family")
            if not in_kernel(b, a):
                raise InputError(f"{b} is not in the kernel of the incidence matrix")
        object.__setattr__(self, "binomials", tuple(sorted(canon, key=Binomial.sort_key)))

    def __len__(self) -> int:
        return len(self.binomials)

    def __iter__(self):
        return iter(self.binomials)

    def __contains__(self, b: Binomial) -> bool:
        return canonicalize_binomial(b) in set(self.binomials)

    def as_set(self) -> frozenset[Binomial]:
        return frozenset(self.binomials)

    def text(self, ground: int | None = None) -> str:
        return "".join(b.name(ground) + "\n" for b in self.binomials)


def universal_gb(family: EventFamily, cap: int = DEFAULT_CYCLE_CAP) -> GroebnerBasis:
    """One binomial per simple cycle of the event graph."""
    g = build_graph(family)
    return GroebnerBasis(tuple(cycle_binomial(c) for c in enumerate_cycles(g, cap=cap)),
                         family, "universal_cycles")


def induced_generators(family: EventFamily, cap: int = DEFAULT_CYCLE_CAP) -> GroebnerBasis:
    """Binomials of chordless cycles: a generating set, not in general a Groebner basis."""
    g = build_graph(family)
    return GroebnerBasis(tuple(cycle_binomial(c) for c in enumerate_induced_cycles(g, cap=cap)),
                         family, "induced_only")


def bayes_binomial(i: int, j: int, small, big, canonical: bool = True) -> Binomial:
    """p_{i|K} p_{j|J} - p_{j|K} p_{i|J} for i, j in J, J a subset of K."""
    small, big = tuple(small), tuple(big)
    b = Binomial(Monomial.of(VarId(i, big), VarId(j, small)),
                 Monomial.of(VarId(j, big), VarId(i, small)))
    return canonicalize_binomial(b) if canonical else b


def bayes_binomials(family: EventFamily) -> list[Binomial]:
    out = set()
    for small, big in family.nested_pairs():
        for i, j in itertools.combinations(small, 2):
            out.add(bayes_binomial(i, j, small, big))
    return sorted(out, key=Binomial.sort_key)


def j_generator(i: int, small, big) -> Polynomial:
    """(sum_{j in J} p_{j|J}) p_{i|K} - p_{i|J} (sum_{j in J} p_{j|K})."""
    small, big = tuple(small), tuple(big)
    norm_small = Polynomial.linear_form(VarId(j, small) for j in small)
    mass_in_big = Polynomial.linear_form(VarId(j, big) for j in small)
    return norm_small * Polynomial.variable(VarId(i, big)) - Polynomial.variable(VarId(i, small)) * mass_in_big


def j_generators(family: EventFamily) -> list[Polynomial]:
    return [j_generator(i, small, big) for small, big in family.nested_pairs() for i in small]


def bayes_expansion(i: int, small, big) -> list[Binomial]:
    """Oriented Bayes binomials whose sum equals :func:`j_generator` (i, J, K).

    The j = i summand vanishes and is omitted.
    """
    return [bayes_binomial(i, j, small, big, canonical=False) for j in small if j != i]


@dataclass(frozen=True)
class IdealContext:
    """Saturation data of a family: alpha (all variables) and beta (all p_{I|I})."""

    family: EventFamily
    alpha: Monomial
    beta_factors: tuple[Polynomial, ...]
    j_generators: tuple[Polynomial, ...] = field(repr=False)

    @property
    def beta(self) -> Polynomial:
        return reduce(lambda a, b: a * b, self.beta_factors, Polynomial.constant(1))


def ideal_context(family: EventFamily) -> IdealContext:
    alpha = Monomial.of(*family.variables)
    beta = tuple(Polynomial.linear_form(VarId(i, e) for i in e) for e in family.events)
    return IdealContext(family, alpha, beta, tuple(j_generators(family)))


def _divisors(basis) -> list[Polynomial]:
    if isinstance(basis, GroebnerBasis):
        basis = basis.binomials
    return [as_polynomial(g) for g in basis]


def divide(f, basis, order: TermOrder) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division: returns quotients q_k and remainder r with f = sum q_k g_k + r.

    Divisors are tried in list order; no term of ``r`` is divisible by a
    leading monomial of the basis.
    """
    gs = [g for g in _divisors(basis)]
    leads = [g.leading_term(order) if g else None for g in gs]
    p = dict(as_polynomial(f).terms)
    quotients: list[dict] = [{} for _ in gs]
    remainder: dict = {}
    while p:
        lm = max(p, key=order.key)
        lc = p[lm]
        for k, lead in enumerate(leads):
            if lead is None or not lead[0].divides(lm):
                continue
            mono, coeff = lm / lead[0], lc / lead[1]
            quotients[k][mono] = quotients[k].get(mono, 0) + coeff
            for gm, gc in gs[k].terms.items():
                t = gm * mono
                val = p.get(t, 0) - coeff * gc
                if val:
                    p[t] = val
                else:
                    p.pop(t, None)
            break
        else:
            remainder[lm] = lc
            del p[lm]
    return [Polynomial(q) for q in quotients], Polynomial(remainder)


def normal_form(f, basis, order: TermOrder) -> Polynomial:
    return divide(f, basis, order)[1]


def s_polynomial(f, g, order: TermOrder) -> Polynomial:
    f, g = as_polynomial(f), as_polynomial(g)
    if not f or not g:
        raise InputError("S-polynomial of a zero polynomial")
    fm, fc = f.leading_term(order)
    gm, gc = g.leading_term(order)
    lcm = fm.lcm(gm)
    return f * Polynomial({lcm / fm: Fraction(1) / fc}) - g * Polynomial({lcm / gm: Fraction(1) / gc})


class BuchbergerResult(NamedTuple):
    ok: bool
    pair: tuple | None = None
    remainder: Polynomial | None = None


def buchberger_verify(basis, order: TermOrder) -> BuchbergerResult:
    """Buchberger's criterion: every S-polynomial reduces to zero modulo the basis."""
    elems = list(basis.binomials if isinstance(basis, GroebnerBasis) else basis)
    for a, b in itertools.combinations(range(len(elems)), 2):
        r = normal_form(s_polynomial(elems[a], elems[b], order), elems, order)
        if r:
            return BuchbergerResult(False, (elems[a], elems[b]), r)
    return BuchbergerResult(True)


def membership(f, basis: GroebnerBasis, order: TermOrder | None = None) -> bool:
    """Ideal membership by normal form; defaults to the canonical term order."""
    if order is None:
        order = TermOrder.canonical(basis.family.variables)
    return not normal_form(f, basis, order)


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the rational nullspace, via reduced row echelon form."""
    a = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(a)) if a[k][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for k in range(len(a)):
            if k != r and a[k][c] != 0:
                factor = a[k][c]
                a[k] = [x - factor * y for x, y in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            vec[pc] = -a[row][fc]
        basis.append(vec)
    return basis


def _primitive(vec: Sequence[Fraction]) -> list[int]:
    den = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in vec), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(gcd, (abs(x) for x in ints if x), 0)
    return [x // g for x in ints]


def circuits_bruteforce(a: IncidenceMatrix, max_support: int | None = None,
                        cap: int = 2_000_000) -> list[Binomial]:
    """Circuits of ``a`` by direct kernel computation on column subsets.

    A column subset whose submatrix has a one-dimensional kernel spanned by a
    vector of full support yields that (primitive) vector as a binomial.
    """
    ncols = len(a.column_labels)
    if max_support is None:
        max_support = ncols
    if max_support > ncols:
        raise LimitError(f"max_support {max_support} exceeds the column count {ncols}")
    from math import comb

    work = sum(comb(ncols, k) for k in range(2, max_support + 1))
    if work > cap:
        raise LimitError(f"{work} column subsets exceeds the cap of {cap}")
    found: list[tuple[frozenset, Binomial]] = []
    for k in range(2, max_support + 1):
        for cols in itertools.combinations(range(ncols), k):
            sub = [[Fraction(row[c]) for c in cols] for row in a.entries]
            kernel = _nullspace(sub, k)
            if len(kernel) != 1 or any(x == 0 for x in kernel[0]):
                continue
            u = _primitive(kernel[0])
            plus = Monomial({a.column_labels[c]: x for c, x in zip(cols, u) if x > 0})
            minus = Monomial({a.column_labels[c]: -x for c, x in zip(cols, u) if x < 0})
            found.append((frozenset(cols), canonicalize_binomial(Binomial(plus, minus))))
    supports = [s for s, _ in found]
    minimal = [b for s, b in found if not any(t < s for t in supports)]
    return sorted(set(minimal), key=Binomial.sort_key)
