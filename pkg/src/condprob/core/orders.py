"""Term orders on monomials in a fixed, finite set of variables."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import InputError
from .events import VarId
from .polynomial import Monomial

KINDS = ("lex", "grevlex", "weighted")


@dataclass(frozen=True)
class TermOrder:
    """A monomial order.

    ``priority`` lists every variable from most to least significant. For
    ``weighted`` orders the weight dot product is compared first and lex
    (under ``priority``) breaks ties; weights must be nonnegative.
    """

    kind: str
    priority: tuple[VarId, ...]
    weights: tuple[int, ...] | None = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown term order kind {self.kind!r}")
        if len(set(self.priority)) != len(self.priority):
            raise InputError("priority has repeated variables")
        if self.kind == "weighted":
            if self.weights is None or len(self.weights) != len(self.priority):
                raise InputError("weighted order needs one weight per variable")
            if any(w < 0 for w in self.weights):
                raise InputError("weights must be nonnegative")
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(self.priority)})

    @classmethod
    def lex(cls, priority: Sequence[VarId]) -> TermOrder:
        return cls("lex", tuple(priority))

    @classmethod
    def grevlex(cls, priority: Sequence[VarId]) -> TermOrder:
        return cls("grevlex", tuple(priority))

    @classmethod
    def weighted(cls, weights: Mapping[VarId, int], priority: Sequence[VarId]) -> TermOrder:
        priority = tuple(priority)
        return cls("weighted", priority, tuple(weights[v] for v in priority))

    @classmethod
    def canonical(cls, variables: Sequence[VarId]) -> TermOrder:
        """Degree first, then lex in the canonical variable order.

        Agrees with :func:`~condprob.core.polynomial.canonical_key`.
        """
        priority = sorted(variables, key=lambda v: v.key)
        return cls("weighted", tuple(priority), tuple(1 for _ in priority))

    def dense(self, mono: Monomial) -> list[int]:
        vec = [0] * len(self.priority)
        for v, e in mono.items:
            try:
                vec[self._index[v]] = e
            except KeyError:
                raise InputError(f"variable {v} is not covered by this term order") from None
        return vec

    def key(self, mono: Monomial) -> tuple:
        vec = self.dense(mono)
        if self.kind == "lex":
            return tuple(vec)
        if self.kind == "grevlex":
            return (sum(vec), tuple(-e for e in reversed(vec)))
        return (sum(w * e for w, e in zip(self.weights, vec)), tuple(vec))

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def describe(self) -> str:
        names = ",".join(v.name() for v in self.priority)
        if self.kind == "weighted":
            return f"weighted[{','.join(map(str, self.weights))}] priority {names}"
        return f"{self.kind} priority {names}"


def prioritize(variables: Sequence[VarId], first: Sequence[VarId]) -> list[VarId]:
    """Move ``first`` to the front of ``variables``, keeping the rest in order."""
    rest = [v for v in variables if v not in first]
    return list(first) + rest


def random_weight_order(variables: Sequence[VarId], rng: random.Random,
                        low: int = 1, high: int = 10**6) -> TermOrder:
    """Weight order with integer weights drawn uniformly from ``[low, high]``."""
    variables = list(variables)
    weights = {v: rng.randint(low, high) for v in variables}
    priority = variables[:]
    rng.shuffle(priority)
    return TermOrder.weighted(weights, priority)
