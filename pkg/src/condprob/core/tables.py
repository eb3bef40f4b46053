"""Assignments of values to the p_{i|I} of an event family."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..errors import InputError
from .events import Event, EventFamily, VarId

MODES = ("exact", "float")


def as_rational(x) -> Fraction:
    """Parse an exact value: int, Fraction, or an ``"a/b"`` / integer string."""
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {x!r}") from None
    raise InputError(f"exact mode needs int, Fraction or 'a/b' string, got {type(x).__name__}")


@dataclass(frozen=True)
class CPTable:
    """Values for conditional probabilities.

    In ``exact`` mode every value is a :class:`~fractions.Fraction`; in
    ``float`` mode values are Python floats. ``version_chosen`` lists
    zero-mass conditioning events whose values were filled in by convention.
    """

    values: Mapping[VarId, object]
    mode: str = "exact"
    version_chosen: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown table mode {self.mode!r}")
        conv = as_rational if self.mode == "exact" else float
        object.__setattr__(self, "values", {v: conv(x) for v, x in dict(self.values).items()})
        object.__setattr__(self, "version_chosen", frozenset(self.version_chosen))

    @classmethod
    def from_events(cls, blocks: Mapping[Event, object], mode: str = "exact") -> CPTable:
        """Build from ``{event: [value for each i in event]}``."""
        values = {}
        for event, vals in blocks.items():
            event = tuple(event)
            vals = list(vals)
            if len(vals) != len(event):
                raise InputError(f"event {list(event)} needs {len(event)} values, got {len(vals)}")
            for i, x in zip(event, vals):
                values[VarId(i, event)] = x
        return cls(values, mode)

    def __getitem__(self, var: VarId):
        return self.values[var]

    def __contains__(self, var: VarId) -> bool:
        return var in self.values

    def get(self, i: int, event) -> object:
        return self.values[VarId(i, tuple(event))]

    def block(self, event: Event) -> list:
        return [self.values[VarId(i, event)] for i in event]

    def missing(self, family: EventFamily) -> list[VarId]:
        return [v for v in family.variables if v not in self.values]

    def require_complete(self, family: EventFamily) -> None:
        missing = self.missing(family)
        if missing:
            names = ", ".join(v.name() for v in missing[:5])
            raise InputError(f"table is incomplete: missing {len(missing)} values ({names}...)")

    def restrict(self, family: EventFamily) -> CPTable:
        self.require_complete(family)
        keep = {v: self.values[v] for v in family.variables}
        chosen = frozenset(e for e in self.version_chosen if e in family.events)
        return CPTable(keep, self.mode, chosen)

    def replace(self, var: VarId, value) -> CPTable:
        values = dict(self.values)
        values[var] = value
        return CPTable(values, self.mode, self.version_chosen)

    def to_float(self) -> CPTable:
        return CPTable({v: float(x) for v, x in self.values.items()}, "float", self.version_chosen)

    def is_positive(self) -> bool:
        return all(x > 0 for x in self.values.values())

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.values.values())
