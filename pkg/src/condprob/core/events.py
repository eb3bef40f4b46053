"""Event families and the indeterminates p_{i|I} they index."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from ..errors import InputError

Event = tuple[int, ...]


def event_key(event: Event) -> tuple:
    """Canonical event order: by size, then lexicographic contents."""
    return (len(event), event)


def format_event(event: Event) -> str:
    if all(i < 10 for i in event):
        return "".join(str(i) for i in event)
    return ",".join(str(i) for i in event)


@dataclass(frozen=True, eq=True)
class VarId:
    """The indeterminate p_{i|I}: conditional probability of ``i`` given ``event``."""

    i: int
    event: Event

    def __post_init__(self):
        if self.i not in self.event:
            raise InputError(f"{self.i} is not an element of event {list(self.event)}")

    @property
    def key(self) -> tuple:
        return (len(self.event), self.event, self.i)

    def __lt__(self, other: VarId) -> bool:
        return self.key < other.key

    def __le__(self, other: VarId) -> bool:
        return self.key <= other.key

    def __gt__(self, other: VarId) -> bool:
        return self.key > other.key

    def __ge__(self, other: VarId) -> bool:
        return self.key >= other.key

    def name(self, ground: int | None = None) -> str:
        """Render as ``p_{i|I}``; with ``ground=m``, p_{i|[m]} is shortened to ``p_i``."""
        if ground is not None and self.event == tuple(range(1, ground + 1)):
            return f"p_{self.i}" if self.i < 10 else f"p_{{{self.i}}}"
        return f"p_{{{self.i}|{format_event(self.event)}}}"

    def __str__(self) -> str:
        return self.name()

    def __repr__(self) -> str:
        return f"VarId({self.name()})"


@dataclass(frozen=True)
class EventFamily:
    """A validated, canonically ordered collection of conditioned-upon events.

    Singleton events are numbered 1..m.
    """

    m: int
    events: tuple[Event, ...]

    @property
    def contains_ground(self) -> bool:
        return self.ground in self.events

    @property
    def ground(self) -> Event:
        return tuple(range(1, self.m + 1))

    @cached_property
    def variables(self) -> tuple[VarId, ...]:
        return tuple(VarId(i, event) for event in self.events for i in event)

    @property
    def num_variables(self) -> int:
        return sum(len(event) for event in self.events)

    @cached_property
    def support(self) -> tuple[int, ...]:
        """Singletons appearing in at least one event, sorted."""
        return tuple(sorted({i for event in self.events for i in event}))

    def nested_pairs(self) -> list[tuple[Event, Event]]:
        """All (J, K) with J a proper subset of K, in canonical order."""
        out = []
        for small in self.events:
            for big in self.events:
                if len(small) < len(big) and set(small) <= set(big):
                    out.append((small, big))
        return out

    def without_ground(self) -> EventFamily:
        return EventFamily(self.m, tuple(e for e in self.events if e != self.ground))

    def with_ground(self) -> EventFamily:
        if self.contains_ground:
            return self
        return make_event_family(self.m, [list(e) for e in self.events] + [list(self.ground)])

    def __len__(self) -> int:
        return len(self.events)

    def __contains__(self, event) -> bool:
        return tuple(sorted(event)) in self.events

    def __str__(self) -> str:
        inner = ", ".join(format_event(e) for e in self.events)
        return f"EventFamily(m={self.m}, {{{inner}}})"


def make_event_family(m: int, subsets: Iterable[Sequence[int]]) -> EventFamily:
    """Validate and canonicalize a family of events over ``[m]``.

    Repeated events are merged; repeated elements inside an event are an error.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InputError(f"m must be a positive integer, got {m!r}")
    seen = set()
    for raw in subsets:
        subset = list(raw)
        if any(not isinstance(i, int) or isinstance(i, bool) for i in subset):
            raise InputError(f"event {subset} has non-integer elements")
        if len(set(subset)) != len(subset):
            raise InputError(f"event {subset} has repeated elements")
        if len(subset) < 2:
            raise InputError(f"event {subset} has size < 2")
        bad = [i for i in subset if not 1 <= i <= m]
        if bad:
            raise InputError(f"event {subset} has elements outside [1, {m}]: {bad}")
        seen.add(tuple(sorted(subset)))
    return EventFamily(m, tuple(sorted(seen, key=event_key)))


def variables(family: EventFamily) -> list[VarId]:
    return list(family.variables)
