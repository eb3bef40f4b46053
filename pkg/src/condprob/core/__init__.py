"""Exact data model: events, variables, monomials, binomials, term orders, tables."""

from .events import Event, EventFamily, VarId, event_key, format_event, make_event_family, variables
from .orders import TermOrder, prioritize, random_weight_order
from .polynomial import (
    ONE,
    Binomial,
    Monomial,
    Polynomial,
    as_polynomial,
    canonical_key,
    canonicalize_binomial,
)
from .tables import CPTable, as_rational

__all__ = [
    "Binomial",
    "CPTable",
    "Event",
    "EventFamily",
    "Monomial",
    "ONE",
    "Polynomial",
    "TermOrder",
    "VarId",
    "as_polynomial",
    "as_rational",
    "canonical_key",
    "canonicalize_binomial",
    "event_key",
    "format_event",
    "make_event_family",
    "prioritize",
    "random_weight_order",
    "variables",
]
