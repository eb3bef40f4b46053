"""Shared fixture families and random generators for the test suite."""

import random
from fractions import Fraction

from condprob import CPTable, JointDistribution, VarId, make_event_family

# name -> (m, events); every family here has m <= 4 and at most 14 variables
CONNECTED = {
    "two_pairs_and_triple": (3, [[1, 2], [2, 3], [1, 2, 3]]),
    "all_subsets_of_3": (3, [[1, 2], [1, 3], [2, 3], [1, 2, 3]]),
    "nested_chain": (4, [[1, 2], [1, 2, 3], [1, 2, 3, 4]]),
    "path_with_ground": (4, [[1, 2], [2, 3], [3, 4], [1, 2, 3, 4]]),
    "pairs_of_3": (3, [[1, 2], [1, 3], [2, 3]]),
}

DISCONNECTED = {
    "two_blocks": (4, [[1, 2], [3, 4]]),
    "three_blocks": (6, [[1, 2], [3, 4], [5, 6]]),
    "triangle_plus_pair": (5, [[1, 2], [2, 3], [1, 2, 3], [4, 5]]),
}


def family(name):
    m, events = {**CONNECTED, **DISCONNECTED}[name]
    return make_event_family(m, events)


def connected_families():
    return [family(n) for n in CONNECTED]


def random_joint(m, rng, exact=True, low=1, high=1000):
    """A strictly positive joint; rational when ``exact``."""
    weights = [rng.randint(low, high) for _ in range(m)]
    total = sum(weights)
    if exact:
        return JointDistribution(tuple(Fraction(w, total) for w in weights))
    return JointDistribution(tuple(w / total for w in weights))


def random_table(fam, rng):
    """Exact positive table with independently normalized events (generally incompatible)."""
    values = {}
    for event in fam.events:
        w = [rng.randint(1, 50) for _ in event]
        for i, x in zip(event, w):
            values[VarId(i, event)] = Fraction(x, sum(w))
    return CPTable(values)


def seeded(seed=0):
    return random.Random(seed)
