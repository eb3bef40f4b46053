"""Algebraic relations among conditional probabilities.

Event families, their bipartite graphs and toric ideals, compatibility checks
for conditional probability tables, and the polytopes and moment maps that
parametrize them.
"""

from .algebra import (
    GroebnerBasis,
    bayes_binomials,
    bayes_expansion,
    buchberger_verify,
    circuits_bruteforce,
    divide,
    ideal_context,
    induced_generators,
    j_generators,
    membership,
    normal_form,
    s_polynomial,
    universal_gb,
)
from .core import (
    Binomial,
    CPTable,
    EventFamily,
    Monomial,
    Polynomial,
    TermOrder,
    VarId,
    canonicalize_binomial,
    make_event_family,
    random_weight_order,
    variables,
)
from .errors import (
    ConvergenceError,
    DegenerateBinomialError,
    IncompatibleError,
    InfeasibleError,
    InputError,
    LimitError,
)
from .geometry import (
    FiberProblem,
    delta_E,
    delta_E_hrep,
    delta_E_vertices,
    fiber_max_entropy,
    matus_W,
    mconv_vertices,
    moment_nu,
    simplex_moment,
    solve_fiber,
    submodular_w,
)
from .graph import (
    build_graph,
    check_total_unimodularity,
    cycle_binomial,
    enumerate_cycles,
    enumerate_induced_cycles,
    incidence_matrix,
)
from .relations import (
    CompatibilityReport,
    JointDistribution,
    RVSpec,
    Underdetermined,
    bayes_rule_check,
    besag_binomial,
    check_axioms,
    check_variety,
    conditionals_from_joint,
    reconstruct_joint,
    rv_event_family,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
