"""Optimal transport between discrete measures on the unit circle.

The transport problem under a Monge cost is reduced to minimizing a convex
piecewise-affine average cost of a single shift parameter; a binary search
with derivative sign tests finds the global optimum in
O((n0 + n1) log(1/eps)) operations, exactly when all masses share a common
denominator.
"""

from .bracket import SearchBracket, bracket_for
from .costs import (
    CheckReport,
    ConvexPlusPeriodicCost,
    CostFunction,
    CustomCost,
    PowerCost,
    check_monge,
    cost_eval,
    growth_radius,
)
from .kernels import backend_name, has_compiled
from .measures import (
    CircularHistogram,
    PeriodicCdf,
    cdf_eval,
    cdf_inverse,
    histogram_new,
    periodic_cdf,
)
from .oracle import OracleResult, oracle_breakpoints, oracle_rotations
from .plan import Assignment, TransportPlan, extract_plan
from .profile import (
    AvgCostEval,
    MergedProfile,
    avg_cost,
    avg_cost_derivatives,
    build_profile,
)
from .solver import SolveResult, minimize, mk_distance

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AvgCostEval",
    "CheckReport",
    "CircularHistogram",
    "ConvexPlusPeriodicCost",
    "CostFunction",
    "CustomCost",
    "MergedProfile",
    "OracleResult",
    "PeriodicCdf",
    "PowerCost",
    "SearchBracket",
    "SolveResult",
    "TransportPlan",
    "avg_cost",
    "avg_cost_derivatives",
    "backend_name",
    "bracket_for",
    "build_profile",
    "cdf_eval",
    "cdf_inverse",
    "check_monge",
    "cost_eval",
    "extract_plan",
    "growth_radius",
    "has_compiled",
    "histogram_new",
    "minimize",
    "mk_distance",
    "oracle_breakpoints",
    "oracle_rotations",
    "periodic_cdf",
]
