"""Brute-force ground-truth solvers used by tests and the check subcommand.

Two structurally different oracles: breakpoint enumeration (a convex piecewise
affine function attains its minimum at a breakpoint or a bracket endpoint) and
exhaustive cyclic rotation of unit-mass expansions with monotone matching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bracket import SearchBracket
from .costs import CostFunction
from .errors import NoDenominator, TooLarge
from .measures import CircularHistogram, periodic_cdf
from .profile import avg_cost, build_profile

BREAKPOINT_GUARD = 10_000
ROTATION_GUARD = 2_000
# lift offsets scanned either side of each cyclic alignment, in whole periods
ROTATION_PERIODS = 2


@dataclass(frozen=True)
class OracleResult:
    theta_star: float
    cost: float
    candidates_evaluated: int


def candidate_shifts(
    h0: CircularHistogram, h1: CircularHistogram, lo: float, hi: float
) -> list[float]:
    """All shifts in [lo, hi] at which a target level can meet a source level."""
    cum0 = np.asarray(periodic_cdf(h0).cumulative)
    cum1 = np.asarray(periodic_cdf(h1).cumulative)
    base = (cum1[:, None] - cum0[None, :]).ravel()
    out: set[float] = set()
    for k in range(math.floor(lo - base.max()), math.ceil(hi - base.min()) + 1):
        for t in base + k:
            if lo <= t <= hi:
                out.add(float(t))
    return sorted(out)


def oracle_breakpoints(
    h0: CircularHistogram,
    h1: CircularHistogram,
    c: CostFunction,
    bracket: SearchBracket,
) -> OracleResult:
    """Evaluate C at every candidate breakpoint plus the bracket endpoints."""
    if len(h0) * len(h1) > BREAKPOINT_GUARD:
        raise TooLarge(
            f"breakpoint oracle guard: n0*n1 = {len(h0) * len(h1)} > {BREAKPOINT_GUARD}"
        )
    F0 = periodic_cdf(h0)
    F1 = periodic_cdf(h1)
    thetas = candidate_shifts(h0, h1, bracket.theta_lo, bracket.theta_hi)
    thetas.extend([bracket.theta_lo, bracket.theta_hi])
    best_theta = thetas[0]
    best = math.inf
    for t in thetas:
        value = avg_cost(build_profile(F0, F1, t), c)
        if value < best:
            best = value
            best_theta = t
    return OracleResult(theta_star=best_theta, cost=best, candidates_evaluated=len(thetas))


def _unit_expansion(h: CircularHistogram, M: int) -> np.ndarray:
    scale = M // h.mass_denominator
    reps = [n * scale for n in h.mass_numerators]
    return np.repeat(np.asarray(h.positions), reps)


def oracle_rotations(
    h0: CircularHistogram, h1: CircularHistogram, c: CostFunction
) -> OracleResult:
    """Expand to M unit atoms and try every cyclic alignment with sorted matching.

    Monotone (sorted-order) pairing is optimal per alignment for Monge costs,
    so the minimum over alignments is the optimal cost.  Lift offsets up to
    ROTATION_PERIODS whole periods either side are scanned, which covers every
    shift the built-in brackets admit.
    """
    if h0.mass_denominator is None or h1.mass_denominator is None:
        raise NoDenominator("rotation oracle needs declared mass denominators")
    M = math.lcm(h0.mass_denominator, h1.mass_denominator)
    if M > ROTATION_GUARD:
        raise TooLarge(f"rotation oracle guard: M = {M} > {ROTATION_GUARD}")

    X = _unit_expansion(h0, M)
    Y = _unit_expansion(h1, M)
    span = ROTATION_PERIODS
    # lifted target points over [-span, span + 1) periods
    periods = np.arange(-span, span + 1)
    Y_ext = (Y[None, :] + periods[:, None]).ravel()

    best = math.inf
    best_s = 0
    n_offsets = 2 * span * M + 1
    for s in range(n_offsets):
        seg = Y_ext[s : s + M]
        cost = float(np.sum(c.eval_array(X, seg))) / M
        if cost < best:
            best = cost
            best_s = s
    # report the matching's shift in mass units as a rotation-number proxy
    theta = (best_s - span * M) / M
    return OracleResult(theta_star=theta, cost=best, candidates_evaluated=n_offsets)
