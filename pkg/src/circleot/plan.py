"""Materialize the transport plan of a given shift as explicit mass assignments."""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

from .costs import CostFunction
from .measures import CircularHistogram, periodic_cdf
from .profile import avg_cost, build_profile, exceptional_tolerance


def _to_circle(y: float, positions: tuple[float, ...]) -> float:
    """Reduce a lifted target into (0, 1], snapping to a known atom position.

    The lift stores pos + k, and that addition can round; snapping undoes it so
    circle targets compare equal to the histogram's own positions.
    """
    r = y - math.floor(y)
    r = 1.0 if r == 0.0 else r
    i = bisect_left(positions, r)
    for j in (i - 1, i):
        if 0 <= j < len(positions) and abs(positions[j] - r) <= 1e-9:
            return positions[j]
    return r


@dataclass(frozen=True)
class Assignment:
    source_position: float  # in (0, 1]
    target_position_lifted: float
    target_position_circle: float  # in (0, 1]
    mass: float


@dataclass(frozen=True)
class TransportPlan:
    theta: float
    assignments: tuple[Assignment, ...]
    total_cost: float


def extract_plan(
    h0: CircularHistogram,
    h1: CircularHistogram,
    c: CostFunction,
    theta: float,
) -> TransportPlan:
    """Build the monotone plan of rotation number theta.

    One assignment per positive-width profile segment; consecutive segments
    with the same (source, lifted target) pair are aggregated, and zero-width
    segments (coincident levels at an exceptional theta) are dropped.
    """
    prof = build_profile(periodic_cdf(h0), periodic_cdf(h1), theta)
    drop = exceptional_tolerance(theta)
    out: list[Assignment] = []
    total = 0.0
    prev = 0.0
    for v, x, y in zip(prof.levels[1:], prof.source_atoms, prof.target_atoms):
        w = v - prev
        prev = v
        if w <= drop:
            continue
        if out and out[-1].source_position == x and out[-1].target_position_lifted == y:
            last = out[-1]
            out[-1] = Assignment(x, y, last.target_position_circle, last.mass + w)
        else:
            out.append(Assignment(x, y, _to_circle(y, h1.positions), w))
        total += c(x, y) * w
    return TransportPlan(theta=theta, assignments=tuple(out), total_cost=total)


def plan_cost_check(plan: TransportPlan, h0: CircularHistogram, h1: CircularHistogram, c) -> float:
    """Recompute the plan's cost through the profile path (identical summation)."""
    prof = build_profile(periodic_cdf(h0), periodic_cdf(h1), plan.theta)
    return avg_cost(prof, c)
