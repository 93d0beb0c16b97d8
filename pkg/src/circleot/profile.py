"""Merged level sequences, the average cost C(theta) and its one-sided derivatives.

The cumulative levels of both marginals, with the target levels shifted by
theta and reduced into (0, 1], are merged in a single linear pass; the average
cost is the sum of segment costs weighted by level gaps, and the one-sided
derivatives are sums of cost differences over the target atoms.

Two comparison regimes coexist.  In float mode coincident levels are detected
with an absolute tolerance.  When both histograms declare a mass denominator
and theta lies on the 1/M grid (M the least common multiple of the two
denominators), levels are compared as exact integer numerators, which is what
makes exact termination of the solver possible.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional

from .costs import CostFunction
from .measures import PeriodicCdf

_GRID_SNAP_TOL = 1e-9


def exceptional_tolerance(theta: float) -> float:
    """Absolute level-coincidence tolerance used in float mode."""
    return 1e-12 * max(1.0, abs(theta))


@dataclass(frozen=True)
class MergedProfile:
    """Sorted level sequence with per-segment source/target atoms.

    ``levels`` has length n0 + n1 + 1 and starts at 0 and ends at 1; segment k
    covers (levels[k-1], levels[k]) and is served by lifted atoms
    ``source_atoms[k-1]`` and ``target_atoms[k-1]``.  ``comparisons`` counts
    the level comparisons spent by the merge (always n0 + n1 - 1).
    """

    theta: float
    levels: tuple[float, ...]
    source_atoms: tuple[float, ...]
    target_atoms: tuple[float, ...]
    exceptional: bool
    comparisons: int


@dataclass(frozen=True)
class AvgCostEval:
    theta: float
    value: float
    left_derivative: float
    right_derivative: float
    exceptional: bool


def _common_denominator(F0: PeriodicCdf, F1: PeriodicCdf) -> Optional[int]:
    M0 = F0.source.mass_denominator
    M1 = F1.source.mass_denominator
    if M0 is None or M1 is None:
        return None
    return math.lcm(M0, M1)


def _on_rational_grid(theta: float, M: int) -> Optional[int]:
    """Return round(theta * M) when theta lies on the 1/M grid, else None."""
    t = theta * M
    r = round(t)
    if abs(t - r) <= _GRID_SNAP_TOL * max(1.0, abs(t)):
        return r
    return None


def _shifted_target_levels(F1: PeriodicCdf, theta: float):
    """Reduce the theta-shifted target levels into (0, 1] and rotate to sorted order.

    Returns (levels, lifted_atoms), both ordered by increasing level; the first
    atom is the relabeled first target atom y_1^theta.
    """
    cum = F1.cumulative
    pos = F1.source.positions
    n1 = len(pos)
    levels = [0.0] * n1
    atoms = [0.0] * n1
    s = 0
    for j in range(n1):
        k = math.floor(theta - cum[j]) + 1
        levels[j] = cum[j] + k - theta
        atoms[j] = pos[j] + k
        if levels[j] < levels[s]:
            s = j
    return levels[s:] + levels[:s], atoms[s:] + atoms[:s]


def _shifted_target_numerators(F1: PeriodicCdf, M: int, T: int):
    """Exact analogue of _shifted_target_levels on the integer grid 1/M.

    T is theta * M.  Returns (numerators in (0, M], float levels, lifted atoms).
    """
    scale = M // F1.source.mass_denominator
    pos = F1.source.positions
    nums_raw = [n * scale for n in F1.cumulative_numerators]
    n1 = len(pos)
    nums = [0] * n1
    atoms = [0.0] * n1
    s = 0
    for j in range(n1):
        B = nums_raw[j] - T
        k = -((B - 1) // M)
        nums[j] = B + k * M
        atoms[j] = pos[j] + k
        if nums[j] < nums[s]:
            s = j
    nums = nums[s:] + nums[:s]
    atoms = atoms[s:] + atoms[:s]
    return nums, [n / M for n in nums], atoms


def build_profile(F0: PeriodicCdf, F1: PeriodicCdf, theta: float) -> MergedProfile:
    """Merge the source and shifted target levels in one linear pass.

    The merge spends exactly n0 + n1 - 1 level comparisons: an exhausted family
    is replaced by a sentinel so every placement but the last costs one
    comparison.  Ties place the source level first; coincident levels flag the
    profile as exceptional and the resulting zero-width segments are kept.
    """
    pos0 = F0.source.positions
    n0 = len(pos0)
    n1 = len(F1.source.positions)

    M = _common_denominator(F0, F1)
    T = _on_rational_grid(theta, M) if M is not None else None
    if T is not None:
        a_keys = [n * (M // F0.source.mass_denominator) for n in F0.cumulative_numerators]
        a_levels = [n / M for n in a_keys]
        b_keys, b_levels, b_atoms = _shifted_target_numerators(F1, M, T)
        exact = True
    else:
        a_levels = list(F0.cumulative)
        a_keys = a_levels
        b_levels, b_atoms = _shifted_target_levels(F1, theta)
        b_keys = b_levels
        exact = False
    tol = exceptional_tolerance(theta)

    levels = [0.0]
    xs: list[float] = []
    ys: list[float] = []
    exceptional = False
    comparisons = 0
    i = j = 0
    total = n0 + n1
    for placed in range(total):
        fa = a_keys[i] if i < n0 else None
        fb = b_keys[j] if j < n1 else None
        if placed < total - 1:
            comparisons += 1
        if fa is not None and fb is not None:
            if exact:
                if fa == fb:
                    exceptional = True
            elif abs(fa - fb) <= tol:
                exceptional = True
            take_a = fa <= fb
        else:
            take_a = fb is None
        x = pos0[i] if i < n0 else pos0[0] + 1.0
        y = b_atoms[j] if j < n1 else b_atoms[0] + 1.0
        if take_a:
            levels.append(a_levels[i])
            i += 1
        else:
            levels.append(b_levels[j])
            j += 1
        xs.append(x)
        ys.append(y)
    levels[-1] = 1.0

    return MergedProfile(
        theta=theta,
        levels=tuple(levels),
        source_atoms=tuple(xs),
        target_atoms=tuple(ys),
        exceptional=exceptional,
        comparisons=comparisons,
    )


def avg_cost(profile: MergedProfile, c: CostFunction) -> float:
    """Sum of per-segment costs weighted by level gaps."""
    total = 0.0
    prev = 0.0
    for v, x, y in zip(profile.levels[1:], profile.source_atoms, profile.target_atoms):
        w = v - prev
        if w > 0.0:
            total += c(x, y) * w
        prev = v
    return total


def avg_cost_derivatives(
    F0: PeriodicCdf, F1: PeriodicCdf, c: CostFunction, theta: float
) -> AvgCostEval:
    """C(theta) with both one-sided derivatives.

    The left derivative sums c(X, y_next) - c(X, y) over one period of target
    atoms with X the source atom at the target's level; the right derivative
    uses the left limit of the inverse at that level.  The wrap-around target
    is the first atom lifted one period up.
    """
    prof = build_profile(F0, F1, theta)
    value = avg_cost(prof, c)

    pos0 = F0.source.positions
    n0 = len(pos0)
    M = _common_denominator(F0, F1)
    T = _on_rational_grid(theta, M) if M is not None else None
    if T is not None:
        a_keys = [n * (M // F0.source.mass_denominator) for n in F0.cumulative_numerators]
        b_keys, _, b_atoms = _shifted_target_numerators(F1, M, T)
    else:
        a_keys = list(F0.cumulative)
        b_keys, b_atoms = _shifted_target_levels(F1, theta)

    n1 = len(b_atoms)
    dleft = 0.0
    dright = 0.0
    for t in range(n1):
        b = b_keys[t]
        yj = b_atoms[t]
        yn = b_atoms[t + 1] if t < n1 - 1 else b_atoms[0] + 1.0
        il = bisect_right(a_keys, b)  # first source level > b
        xl = pos0[il] if il < n0 else pos0[0] + 1.0
        ir = bisect_left(a_keys, b)  # first source level >= b (left limit)
        xr = pos0[ir]
        dleft += c(xl, yn) - c(xl, yj)
        dright += c(xr, yn) - c(xr, yj)

    return AvgCostEval(
        theta=theta,
        value=value,
        left_derivative=dleft,
        right_derivative=dright,
        exceptional=prof.exceptional,
    )
