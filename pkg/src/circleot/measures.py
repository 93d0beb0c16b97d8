"""Discrete measures on the unit circle and their periodic distribution functions.

A histogram stores one period of a periodic measure: atom positions in the
half-open interval (0, 1] with positive masses summing to one.  The lifted
distribution function F satisfies F(x + 1) = F(x) + 1; both F and its inverse
are right-continuous.  Period offsets are carried as integers next to the
fractional part so the periodicity identity holds exactly in floating point.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from typing import Optional, Sequence

from .errors import EmptyHistogram, MassSumMismatch, NonPositiveMass

MASS_SUM_TOL = 1e-12
# slack for the "mass * M is an integer" check in rational mode
_INT_TOL = 1e-9


def _reduce_position(p: float) -> float:
    """Reduce a real position into (0, 1] modulo 1."""
    r = p - math.floor(p)
    return 1.0 if r == 0.0 else r


@dataclass(frozen=True)
class CircularHistogram:
    """One period of a discrete positive measure on the circle.

    ``positions`` are strictly increasing in (0, 1]; ``masses`` are positive and
    sum to one.  When ``mass_denominator`` is set, every mass is an exact
    integer multiple of 1/M and ``mass_numerators`` holds those integers.
    """

    positions: tuple[float, ...]
    masses: tuple[float, ...]
    mass_denominator: Optional[int] = None
    mass_numerators: Optional[tuple[int, ...]] = None

    def __len__(self) -> int:
        return len(self.positions)


def histogram_new(
    positions: Sequence[float],
    masses: Sequence[float],
    mass_denominator: Optional[int] = None,
) -> CircularHistogram:
    """Validate and canonicalize a histogram.

    Positions are reduced mod 1 into (0, 1] and co-sorted with their masses;
    atoms landing on the same reduced position are merged by summing masses.
    """
    if len(positions) != len(masses):
        raise ValueError("positions and masses must have the same length")
    if len(positions) == 0:
        raise EmptyHistogram("histogram needs at least one atom")
    for m in masses:
        if not m > 0.0:
            raise NonPositiveMass(f"mass {m!r} is not strictly positive")
    if mass_denominator is not None and mass_denominator < 1:
        raise MassSumMismatch(f"denominator {mass_denominator} is not positive")

    pairs = sorted((_reduce_position(p), float(m)) for p, m in zip(positions, masses))
    merged_pos: list[float] = []
    merged_mass: list[float] = []
    for p, m in pairs:
        if merged_pos and p == merged_pos[-1]:
            merged_mass[-1] += m
        else:
            merged_pos.append(p)
            merged_mass.append(m)

    numerators: Optional[tuple[int, ...]] = None
    if mass_denominator is not None:
        M = mass_denominator
        nums = []
        for m in merged_mass:
            scaled = m * M
            num = round(scaled)
            if abs(scaled - num) > _INT_TOL * max(1.0, abs(scaled)) or num <= 0:
                raise MassSumMismatch(
                    f"mass {m!r} is not an integer multiple of 1/{M}"
                )
            nums.append(num)
        if sum(nums) != M:
            raise MassSumMismatch(
                f"mass numerators sum to {sum(nums)}, expected {M}"
            )
        numerators = tuple(nums)
        # snap to the exact rational values
        merged_mass = [n / M for n in nums]
    else:
        total = math.fsum(merged_mass)
        if abs(total - 1.0) > MASS_SUM_TOL:
            raise MassSumMismatch(f"masses sum to {total!r}, expected 1")

    return CircularHistogram(
        positions=tuple(merged_pos),
        masses=tuple(merged_mass),
        mass_denominator=mass_denominator,
        mass_numerators=numerators,
    )


@dataclass(frozen=True)
class PeriodicCdf:
    """Lifted distribution function of a unit-mass periodic measure.

    ``cumulative[i]`` is the mass of atoms up to and including position i within
    one period; the last entry is exactly 1.  ``cumulative_numerators`` mirrors
    it as integers over ``source.mass_denominator`` when available.
    """

    source: CircularHistogram
    cumulative: tuple[float, ...]
    cumulative_numerators: Optional[tuple[int, ...]] = None


def periodic_cdf(hist: CircularHistogram) -> PeriodicCdf:
    cum = list(accumulate(hist.masses))
    cum[-1] = 1.0  # exact unit mass per period
    cum_num = None
    if hist.mass_numerators is not None:
        cum_num = tuple(accumulate(hist.mass_numerators))
    return PeriodicCdf(source=hist, cumulative=tuple(cum), cumulative_numerators=cum_num)


def cdf_eval(F: PeriodicCdf, x: float) -> float:
    """Evaluate F(x) for any real x; right-continuous, with exact period bookkeeping.

    The period count is carried as an integer, so shifting x by whole periods
    never drifts; the packed scalar return still rounds in its last ulp.
    Splitting off the period can leave the remainder one ulp short of an atom,
    so remainders within a few ulps of an atom position count as reaching it,
    keeping right-continuity under the inverse round trip.
    """
    n = math.ceil(x) - 1
    r = x - n  # in (0, 1]
    idx = bisect_right(F.source.positions, r)
    if (
        idx < len(F.source.positions)
        and F.source.positions[idx] - r <= 4.0 * math.ulp(max(1.0, abs(x)))
    ):
        idx += 1
    frac = F.cumulative[idx - 1] if idx > 0 else 0.0
    return n + frac


def cdf_inverse(F: PeriodicCdf, v: float) -> float:
    """Right-continuous inverse: inf{x : v < F(x)}."""
    n = math.floor(v)
    w = v - n  # in [0, 1)
    idx = bisect_right(F.cumulative, w)
    return n + F.source.positions[idx]
