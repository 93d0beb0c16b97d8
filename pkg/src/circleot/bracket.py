"""Measure-independent search brackets and Lipschitz bounds for the average cost.

For power costs the bracket is [-6, 6] with the analytic derivative bound
L = lam * 9**(lam - 1) (any source/target pair reachable with a shift in the
bracket stays within distance 9).  The opt-in tight bracket [-1, 1] for
symmetric costs shrinks the reachable distance to 4.  Costs of the form
h(x - y) + f(x) + g(y) get a numeric bracket from conservative envelope
bounds; custom costs pass through their declared data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import ConvexPlusPeriodicCost, CostFunction, CustomCost, PowerCost
from .errors import UnknownBracket


@dataclass(frozen=True)
class SearchBracket:
    theta_lo: float
    theta_hi: float
    lipschitz: float
    provenance: str  # analytic | envelope-numeric | user-declared

    @property
    def width(self) -> float:
        return self.theta_hi - self.theta_lo


def bracket_for(c: CostFunction, tight: bool = False) -> SearchBracket:
    """Produce a bracket containing every global minimizer plus a bound on |C'|."""
    if isinstance(c, PowerCost):
        if tight:
            return SearchBracket(-1.0, 1.0, c.lam * 4.0 ** (c.lam - 1.0), "analytic")
        return SearchBracket(-6.0, 6.0, c.lam * 9.0 ** (c.lam - 1.0), "analytic")
    if isinstance(c, ConvexPlusPeriodicCost):
        lo, hi, L = _envelope_bracket(c)
        if tight and c.symmetric:
            lo, hi = max(lo, -1.0), min(hi, 1.0)
        return SearchBracket(lo, hi, L, "envelope-numeric")
    if isinstance(c, CustomCost):
        if c.declared_bracket is None or c.declared_lipschitz is None:
            raise UnknownBracket(
                "custom cost needs declared_bracket and declared_lipschitz"
            )
        lo, hi = c.declared_bracket
        return SearchBracket(float(lo), float(hi), float(c.declared_lipschitz), "user-declared")
    raise UnknownBracket(f"no bracket rule for {type(c).__name__}")


_STEP = 1e-3
_THETA_CAP = 100.0


def _envelope_bracket(c: ConvexPlusPeriodicCost) -> tuple[float, float, float]:
    """Numeric bracket for h(x - y) + f(x) + g(y).

    The envelopes are split over the separable structure: the lower envelope at
    shift theta is bounded below by min h over the reachable displacement
    window [-theta - 3, -theta + 3] plus the minima of f and g, and the upper
    envelope above by the matching maxima.  Grid extrema are relaxed by one
    adjacent-difference so they remain conservative.
    """
    tgrid = np.arange(0.0, 1.0 + _STEP, _STEP)
    fv = np.array([c.f(float(t)) for t in tgrid])
    gv = np.array([c.g(float(t)) for t in tgrid])
    f_lo, f_hi = _relaxed_extrema(fv)
    g_lo, g_hi = _relaxed_extrema(gv)

    def c_lower(theta: float) -> float:
        return _h_min(c.h, -theta - 3.0, -theta + 3.0) + f_lo + g_lo

    def c_upper(theta: float) -> float:
        # max of a convex function over an interval sits at an endpoint
        return max(c.h(-theta - 3.0), c.h(-theta + 3.0)) + f_hi + g_hi

    # minimize the upper envelope over a coarse-to-fine theta scan
    thetas = np.arange(-8.0, 8.0 + _STEP, _STEP)
    uppers = np.array([c_upper(float(t)) for t in thetas])
    m_upper = float(uppers.min())

    theta_ref = float(thetas[int(uppers.argmin())])
    hi = theta_ref
    while hi <= _THETA_CAP and c_lower(hi) <= m_upper:
        hi += _STEP
    lo = theta_ref
    while lo >= -_THETA_CAP and c_lower(lo) <= m_upper:
        lo -= _STEP
    if hi > _THETA_CAP or lo < -_THETA_CAP:
        raise UnknownBracket("cost does not grow enough to confine the minimizer")

    # divided-difference Lipschitz bounds; every sampled ratio is valid, so the
    # minimum over samples is too
    probes = np.arange(0.5, 20.0, 0.5)
    L_hi = min((c_upper(hi + float(d)) - c_lower(hi)) / float(d) for d in probes)
    L_lo = min((c_upper(lo - float(d)) - c_lower(lo)) / float(d) for d in probes)
    L = max(abs(L_lo), abs(L_hi))
    if not (L > 0.0 and math.isfinite(L)):
        raise UnknownBracket("could not derive a positive Lipschitz bound")
    return lo, hi, L


def _relaxed_extrema(values: np.ndarray) -> tuple[float, float]:
    slack = float(np.abs(np.diff(values)).max()) if len(values) > 1 else 0.0
    return float(values.min()) - slack, float(values.max()) + slack


def _h_min(h, a: float, b: float) -> float:
    grid = np.arange(a, b + _STEP, _STEP)
    vals = np.array([h(float(d)) for d in grid])
    slack = float(np.abs(np.diff(vals)).max()) if len(vals) > 1 else 0.0
    return float(vals.min()) - slack
