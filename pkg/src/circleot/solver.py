"""Binary-search minimization of the average cost over the shift parameter.

Each iteration evaluates both one-sided derivatives at the bracket midpoint:
a sign sandwich certifies the exact minimizer; otherwise the bracket half
containing the minimizer is kept.  Once the bracket is narrower than eps/L the
two supporting lines are intersected, which lands on the single breakpoint the
interval can contain.  With rational masses (common denominator M) and
eps = 1/(2M) that breakpoint lies on the 1/M grid, so the intersection is
snapped to the grid and re-certified with exact level arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bracket import SearchBracket, bracket_for
from .costs import CostFunction, PowerCost
from .errors import InvalidEpsilon, IterationLimit
from .kernels import get_backend
from .measures import CircularHistogram, periodic_cdf
from .profile import (
    AvgCostEval,
    avg_cost_derivatives,
    exceptional_tolerance,
)

DEFAULT_EPSILON = 1e-10
_MAX_ITERATIONS = 200
# treated as a flat optimum when both one-sided slopes are this small
_FLAT_TOL = 1e-12

IterationHook = Callable[[int, float, float, float, float], None]


@dataclass(frozen=True)
class SolveResult:
    theta_star: float
    cost: float
    exact: bool
    iterations: int
    epsilon_used: float
    theta_tolerance: float  # eps / L, the final bracket-width bound
    cost_evaluations: int
    bracket: SearchBracket
    flat_interval: Optional[tuple[float, float]] = None


class _Evaluator:
    """Dispatches profile evaluations to the fast kernel for power costs."""

    def __init__(self, h0, h1, c, kernel_name: str = "auto"):
        self.F0 = periodic_cdf(h0)
        self.F1 = periodic_cdf(h1)
        self.c = c
        self.cost_evaluations = 0
        self._kernel = None
        if isinstance(c, PowerCost):
            self._kernel = get_backend(kernel_name)
            self._pos0 = np.asarray(self.F0.source.positions)
            self._cum0 = np.asarray(self.F0.cumulative)
            self._pos1 = np.asarray(self.F1.source.positions)
            self._cum1 = np.asarray(self.F1.cumulative)

    def fast(self, theta: float) -> AvgCostEval:
        """Float-mode evaluation; used inside the search loop."""
        if self._kernel is not None:
            value, dl, dr, exc, evals = self._kernel.power_eval(
                self._pos0,
                self._cum0,
                self._pos1,
                self._cum1,
                theta,
                self.c.lam,
                exceptional_tolerance(theta),
            )
            self.cost_evaluations += evals
            return AvgCostEval(theta, value, dl, dr, exc)
        return self.reference(theta)

    def reference(self, theta: float) -> AvgCostEval:
        """Exact-aware evaluation; used for the final answer and certificates."""
        n = len(self.F0.source.positions) + len(self.F1.source.positions)
        self.cost_evaluations += n + 4 * len(self.F1.source.positions)
        return avg_cost_derivatives(self.F0, self.F1, self.c, theta)


def common_denominator(h0: CircularHistogram, h1: CircularHistogram) -> Optional[int]:
    if h0.mass_denominator is None or h1.mass_denominator is None:
        return None
    return math.lcm(h0.mass_denominator, h1.mass_denominator)


def minimize(
    h0: CircularHistogram,
    h1: CircularHistogram,
    c: CostFunction,
    epsilon: Optional[float] = None,
    *,
    tight_bracket: bool = False,
    hook: Optional[IterationHook] = None,
    kernel: str = "auto",
) -> SolveResult:
    """Globally minimize the average cost C(theta); see the module docstring.

    ``epsilon`` bounds the cost gap (the returned theta is within epsilon/L of
    a minimizer); it defaults to 1e-10 and is overridden to 1/(2M) when both
    histograms declare mass denominators with least common multiple M.  The
    optional ``hook`` receives (iteration, theta_lo, theta_hi, dleft, dright)
    after each midpoint evaluation.
    """
    M = common_denominator(h0, h1)
    if M is not None:
        epsilon = 1.0 / (2.0 * M)
    elif epsilon is None:
        epsilon = DEFAULT_EPSILON
    if not (epsilon > 0.0 and math.isfinite(epsilon)):
        raise InvalidEpsilon(f"epsilon must be a positive finite real, got {epsilon!r}")

    brk = bracket_for(c, tight=tight_bracket)
    lo, hi = brk.theta_lo, brk.theta_hi
    L = brk.lipschitz
    width_bound = epsilon / L

    ev = _Evaluator(h0, h1, c, kernel_name=kernel)
    iterations = 0
    theta_star: float
    exact: bool

    while True:
        iterations += 1
        if iterations > _MAX_ITERATIONS:
            raise IterationLimit(
                f"no termination in {_MAX_ITERATIONS} iterations; "
                "is the declared Lipschitz bound valid?"
            )
        theta = 0.5 * (lo + hi)
        mid = ev.fast(theta)
        if hook is not None:
            hook(iterations, lo, hi, mid.left_derivative, mid.right_derivative)
        if mid.left_derivative <= 0.0 <= mid.right_derivative:
            theta_star = theta
            exact = True
            break
        if hi - lo < width_bound:
            e_lo = ev.fast(lo)
            e_hi = ev.fast(hi)
            s_lo = e_lo.right_derivative
            s_hi = e_hi.left_derivative
            if s_lo == s_hi:  # degenerate flat segment
                theta_star = theta
            else:
                theta_star = (
                    e_hi.value - e_lo.value + s_lo * lo - s_hi * hi
                ) / (s_lo - s_hi)
                theta_star = min(max(theta_star, lo), hi)
            exact = False
            if M is not None:
                snapped = round(theta_star * M) / M
                if lo - width_bound <= snapped <= hi + width_bound:
                    cert = ev.reference(snapped)
                    if cert.left_derivative <= 0.0 <= cert.right_derivative:
                        theta_star = snapped
                        exact = True
            break
        if mid.right_derivative < 0.0:
            lo = theta
        else:  # mid.left_derivative > 0 (the sandwich case already stopped)
            hi = theta

    final = ev.reference(theta_star) if M is not None else ev.fast(theta_star)
    flat = None
    if (
        abs(final.left_derivative) <= _FLAT_TOL
        and abs(final.right_derivative) <= _FLAT_TOL
    ):
        flat = _flat_interval(ev, theta_star)
    return SolveResult(
        theta_star=theta_star,
        cost=final.value,
        exact=exact,
        iterations=iterations,
        epsilon_used=epsilon,
        theta_tolerance=width_bound,
        cost_evaluations=ev.cost_evaluations,
        bracket=brk,
        flat_interval=flat,
    )


def mk_distance(
    h0: CircularHistogram,
    h1: CircularHistogram,
    lam: float,
    epsilon: Optional[float] = None,
) -> float:
    """Monge-Kantorovich distance of order lam between the two histograms."""
    if not lam >= 1.0:
        raise ValueError(f"lam must be >= 1, got {lam}")
    cost = minimize(h0, h1, PowerCost(lam), epsilon).cost
    return max(cost, 0.0) ** (1.0 / lam)


def _flat_interval(ev: _Evaluator, theta: float) -> tuple[float, float]:
    """Endpoints of the zero-slope segment around theta.

    The segment ends at the nearest shift (on either side) that makes a target
    level coincide with a source level.
    """
    cum0 = np.asarray(ev.F0.cumulative)
    cum1 = np.asarray(ev.F1.cumulative)
    # displacement of every target level from every source level, mod 1
    d = (cum1[:, None] - theta - cum0[None, :]).ravel() % 1.0
    tol = exceptional_tolerance(theta)
    up = d[d > tol]
    down = 1.0 - d[d < 1.0 - tol]
    delta_up = float(up.min()) if len(up) else 1.0
    delta_down = float(down.min()) if len(down) else 1.0
    return theta - delta_down, theta + delta_up
