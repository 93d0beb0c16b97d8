"""Cost functions on the universal cover of the circle.

All built-in costs are invariant under the diagonal shift (x, y) -> (x+1, y+1)
and grow as |x - y| -> infinity.  ``PowerCost`` is |x - y|**lam with lam >= 1;
``ConvexPlusPeriodicCost`` is h(x - y) + f(x) + g(y) with convex coercive h and
1-periodic f, g.  ``CustomCost`` wraps an opaque evaluator and must declare the
search data the library cannot derive for a black box.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import UnknownGrowth

# equality slack for non-strict Monge checks
MONGE_TOL = 1e-12


class CostFunction:
    """Base class; subclasses implement ``__call__`` on the universal cover."""

    symmetric: bool = False

    def __call__(self, x: float, y: float) -> float:
        raise NotImplementedError

    def eval_array(self, x, y):
        """Vectorized evaluation; default falls back to elementwise calls."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        it = np.nditer([x, y, None])
        for xi, yi, out in it:
            out[...] = self(float(xi), float(yi))
        return it.operands[2]

    @property
    def strict_monge(self) -> bool:
        return True


@dataclass(frozen=True)
class PowerCost(CostFunction):
    """c(x, y) = |x - y|**lam, lam >= 1.  Strictly Monge for lam > 1."""

    lam: float = 2.0
    symmetric: bool = True

    def __post_init__(self):
        if not self.lam >= 1.0:
            raise ValueError(f"power cost needs lam >= 1, got {self.lam}")

    def __call__(self, x: float, y: float) -> float:
        d = abs(x - y)
        if self.lam == 1.0:
            return d
        if self.lam == 2.0:
            return d * d
        return d**self.lam

    def eval_array(self, x, y):
        d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
        if self.lam == 1.0:
            return d
        if self.lam == 2.0:
            return d * d
        return d**self.lam

    @property
    def strict_monge(self) -> bool:
        return self.lam > 1.0


@dataclass(frozen=True)
class ConvexPlusPeriodicCost(CostFunction):
    """c(x, y) = h(x - y) + f(x) + g(y), convex coercive h, 1-periodic f and g."""

    h: Callable[[float], float]
    f: Callable[[float], float] = staticmethod(lambda x: 0.0)
    g: Callable[[float], float] = staticmethod(lambda y: 0.0)
    symmetric: bool = False

    def __call__(self, x: float, y: float) -> float:
        return self.h(x - y) + self.f(x) + self.g(y)


@dataclass(frozen=True)
class CustomCost(CostFunction):
    """Opaque evaluator with caller-declared bracket, Lipschitz and growth data."""

    evaluator: Callable[[float, float], float]
    declared_bracket: Optional[tuple[float, float]] = None
    declared_lipschitz: Optional[float] = None
    declared_growth: Optional[Callable[[float], float]] = None
    symmetric: bool = False

    def __call__(self, x: float, y: float) -> float:
        return self.evaluator(x, y)


def cost_eval(c: CostFunction, x: float, y: float) -> float:
    return c(x, y)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a sampled Monge check; a fail carries the worst quadruple."""

    passed: bool
    max_quantity: float
    worst: Optional[tuple[float, float, float, float]]
    strict: bool


def check_monge(
    c: CostFunction, grid: Sequence[float], strict: Optional[bool] = None
) -> CheckReport:
    """Evaluate the Monge quantity on all grid quadruples x1 < x2, y1 < y2.

    This is a finite certificate, not a proof: it reports the maximum of
    c(x1,y1) + c(x2,y2) - c(x1,y2) - c(x2,y1) over the grid.  In strict mode
    the check passes when the maximum is negative; non-strict mode (the
    lam = 1 limit) tolerates equality.
    """
    values = sorted(set(float(v) for v in grid))
    if len(values) < 2:
        raise ValueError("grid needs at least 2 distinct values")
    if strict is None:
        strict = c.strict_monge
    worst = None
    worst_q = -math.inf
    for (x1, x2), (y1, y2) in itertools.product(
        itertools.combinations(values, 2), repeat=2
    ):
        q = c(x1, y1) + c(x2, y2) - c(x1, y2) - c(x2, y1)
        if q > worst_q:
            worst_q = q
            worst = (x1, x2, y1, y2)
    passed = worst_q < 0.0 if strict else worst_q <= MONGE_TOL
    return CheckReport(
        passed=passed,
        max_quantity=worst_q,
        worst=None if passed else worst,
        strict=strict,
    )


def growth_radius(c: CostFunction, P: float) -> float:
    """Return R such that c(x, y) >= P whenever |x - y| >= R."""
    if isinstance(c, PowerCost):
        return max(P, 0.0) ** (1.0 / c.lam)
    if isinstance(c, ConvexPlusPeriodicCost):
        grid = np.linspace(0.0, 1.0, 1001)
        f_min = min(c.f(t) for t in grid)
        g_min = min(c.g(t) for t in grid)
        target = P - f_min - g_min
        R = 0.0
        while R <= 1e6:
            if min(c.h(R), c.h(-R)) >= target and R >= _h_argmin_radius(c.h):
                return R
            R = max(2.0 * R, 1.0)
        raise UnknownGrowth("h does not appear to be coercive")
    if isinstance(c, CustomCost):
        if c.declared_growth is None:
            raise UnknownGrowth("custom cost without declared growth data")
        return c.declared_growth(P)
    raise UnknownGrowth(f"no growth data for {type(c).__name__}")


def _h_argmin_radius(h: Callable[[float], float]) -> float:
    """Coarse bound on |argmin h| so min over |d| >= R is attained at +-R."""
    best, best_d = math.inf, 0.0
    for d in np.linspace(-16.0, 16.0, 2049):
        v = h(float(d))
        if v < best:
            best, best_d = v, float(d)
    return abs(best_d)
