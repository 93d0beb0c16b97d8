"""Shared generators and an independent integral-based cost evaluator."""

import numpy as np

from circleot import histogram_new


def random_float_histogram(rng, n):
    """Histogram with uniform random positions and normalized random masses."""
    pos = rng.random(n)
    m = rng.random(n) + 0.05
    return histogram_new(pos, m / m.sum())


def random_rational_histogram(rng, n, M):
    """Histogram whose masses are positive integer multiples of 1/M."""
    assert M > n
    cuts = np.sort(rng.choice(np.arange(1, M), size=n - 1, replace=False))
    nums = np.diff(np.concatenate(([0], cuts, [M])))
    pos = rng.random(n)
    return histogram_new(pos, nums / M, M)


def inverse_vec(F, v):
    """Vectorized right-continuous inverse, independent of the merge code."""
    v = np.asarray(v, dtype=float)
    n = np.floor(v)
    w = v - n
    idx = np.searchsorted(np.asarray(F.cumulative), w, side="right")
    return n + np.asarray(F.source.positions)[idx]


def integral_average_cost(F0, F1, c, theta, samples=200_000, v0=0.0):
    """Midpoint Riemann sum of c(F0^-1(t), F1^-1(t + theta)) over (v0, v0 + 1).

    A brute-force stand-in for the average cost; the integrand is piecewise
    constant, so the error is bounded by (number of jumps) * max|c| / samples.
    """
    t = v0 + (np.arange(samples) + 0.5) / samples
    x = inverse_vec(F0, t)
    y = inverse_vec(F1, t + theta)
    return float(np.mean(c.eval_array(x, y)))
