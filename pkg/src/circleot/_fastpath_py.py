"""Pure-numpy kernel for power-cost profile evaluation.

Fallback used when the compiled extension is unavailable (or disabled via
CIRCLEOT_PURE_PYTHON=1).  Same contract as ``_fastpath.power_eval``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _power(d, lam):
    if lam == 1.0:
        return d
    if lam == 2.0:
        return d * d
    return d**lam


def power_eval(pos0, cum0, pos1, cum1, theta, lam, tol):
    """Evaluate C(theta), both one-sided derivatives and the exceptional flag.

    Arrays are the sorted atom positions and cumulative levels of the two
    histograms (one period each, last cumulative exactly 1).  Returns
    (value, dleft, dright, exceptional, cost_evaluations).
    """
    n0 = pos0.shape[0]
    n1 = pos1.shape[0]

    k = np.floor(theta - cum1) + 1.0
    b = cum1 + k - theta
    y = pos1 + k
    s = int(np.argmin(b))
    b = np.concatenate([b[s:], b[:s]])
    y = np.concatenate([y[s:], y[:s]])

    # merge the two sorted level families; stable sort keeps source levels
    # first on ties, matching the reference tie-break
    levels = np.concatenate([cum0, b])
    order = np.argsort(levels, kind="stable")
    sorted_levels = levels[order]
    is_src = order < n0

    f = np.cumsum(is_src)
    g = np.cumsum(~is_src)
    xi = np.where(is_src, f - 1, f)
    yi = np.where(is_src, g, g - 1)
    pos0_ext = np.concatenate([pos0, [pos0[0] + 1.0]])
    y_ext = np.concatenate([y, [y[0] + 1.0]])
    xs = pos0_ext[xi]
    ys = y_ext[yi]

    widths = np.diff(sorted_levels, prepend=0.0)
    widths[-1] += 1.0 - sorted_levels[-1]  # pin the final level to exactly 1
    value = float(np.dot(_power(np.abs(xs - ys), lam), widths))

    # one-sided derivatives over one period of target atoms
    y_next = np.concatenate([y[1:], [y[0] + 1.0]])
    il = np.searchsorted(cum0, b, side="right")
    ir = np.searchsorted(cum0, b, side="left")
    xl = pos0_ext[il]
    xr = pos0[np.minimum(ir, n0 - 1)]
    dleft = float(np.sum(_power(np.abs(xl - y_next), lam) - _power(np.abs(xl - y), lam)))
    dright = float(np.sum(_power(np.abs(xr - y_next), lam) - _power(np.abs(xr - y), lam)))

    near = np.minimum(
        np.abs(cum0[np.minimum(ir, n0 - 1)] - b),
        np.abs(cum0[np.maximum(ir - 1, 0)] - b),
    )
    exceptional = bool(np.any(near <= tol))

    evals = (n0 + n1) + 4 * n1
    return value, dleft, dright, exceptional, evals
