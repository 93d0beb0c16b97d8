"""Kernel backend selection: compiled extension when available, numpy fallback.

Set CIRCLEOT_PURE_PYTHON=1 to force the fallback.  ``get_backend`` lets the
benchmark harness pick either backend explicitly.
"""

from __future__ import annotations

import os

from . import _fastpath_py

try:
    from . import _fastpath as _fastpath_c  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _fastpath_c = None

if os.environ.get("CIRCLEOT_PURE_PYTHON"):
    _default = _fastpath_py
else:
    _default = _fastpath_c if _fastpath_c is not None else _fastpath_py


def backend_name() -> str:
    return _default.BACKEND


def get_backend(name: str = "auto"):
    """Return the kernel module for ``name`` in {auto, compiled, python}."""
    if name == "auto":
        return _default
    if name == "python":
        return _fastpath_py
    if name == "compiled":
        if _fastpath_c is None:
            raise RuntimeError("compiled kernel is not available")
        return _fastpath_c
    raise ValueError(f"unknown kernel backend {name!r}")


def has_compiled() -> bool:
    return _fastpath_c is not None
