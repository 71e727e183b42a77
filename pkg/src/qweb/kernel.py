"""Pick the crossing-sum kernels: compiled if available, else pure Python.

Set QWEB_PURE_PYTHON=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernel

try:
    from . import _kernel as _ckernel
except ImportError:  # extension not built
    _ckernel = None

# every coefficient stays below |S| * 2^r; keep a margin under 2^63
INT64_BUDGET = 1 << 62

if _ckernel is not None and not os.environ.get("QWEB_PURE_PYTHON"):
    DEFAULT_BACKEND = "compiled"
else:
    DEFAULT_BACKEND = "python"


def available_backends() -> list[str]:
    return ["compiled", "python"] if _ckernel is not None else ["python"]


def get_kernel(name: str | None = None, size_bound: int = 0):
    """Return (backend name, crossing_sum callable).

    size_bound is |S| * 2^r; above INT64_BUDGET the compiled kernel could
    overflow, so the Python one is used instead.
    """
    name = name or DEFAULT_BACKEND
    if name == "compiled":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not built; reinstall with Cython available")
        if size_bound >= INT64_BUDGET:
            return "python", _pykernel.crossing_sum
        return "compiled", _ckernel.crossing_sum
    if name == "python":
        return "python", _pykernel.crossing_sum
    raise ValueError(f"unknown backend {name!r}")


def get_grouped(name: str | None = None):
    """Return (backend name, grouped_sum callable).  The compiled version works
    modulo primes, so it has no size limit."""
    name = name or DEFAULT_BACKEND
    if name == "compiled":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not built; reinstall with Cython available")
        return "compiled", _ckernel.grouped_sum
    if name == "python":
        return "python", _pykernel.grouped_sum
    raise ValueError(f"unknown backend {name!r}")
