"""Kernel backend selection.

The compiled module is used when it imports and the graph has at most 64
vertices; otherwise the pure-Python kernels run.  Setting
``FRACEXT_PURE_PYTHON=1`` forces the fallback for the whole process.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_py

KIND_FPM = _kernels_py.KIND_FPM
KIND_PM = _kernels_py.KIND_PM

try:
    if os.environ.get("FRACEXT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python forced by FRACEXT_PURE_PYTHON")
    from . import _kernels_c
except ImportError:
    _kernels_c = None

_C_MAX = 64
_forced: str | None = None


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _kernels_c is not None else [])


def backend_name() -> str:
    if _forced is not None:
        return _forced
    return "cython" if _kernels_c is not None else "python"


@contextmanager
def use_backend(name: str):
    """Temporarily force ``"python"`` or ``"cython"`` (for tests and benchmarks)."""
    global _forced
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    prev = _forced
    _forced = name
    try:
        yield
    finally:
        _forced = prev


def _impl(n: int):
    if n <= _C_MAX and _kernels_c is not None and _forced != "python":
        return _kernels_c
    return _kernels_py


def fpm_exists(adj, alive: int) -> bool:
    return _impl(len(adj)).fpm_exists(adj, alive)


def pm_exists(adj, alive: int) -> bool:
    return _impl(len(adj)).pm_exists(adj, alive)


def max_matching(adj, alive: int) -> list[int]:
    return _impl(len(adj)).max_matching(adj, alive)


def find_unextendable(adj, alive, eu, ev, first, tail_from_zero, t, kind):
    return _impl(len(adj)).find_unextendable(adj, alive, list(eu), list(ev), list(first), bool(tail_from_zero), t, kind)
