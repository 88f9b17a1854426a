"""Kernel backend selection.

The hot loops (animal enumeration DFS, gas Monte Carlo) exist twice: a
numba-njit build and a pure-Python/numpy fallback with identical semantics.
``DAGAS_KERNELS`` picks the backend:

* ``auto``  (default) -- numba when importable, else pure
* ``numba`` -- require numba, fail otherwise
* ``pure``  -- force the fallback

Both backends are importable directly (``dagas._kernels._numba`` /
``_pure``) regardless of the flag; the benchmark and parity tests do that.
"""

from __future__ import annotations

import os

from . import _pure


def _load():
    choice = os.environ.get("DAGAS_KERNELS", "auto").strip().lower()
    if choice not in ("auto", "numba", "pure"):
        raise ValueError(f"DAGAS_KERNELS must be auto|numba|pure, got {choice!r}")
    if choice == "pure":
        return _pure
    try:
        from . import _numba
        return _numba
    except ImportError:
        if choice == "numba":
            raise
        return _pure


kernels = _load()


def backend_name() -> str:
    return kernels.BACKEND
