"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. ``VQHULL_BACKEND=python`` (or ``cython``) forces a choice.
"""
from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

#: indices into a counters array
READS, WRITES, MOVES, EXTREME_READS, OVERHEAD = range(5)
#: indices into a stats array
CALLS, SUM_P, SUM_S1, SUM_S2, SUM_CH2 = range(5)

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def _default_name() -> str:
    requested = os.environ.get("VQHULL_BACKEND", "auto").strip().lower()
    if requested in ("", "auto"):
        return "cython" if _compiled is not None else "python"
    if requested not in _BACKENDS:
        raise ImportError(
            f"VQHULL_BACKEND={requested!r} is not available (have {available_backends()})"
        )
    return requested


_default = _default_name()


def get_backend(name: str | ModuleType | None = None) -> ModuleType:
    if isinstance(name, ModuleType):
        return name
    if name is None:
        return _BACKENDS[_default]
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}") from None


def backend_name(backend: ModuleType | None = None) -> str:
    backend = backend or get_backend()
    return "cython" if backend is _compiled else "python"


def new_counters() -> np.ndarray:
    return np.zeros(5, dtype=np.int64)


def new_stats() -> np.ndarray:
    return np.zeros(5, dtype=np.int64)
