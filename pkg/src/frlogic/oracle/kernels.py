"""Kernel dispatch for the dense oracle.

numba kernels are used when numba imports cleanly, unless the environment
variable ``FRLOGIC_DISABLE_JIT`` is set to a true value, in which case the
pure-numpy versions run.  Both share one contract so the oracle never knows
which it got.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _numpy_kernels

_FALSEY = ("", "0", "false", "no", "off")


def jit_disabled() -> bool:
    return os.environ.get("FRLOGIC_DISABLE_JIT", "").strip().lower() not in _FALSEY


def _load_numba() -> ModuleType | None:
    try:
        from . import _numba_kernels
    except ImportError:
        return None
    return _numba_kernels


def get_backend(name: str | None = None) -> ModuleType:
    """Kernel module by name (``numba`` or ``numpy``); ``None`` picks the default."""
    if name is None:
        name = "numpy" if jit_disabled() else "numba"
    if name == "numpy":
        return _numpy_kernels
    if name == "numba":
        mod = _load_numba()
        if mod is None:
            return _numpy_kernels
        return mod
    raise ValueError(f"unknown kernel backend {name!r}")


_backend = get_backend()
BACKEND = "numba" if _backend is not _numpy_kernels else "numpy"

apply_op = _backend.apply_op
norm_sq = _backend.norm_sq
qubit_probabilities = _backend.qubit_probabilities


def warm_up() -> None:
    """Compile the jitted kernels once (no-op for numpy)."""
    import numpy as np

    psi = np.zeros(4, dtype=np.complex128)
    psi[0] = 1.0
    mat = np.eye(2, dtype=np.complex128)
    norm_sq(apply_op(psi, 2, np.array([1]), mat))
    qubit_probabilities(psi, 2, 0)
