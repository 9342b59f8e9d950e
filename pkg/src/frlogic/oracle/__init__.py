"""Independent dense floating-point re-implementation used to cross-check the exact engine."""

from .dense import DenseOracle
from .kernels import BACKEND, get_backend, jit_disabled

__all__ = ["DenseOracle", "BACKEND", "get_backend", "jit_disabled"]
