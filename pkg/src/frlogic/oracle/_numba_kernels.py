"""numba-compiled dense kernels; same contracts as the numpy versions."""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _apply_op(psi, n, qubits, mat):
    k = qubits.shape[0]
    dim = 1 << k
    out = np.empty_like(psi)
    shifts = np.empty(k, dtype=np.int64)
    mask = 0
    for j in range(k):
        shifts[j] = n - 1 - qubits[j]
        mask |= 1 << shifts[j]
    offsets = np.zeros(dim, dtype=np.int64)
    for a in range(dim):
        off = 0
        for j in range(k):
            if (a >> (k - 1 - j)) & 1:
                off |= 1 << shifts[j]
        offsets[a] = off
    buf = np.empty(dim, dtype=psi.dtype)
    total = psi.shape[0]
    for base in range(total):
        if base & mask:
            continue
        for a in range(dim):
            buf[a] = psi[base | offsets[a]]
        for r in range(dim):
            acc = 0j
            for c in range(dim):
                acc += mat[r, c] * buf[c]
            out[base | offsets[r]] = acc
    return out


def apply_op(psi, n, qubits, mat):
    """Apply a ``2**k x 2**k`` operator to ``qubits`` of an ``n``-qubit vector."""
    return _apply_op(
        np.ascontiguousarray(psi, dtype=np.complex128),
        n,
        np.asarray(qubits, dtype=np.int64),
        np.ascontiguousarray(mat, dtype=np.complex128),
    )


@njit(**_JIT)
def _norm_sq(psi):
    acc = 0.0
    for i in range(psi.shape[0]):
        v = psi[i]
        acc += v.real * v.real + v.imag * v.imag
    return acc


def norm_sq(psi):
    return float(_norm_sq(np.ascontiguousarray(psi, dtype=np.complex128)))


@njit(**_JIT)
def _qubit_probabilities(psi, n, qubit):
    out = np.zeros(2)
    shift = n - 1 - qubit
    for i in range(psi.shape[0]):
        v = psi[i]
        out[(i >> shift) & 1] += v.real * v.real + v.imag * v.imag
    return out


def qubit_probabilities(psi, n, qubit):
    return _qubit_probabilities(np.ascontiguousarray(psi, dtype=np.complex128), n, qubit)
