"""Pure-numpy dense kernels."""

from __future__ import annotations

import numpy as np


def apply_op(psi, n, qubits, mat):
    """Apply a ``2**k x 2**k`` operator to ``qubits`` of an ``n``-qubit vector.

    Qubit 0 is the most significant bit of the basis index.  Returns a new
    array; ``psi`` is left untouched.
    """
    k = len(qubits)
    tensor = psi.reshape((2,) * n)
    op = mat.reshape((2,) * (2 * k))
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot puts the operator's output axes first
    return np.moveaxis(out, list(range(k)), list(qubits)).reshape(-1)


def norm_sq(psi):
    return float(np.vdot(psi, psi).real)


def qubit_probabilities(psi, n, qubit):
    """Probability of each z outcome of one qubit (unnormalized weights)."""
    tensor = np.abs(psi.reshape((2,) * n)) ** 2
    axes = tuple(i for i in range(n) if i != qubit)
    return tensor.sum(axis=axes)
