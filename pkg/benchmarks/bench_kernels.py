"""Compare the numba and numpy kernels behind the dense oracle.

Run with ``python benchmarks/bench_kernels.py``.  Each kernel is timed on
random states of growing size, and the whole oracle is timed on the bundled
corpus.  numba compilation happens once before any timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from frlogic.oracle import DenseOracle, get_backend
from frlogic.oracle.kernels import warm_up
from frlogic.scenarios import bundled


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(sizes, repeat: int) -> None:
    rng = np.random.default_rng(0)
    backends = {name: get_backend(name) for name in ("numpy", "numba")}
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    cx = np.eye(4, dtype=np.complex128)[[0, 1, 3, 2]]
    print(f"{'qubits':>6} {'kernel':<14} {'numpy (us)':>12} {'numba (us)':>12} {'speedup':>8}")
    for n in sizes:
        psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        psi /= np.linalg.norm(psi)
        cases = {
            "apply_1q": lambda k: k.apply_op(psi, n, np.array([n // 2]), h),
            "apply_2q": lambda k: k.apply_op(psi, n, np.array([0, n - 1]), cx),
            "norm_sq": lambda k: k.norm_sq(psi),
            "qubit_probs": lambda k: k.qubit_probabilities(psi, n, n // 2),
        }
        for label, case in cases.items():
            t = {name: _best(lambda: case(k), repeat) * 1e6 for name, k in backends.items()}
            print(f"{n:>6} {label:<14} {t['numpy']:>12.1f} {t['numba']:>12.1f} {t['numpy'] / t['numba']:>8.2f}")


def bench_oracle(repeat: int) -> None:
    corpus = bundled()
    print()
    for name in ("numpy", "numba"):
        def run():
            for sc in corpus:
                o = DenseOracle(sc, backend=name)
                for spec in sc.statements:
                    o.statement_probability(spec.statement)
        print(f"oracle over {len(corpus)} scenarios, {name:<5}: {_best(run, repeat) * 1e3:8.1f} ms")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12, 16, 20])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    get_backend("numba")
    warm_up()
    # warm the numba module directly in case the default backend is numpy
    k = get_backend("numba")
    k.norm_sq(k.apply_op(np.ones(4, np.complex128), 2, np.array([0]), np.eye(2, dtype=np.complex128)))
    k.qubit_probabilities(np.ones(4, np.complex128), 2, 0)
    bench_kernels(args.sizes, args.repeat)
    bench_oracle(args.repeat)


if __name__ == "__main__":
    main()
