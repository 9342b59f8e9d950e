"""Dense floating-point oracle.

Rebuilds a scenario as a plain ``2**n`` complex vector with one qubit per
physical register and one per preserving record, then answers the same
questions as the exact engine by brute force.  It shares only the scenario
data with the sparse engine: state construction, measurement unitaries,
projectors and conditional probabilities are all recomputed here.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels

_R = 1.0 / math.sqrt(2.0)


def basis_vectors(basis) -> list[np.ndarray]:
    """Column vectors of a basis, in z coordinates (big-endian over targets)."""
    if basis.kind == "z":
        return [np.array([1, 0], complex), np.array([0, 1], complex)]
    if basis.kind == "x":
        return [np.array([_R, _R], complex), np.array([_R, -_R], complex)]
    if basis.kind == "theta":
        c, s = math.cos(basis.theta), math.sin(basis.theta)
        return [np.array([c, s], complex), np.array([s, -c], complex)]
    vecs = []
    for ket in basis.kets:
        v = np.zeros(2 ** basis.arity, complex)
        for cfg, amp in ket:
            idx = int("".join(str(b) for b in cfg), 2)
            v[idx] += complex(amp)
        vecs.append(v)
    return vecs


def outcome_projectors(basis) -> list[np.ndarray]:
    vecs = basis_vectors(basis)
    projs = [np.outer(v, v.conj()) for v in vecs]
    if len(projs) == 1:
        projs.append(np.eye(len(vecs[0])) - projs[0])
    return projs


def _label_vector(label: str) -> np.ndarray:
    table = {
        "up": (1, 0), "down": (0, 1), "0": (1, 0), "1": (0, 1),
        "+": (_R, _R), "plus": (_R, _R), "fail": (_R, _R),
        "-": (_R, -_R), "minus": (_R, -_R), "ok": (_R, -_R),
    }
    return np.array(table[label], complex)


def _record_basis(step):
    if step.basis.kind == "states":
        from ..state import Z

        return Z
    return step.basis


@dataclass
class _Op:
    qubits: list[int]
    mat: np.ndarray


class DenseOracle:
    """Brute-force dense simulation of one scenario."""

    def __init__(self, scenario, collapse_outcomes: dict[int, int] | None = None,
                 backend: str | None = None) -> None:
        self.k = kernels.get_backend(backend)
        self.steps = scenario.resolved_steps
        regs = list(scenario.initial.registers)
        n_records = sum(1 for s in self.steps if s.style == "preserve")
        self.n = len(regs) + n_records
        collapse_outcomes = collapse_outcomes or {}

        # register name -> (qubit, read basis) for each snapshot position
        from ..state import Z

        names = {r: (i, Z) for i, r in enumerate(regs)}
        self.names = [dict(names)]
        psi = self._initial(scenario)
        next_q = len(regs)
        ready = []
        self.ops: list[_Op | None] = []
        self.collapses: dict[int, tuple[int, int, float]] = {}
        for s in self.steps:
            rb = _record_basis(s)
            if s.style == "absorb":
                q, _ = names.pop(s.targets[0])
                names[s.record] = (q, rb)
                self.ops.append(None)
            else:
                q = next_q
                next_q += 1
                ready.append((q, basis_vectors(rb)[0]))
                tq = [names[t][0] for t in s.targets]
                self.ops.append(_Op(tq + [q], self._preserve_matrix(s.basis, rb)))
                names[s.record] = (q, rb)
            self.names.append(dict(names))
        psi = self._with_ready(psi, len(regs), ready)
        self.snapshots = [psi]
        for pos, s in enumerate(self.steps):
            psi = self._apply(pos, psi)
            if s.collapse is not None:
                q, rb = self.names[pos + 1][s.record]
                if s.index in collapse_outcomes:
                    o = collapse_outcomes[s.index]
                else:
                    o = rb.outcome_of(s.collapse) if isinstance(s.collapse, str) else s.collapse
                proj = outcome_projectors(rb)[o]
                cand = self.k.apply_op(psi, self.n, [q], proj)
                p = self.k.norm_sq(cand)
                self.collapses[pos] = (q, o, p)
                psi = cand / math.sqrt(p)
            self.snapshots.append(psi)

    # -- construction --
    def _initial(self, scenario) -> np.ndarray:
        init = scenario.initial
        m = len(init.registers)
        psi = np.zeros(2 ** m, complex)
        root = math.sqrt(init.scale)
        for t in init.terms:
            v = np.array([1.0 + 0j])
            for label in t.labels:
                v = np.kron(v, _label_vector(label))
            psi += complex(t.amp) * root * cmath.exp(1j * t.phase) * v
        return psi

    def _with_ready(self, psi, m, ready) -> np.ndarray:
        for _, vec in ready:
            psi = np.kron(psi, vec)
        return psi

    @staticmethod
    def _preserve_matrix(basis, rb) -> np.ndarray:
        projs = outcome_projectors(basis)
        r0, r1 = basis_vectors(rb)
        flip = np.outer(r0, r1.conj()) + np.outer(r1, r0.conj())
        eye2 = np.eye(2)
        dim = projs[0].shape[0]
        u = np.kron(projs[0], eye2) + np.kron(projs[1], flip)
        if basis.kind == "states" and len(basis.kets) == 2:
            rest = np.eye(dim) - projs[0] - projs[1]
            u = u + np.kron(rest, eye2)
        return u

    # -- dynamics --
    def _apply(self, pos: int, psi, inverse: bool = False):
        op = self.ops[pos]
        if op is None:
            return psi
        mat = op.mat.conj().T if inverse else op.mat
        return self.k.apply_op(psi, self.n, op.qubits, mat)

    def position(self, at_step: int) -> int:
        if at_step == 0:
            return 0
        for i, s in enumerate(self.steps):
            if s.index == at_step:
                return i + 1
        raise KeyError(at_step)

    def evolve(self, psi, from_step: int, to_step: int):
        i, j = self.position(from_step), self.position(to_step)
        if j >= i:
            for pos in range(i, j):
                psi = self._apply(pos, psi)
                if pos in self.collapses:
                    q, o, p = self.collapses[pos]
                    rb = _record_basis(self.steps[pos])
                    psi = self.k.apply_op(psi, self.n, [q], outcome_projectors(rb)[o]) / math.sqrt(p)
            return psi
        for pos in range(i - 1, j - 1, -1):
            if pos in self.collapses:
                raise ValueError(f"step {self.steps[pos].index} collapses")
            psi = self._apply(pos, psi, inverse=True)
        return psi

    def project(self, psi, event):
        q, _ = self.names[self.position(event.at_step)][event.register]
        proj = outcome_projectors(event.basis)[event.outcome]
        return self.k.apply_op(psi, self.n, [q], proj)

    # -- queries --
    def chain_state(self, events):
        events = sorted(events, key=lambda e: e.at_step)
        psi = self.snapshots[self.position(events[0].at_step)]
        k = events[0].at_step
        for e in events:
            psi = self.evolve(psi, k, e.at_step)
            k = e.at_step
            psi = self.project(psi, e)
        return psi

    def chain_probability(self, events) -> float:
        return self.k.norm_sq(self.chain_state(events))

    def outcome_table(self, observables) -> dict[tuple[int, ...], float]:
        """Chain probability of every outcome combination of the given events' observables."""
        observables = list(observables)
        table = {}
        for combo in itertools.product((0, 1), repeat=len(observables)):
            evs = [e.with_outcome(o) for e, o in zip(observables, combo)]
            table[combo] = self.chain_probability(evs)
        return table

    def forward(self, premises, conclusion) -> tuple[float, float]:
        """(conditional, premise probability) from the full outcome table."""
        obs = list(premises) + [conclusion]
        table = self.outcome_table(obs)
        want = tuple(e.outcome for e in premises)
        num = sum(p for c, p in table.items() if c[:-1] == want and c[-1] == conclusion.outcome)
        den = sum(p for c, p in table.items() if c[:-1] == want)
        if den < 1e-15:
            return 0.0, 0.0
        return num / den, self.chain_probability(premises)

    def retro(self, premises, conclusion) -> tuple[float, float]:
        prem = sorted(premises, key=lambda e: e.at_step)
        psi = self.chain_state(prem)
        pp = self.k.norm_sq(psi)
        if pp < 1e-15:
            return 0.0, pp
        psi = self.evolve(psi, prem[-1].at_step, conclusion.at_step)
        total = self.k.norm_sq(psi)
        if total < 1e-15:
            return 0.0, 0.0
        hit = self.k.norm_sq(self.project(psi, conclusion))
        return hit / total, pp

    def statement_probability(self, stmt) -> tuple[float, float]:
        if stmt.mode == "forward":
            return self.forward(stmt.premises, stmt.conclusion)
        return self.retro(stmt.premises, stmt.conclusion)

    def joint(self, registers) -> dict[tuple[int, ...], float]:
        from ..logic import Event

        last = self.steps[-1].index if self.steps else 0
        names = self.names[-1]
        obs = [Event(r, 0, names[r][1], last) for r in registers]
        return self.outcome_table(obs)

    def disturbance_defect(self, earlier, later, given=()) -> float:
        from ..logic import Event

        register, basis, step = earlier
        given = list(given)
        base = self.chain_probability(given) if given else 1.0
        undisturbed = self.chain_probability(given + [later])
        decohered = sum(
            self.chain_probability(given + [Event(register, o, basis, step), later]) for o in (0, 1)
        )
        return abs(undisturbed - decohered) / base

    def norms(self) -> list[float]:
        return [self.k.norm_sq(p) for p in self.snapshots]
