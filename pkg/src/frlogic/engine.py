"""Collapse-free measurement: agents as record registers.

An *absorbing* measurement relabels the measured register as the agent's
record (the friend's lab reduced to one qubit).  A *preserving* measurement
entangles a fresh record, starting in outcome 0 of its read basis, with the
target through a basis-aligned controlled flip.  Either style may also
*collapse*: the record is projected onto one outcome and renormalized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Sequence

from .amplitude import ONE, ZERO
from .errors import (
    BasisError,
    DuplicateRegister,
    NonUnitarySegment,
    OutsideRange,
    RegisterMismatch,
    StepOrderError,
    TargetIsRecord,
    UnknownRegister,
    ZeroProbabilityCollapse,
)
from .state import (
    EXACT,
    FLOAT,
    FLOAT_EPS,
    Z,
    Basis,
    StateVector,
    add_states,
    append_register,
    born_probabilities,
    change_basis,
    drop_register,
    project,
    rename_register,
)

ABSORB = "absorb"
PRESERVE = "preserve"
SAMPLE = "sample"


@dataclass(frozen=True)
class MeasurementStep:
    """One agent measurement.

    ``collapse`` is ``None`` (unitary), an outcome label or index, or
    ``"sample"`` to draw the outcome from the Born distribution.  ``record``
    names the register that will hold the outcome; :func:`resolve_steps`
    fills it in when left empty.
    """

    index: int
    agent: str
    targets: tuple[str, ...]
    basis: Basis
    style: str = ABSORB
    collapse: str | int | None = None
    record: str | None = None

    def __post_init__(self) -> None:
        if isinstance(self.targets, str):
            object.__setattr__(self, "targets", (self.targets,))
        else:
            object.__setattr__(self, "targets", tuple(self.targets))
        if self.style not in (ABSORB, PRESERVE):
            raise ValueError(f"unknown measurement style {self.style!r}")
        if self.style == ABSORB and len(self.targets) != 1:
            raise ValueError("an absorbing measurement takes exactly one target")
        if self.basis.single and len(self.targets) != 1:
            raise BasisError("a single-register basis measures one target")
        if not self.basis.single and self.basis.arity != len(self.targets):
            raise BasisError("basis arity does not match the targets")
        if self.style == ABSORB and not self.basis.single:
            raise BasisError("an absorbing measurement needs a single-register basis")

    @property
    def record_basis(self) -> Basis:
        return self.basis if self.basis.single else Z

    @property
    def is_collapse(self) -> bool:
        return self.collapse is not None

    def collapse_outcome(self) -> int | None:
        if self.collapse is None or self.collapse == SAMPLE:
            return None
        if isinstance(self.collapse, int):
            return self.collapse
        return self.record_basis.outcome_of(self.collapse)


def resolve_steps(steps: Sequence[MeasurementStep]) -> tuple[MeasurementStep, ...]:
    """Check ordering and assign record names (``agent``, then ``agent#2``, ...)."""
    out = []
    seen: dict[str, int] = {}
    last = 0
    for step in steps:
        if step.index <= last:
            raise StepOrderError(f"step index {step.index} is not increasing")
        last = step.index
        n = seen.get(step.agent, 0) + 1
        seen[step.agent] = n
        if step.record is None:
            name = step.agent if n == 1 else f"{step.agent}#{n}"
            step = replace(step, record=name)
        out.append(step)
    return tuple(out)


# -- single steps -----------------------------------------------------------

def apply_unitary(state: StateVector, step: MeasurementStep) -> StateVector:
    """The collapse-free part of ``step``."""
    record = step.record or step.agent
    for t in step.targets:
        state.index(t)
    if step.style == ABSORB:
        target = step.targets[0]
        if target in state.records:
            raise TargetIsRecord(target)
        state = change_basis(state, target, step.basis)
        state = rename_register(state, target, record)
        return state.replace(records={**state.records, record: step.basis})
    if record in state.registers:
        raise DuplicateRegister(record)
    rb = step.record_basis
    parts = []
    for o in (0, 1):
        comp = project(state, step.targets, step.basis, o if not step.basis.single else (o,))
        parts.append(append_register(comp, record, rb, o))
    if not step.basis.single and len(step.basis.kets) == 2:
        # both kets named: the complement must carry no weight
        rest = add_states(state, project(state, step.targets, step.basis, 0).scaled(-_one(state)))
        rest = add_states(rest, project(state, step.targets, step.basis, 1).scaled(-_one(state)))
        if not rest.is_zero():
            raise BasisError("state has weight outside the two measured kets")
    out = add_states(parts[0], parts[1])
    return out.replace(unnormalized=state.unnormalized,
                       records={**state.records, record: rb})


def _one(state: StateVector):
    return ONE if state.mode == EXACT else 1 + 0j


def invert_unitary(state: StateVector, step: MeasurementStep) -> StateVector:
    """Inverse of :func:`apply_unitary` on its range."""
    record = step.record or step.agent
    state.index(record)
    if step.style == ABSORB:
        restored = rename_register(state, record, step.targets[0])
        records = {r: b for r, b in restored.records.items() if r != step.targets[0]}
        return restored.replace(records=records)
    rb = step.record_basis
    state = change_basis(state, record, rb)
    if step.basis.single:
        target = step.targets[0]
        state = change_basis(state, target, step.basis)
        rpos, tpos = state.index(record), state.index(target)
        for key in state.terms:
            if key[rpos] != key[tpos]:
                raise OutsideRange(step.index)
        terms = {k[:rpos] + k[rpos + 1:]: v for k, v in state.terms.items()}
        records = {r: b for r, b in state.records.items() if r != record}
        return state.replace(
            registers=state.registers[:rpos] + state.registers[rpos + 1:],
            frames=state.frames[:rpos] + state.frames[rpos + 1:],
            terms=terms, records=records,
        )
    parts = []
    for o in (0, 1):
        comp = project(state, record, rb, o)
        check = project(comp, step.targets, step.basis, o if not step.basis.single else (o,))
        if check != comp:
            raise OutsideRange(step.index)
        if not comp.is_zero():
            parts.append(drop_register(comp, record, o))
    if not parts:
        base = drop_register(state.replace(terms={}), record, 0)
        return base
    out = parts[0] if len(parts) == 1 else add_states(parts[0], parts[1])
    return out.replace(unnormalized=state.unnormalized)


def collapse_component(state: StateVector, step: MeasurementStep, outcome: int) -> StateVector:
    record = step.record or step.agent
    return project(state, record, step.record_basis, outcome)


def apply_step(state: StateVector, step: MeasurementStep, rng: random.Random | None = None,
               outcome: int | None = None) -> StateVector:
    """Apply one step; collapse steps renormalize onto their outcome."""
    if step.record is None:
        step = replace(step, record=step.agent)
    out = apply_unitary(state, step)
    if not step.is_collapse:
        return out
    if outcome is None:
        outcome = step.collapse_outcome()
    if outcome is None:
        outcome = _sample(out, step, rng or random.Random(0))
    comp = collapse_component(out, step, outcome)
    p = comp.norm_sq()
    if _zero_prob(p):
        raise ZeroProbabilityCollapse(step.index, step.record_basis.label(outcome))
    return comp.normalized().replace(unnormalized=state.unnormalized)


def _zero_prob(p) -> bool:
    if isinstance(p, float):
        return p < FLOAT_EPS
    return p.is_zero()


def _sample(state: StateVector, step: MeasurementStep, rng: random.Random) -> int:
    probs = born_probabilities(state, step.record, step.record_basis)
    return 0 if rng.random() < float(probs[0]) else 1


# -- histories --------------------------------------------------------------

@dataclass(frozen=True)
class CollapseEvent:
    step: int
    outcome: int
    label: str
    probability: object


@dataclass(frozen=True)
class History:
    """Snapshots ``0..n`` (0 is the initial state) and the steps between them."""

    snapshots: tuple[StateVector, ...]
    steps: tuple[MeasurementStep, ...]
    collapse_log: tuple[CollapseEvent, ...] = ()
    _collapse_by_pos: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def mode(self) -> str:
        return self.snapshots[0].mode

    @property
    def final(self) -> StateVector:
        return self.snapshots[-1]

    def __len__(self) -> int:
        return len(self.snapshots)

    def position(self, at_step: int) -> int:
        """Snapshot position for 'immediately after step ``at_step``'."""
        if at_step == 0:
            return 0
        for i, step in enumerate(self.steps):
            if step.index == at_step:
                return i + 1
        raise StepOrderError(f"no step {at_step} in this history")

    def step_indices(self) -> tuple[int, ...]:
        return (0,) + tuple(s.index for s in self.steps)

    def snapshot(self, at_step: int) -> StateVector:
        return self.snapshots[self.position(at_step)]

    def registers_at(self, at_step: int) -> tuple[str, ...]:
        return self.snapshot(at_step).registers

    def evolve(self, state: StateVector, from_step: int, to_step: int) -> StateVector:
        """Push ``state`` forward from snapshot ``from_step`` to ``to_step``.

        Collapse steps act as ``P / sqrt(p)`` with ``p`` the probability logged
        when the history ran, so chained projections stay consistent with the
        recorded snapshots.
        """
        i, j = self.position(from_step), self.position(to_step)
        if j < i:
            raise StepOrderError("evolve runs forward only; use back_evolve")
        for pos in range(i, j):
            step = self.steps[pos]
            state = apply_unitary(state, step)
            ev = self._collapse_by_pos.get(pos)
            if ev is not None:
                comp = collapse_component(state, step, ev.outcome)
                state = comp.rescaled(_inverse(ev.probability)).replace(
                    unnormalized=state.unnormalized
                )
        return state

    def back_evolve(self, state: StateVector, from_step: int, to_step: int) -> StateVector:
        return back_evolve(self, state, from_step, to_step)


def _inverse(p):
    if isinstance(p, float):
        return 1.0 / p
    return p.inverse()


def run_experiment(initial: StateVector, steps: Sequence[MeasurementStep],
                   seed: int | None = None, rng: random.Random | None = None) -> History:
    steps = resolve_steps(steps)
    if rng is None:
        rng = random.Random(seed)
    snapshots = [initial]
    log = []
    by_pos = {}
    state = initial
    for pos, step in enumerate(steps):
        if not step.is_collapse:
            state = apply_unitary(state, step)
        else:
            pre = apply_unitary(state, step)
            outcome = step.collapse_outcome()
            if outcome is None:
                outcome = _sample(pre, step, rng)
            comp = collapse_component(pre, step, outcome)
            p = comp.norm_sq()
            if _zero_prob(p):
                raise ZeroProbabilityCollapse(step.index, step.record_basis.label(outcome))
            state = comp.normalized()
            ev = CollapseEvent(step.index, outcome, step.record_basis.label(outcome), p)
            log.append(ev)
            by_pos[pos] = ev
        snapshots.append(state)
    return History(tuple(snapshots), steps, tuple(log), by_pos)


def back_evolve(history: History, state: StateVector, from_step: int, to_step: int) -> StateVector:
    """Undo the steps between snapshot ``to_step`` and ``from_step``.

    Only absorbing and preserving steps invert; a preserving step inverts on
    its range, where each record outcome sits with the matching target
    component.
    """
    i, j = history.position(from_step), history.position(to_step)
    if j > i:
        raise StepOrderError("back_evolve runs backward only")
    live = set(history.snapshots[i].registers)
    if set(state.registers) != live:
        raise RegisterMismatch(
            f"state registers {state.registers!r} differ from those live at step {from_step}"
        )
    for pos in range(i - 1, j - 1, -1):
        step = history.steps[pos]
        if step.is_collapse:
            raise NonUnitarySegment(step.index)
        state = invert_unitary(state, step)
    return state


def joint_distribution(state: StateVector, registers: Sequence[str],
                       bases: Sequence[Basis] | None = None) -> dict:
    """Joint Born distribution of several registers, each read in its own basis."""
    if bases is None:
        bases = [state.records.get(r, state.frame(r)) for r in registers]
    s = state
    for r, b in zip(registers, bases):
        s = change_basis(s, r, b)
    pos = [s.index(r) for r in registers]
    total = s.norm_sq()
    acc: dict = {}
    for k, v in s.terms.items():
        key = tuple(k[p] for p in pos)
        w = v * v.conjugate()
        acc[key] = acc[key] + w if key in acc else w
    out = {}
    for key in _keys(len(registers)):
        raw = acc.get(key)
        if s.mode == FLOAT:
            out[key] = 0.0 if raw is None else float(raw.real) / total
        else:
            out[key] = ZERO if raw is None else raw * s.scale * total.inverse()
    return out


def _keys(n: int):
    if n == 0:
        return [()]
    return [(o,) + r for o in (0, 1) for r in _keys(n - 1)]


def describe_step(step: MeasurementStep) -> str:
    verb = "absorbs" if step.style == ABSORB else "measures"
    text = f"{step.agent} {verb} {','.join(step.targets)} in {step.basis.name}"
    if step.style == PRESERVE:
        text += " preserving"
    if step.collapse is not None:
        text += f" collapse={step.collapse}"
    return text
