"""Conditional statements about recorded outcomes.

Two readings of "if P then Q" are supported.  The *forward* reading inserts
event projectors into the snapshot sequence in time order and takes a ratio
of chain probabilities.  The *retro* reading projects onto the premises,
then carries that state to the conclusion's step, running the measurement
unitaries backwards when the conclusion is earlier, and reads off the Born
probability there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .amplitude import ONE, ZERO, QuadAmp
from .engine import History
from .errors import (
    BasisError,
    BothZero,
    ChainMismatch,
    FRLogicError,
    IllFormedEvents,
    IncompleteOutcomeSet,
    NonUnitarySegment,
    OutsideRange,
    UnknownRegister,
    UnsortedEvents,
)
from .state import EXACT, FLOAT_TOL, X, Z, Basis, born_probabilities, project, resolve_label

FORWARD = "forward"
RETRO = "retro"
CERTAIN = "certain"
GRADED = "graded"

HOLDS = "Holds"
VACUOUS = "Vacuous"
FAILS = "Fails"
PROBABILISTIC = "Probabilistic"


@dataclass(frozen=True)
class Event:
    """``register`` shows ``outcome`` of ``basis`` immediately after step ``at_step``."""

    register: str
    outcome: int
    basis: Basis
    at_step: int

    @classmethod
    def of(cls, register: str, label: str, at_step: int, basis: Basis | None = None) -> Event:
        basis, outcome = resolve_label(label, basis)
        return cls(register, outcome, basis, at_step)

    @property
    def label(self) -> str:
        return self.basis.label(self.outcome)

    @property
    def observable(self) -> tuple[str, Basis, int]:
        return (self.register, self.basis, self.at_step)

    def with_outcome(self, outcome: int) -> Event:
        return Event(self.register, outcome, self.basis, self.at_step)

    def __str__(self) -> str:
        return f"{self.register}@{self.at_step} == {self.label}"


@dataclass(frozen=True)
class Statement:
    premises: tuple[Event, ...]
    conclusion: Event
    mode: str = FORWARD
    claim: str = GRADED
    name: str = ""

    def __post_init__(self) -> None:
        prem = tuple(self.premises) if not isinstance(self.premises, Event) else (self.premises,)
        object.__setattr__(self, "premises", prem)
        if not prem:
            raise ValueError("a statement needs at least one premise")
        if len(set(prem)) != len(prem):
            raise ValueError("premises must be pairwise distinct")
        if self.mode not in (FORWARD, RETRO):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.claim not in (CERTAIN, GRADED):
            raise ValueError(f"unknown claim {self.claim!r}")

    def __str__(self) -> str:
        prem = " and ".join(str(e) for e in self.premises)
        return f"if {prem} then {self.conclusion} [{self.mode}]"


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    detail: str
    defect: object = None


@dataclass(frozen=True)
class Verdict:
    classification: str
    probability: object
    premise_probability: object
    mode: str
    diagnostics: tuple[Diagnostic, ...] = ()
    statement: Statement | None = None

    @property
    def holds(self) -> bool:
        return self.classification == HOLDS

    def diagnostic_kinds(self) -> set[str]:
        return {d.kind for d in self.diagnostics}


# -- numeric helpers ----------------------------------------------------------

def _is_zero(p) -> bool:
    if isinstance(p, QuadAmp):
        return p.is_zero()
    return abs(p) < FLOAT_TOL


def _is_one(p) -> bool:
    if isinstance(p, QuadAmp):
        return p == ONE
    return abs(p - 1.0) < FLOAT_TOL


def _div(a, b):
    return a / b


def _abs(p):
    return abs(p)


def _zero_like(h: History):
    return ZERO if h.mode == EXACT else 0.0


# -- cached transport ---------------------------------------------------------

def _cache(history: History) -> dict:
    c = history.__dict__.get("_logic_cache")
    if c is None:
        c = {}
        object.__setattr__(history, "_logic_cache", c)
    return c


def _check_order(events: Sequence[Event]) -> None:
    for a, b in zip(events, events[1:]):
        if b.at_step < a.at_step:
            raise UnsortedEvents(f"{b} comes before {a}")
    _check_well_formed(events)


def _check_well_formed(events: Iterable[Event]) -> None:
    seen: dict[tuple[str, int], Basis] = {}
    for e in events:
        key = (e.register, e.at_step)
        prev = seen.get(key)
        if prev is not None and prev != e.basis:
            raise IllFormedEvents(
                f"{e.register}@{e.at_step} is read in two bases ({prev.name}, {e.basis.name})"
            )
        seen[key] = e.basis


def _projected(history: History, events: tuple[Event, ...]):
    """State after projecting ``events`` in order (unnormalized)."""
    cache = _cache(history)
    key = ("proj", events)
    hit = cache.get(key)
    if hit is not None:
        return hit
    last = events[-1]
    if len(events) == 1:
        base = history.snapshot(last.at_step)
    else:
        base = _transported(history, events[:-1], last.at_step)
    out = project(base, last.register, last.basis, last.outcome)
    cache[key] = out
    return out


def _transported(history: History, events: tuple[Event, ...], to_step: int):
    """Projected state of ``events`` carried to snapshot ``to_step``."""
    cache = _cache(history)
    key = ("move", events, to_step)
    hit = cache.get(key)
    if hit is not None:
        return hit
    start = events[-1].at_step
    state = _projected(history, events)
    if to_step >= start:
        out = history.evolve(state, start, to_step)
    else:
        out = history.back_evolve(state, start, to_step)
    cache[key] = out
    return out


def chain_probability(history: History, events: Sequence[Event]):
    """Squared norm after inserting each event's projector in time order."""
    events = tuple(events)
    if not events:
        return ONE if history.mode == EXACT else 1.0
    _check_order(events)
    return _projected(history, events).norm_sq()


def _sorted(events: Iterable[Event]) -> tuple[Event, ...]:
    return tuple(sorted(events, key=lambda e: e.at_step))


# -- statements -----------------------------------------------------------------

def classify(probability, premise_probability, claim: str = GRADED) -> str:
    if _is_zero(premise_probability):
        return VACUOUS
    if _is_one(probability):
        return HOLDS
    if claim == CERTAIN or _is_zero(probability):
        return FAILS
    return PROBABILISTIC


def forward_probability(history: History, premises: Sequence[Event], conclusion: Event):
    """Conditional probability with the conclusion read at its own time slot.

    The denominator sums the chain over both conclusion outcomes rather than
    using the premise chain alone.  Without collapse steps the two agree; with
    a logged collapse between premise and conclusion only the summed form
    conditions both sides on the same recorded outcome.  ``None`` when the
    premises cannot co-occur with the logged collapses.
    """
    prem = _sorted(premises)
    weights = []
    for o in (0, 1):
        seq = _sorted(prem + (conclusion.with_outcome(o),))
        weights.append(chain_probability(history, seq))
    total = weights[0] + weights[1]
    if _is_zero(total):
        return None
    return _div(weights[conclusion.outcome], total)


def retro_probability(history: History, premises: Sequence[Event], conclusion: Event):
    """Born probability of the conclusion in the premise-projected state, moved to its step.

    ``None`` when transport through a logged collapse annihilates the state:
    the premises are then inconsistent with the recorded collapse outcome.
    """
    prem = _sorted(premises)
    _check_order(prem)
    cache = _cache(history)
    key = ("born", prem, conclusion.at_step, conclusion.register, conclusion.basis)
    probs = cache.get(key)
    if probs is None:
        state = _transported(history, prem, conclusion.at_step)
        probs = None if _is_zero(state.norm_sq()) else born_probabilities(
            state, conclusion.register, conclusion.basis)
        cache[key] = probs = probs or {}
    return probs.get(conclusion.outcome)


def evaluate_statement(history: History, stmt: Statement, diagnostics: bool = True) -> Verdict:
    prem = _sorted(stmt.premises)
    _check_well_formed(prem + (stmt.conclusion,))
    pp = chain_probability(history, prem)
    if _is_zero(pp):
        return Verdict(VACUOUS, _zero_like(history), pp, stmt.mode, (), stmt)
    if stmt.mode == FORWARD:
        p = forward_probability(history, prem, stmt.conclusion)
    else:
        p = retro_probability(history, prem, stmt.conclusion)
    if p is None:
        zero = _zero_like(history)
        return Verdict(VACUOUS, zero, zero, stmt.mode, (), stmt)
    diags: list[Diagnostic] = []
    if diagnostics:
        diags.extend(_pair_diagnostics(history, prem, stmt.conclusion))
        if stmt.mode == RETRO:
            diags.extend(_erased_records(history, prem))
    return Verdict(classify(p, pp, stmt.claim), p, pp, stmt.mode, tuple(diags), stmt)


def _pair_diagnostics(history: History, prem: tuple[Event, ...], conclusion: Event):
    out = []
    for i, a in enumerate(prem):
        for b in prem[i + 1:]:
            try:
                ok, defect = conjunction_compatible(history, a, b)
            except FRLogicError:
                continue
            if not ok:
                out.append(Diagnostic("IncompatiblePremises", f"{a} / {b}", defect))
    for a in prem:
        if a == conclusion:
            continue
        try:
            ok, defect = conjunction_compatible(history, a, conclusion)
        except FRLogicError:
            continue
        if not ok:
            out.append(Diagnostic("DisturbedConclusion", f"{a} / {conclusion}", defect))
    return out


def _erased_records(history: History, prem: tuple[Event, ...]):
    """Premises that the later premises' back-evolved state no longer certifies."""
    out = []
    last = prem[-1].at_step
    for e in prem:
        if e.at_step == last:
            continue
        try:
            state = _transported(history, prem, e.at_step)
            p = born_probabilities(state, e.register, e.basis)[e.outcome]
        except (NonUnitarySegment, OutsideRange, UnknownRegister, ZeroDivisionError):
            continue
        if not _is_one(p):
            out.append(Diagnostic("RecordErased", f"{e} holds with probability {p}", p))
    return out


def conjunction_premise_check(history: History, premises: Sequence[Event],
                              conclusion: Event) -> Verdict:
    """Multi-premise statement in the retro reading, with every pairwise diagnostic."""
    stmt = Statement(tuple(premises), conclusion, RETRO, GRADED)
    return evaluate_statement(history, stmt, diagnostics=True)


# -- disturbance and compatibility ----------------------------------------------

def disturbance_defect(history: History, earlier: tuple[str, Basis, int], later: Event,
                       given: Sequence[Event] = ()):
    """|Pr(later | given) - same with the earlier observable read out|."""
    register, basis, step = earlier
    if step > later.at_step:
        raise UnsortedEvents("the earlier observable must not come after the later event")
    given = _sorted(given)
    base = chain_probability(history, given) if given else None
    if base is not None and _is_zero(base):
        return _zero_like(history)
    undisturbed = chain_probability(history, _sorted(given + (later,)))
    decohered = _zero_like(history)
    for o in (0, 1):
        e = Event(register, o, basis, step)
        decohered = decohered + chain_probability(history, _sorted(given + (e, later)))
    diff = undisturbed - decohered
    if base is not None:
        diff = _div(diff, base)
    return _abs(diff)


def conjunction_compatible(history: History, e1: Event, e2: Event) -> tuple[bool, object]:
    """Compatible iff reading the earlier event's observable leaves the later one alone."""
    earlier, later = (e1, e2) if e1.at_step <= e2.at_step else (e2, e1)
    if earlier.at_step == later.at_step and earlier.register != later.register:
        return True, _zero_like(history)
    defect = disturbance_defect(history, earlier.observable, later)
    return _is_zero(defect), defect


def violation_fraction(c_a, c_b):
    """|c_a|^2 / (|c_a|^2 + |c_b|^2)."""
    wa = c_a * c_a.conjugate() if not isinstance(c_a, (int, float)) else c_a * c_a
    wb = c_b * c_b.conjugate() if not isinstance(c_b, (int, float)) else c_b * c_b
    total = wa + wb
    if (isinstance(total, QuadAmp) and total.is_zero()) or total == 0:
        raise BothZero("both amplitudes are zero")
    if isinstance(total, complex):
        return wa.real / total.real
    return wa / total


# -- transitivity ---------------------------------------------------------------

@dataclass(frozen=True)
class TransitivityReport:
    first: Verdict
    second: Verdict
    combined: Statement
    combined_verdicts: dict
    combined_probability: object
    transitivity_valid: bool
    violation_fraction: object
    shift_fraction: object
    exhibit: dict = field(default_factory=dict)


def check_transitivity(history: History, s1: Statement, s2: Statement) -> TransitivityReport:
    """Chain ``s1`` into ``s2`` and compare the combined statement with ``s2``.

    The combined statement keeps ``s1``'s premises and ``s2``'s conclusion.
    Chaining is valid when the combined probability equals ``s2``'s own
    probability; the violation fraction is their absolute difference.
    """
    if len(s2.premises) != 1 or s2.premises[0] != s1.conclusion:
        raise ChainMismatch(f"{s1.name or s1} does not feed {s2.name or s2}")
    v1 = evaluate_statement(history, s1)
    v2 = evaluate_statement(history, s2)
    name = f"{s1.name}*{s2.name}" if s1.name and s2.name else ""
    combined = Statement(s1.premises, s2.conclusion, s2.mode, GRADED, name)
    verdicts = {}
    for mode in (FORWARD, RETRO):
        stmt = Statement(s1.premises, s2.conclusion, mode, GRADED, name)
        try:
            verdicts[mode] = evaluate_statement(history, stmt)
        except FRLogicError as exc:
            verdicts[mode] = exc
    main = verdicts[s2.mode]
    if isinstance(main, Exception):
        raise main
    p = main.probability
    violation = _abs(v2.probability - p)
    pair = _sorted(s1.premises + s2.premises)
    try:
        denom = chain_probability(history, s2.premises)
        shift = (ONE if history.mode == EXACT else 1.0) - _div(chain_probability(history, pair), denom)
    except (FRLogicError, ZeroDivisionError):
        shift = None
    exhibit = {
        "premises": [str(e) for e in s1.premises],
        "chain": [str(s1.conclusion), str(s2.conclusion)],
        "expected": v2.probability,
        "actual": p,
    }
    return TransitivityReport(v1, v2, combined, verdicts, p, _is_zero(violation),
                              violation, shift, exhibit)


# -- OR composition ------------------------------------------------------------

@dataclass(frozen=True)
class ORReport:
    branches: tuple[Verdict, ...]
    weights: tuple
    expected: object
    merged: Verdict
    divergent: bool


def or_composition_check(history: History, branches: Sequence[Statement],
                         merged: Statement) -> ORReport:
    """Compare the premise-weighted mix of branch verdicts with the merged statement."""
    if not branches:
        raise IncompleteOutcomeSet("no branches given")
    obs = None
    seen = set()
    for b in branches:
        if len(b.premises) != 1:
            raise IncompleteOutcomeSet("each branch needs exactly one premise")
        if b.conclusion != merged.conclusion:
            raise ChainMismatch("branches must share the merged conclusion")
        e = b.premises[0]
        if obs is None:
            obs = e.observable
        elif e.observable != obs:
            raise IncompleteOutcomeSet("branch premises read different observables")
        seen.add(e.outcome)
    register, basis, step = obs
    for o in (0, 1):
        if o not in seen:
            w = chain_probability(history, [Event(register, o, basis, step)])
            if not _is_zero(w):
                raise IncompleteOutcomeSet(
                    f"outcome {basis.label(o)} of {register}@{step} is missing and has weight {w}"
                )
    verdicts = tuple(evaluate_statement(history, b, diagnostics=False) for b in branches)
    weights = tuple(v.premise_probability for v in verdicts)
    total = _zero_like(history)
    mix = _zero_like(history)
    for v, w in zip(verdicts, weights):
        total = total + w
        if v.classification != VACUOUS:
            mix = mix + w * v.probability
    expected = _div(mix, total) if not _is_zero(total) else _zero_like(history)
    mv = evaluate_statement(history, merged, diagnostics=False)
    return ORReport(verdicts, weights, expected, mv, not _is_zero(mv.probability - expected))


# -- statement mining ----------------------------------------------------------

@dataclass(frozen=True)
class Mined:
    statement: Statement
    verdict: Verdict


def all_events(history: History, bases: Sequence[Basis] = (Z, X)) -> list[Event]:
    out = []
    for k in history.step_indices():
        for reg in history.registers_at(k):
            for b in bases:
                for o in (0, 1):
                    out.append(Event(reg, o, b, k))
    return out


def mine_statements(history: History, bases: Sequence[Basis] = (Z, X),
                    modes: Sequence[str] = (FORWARD, RETRO)) -> list[Mined]:
    """Every single-premise statement that Holds, in either reading."""
    events = all_events(history, bases)
    found = []
    for p in events:
        pp = chain_probability(history, (p,))
        if _is_zero(pp):
            continue
        for c in events:
            if (c.register == p.register and c.at_step == p.at_step
                    and c.basis != p.basis):
                continue
            for mode in modes:
                stmt = Statement((p,), c, mode, GRADED)
                try:
                    v = evaluate_statement(history, stmt, diagnostics=False)
                except (NonUnitarySegment, OutsideRange):
                    continue
                if v.classification == HOLDS:
                    found.append(Mined(stmt, v))
    return found


def mined_contains(mined: Sequence[Mined], stmt: Statement, any_mode: bool = True) -> bool:
    for m in mined:
        s = m.statement
        if s.premises == stmt.premises and s.conclusion == stmt.conclusion:
            if any_mode or s.mode == stmt.mode:
                return True
    return False
