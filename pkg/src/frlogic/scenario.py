"""Scenario definitions and the suite runner.

A :class:`Scenario` is plain data: an initial state written as labelled
terms, the measurement steps, named statements with optional expected
verdicts, and extra checks.  :func:`evaluate` runs it and compares every
expectation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Sequence

from .amplitude import ONE, QuadAmp
from .engine import History, MeasurementStep, joint_distribution, resolve_steps, run_experiment
from .errors import BasisError, FRLogicError
from .logic import (
    Event,
    Mined,
    ORReport,
    Statement,
    TransitivityReport,
    Verdict,
    check_transitivity,
    conjunction_compatible,
    evaluate_statement,
    mine_statements,
    mined_contains,
    or_composition_check,
)
from .state import EXACT, FLOAT, FLOAT_TOL, StateVector, make_state


@dataclass(frozen=True)
class Term:
    labels: tuple[str, ...]
    amp: QuadAmp
    phase: float = 0.0


@dataclass(frozen=True)
class InitialState:
    """``sqrt(scale) * sum(amp * exp(i*phase) |labels>)``."""

    registers: tuple[str, ...]
    terms: tuple[Term, ...]
    scale: Fraction = Fraction(1)

    @property
    def needs_float(self) -> bool:
        return any(not _exact_phase(t.phase) for t in self.terms)

    def build(self, mode: str = EXACT) -> StateVector:
        pairs = []
        for t in self.terms:
            if mode == EXACT:
                sign = _exact_phase(t.phase)
                if sign is None:
                    raise BasisError(f"phase {t.phase} needs float mode")
                pairs.append((t.labels, t.amp * sign))
            else:
                amp = complex(float(t.amp) * math.sqrt(self.scale)) * cmath.exp(1j * t.phase)
                pairs.append((t.labels, amp))
        if mode == EXACT:
            return make_state(self.registers, pairs, mode=EXACT, scale=QuadAmp(self.scale))
        return make_state(self.registers, pairs, mode=FLOAT)


def _exact_phase(phi: float) -> int | None:
    r = math.remainder(phi, 2 * math.pi)
    if abs(r) < 1e-15:
        return 1
    if abs(abs(r) - math.pi) < 1e-15:
        return -1
    return None


@dataclass(frozen=True)
class StatementSpec:
    statement: Statement
    expect: str | None = None
    expect_p: Any = None

    @property
    def name(self) -> str:
        return self.statement.name


@dataclass(frozen=True)
class TransitivityCheck:
    first: str
    second: str
    expect: str | None = None  # "valid" | "violated"
    violation: Any = None


@dataclass(frozen=True)
class CompatibleCheck:
    first: Event
    second: Event
    expect: str | None = None  # "compatible" | "incompatible"


@dataclass(frozen=True)
class OrCheck:
    branches: tuple[str, ...]
    merged: str
    expect: str | None = None  # "divergent" | "consistent"


@dataclass(frozen=True)
class MineCheck:
    includes: tuple[str, ...] = ()


Check = Any


@dataclass(frozen=True)
class Scenario:
    name: str
    initial: InitialState
    steps: tuple[MeasurementStep, ...]
    statements: tuple[StatementSpec, ...] = ()
    checks: tuple[Check, ...] = ()
    joint: tuple[str, ...] = ()
    mode: str = EXACT
    description: str = ""

    def statement(self, name: str) -> Statement:
        for spec in self.statements:
            if spec.name == name:
                return spec.statement
        raise KeyError(name)

    def spec(self, name: str) -> StatementSpec:
        for spec in self.statements:
            if spec.name == name:
                return spec
        raise KeyError(name)

    def build_initial(self, mode: str | None = None) -> StateVector:
        return self.initial.build(mode or self.mode)

    def run(self, mode: str | None = None, seed: int | None = None) -> History:
        return run_experiment(self.build_initial(mode), self.steps, seed=seed)

    def with_collapse(self, step: int, outcome: str) -> Scenario:
        steps = []
        found = False
        for s in self.steps:
            if s.index == step:
                s = replace(s, collapse=outcome)
                found = True
            steps.append(s)
        if not found:
            raise KeyError(f"scenario {self.name!r} has no step {step}")
        return replace(self, steps=tuple(steps))

    def with_mode(self, mode: str) -> Scenario:
        return replace(self, mode=mode)

    @property
    def resolved_steps(self) -> tuple[MeasurementStep, ...]:
        return resolve_steps(self.steps)


# -- results --------------------------------------------------------------------

@dataclass
class StatementResult:
    spec: StatementSpec
    verdict: Verdict | None
    error: str | None
    match: bool


@dataclass
class CheckResult:
    check: Check
    kind: str
    outcome: str | None
    match: bool
    detail: Any = None
    error: str | None = None


@dataclass
class ScenarioResult:
    scenario: Scenario
    mode: str
    history: History | None
    statements: list[StatementResult] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)
    joint: dict | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return (
            self.error is None
            and all(r.match for r in self.statements)
            and all(c.match for c in self.checks)
        )

    def verdict_table(self) -> list[tuple[str, str | None, str]]:
        out = []
        for r in self.statements:
            cls = r.verdict.classification if r.verdict else None
            p = str(r.verdict.probability) if r.verdict else (r.error or "")
            out.append((r.spec.name, cls, p))
        return out


def close(a, b, tol: float = FLOAT_TOL) -> bool:
    if isinstance(a, QuadAmp) and isinstance(b, QuadAmp):
        return a == b
    return abs(_as_float(a) - _as_float(b)) < tol


def _as_float(x) -> float:
    if isinstance(x, complex):
        return x.real
    return float(x)


def evaluate(scenario: Scenario, mode: str | None = None, seed: int | None = None,
             checks: bool = True) -> ScenarioResult:
    """Run ``scenario`` and compare every expectation; ``checks=False`` skips the check clauses."""
    mode = mode or scenario.mode
    try:
        history = scenario.run(mode, seed)
    except FRLogicError as exc:
        return ScenarioResult(scenario, mode, None, error=f"{type(exc).__name__}: {exc}")
    result = ScenarioResult(scenario, mode, history)
    verdicts: dict[str, Verdict] = {}
    for spec in scenario.statements:
        try:
            v = evaluate_statement(history, spec.statement)
        except FRLogicError as exc:
            result.statements.append(
                StatementResult(spec, None, f"{type(exc).__name__}: {exc}", False)
            )
            continue
        verdicts[spec.name] = v
        match = (spec.expect is None or v.classification == spec.expect) and (
            spec.expect_p is None or close(v.probability, spec.expect_p)
        )
        result.statements.append(StatementResult(spec, v, None, match))
    mined: list[Mined] | None = None
    for check in scenario.checks if checks else ():
        try:
            if isinstance(check, MineCheck):
                if mined is None:
                    mined = mine_statements(history)
                result.checks.append(_mine_result(scenario, check, mined))
            else:
                result.checks.append(_run_check(scenario, history, check))
        except (FRLogicError, KeyError) as exc:
            result.checks.append(
                CheckResult(check, _kind(check), None, False, error=f"{type(exc).__name__}: {exc}")
            )
    if scenario.joint:
        try:
            result.joint = joint_distribution(history.final, scenario.joint)
        except FRLogicError as exc:
            result.error = f"{type(exc).__name__}: {exc}"
    return result


def _kind(check) -> str:
    return {
        TransitivityCheck: "transitivity",
        CompatibleCheck: "compatible",
        OrCheck: "or",
        MineCheck: "mine",
    }[type(check)]


def _run_check(scenario: Scenario, history: History, check) -> CheckResult:
    if isinstance(check, TransitivityCheck):
        rep: TransitivityReport = check_transitivity(
            history, scenario.statement(check.first), scenario.statement(check.second)
        )
        outcome = "valid" if rep.transitivity_valid else "violated"
        match = (check.expect is None or check.expect == outcome) and (
            check.violation is None or close(rep.violation_fraction, check.violation)
        )
        return CheckResult(check, "transitivity", outcome, match, rep)
    if isinstance(check, CompatibleCheck):
        ok, defect = conjunction_compatible(history, check.first, check.second)
        outcome = "compatible" if ok else "incompatible"
        return CheckResult(check, "compatible", outcome,
                           check.expect is None or check.expect == outcome, defect)
    if isinstance(check, OrCheck):
        rep: ORReport = or_composition_check(
            history, [scenario.statement(n) for n in check.branches], scenario.statement(check.merged)
        )
        outcome = "divergent" if rep.divergent else "consistent"
        return CheckResult(check, "or", outcome, check.expect is None or check.expect == outcome, rep)
    raise TypeError(f"unknown check {check!r}")


def _mine_result(scenario: Scenario, check: MineCheck, mined: list[Mined]) -> CheckResult:
    missing = [n for n in check.includes if not mined_contains(mined, scenario.statement(n))]
    outcome = "complete" if not missing else "missing " + ",".join(missing)
    return CheckResult(check, "mine", outcome, not missing, {"count": len(mined), "missing": missing,
                                                             "mined": mined})
