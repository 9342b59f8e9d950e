"""Exact simulation of agents measuring each other, and the logic of their inferences."""

from .amplitude import QuadAmp, parse_amplitude
from .engine import History, MeasurementStep, back_evolve, joint_distribution, run_experiment
from .logic import (
    Event,
    Statement,
    Verdict,
    chain_probability,
    check_transitivity,
    conjunction_compatible,
    disturbance_defect,
    evaluate_statement,
    mine_statements,
    or_composition_check,
    violation_fraction,
)
from .scenario import Scenario, evaluate
from .scenarios import bundled, by_name
from .state import X, Z, Basis, StateVector, make_state

__all__ = [
    "QuadAmp", "parse_amplitude",
    "History", "MeasurementStep", "back_evolve", "joint_distribution", "run_experiment",
    "Event", "Statement", "Verdict", "chain_probability", "check_transitivity",
    "conjunction_compatible", "disturbance_defect", "evaluate_statement", "mine_statements",
    "or_composition_check", "violation_fraction",
    "Scenario", "evaluate", "bundled", "by_name",
    "X", "Z", "Basis", "StateVector", "make_state",
]
