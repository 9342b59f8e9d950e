"""Bundled scenarios: the four-step two-friend experiment and its variants."""

from __future__ import annotations

import math
from fractions import Fraction

from .amplitude import INV_SQRT2, INV_SQRT3, ONE, ZERO, QuadAmp
from .engine import ABSORB, PRESERVE, MeasurementStep
from .errors import NotNormalized
from .logic import CERTAIN, FORWARD, GRADED, RETRO, Event, Statement
from .scenario import (
    CompatibleCheck,
    InitialState,
    MineCheck,
    OrCheck,
    Scenario,
    StatementSpec,
    Term,
    TransitivityCheck,
)
from .state import EXACT, FLOAT, X, Z

E = Event.of
HALF = QuadAmp(Fraction(1, 2))


def _stmt(name, premises, conclusion, mode=FORWARD, claim=GRADED, expect=None, p=None):
    if isinstance(premises, Event):
        premises = (premises,)
    return StatementSpec(Statement(tuple(premises), conclusion, mode, claim, name), expect, p)


def _absorb(k, agent, target, basis=Z, collapse=None):
    return MeasurementStep(k, agent, (target,), basis, ABSORB, collapse)


def _preserve(k, agent, target, basis=X, collapse=None):
    return MeasurementStep(k, agent, (target,), basis, PRESERVE, collapse)


# -- two friends, two Wigners ---------------------------------------------------

def fr_initial(phase: float = 0.0) -> InitialState:
    return InitialState(
        ("barred", "unbarred"),
        (
            Term(("up", "down"), INV_SQRT3),
            Term(("down", "up"), INV_SQRT3, phase),
            Term(("down", "down"), INV_SQRT3, phase),
        ),
    )


def fr_steps(collapse1=None, collapse2=None) -> tuple[MeasurementStep, ...]:
    return (
        _absorb(1, "Fbar", "barred", collapse=collapse1),
        _absorb(2, "F", "unbarred", collapse=collapse2),
        _preserve(3, "Wbar", "Fbar"),
        _preserve(4, "W", "F"),
    )


def fr_statements(expect=(True, True, True, True), claim=CERTAIN):
    """Statements 1', 2, 3, 4 as certainty claims."""
    names = ("S1p", "S2", "S3", "S4")
    stmts = (
        ((E("W", "-", 4), E("Wbar", "-", 3)), E("Wbar", "-", 3), FORWARD),
        ((E("Wbar", "-", 3),), E("F", "up", 2), RETRO),
        ((E("F", "up", 2),), E("Fbar", "down", 1), RETRO),
        ((E("Fbar", "down", 1),), E("W", "+", 4), FORWARD),
    )
    out = []
    for name, (prem, concl, mode), exp in zip(names, stmts, expect):
        if exp is True:
            out.append(_stmt(name, prem, concl, mode, claim, "Holds", ONE))
        elif exp is None:
            continue
        else:
            out.append(_stmt(name, prem, concl, mode, claim, exp[0], exp[1]))
    return tuple(out)


def backward_statement() -> StatementSpec:
    return _stmt("Back", E("W", "-", 4), E("Fbar", "up", 1), RETRO, CERTAIN, "Holds", ONE)


def fr_full() -> Scenario:
    checks = (
        TransitivityCheck("S1p", "S2", "violated", HALF),
        TransitivityCheck("S2", "S3", "violated", HALF),
        TransitivityCheck("S3", "S4", "violated", HALF),
        CompatibleCheck(E("Wbar", "-", 3), E("Fbar", "down", 1), "incompatible"),
        CompatibleCheck(E("W", "-", 4), E("F", "up", 2), "incompatible"),
        CompatibleCheck(E("F", "up", 2), E("Wbar", "-", 3), "compatible"),
        MineCheck(("S2", "S3", "S4")),
    )
    return Scenario(
        "fr_full", fr_initial(), fr_steps(), fr_statements(), checks, ("Wbar", "W"),
        description="two friends measure z, two Wigners read their labs in x",
    )


def fr_backward() -> Scenario:
    """The inference from W's result back to the barred friend's result."""
    return Scenario(
        "fr_backward", fr_initial(), fr_steps(), (backward_statement(),),
        (MineCheck(("Back",)),), ("Fbar", "W"),
        description="W reads minus, so the barred friend must have seen up",
    )


def fr_exchange() -> Scenario:
    """fr_full plus the Wigners reading each other's records."""
    base = fr_full()
    steps = base.steps + (_preserve(5, "W", "Wbar"), _preserve(6, "Wbar", "W"))
    return Scenario(
        "fr_exchange", base.initial, steps, base.statements,
        base.checks[:3], ("Wbar", "W"),
        description="fr_full followed by the Wigners exchanging results",
    )


def fr_sub34() -> Scenario:
    initial = InitialState(
        ("barred", "unbarred"),
        (Term(("down", "up"), INV_SQRT2), Term(("down", "down"), INV_SQRT2)),
    )
    statements = (
        _stmt("S3", E("F", "up", 2), E("Fbar", "down", 1), RETRO, CERTAIN, "Holds", ONE),
        _stmt("S4m", E("Fbar", "down", 1), E("F", "up", 2), FORWARD, GRADED, "Probabilistic", HALF),
        _stmt("S3L", E("F", "up", 2), E("W", "+", 4), FORWARD, GRADED, "Probabilistic", HALF),
        _stmt("S3R", E("F", "down", 2), E("W", "+", 4), FORWARD, GRADED, "Probabilistic", HALF),
        _stmt("S4", E("Fbar", "down", 1), E("W", "+", 4), FORWARD, CERTAIN, "Holds", ONE),
    )
    checks = (
        TransitivityCheck("S3", "S4m", "violated", HALF),
        OrCheck(("S3L", "S3R"), "S4", "divergent"),
    )
    return Scenario("fr_sub34", initial, fr_steps(), statements, checks, ("Wbar", "W"),
                    description="the two down-barred terms alone")


def fr_phase(phi: float) -> Scenario:
    p = 1.0 / (3.0 - 2.0 * math.cos(phi))
    expect = "Holds" if abs(p - 1.0) < 1e-12 else "Probabilistic"
    statements = (
        _stmt("S2", E("Wbar", "-", 3), E("F", "up", 2), RETRO, GRADED, expect, p),
    )
    return Scenario("fr_phase", fr_initial(phi), fr_steps(), statements, (), ("Wbar", "W"),
                    mode=FLOAT, description=f"relative phase {phi!r} on the down-barred terms")


def fr_collapse_variants() -> list[Scenario]:
    fails_half = ("Fails", HALF)
    fails_zero = ("Fails", ZERO)
    vac = ("Vacuous", ZERO)
    return [
        Scenario("fr_collapse_up", fr_initial(), fr_steps("up"),
                 fr_statements((None, fails_zero, vac, vac)), (), ("Wbar", "W"),
                 description="collapse onto barred up at step 1"),
        Scenario("fr_collapse_down", fr_initial(), fr_steps("down"),
                 fr_statements((None, fails_half, True, True)), (), ("Wbar", "W"),
                 description="collapse onto barred down at step 1"),
        Scenario("fr_collapse_down_down", fr_initial(), fr_steps("down", "down"),
                 fr_statements((None, fails_zero, vac, fails_half)), (), ("Wbar", "W"),
                 description="collapse onto barred down, then unbarred down"),
    ]


# -- referees --------------------------------------------------------------------

def _referee(name, bar_basis, basis, premise, conclusion):
    steps = (_absorb(1, "Rbar", "barred", bar_basis), _absorb(2, "R", "unbarred", basis))
    statements = (_stmt("Ref", premise, conclusion, FORWARD, CERTAIN, "Holds", ONE),)
    return Scenario(name, fr_initial(), steps, statements, (), ("Rbar", "R"),
                    description="referees read the two spins directly")


def referee_math_statements() -> list[Scenario]:
    return [
        _referee("referee_zz", Z, Z, E("R", "up", 2), E("Rbar", "down", 2)),
        _referee("referee_zx", X, Z, E("Rbar", "-", 2), E("R", "up", 2)),
        _referee("referee_xz", Z, X, E("Rbar", "down", 2), E("R", "+", 2)),
    ]


def referee_fr_observation() -> Scenario:
    steps = (
        _absorb(1, "Fbar", "barred"),
        _absorb(2, "F", "unbarred"),
        _preserve(3, "R", "F", Z),
        _preserve(4, "Wbar", "Fbar"),
        _preserve(5, "Rbar", "Wbar"),
    )
    statements = (
        _stmt("RefObs", E("Rbar", "-", 5), E("R", "up", 5), FORWARD, CERTAIN, "Holds", ONE),
        _stmt("S2r", E("Wbar", "-", 4), E("F", "up", 2), RETRO, CERTAIN, "Holds", ONE),
    )
    return Scenario("referee_fr_observation", fr_initial(), steps, statements, (),
                    ("Rbar", "R"), description="referees watch F and the barred Wigner")


# -- three spins ----------------------------------------------------------------

def abc(c_a, c_b, scale=Fraction(1), name: str = "abc") -> Scenario:
    """Weight ``c_a`` on up-up-up and ``c_b`` on down-up-down, times ``sqrt(scale)``."""
    c_a, c_b = QuadAmp(c_a) if not isinstance(c_a, QuadAmp) else c_a, \
        QuadAmp(c_b) if not isinstance(c_b, QuadAmp) else c_b
    wa = c_a * c_a * QuadAmp(scale)
    wb = c_b * c_b * QuadAmp(scale)
    if wa + wb != ONE:
        raise NotNormalized(ONE - wa - wb)
    terms = [Term(("up", "up", "up"), c_a)]
    if not c_b.is_zero():
        terms.append(Term(("down", "up", "down"), c_b))
    initial = InitialState(("a", "b", "c"), tuple(terms), Fraction(scale))
    steps = (_absorb(1, "A", "a"), _absorb(2, "B", "b"), _absorb(3, "C", "c"))
    b_expect = "Holds" if wa == ONE else "Probabilistic"
    statements = (
        _stmt("A", E("A", "up", 1), E("B", "up", 2), FORWARD, CERTAIN, "Holds", ONE),
        _stmt("T", E("A", "up", 1), E("C", "up", 3), FORWARD, CERTAIN, "Holds", ONE),
        _stmt("B", E("B", "up", 2), E("C", "up", 3), FORWARD, GRADED, b_expect, wa),
        _stmt("Cp", (E("A", "up", 1), E("B", "up", 2)), E("C", "up", 3), RETRO, GRADED, "Holds", ONE),
    )
    checks = [TransitivityCheck("A", "B", "valid" if wb.is_zero() else "violated", wb)]
    if wb.is_zero():
        statements += (_stmt("AL", E("A", "up", 1), E("C", "up", 3), FORWARD, GRADED, "Holds", ONE),)
        checks.append(OrCheck(("AL",), "B", "consistent"))
    return Scenario(name, initial, steps, statements, tuple(checks), ("A", "B", "C"),
                    description="three spins, three agents, one branch shifted")


def abc_same_c() -> Scenario:
    initial = InitialState(
        ("a", "b", "c"),
        (Term(("up", "up", "up"), INV_SQRT2), Term(("down", "up", "up"), INV_SQRT2)),
    )
    steps = (_absorb(1, "A", "a"), _absorb(2, "B", "b"), _absorb(3, "C", "c"))
    statements = (
        _stmt("AL", E("A", "up", 1), E("C", "up", 3), FORWARD, GRADED, "Holds", ONE),
        _stmt("AR", E("A", "down", 1), E("C", "up", 3), FORWARD, GRADED, "Holds", ONE),
        _stmt("B", E("B", "up", 2), E("C", "up", 3), FORWARD, GRADED, "Holds", ONE),
    )
    checks = (OrCheck(("AL", "AR"), "B", "consistent"),)
    return Scenario("abc_same_c", initial, steps, statements, checks, ("A", "C"),
                    description="both branches end with C up")


def abc_library() -> list[Scenario]:
    return [
        abc(INV_SQRT2, INV_SQRT2, name="abc_equal"),
        abc(1, 3, Fraction(1, 10), name="abc_tenth"),
        abc(1, 0, name="abc_single"),
        abc_same_c(),
    ]


def bundled() -> list[Scenario]:
    """Every scenario shipped in the ``scenarios/`` corpus."""
    return (
        [fr_full(), fr_backward(), fr_exchange(), fr_sub34()]
        + fr_collapse_variants()
        + abc_library()
        + referee_math_statements()
        + [referee_fr_observation(), fr_phase(math.pi / 2)]
    )


def by_name(name: str) -> Scenario:
    for s in bundled():
        if s.name == name:
            return s
    raise KeyError(name)
