from __future__ import annotations

from fractions import Fraction

import pytest

from frlogic.amplitude import INV_SQRT2, ONE, ZERO, QuadAmp, sqrt_of_rational
from frlogic.engine import MeasurementStep, run_experiment
from frlogic.errors import BothZero, ChainMismatch, IllFormedEvents, IncompleteOutcomeSet, UnsortedEvents
from frlogic.logic import (
    CERTAIN,
    FAILS,
    FORWARD,
    HOLDS,
    PROBABILISTIC,
    RETRO,
    VACUOUS,
    Event,
    Statement,
    chain_probability,
    check_transitivity,
    classify,
    conjunction_compatible,
    conjunction_premise_check,
    disturbance_defect,
    evaluate_statement,
    mine_statements,
    mined_contains,
    or_composition_check,
    violation_fraction,
)
from frlogic.scenarios import abc_library, by_name
from frlogic.state import Z, make_state

HALF = QuadAmp(Fraction(1, 2))
SIXTH = QuadAmp(Fraction(1, 6))


def E(register, label, step):
    return Event.of(register, label, step)


@pytest.fixture(scope="module")
def fr():
    sc = by_name("fr_full")
    return sc, sc.run()


@pytest.fixture(scope="module")
def abc_eq():
    sc = {s.name: s for s in abc_library()}["abc_equal"]
    return sc, sc.run()


class TestEvent:
    def test_label_picks_basis(self):
        assert E("W", "-", 4).basis.kind == "x"
        assert E("F", "up", 2).basis.kind == "z"
        assert str(E("W", "minus", 4)) == "W@4 == minus"

    def test_premises_distinct(self):
        with pytest.raises(ValueError):
            Statement((E("F", "up", 2), E("F", "up", 2)), E("W", "+", 4))


class TestChain:
    def test_fbar_down(self, fr):
        _, h = fr
        assert chain_probability(h, [E("Fbar", "down", 1)]) == QuadAmp(Fraction(2, 3))

    def test_f_up_then_wbar_minus(self, fr):
        _, h = fr
        assert chain_probability(h, [E("F", "up", 2), E("Wbar", "-", 3)]) == SIXTH

    def test_wbar_minus_alone(self, fr):
        _, h = fr
        assert chain_probability(h, [E("Wbar", "-", 3)]) == SIXTH

    def test_unsorted(self, fr):
        _, h = fr
        with pytest.raises(UnsortedEvents):
            chain_probability(h, [E("Wbar", "-", 3), E("F", "up", 2)])

    def test_same_register_two_bases(self, fr):
        _, h = fr
        with pytest.raises(IllFormedEvents):
            chain_probability(h, [E("F", "up", 2), E("F", "+", 2)])


class TestStatements:
    def test_classify(self):
        assert classify(ONE, HALF) == HOLDS
        assert classify(ZERO, ZERO) == VACUOUS
        assert classify(HALF, HALF, CERTAIN) == FAILS
        assert classify(HALF, HALF) == PROBABILISTIC
        assert classify(ZERO, HALF) == FAILS

    @pytest.mark.parametrize("name, premise_p", [("S1p", Fraction(1, 12)), ("S2", Fraction(1, 6)),
                                                  ("S3", Fraction(1, 3)), ("S4", Fraction(2, 3))])
    def test_fr_statements_hold(self, fr, name, premise_p):
        sc, h = fr
        v = evaluate_statement(h, sc.statement(name))
        assert v.classification == HOLDS and v.probability == ONE
        assert v.premise_probability == QuadAmp(premise_p)

    def test_statement_b_is_half(self, abc_eq):
        sc, h = abc_eq
        v = evaluate_statement(h, sc.statement("B"))
        assert v.classification == PROBABILISTIC and v.probability == HALF

    def test_self_implication(self, fr):
        _, h = fr
        v = evaluate_statement(h, Statement((E("W", "-", 4),), E("W", "-", 4)))
        assert v.classification == HOLDS

    def test_forward_conclusion_before_premise(self, fr):
        _, h = fr
        # reading F's record before Wbar: F up is certain given Wbar minus
        v = evaluate_statement(h, Statement((E("Wbar", "-", 3),), E("F", "up", 2), FORWARD))
        assert v.probability == ONE

    def test_vacuous_after_collapse(self):
        sc = by_name("fr_collapse_up")
        v = evaluate_statement(sc.run(), sc.statement("S4"))
        assert v.classification == VACUOUS and v.premise_probability == ZERO

    def test_premise_ruled_out_by_later_collapse(self):
        sc = by_name("fr_collapse_down")
        h = sc.run()
        stmt = Statement((E("barred", "up", 0),), E("Fbar", "up", 1))
        for mode in (FORWARD, RETRO):
            v = evaluate_statement(h, Statement(stmt.premises, stmt.conclusion, mode))
            assert v.classification == VACUOUS


class TestDefects:
    def test_conditional_defect(self, fr):
        _, h = fr
        d = disturbance_defect(h, ("F", Z, 2), E("W", "+", 4), given=(E("Fbar", "down", 1),))
        assert d == HALF

    def test_zero_defect(self, fr):
        _, h = fr
        assert disturbance_defect(h, ("F", Z, 2), E("Wbar", "-", 3)) == ZERO

    def test_incompatible_pairs(self, fr):
        _, h = fr
        for a, b in ((E("Wbar", "-", 3), E("Fbar", "down", 1)), (E("W", "-", 4), E("F", "up", 2))):
            ok, defect = conjunction_compatible(h, a, b)
            assert not ok and defect > 0

    def test_product_state_compatible(self):
        s = make_state(("a", "b"), [(("up", "plus"), ONE)])
        h = run_experiment(s, (MeasurementStep(1, "A", "a", Z), MeasurementStep(2, "B", "b", Z)))
        ok, defect = conjunction_compatible(h, E("A", "up", 1), E("B", "down", 2))
        assert ok and defect == ZERO

    def test_untouched_register(self, fr):
        _, h = fr
        assert disturbance_defect(h, ("Fbar", Z, 1), E("Fbar", "up", 2)) == ZERO


class TestViolationFraction:
    def test_equal(self):
        assert violation_fraction(INV_SQRT2, INV_SQRT2) == HALF

    def test_ninety(self):
        a, b = sqrt_of_rational(Fraction(9, 10)), sqrt_of_rational(Fraction(1, 10))
        assert a is None and b is None
        assert violation_fraction(QuadAmp(3), QuadAmp(1)) == QuadAmp(Fraction(9, 10))

    def test_zero(self):
        assert violation_fraction(ZERO, ONE) == ZERO

    def test_both_zero(self):
        with pytest.raises(BothZero):
            violation_fraction(ZERO, ZERO)


class TestTransitivity:
    @pytest.mark.parametrize("a, b", [("S1p", "S2"), ("S2", "S3"), ("S3", "S4")])
    def test_chains(self, fr, a, b):
        sc, h = fr
        rep = check_transitivity(h, sc.statement(a), sc.statement(b))
        assert rep.first.holds and rep.second.holds
        assert rep.combined_probability == HALF
        assert rep.violation_fraction == HALF
        assert rep.shift_fraction == HALF
        assert set(rep.combined_verdicts) == {FORWARD, RETRO}

    def test_combined_statement(self, fr):
        sc, h = fr
        rep = check_transitivity(h, sc.statement("S2"), sc.statement("S3"))
        assert rep.combined.premises == (E("Wbar", "-", 3),)
        assert rep.combined.conclusion == E("Fbar", "down", 1)
        assert rep.combined.mode == RETRO

    def test_mismatch(self, fr):
        sc, h = fr
        with pytest.raises(ChainMismatch):
            check_transitivity(h, sc.statement("S2"), sc.statement("S4"))

    def test_abc_contradicts_t(self, abc_eq):
        sc, h = abc_eq
        rep = check_transitivity(h, sc.statement("A"), sc.statement("B"))
        assert rep.combined_verdicts[FORWARD].probability == ONE
        assert not rep.transitivity_valid


class TestOr:
    def test_divergent(self):
        sc = by_name("fr_sub34")
        rep = or_composition_check(sc.run(), [sc.statement("S3L"), sc.statement("S3R")], sc.statement("S4"))
        assert rep.expected == HALF and rep.merged.probability == ONE and rep.divergent

    def test_consistent(self):
        sc = by_name("abc_same_c")
        rep = or_composition_check(sc.run(), [sc.statement("AL"), sc.statement("AR")], sc.statement("B"))
        assert not rep.divergent

    def test_single_branch(self):
        sc = by_name("abc_single")
        h = sc.run()
        rep = or_composition_check(h, [sc.statement("AL")], sc.statement("B"))
        assert not rep.divergent

    def test_incomplete(self):
        sc = by_name("fr_sub34")
        with pytest.raises(IncompleteOutcomeSet):
            or_composition_check(sc.run(), [sc.statement("S3L"), sc.statement("S3L")], sc.statement("S4"))


class TestMining:
    def test_fr(self, fr):
        sc, h = fr
        mined = mine_statements(h)
        for name in ("S2", "S3", "S4"):
            assert mined_contains(mined, sc.statement(name)), name
        back = Statement((E("W", "-", 4),), E("Fbar", "up", 1), RETRO)
        assert mined_contains(mined, back)
        assert all(m.verdict.classification == HOLDS for m in mined)

    def test_product_state_has_no_correlations(self):
        s = make_state(("a", "b"), [(("plus", "plus"), ONE)])
        h = run_experiment(s, (MeasurementStep(1, "A", "a", Z), MeasurementStep(2, "B", "b", Z)))
        lineage = {"a": "a", "A": "a", "b": "b", "B": "b"}
        mined = mine_statements(h)
        assert mined
        for m in mined:
            p, c = m.statement.premises[0], m.statement.conclusion
            if lineage[p.register] != lineage[c.register]:
                # across the product, only already-certain conclusions hold
                assert chain_probability(h, [c]) == ONE, m.statement


class TestConjunction:
    def test_abc_c_prime(self, abc_eq):
        _, h = abc_eq
        v = conjunction_premise_check(h, [E("B", "up", 2), E("A", "up", 1)], E("C", "up", 3))
        assert v.classification == HOLDS and v.probability == ONE

    def test_fr_flags(self, fr):
        _, h = fr
        v = conjunction_premise_check(h, [E("F", "up", 2), E("Wbar", "-", 3), E("W", "-", 4)],
                                      E("Fbar", "down", 1))
        assert "IncompatiblePremises" in v.diagnostic_kinds()
        assert v.classification != HOLDS

    def test_single(self, fr):
        _, h = fr
        v = conjunction_premise_check(h, [E("F", "up", 2)], E("F", "up", 2))
        assert v.classification == HOLDS
