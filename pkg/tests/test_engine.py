from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frlogic.amplitude import INV_SQRT2, INV_SQRT3, ONE, QuadAmp
from frlogic.engine import (
    ABSORB,
    PRESERVE,
    MeasurementStep,
    apply_step,
    apply_unitary,
    back_evolve,
    describe_step,
    invert_unitary,
    joint_distribution,
    resolve_steps,
    run_experiment,
)
from frlogic.errors import (
    BasisError,
    NonUnitarySegment,
    OutsideRange,
    RegisterMismatch,
    StepOrderError,
    TargetIsRecord,
    ZeroProbabilityCollapse,
)
from frlogic.scenarios import abc_library, by_name, fr_initial, fr_steps
from frlogic.state import X, Z, born_probabilities, make_state, project, states_basis, to_z

HALF = QuadAmp(Fraction(1, 2))
TWELFTH = QuadAmp(Fraction(1, 12))


def fr_history(**kw):
    return run_experiment(fr_initial().build(), fr_steps(**kw))


def _coeffs(state, order):
    out = {}
    pos = [state.index(r) for r in order]
    for key, amp in state.terms.items():
        out[tuple(state.frames[p].label(key[p]) for p in pos)] = amp
    return out


class TestSteps:
    def test_absorb_relabels(self):
        s = apply_step(fr_initial().build(), MeasurementStep(1, "Fbar", "barred", Z))
        assert s.registers == ("Fbar", "unbarred")
        assert _coeffs(s, ("Fbar", "unbarred")) == {
            ("up", "down"): INV_SQRT3, ("down", "up"): INV_SQRT3, ("down", "down"): INV_SQRT3,
        }

    def test_preserve_entangles(self):
        h = fr_history()
        s3 = h.snapshot(3)
        assert s3.norm_sq() == ONE
        minus = project(s3, "Wbar", X, 1)
        assert minus.norm_sq() == QuadAmp(Fraction(1, 6))
        # the surviving term has F up
        assert born_probabilities(minus, "F", Z)[0] == ONE

    def test_collapse_single_term(self):
        s = apply_step(fr_initial().build(), MeasurementStep(1, "Fbar", "barred", Z, collapse="up"))
        assert _coeffs(s, ("Fbar", "unbarred")) == {("up", "down"): ONE}

    def test_zero_probability_collapse(self):
        s = fr_initial().build()
        s = apply_step(s, MeasurementStep(1, "Fbar", "barred", Z, collapse="up"))
        with pytest.raises(ZeroProbabilityCollapse):
            apply_step(s, MeasurementStep(2, "F", "unbarred", Z, collapse="up"))

    def test_absorb_record_forbidden(self):
        s = apply_step(fr_initial().build(), MeasurementStep(1, "Fbar", "barred", Z))
        with pytest.raises(TargetIsRecord):
            apply_step(s, MeasurementStep(2, "G", "Fbar", X))

    def test_absorb_takes_one_target(self):
        with pytest.raises(ValueError):
            MeasurementStep(1, "A", ("a", "b"), Z)

    def test_two_ket_basis_with_complement_weight(self):
        bell = states_basis([[((0, 0), INV_SQRT2), ((1, 1), INV_SQRT2)],
                             [((0, 0), INV_SQRT2), ((1, 1), -INV_SQRT2)]])
        s = make_state(("a", "b"), [(("up", "down"), ONE)])
        with pytest.raises(BasisError):
            apply_unitary(s, MeasurementStep(1, "M", ("a", "b"), bell, PRESERVE, record="M"))

    def test_describe(self):
        assert "Fbar" in describe_step(fr_steps()[0])


class TestHistory:
    def test_fr_final_distribution(self):
        joint = joint_distribution(fr_history().final, ("Wbar", "W"))
        assert joint == {(0, 0): QuadAmp(Fraction(3, 4)), (0, 1): TWELFTH, (1, 0): TWELFTH, (1, 1): TWELFTH}

    def test_empty_steps(self):
        s = fr_initial().build()
        h = run_experiment(s, ())
        assert len(h) == 1 and h.final == s

    def test_snapshots_normalized(self):
        h = fr_history()
        assert len(h.snapshots) == len(h.steps) + 1
        assert all(s.norm_sq() == ONE for s in h.snapshots)

    def test_abc_two_branches(self):
        sc = {s.name: s for s in abc_library()}["abc_equal"]
        final = sc.run().final
        assert _coeffs(final, ("A", "B", "C")) == {("up", "up", "up"): INV_SQRT2, ("down", "up", "down"): INV_SQRT2}

    def test_order_must_increase(self):
        steps = fr_steps()
        with pytest.raises(StepOrderError):
            resolve_steps((steps[1], steps[0]))

    def test_record_names(self):
        steps = resolve_steps((MeasurementStep(1, "A", "a", Z), MeasurementStep(2, "A", "b", Z)))
        assert [s.record for s in steps] == ["A", "A#2"]

    def test_collapse_changes_final_distribution(self):
        joint = joint_distribution(fr_history(collapse1="up").final, ("Wbar", "W"))
        assert joint[(1, 1)] == QuadAmp(Fraction(1, 4))

    def test_collapse_log(self):
        h = fr_history(collapse1="down")
        (ev,) = h.collapse_log
        assert ev.step == 1 and ev.label == "down" and ev.probability == QuadAmp(Fraction(2, 3))

    def test_sampled_collapse_is_seeded(self):
        steps = fr_steps(collapse1="sample")
        a = run_experiment(fr_initial().build(), steps, seed=7).collapse_log
        b = run_experiment(fr_initial().build(), steps, seed=7).collapse_log
        assert a == b


class TestBackEvolve:
    def test_w_minus_implies_fbar_up(self):
        h = fr_history()
        s = project(h.snapshot(4), "W", X, 1)
        back = back_evolve(h, s, 4, 1)
        assert born_probabilities(back, "Fbar", Z)[0] == ONE
        assert born_probabilities(back, "unbarred", X)[1] == ONE

    def test_wbar_minus_origin(self):
        h = fr_history()
        s = project(h.snapshot(3), "Wbar", X, 1)
        back = to_z(back_evolve(h, s, 3, 2))
        coeffs = _coeffs(back, ("Fbar", "F"))
        assert set(coeffs) == {("up", "up"), ("down", "up")}
        assert coeffs[("up", "up")] == -coeffs[("down", "up")]

    def test_zero_steps_is_identity(self):
        h = fr_history()
        s = h.snapshot(2)
        assert back_evolve(h, s, 2, 2) == s

    def test_collapse_blocks(self):
        h = fr_history(collapse1="down")
        with pytest.raises(NonUnitarySegment):
            back_evolve(h, h.snapshot(2), 2, 0)

    def test_register_mismatch(self):
        h = fr_history()
        with pytest.raises(RegisterMismatch):
            back_evolve(h, h.snapshot(2), 3, 2)

    def test_outside_range(self):
        h = fr_history()
        step = h.steps[2]
        # Wbar says plus while Fbar reads minus: not in the step's range
        s = make_state(("Fbar", "F", "Wbar"), [(("minus", "up", "plus"), ONE)])
        with pytest.raises(OutsideRange):
            invert_unitary(s, step)

    def test_forward_then_back(self):
        h = fr_history()
        for k in (1, 2, 3):
            assert back_evolve(h, h.snapshot(4), 4, k) == h.snapshot(k)


labels = st.sampled_from(("up", "down"))
small = st.integers(min_value=-3, max_value=3)
amps = st.builds(QuadAmp, small, small, small, st.just(0))


@st.composite
def spin_states(draw):
    terms = draw(st.dictionaries(st.tuples(labels, labels), amps, min_size=1, max_size=4))
    return make_state(("s", "t"), list(terms.items()), allow_unnormalized=True)


@settings(max_examples=150)
@given(spin_states(), st.sampled_from((X, Z)), st.sampled_from((ABSORB, PRESERVE)))
def test_unitary_round_trip(state, basis, style):
    step = MeasurementStep(1, "M", "s", basis, style, record="M")
    out = apply_unitary(state, step)
    assert out.norm_sq() == state.norm_sq()
    assert invert_unitary(out, step) == state


def test_friend_order_does_not_matter():
    s0 = fr_initial().build()
    a = run_experiment(s0, fr_steps()[:2]).final
    swapped = (MeasurementStep(1, "F", "unbarred", Z), MeasurementStep(2, "Fbar", "barred", Z))
    assert run_experiment(s0, swapped).final == a


def test_exchange_steps_add_nothing():
    sc = by_name("fr_exchange")
    h = sc.run()
    joint = joint_distribution(h.final, ("Wbar", "W"))
    assert joint[(1, 1)] == TWELFTH
    assert all(s.norm_sq() == ONE for s in h.snapshots)
    assert h.final.records["W#2"] == X
