from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frlogic.amplitude import INV_SQRT2, INV_SQRT3, INV_SQRT6, ONE, SQRT6, ZERO, QuadAmp
from frlogic.errors import BasisError, NotNormalized, RegisterMismatch, UnknownRegister
from frlogic.state import (
    FLOAT,
    X,
    Z,
    born_probabilities,
    basis_state,
    change_basis,
    format_state,
    inner_product,
    make_state,
    project,
    rename_register,
    states_basis,
    tensor,
    theta_basis,
    to_z,
)

FR_TERMS = [(("up", "down"), INV_SQRT3), (("down", "up"), INV_SQRT3), (("down", "down"), INV_SQRT3)]


def fr_spins():
    return make_state(("barred", "unbarred"), FR_TERMS)


def _coeffs(state):
    """labels -> amplitude in the state's current frames."""
    out = {}
    for key, amp in state.terms.items():
        out[tuple(state.frames[i].label(o) for i, o in enumerate(key))] = amp
    return out


class TestMakeState:
    def test_fr_initial(self):
        s = fr_spins()
        assert s.norm_sq() == ONE
        assert len(s.terms) == 3

    def test_single_register(self):
        assert make_state(("a",), [(("up",), ONE)]).norm_sq() == ONE

    def test_deficit(self):
        with pytest.raises(NotNormalized) as info:
            make_state(("a",), [(("up",), INV_SQRT2)])
        assert info.value.deficit == QuadAmp(Fraction(1, 2))

    def test_unnormalized_flag(self):
        s = make_state(("a",), [(("up",), INV_SQRT2)], allow_unnormalized=True)
        assert s.unnormalized and s.norm_sq() == QuadAmp(Fraction(1, 2))

    def test_zero_terms_dropped(self):
        s = make_state(("a",), [(("up",), ONE), (("down",), ZERO)])
        assert len(s.terms) == 1

    def test_scale_outside_field(self):
        # sqrt(1/10) * (|up> + 3|down>)
        s = make_state(("a",), [(("up",), ONE), (("down",), QuadAmp(3))], scale=QuadAmp(Fraction(1, 10)))
        assert s.norm_sq() == ONE
        assert born_probabilities(s, "a", Z)[1] == QuadAmp(Fraction(9, 10))

    def test_float_mode(self):
        s = make_state(("a",), [(("up",), 0.6), (("down",), 0.8j)], mode=FLOAT)
        assert s.norm_sq() == pytest.approx(1.0)

    def test_bad_label(self):
        with pytest.raises(BasisError):
            make_state(("a",), [(("sideways",), ONE)])


class TestChangeBasis:
    def test_unbarred_to_x_recombines(self):
        s = change_basis(fr_spins(), "unbarred", X)
        c = _coeffs(to_z_barred(s))
        assert c == {("up", "plus"): INV_SQRT3 * INV_SQRT2, ("up", "minus"): -INV_SQRT3 * INV_SQRT2,
                     ("down", "plus"): SQRT6 / 3}

    def test_barred_to_x(self):
        c = _coeffs(change_basis(fr_spins(), "barred", X))
        assert c == {("plus", "down"): 2 * INV_SQRT6, ("plus", "up"): INV_SQRT6, ("minus", "up"): -INV_SQRT6}

    def test_round_trip(self):
        s = fr_spins()
        assert change_basis(change_basis(s, "barred", X), "barred", Z) == s
        assert to_z(change_basis(s, "unbarred", X)) == s

    def test_unknown_register(self):
        with pytest.raises(UnknownRegister):
            change_basis(fr_spins(), "nobody", X)

    def test_theta_exact_angles(self):
        assert theta_basis(0).exact_ok
        assert theta_basis(math.pi / 4).exact_ok
        assert not theta_basis(0.3).exact_ok


def to_z_barred(s):
    return change_basis(s, "barred", Z)


class TestProjectAndBorn:
    def test_project_norm_is_born(self):
        s = change_basis(fr_spins(), "barred", X)
        p = project(s, "barred", X, 1)
        assert p.norm_sq() == QuadAmp(Fraction(1, 6))
        assert p.unnormalized

    def test_completeness(self):
        s = fr_spins()
        total = sum((project(s, "unbarred", X, o).norm_sq() for o in (0, 1)), ZERO)
        assert total == ONE

    def test_plus_in_z(self):
        s = basis_state("a", "plus")
        assert born_probabilities(s, "a", Z) == {0: QuadAmp(Fraction(1, 2)), 1: QuadAmp(Fraction(1, 2))}

    def test_joint_two_registers(self):
        probs = born_probabilities(fr_spins(), ("barred", "unbarred"), Z)
        assert probs[(0, 0)] == ZERO
        assert probs[(1, 1)] == QuadAmp(Fraction(1, 3))

    def test_singlet_projection(self):
        singlet = states_basis([[((0, 1), INV_SQRT2), ((1, 0), -INV_SQRT2)]])
        s = make_state(("a", "b"), [(("up", "down"), ONE)])
        assert project(s, ("a", "b"), singlet, 0).norm_sq() == QuadAmp(Fraction(1, 2))
        assert project(s, ("a", "b"), singlet, 1).norm_sq() == QuadAmp(Fraction(1, 2))


class TestInnerProduct:
    def test_values(self):
        up, down, plus = basis_state("a", "up"), basis_state("a", "down"), basis_state("a", "plus")
        assert inner_product(up, up) == ONE
        assert inner_product(up, down) == ZERO
        assert inner_product(plus, up) == INV_SQRT2

    def test_mismatch(self):
        with pytest.raises(RegisterMismatch):
            inner_product(basis_state("a", "up"), basis_state("b", "up"))


class TestComposition:
    def test_tensor(self):
        s = tensor(basis_state("a", "up"), basis_state("b", "minus"))
        assert s.registers == ("a", "b")
        assert s.amplitude({"a": "up", "b": "down"}) == -INV_SQRT2

    def test_rename(self):
        s = rename_register(basis_state("a", "up"), "a", "rec")
        assert s.registers == ("rec",)

    def test_format(self):
        assert format_state(fr_spins()) == "1/3*sqrt3 |up,down> + 1/3*sqrt3 |down,up> + 1/3*sqrt3 |down,down>"


# -- properties -------------------------------------------------------------

small = st.integers(min_value=-3, max_value=3)
amps = st.builds(QuadAmp, small, small, small, st.just(0))
labels = st.sampled_from(("up", "down"))
bases = st.sampled_from((X, Z))


@st.composite
def two_register_states(draw):
    terms = draw(st.dictionaries(st.tuples(labels, labels), amps, min_size=1, max_size=4))
    return make_state(("p", "q"), list(terms.items()), allow_unnormalized=True)


@settings(max_examples=200)
@given(two_register_states(), two_register_states(), bases, bases, bases, bases)
def test_basis_change_preserves_inner_products(s1, s2, b1, b2, b3, b4):
    before = inner_product(s1, s2)
    t1 = change_basis(change_basis(s1, "p", b1), "q", b2)
    t2 = change_basis(change_basis(s2, "q", b3), "p", b4)
    assert inner_product(t1, t2) == before


@settings(max_examples=200)
@given(two_register_states(), bases, st.sampled_from(("p", "q")))
def test_projections_are_complete(s, basis, reg):
    total = project(s, reg, basis, 0).norm_sq() + project(s, reg, basis, 1).norm_sq()
    assert total == s.norm_sq()


@settings(max_examples=100)
@given(two_register_states(), bases)
def test_float_mode_agrees(s, basis):
    if s.norm_sq().is_zero():
        return
    exact = born_probabilities(s, "p", basis)
    floats = born_probabilities(s.to_mode(FLOAT), "p", basis)
    for o in (0, 1):
        assert abs(float(exact[o]) - floats[o]) < 1e-9
