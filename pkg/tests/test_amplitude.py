from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frlogic.amplitude import (
    INV_SQRT2,
    INV_SQRT3,
    INV_SQRT6,
    ONE,
    SQRT2,
    SQRT3,
    SQRT6,
    ZERO,
    AmplitudeSyntaxError,
    QuadAmp,
    parse_amplitude,
    quad_abs_sq,
    quad_add,
    quad_mul,
    quad_to_float,
    sqrt_of_rational,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
quads = st.builds(QuadAmp, rationals, rationals, rationals, rationals)
nonzero = quads.filter(lambda q: not q.is_zero())


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y))


class TestConstruction:
    def test_coefficients_are_reduced(self):
        q = QuadAmp(Fraction(2, 4), 0, Fraction(3, 9))
        assert q.coefficients == (Fraction(1, 2), 0, Fraction(1, 3), 0)

    def test_inverse_roots(self):
        assert INV_SQRT2 * SQRT2 == ONE
        assert INV_SQRT3 * SQRT3 == ONE
        assert INV_SQRT6 * SQRT6 == ONE
        assert SQRT2 * SQRT3 == SQRT6

    def test_rational_hash_matches_fraction(self):
        assert hash(QuadAmp(Fraction(1, 3))) == hash(Fraction(1, 3))
        assert QuadAmp(Fraction(1, 3)) == Fraction(1, 3)
        assert {QuadAmp(1): "x"}[1] == "x"

    def test_str_canonical(self):
        assert str(INV_SQRT3) == "1/3*sqrt3"
        assert str(-INV_SQRT6) == "-1/6*sqrt6"
        assert str(QuadAmp(Fraction(1, 2), 0, Fraction(1, 4))) == "1/2 + 1/4*sqrt3"
        assert str(ZERO) == "0"

    def test_pretty_uses_radical_sign(self):
        assert "√3" in INV_SQRT3.pretty()

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            ONE / ZERO

    def test_float_value(self):
        assert float(INV_SQRT3) == pytest.approx(1 / math.sqrt(3), abs=1e-15)
        assert complex(SQRT6) == pytest.approx(math.sqrt(6))
        assert quad_to_float(INV_SQRT2) == pytest.approx(1 / math.sqrt(2))

    def test_sign_exact_near_cancellation(self):
        # 99 - 70*sqrt2 is about 0.00505, and its conjugate partner negative
        assert QuadAmp(99, -70).sign() == 1
        assert QuadAmp(-99, 70).sign() == -1
        assert QuadAmp(0, 1, -1).sign() == -1

    def test_module_functions(self):
        assert quad_add(ONE, SQRT2) == ONE + SQRT2
        assert quad_mul(SQRT2, SQRT3) == SQRT6
        assert quad_abs_sq(-INV_SQRT3) == QuadAmp(Fraction(1, 3))


class TestSqrtOfRational:
    @pytest.mark.parametrize(
        "q, want",
        [
            (Fraction(1, 3), INV_SQRT3),
            (Fraction(2, 3), SQRT6 / 3),
            (Fraction(1, 12), SQRT3 / 6),
            (Fraction(9, 4), QuadAmp(Fraction(3, 2))),
            (0, ZERO),
        ],
    )
    def test_in_field(self, q, want):
        assert sqrt_of_rational(q) == want

    def test_outside_field(self):
        assert sqrt_of_rational(5) is None
        assert sqrt_of_rational(Fraction(1, 10)) is None

    def test_negative(self):
        with pytest.raises(ValueError):
            sqrt_of_rational(-1)


class TestParse:
    @pytest.mark.parametrize(
        "text, want",
        [
            ("1/sqrt3", INV_SQRT3),
            ("-1/sqrt6", -INV_SQRT6),
            ("2/sqrt6", 2 * INV_SQRT6),
            ("sqrt(1/2)", INV_SQRT2),
            ("1/sqrt12", SQRT3 / 6),
            ("(1 + sqrt2)/2", (ONE + SQRT2) / 2),
            ("1/2 + 1/4*sqrt3", QuadAmp(Fraction(1, 2), 0, Fraction(1, 4))),
            ("3", QuadAmp(3)),
        ],
    )
    def test_literals(self, text, want):
        assert parse_amplitude(text) == want

    @pytest.mark.parametrize("text", ["", "sqrt5", "1/", "sqrt(1/5)", "(1", "1/(1+sqrt2)", "x"])
    def test_rejects(self, text):
        with pytest.raises((AmplitudeSyntaxError, ValueError)):
            parse_amplitude(text)

    def test_error_offset(self):
        with pytest.raises(AmplitudeSyntaxError) as info:
            parse_amplitude("1 + y")
        assert info.value.offset == 4

    @given(quads)
    def test_str_round_trip(self, q):
        assert parse_amplitude(str(q)) == q
        assert QuadAmp.parse(str(q).replace(" ", "")) == q


class TestFieldAxioms:
    @given(quads, quads, quads)
    def test_ring(self, x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + ZERO == x and x * ONE == x
        assert x - x == ZERO

    @given(nonzero)
    def test_inverse(self, x):
        assert x * x.inverse() == ONE
        assert ONE / x == x.inverse()

    @given(quads, quads)
    def test_float_homomorphism(self, x, y):
        assert _close(float(x + y), float(x) + float(y))
        assert _close(float(x * y), float(x) * float(y))

    @given(quads)
    def test_abs_sq(self, x):
        a = x.abs_sq()
        assert a == x * x.conjugate()
        assert a >= 0
        assert _close(float(a), float(x) ** 2)

    @settings(max_examples=300)
    @given(quads, quads)
    def test_order_matches_floats(self, x, y):
        fx, fy = float(x), float(y)
        if abs(fx - fy) > 1e-9:
            assert (x < y) == (fx < fy)
        assert (x.sign() == 0) == x.is_zero()

    @given(quads, st.integers(min_value=0, max_value=5))
    def test_power(self, x, k):
        want = ONE
        for _ in range(k):
            want = want * x
        assert x ** k == want
