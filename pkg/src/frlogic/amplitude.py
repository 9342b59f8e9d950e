"""Exact amplitudes in the field Q(sqrt2, sqrt3).

A :class:`QuadAmp` is ``a + b*sqrt2 + c*sqrt3 + d*sqrt6`` with rational
coefficients.  Coefficients are held as four integer numerators over one
shared positive denominator, reduced by their common gcd, so equality is
plain tuple equality and chained products never overflow.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

__all__ = [
    "QuadAmp",
    "FloatAmp",
    "quad_add",
    "quad_mul",
    "quad_abs_sq",
    "quad_to_float",
    "parse_amplitude",
    "sqrt_of_rational",
    "ONE",
    "ZERO",
    "SQRT2",
    "SQRT3",
    "SQRT6",
    "INV_SQRT2",
    "INV_SQRT3",
    "INV_SQRT6",
    "INV_SQRT12",
]

# complex carries (re, im) as IEEE doubles
FloatAmp = complex

_R2 = math.sqrt(2.0)
_R3 = math.sqrt(3.0)
_R6 = math.sqrt(6.0)

Rationalish = Union[int, Fraction]


class QuadAmp:
    __slots__ = ("_n", "_den", "_hash")

    def __init__(self, a: Rationalish = 0, b: Rationalish = 0,
                 c: Rationalish = 0, d: Rationalish = 0) -> None:
        fa, fb, fc, fd = (Fraction(v) for v in (a, b, c, d))
        den = math.lcm(fa.denominator, fb.denominator, fc.denominator, fd.denominator)
        nums = tuple(int(f.numerator * (den // f.denominator)) for f in (fa, fb, fc, fd))
        self._set(nums, den)

    @classmethod
    def _raw(cls, nums: tuple[int, int, int, int], den: int) -> QuadAmp:
        obj = cls.__new__(cls)
        obj._set(nums, den)
        return obj

    def _set(self, nums: tuple[int, int, int, int], den: int) -> None:
        if den < 0:
            nums, den = tuple(-n for n in nums), -den
        g = math.gcd(den, *nums)
        if g > 1:
            nums, den = tuple(n // g for n in nums), den // g
        self._n = nums
        self._den = den
        self._hash = None

    # -- coefficients -----------------------------------------------------
    @property
    def a(self) -> Fraction:
        return Fraction(self._n[0], self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._n[1], self._den)

    @property
    def c(self) -> Fraction:
        return Fraction(self._n[2], self._den)

    @property
    def d(self) -> Fraction:
        return Fraction(self._n[3], self._den)

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not any(self._n)

    def is_rational(self) -> bool:
        return not (self._n[1] or self._n[2] or self._n[3])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return Fraction(self._n[0], self._den)

    # -- ring operations --------------------------------------------------
    @staticmethod
    def _coerce(other) -> QuadAmp | None:
        if isinstance(other, QuadAmp):
            return other
        if isinstance(other, int):
            return QuadAmp._raw((other, 0, 0, 0), 1)
        if isinstance(other, Fraction):
            return QuadAmp._raw((other.numerator, 0, 0, 0), other.denominator)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d1, d2 = self._den, o._den
        if d1 == d2:
            return QuadAmp._raw(tuple(x + y for x, y in zip(self._n, o._n)), d1)
        return QuadAmp._raw(tuple(x * d2 + y * d1 for x, y in zip(self._n, o._n)), d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> QuadAmp:
        return QuadAmp._raw(tuple(-x for x in self._n), self._den)

    def __pos__(self) -> QuadAmp:
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, c1, d1 = self._n
        a2, b2, c2, d2 = o._n
        nums = (
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )
        return QuadAmp._raw(nums, self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> QuadAmp:
        """Multiplicative inverse, by clearing the sqrt3 then the sqrt2 conjugate."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero amplitude")
        # x = u + v*sqrt3 with u, v in Q(sqrt2)
        conj3 = QuadAmp._raw((self._n[0], self._n[1], -self._n[2], -self._n[3]), self._den)
        w = self * conj3  # u^2 - 3 v^2, lies in Q(sqrt2)
        conj2 = QuadAmp._raw((w._n[0], -w._n[1], 0, 0), w._den)
        n = (w * conj2).to_fraction()
        return conj3 * conj2 * QuadAmp(1 / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            q = o.to_fraction()
            if q == 0:
                raise ZeroDivisionError("division by zero amplitude")
            return QuadAmp._raw(
                tuple(x * q.denominator for x in self._n), self._den * q.numerator
            )
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> QuadAmp:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** -k
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> QuadAmp:
        # every exact amplitude is real
        return self

    def abs_sq(self) -> QuadAmp:
        return self * self

    # -- ordering ---------------------------------------------------------
    def sign(self) -> int:
        """Exact sign (-1, 0, 1) of the real number this element denotes."""
        a, b, c, d = self._n
        # x = u + v*sqrt3, u = a + b*sqrt2, v = c + d*sqrt2
        su = _sign_q2(a, b)
        sv = _sign_q2(c, d)
        if sv == 0:
            return su
        if su == 0 or su == sv:
            return sv
        # opposite signs: compare u^2 with 3 v^2
        u2 = (a * a + 2 * b * b, 2 * a * b)
        v2 = (3 * (c * c + 2 * d * d), 3 * 2 * c * d)
        diff = _sign_q2(u2[0] - v2[0], u2[1] - v2[1])
        return su * diff if diff else 0

    def __abs__(self) -> QuadAmp:
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._n == o._n and self._den == o._den

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._n[0], self._den))
            else:
                self._hash = hash((self._n, self._den))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- conversion -------------------------------------------------------
    def __float__(self) -> float:
        # Fraction -> float first; raw numerators can exceed float range
        return (float(self.a) + float(self.b) * _R2
                + float(self.c) * _R3 + float(self.d) * _R6)

    def __complex__(self) -> complex:
        return complex(float(self), 0.0)

    def __repr__(self) -> str:
        return f"QuadAmp({self})"

    def __str__(self) -> str:
        parts = []
        for coef, sym in zip(self.coefficients, ("", "sqrt2", "sqrt3", "sqrt6")):
            if coef == 0:
                continue
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if not sym:
                body = str(mag)
            elif mag == 1:
                body = sym
            else:
                body = f"{mag}*{sym}"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def pretty(self) -> str:
        """Unicode rendering for text reports, e.g. ``1/3·√3``."""
        return (
            str(self).replace("*sqrt", "·√").replace("sqrt", "√")
        )

    @classmethod
    def parse(cls, text: str) -> QuadAmp:
        return parse_amplitude(text)


def _sign_q2(a: int, b: int) -> int:
    """Sign of a + b*sqrt2 for integers a, b."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    diff = a * a - 2 * b * b
    return sa * ((diff > 0) - (diff < 0))


ZERO = QuadAmp()
ONE = QuadAmp(1)
SQRT2 = QuadAmp(0, 1)
SQRT3 = QuadAmp(0, 0, 1)
SQRT6 = QuadAmp(0, 0, 0, 1)
INV_SQRT2 = QuadAmp(0, Fraction(1, 2))
INV_SQRT3 = QuadAmp(0, 0, Fraction(1, 3))
INV_SQRT6 = QuadAmp(0, 0, 0, Fraction(1, 6))
INV_SQRT12 = QuadAmp(0, 0, Fraction(1, 6))

_SQRT_TOKENS = {2: SQRT2, 3: SQRT3, 6: SQRT6, 12: 2 * SQRT3}


def quad_add(x: QuadAmp, y: QuadAmp) -> QuadAmp:
    return x + y


def quad_mul(x: QuadAmp, y: QuadAmp) -> QuadAmp:
    return x * y


def quad_abs_sq(x: QuadAmp) -> QuadAmp:
    return x * x


def quad_to_float(x: QuadAmp) -> FloatAmp:
    return complex(float(x), 0.0)


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (root, core) with n == root**2 * core and core squarefree."""
    root, core = 1, 1
    p = 2
    while p * p <= n:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        root *= p ** (k // 2)
        if k % 2:
            core *= p
        p += 1
    return root, core * n


def sqrt_of_rational(q: Fraction | int) -> QuadAmp | None:
    """Exact square root of a non-negative rational, or None when it leaves the field."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return ZERO
    # sqrt(p/r) = sqrt(p*r) / r
    root, core = _squarefree_split(q.numerator * q.denominator)
    if core not in (1, 2, 3, 6):
        return None
    base = {1: ONE, 2: SQRT2, 3: SQRT3, 6: SQRT6}[core]
    return base * Fraction(root, q.denominator)


# -- literal syntax ---------------------------------------------------------
#
# expr   := term (("+"|"-") term)*
# term   := unary (("*"|"/") unary)*
# unary  := "-" unary | atom
# atom   := INT | INT "/" INT | "sqrt" N | "sqrt(" rational ")" | "(" expr ")"
#
# Division is allowed by non-zero rationals and by sqrt2, sqrt3, sqrt6, sqrt12.

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<sqrt>sqrt(?:2|3|6|12)\b)|(?P<sqrtcall>sqrt\()|(?P<op>[-+*/()]))"
)


class AmplitudeSyntaxError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(message)
        self.offset = offset


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise AmplitudeSyntaxError(
                f"unexpected character {text[pos + stripped]!r}", pos + stripped
            )
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _ExprParser:
    def __init__(self, tokens: list[tuple[str, str, int]]) -> None:
        self.tokens = tokens
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise AmplitudeSyntaxError(f"expected {op!r}", pos)

    def expr(self) -> QuadAmp:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> QuadAmp:
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            pos = self.peek()[2]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise AmplitudeSyntaxError("division by zero", pos)
                if not (rhs.is_rational() or _is_allowed_radical(rhs)):
                    raise AmplitudeSyntaxError(
                        "division only by rationals or sqrt2/sqrt3/sqrt6/sqrt12", pos
                    )
                value = value / rhs
        return value

    def unary(self) -> QuadAmp:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.unary()
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self) -> QuadAmp:
        kind, val, pos = self.take()
        if kind == "num":
            return QuadAmp(int(val))
        if kind == "sqrt":
            return _SQRT_TOKENS[int(val[4:])]
        if kind == "sqrtcall":
            inner = self.expr()
            self.expect_op(")")
            if not inner.is_rational() or inner.to_fraction() < 0:
                raise AmplitudeSyntaxError("sqrt() needs a non-negative rational", pos)
            root = sqrt_of_rational(inner.to_fraction())
            if root is None:
                raise AmplitudeSyntaxError("square root leaves Q(sqrt2, sqrt3)", pos)
            return root
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise AmplitudeSyntaxError("expected a number, sqrtN or '('", pos)


def _is_allowed_radical(x: QuadAmp) -> bool:
    nz = [i for i, n in enumerate(x._n) if n]
    return len(nz) == 1 and nz[0] in (1, 2, 3)


def parse_amplitude(text: str) -> QuadAmp:
    """Parse the literal syntax, e.g. ``1/sqrt3``, ``-1/6*sqrt6``, ``1/2 + 1/4*sqrt3``."""
    parser = _ExprParser(_tokenize(text))
    value = parser.expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise AmplitudeSyntaxError("trailing input", pos)
    return value
