"""Sparse state vectors over named two-level registers.

Each term is keyed by a tuple of outcome indices (0 or 1), one per register,
in the order of ``StateVector.registers``.  Every register carries a *frame*:
the single-register basis its indices refer to.  Frames are a representation
detail; two states are equal when they denote the same vector.

In exact mode a state may also carry a positive ``scale`` so that physical
amplitudes are ``amp * sqrt(scale)``.  This keeps renormalized and
``sqrt(1/10)``-weighted states inside the exact field.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .amplitude import INV_SQRT2, ONE, ZERO, QuadAmp, sqrt_of_rational
from .errors import BasisError, DuplicateRegister, NotNormalized, RegisterMismatch, UnknownRegister

Amp = Union[QuadAmp, complex]

FLOAT_EPS = 1e-12
FLOAT_TOL = 1e-9

EXACT = "exact"
FLOAT = "float"


# -- bases ------------------------------------------------------------------

Z_LABELS = ("up", "down")
X_LABELS = ("plus", "minus")
INDEX_LABELS = ("0", "1")

# label aliases accepted on input
LABEL_ALIASES = {
    "up": ("z", 0),
    "down": ("z", 1),
    "+": ("x", 0),
    "plus": ("x", 0),
    "fail": ("x", 0),
    "-": ("x", 1),
    "minus": ("x", 1),
    "ok": ("x", 1),
}

SYMBOLS = {"up": "↑", "down": "↓", "plus": "+", "minus": "−"}


@dataclass(frozen=True)
class Basis:
    """A measurement basis for one register or a multi-register target.

    ``kind`` is ``z``, ``x``, ``theta`` (vectors ``cos t|up> + sin t|down>``
    and ``sin t|up> - cos t|down>``) or ``states``.  A ``states`` basis lists
    one or two orthonormal kets over ``arity`` registers, written in z; with
    one ket the second outcome is its orthogonal complement.
    """

    kind: str
    theta: float | None = None
    kets: tuple = ()
    arity: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("z", "x", "theta", "states"):
            raise BasisError(f"unknown basis kind {self.kind!r}")
        if self.kind == "states":
            if not 1 <= len(self.kets) <= 2:
                raise BasisError("a states basis takes one or two kets")
            for ket in self.kets:
                for cfg, _ in ket:
                    if len(cfg) != self.arity:
                        raise BasisError("ket arity does not match the target count")
            self._check_orthonormal()
        elif self.arity != 1:
            raise BasisError(f"{self.kind} basis is single-register")

    def _check_orthonormal(self) -> None:
        for i, ki in enumerate(self.kets):
            for j, kj in enumerate(self.kets):
                ip = _ket_inner(ki, kj)
                want = 1 if i == j else 0
                if isinstance(ip, QuadAmp):
                    ok = ip == want
                else:
                    ok = abs(ip - want) < FLOAT_TOL
                if not ok:
                    raise BasisError("states basis kets are not orthonormal")

    @property
    def single(self) -> bool:
        return self.kind != "states"

    @property
    def labels(self) -> tuple[str, str]:
        if self.kind == "z":
            return Z_LABELS
        if self.kind == "x":
            return X_LABELS
        return INDEX_LABELS

    def label(self, outcome: int) -> str:
        return self.labels[outcome]

    def outcome_of(self, label: str) -> int:
        label = str(label)
        if label in self.labels:
            return self.labels.index(label)
        if label in INDEX_LABELS:
            return int(label)
        alias = LABEL_ALIASES.get(label)
        if alias is not None and alias[0] == self.kind:
            return alias[1]
        raise BasisError(f"label {label!r} does not belong to basis {self.name}")

    @property
    def exact_ok(self) -> bool:
        if self.kind == "theta":
            return _exact_theta(self.theta) is not None
        if self.kind == "states":
            return all(isinstance(a, QuadAmp) for ket in self.kets for _, a in ket)
        return True

    @property
    def name(self) -> str:
        if self.kind == "theta":
            return f"theta({self.theta!r})"
        if self.kind == "states":
            return f"states[{len(self.kets)}]"
        return self.kind

    def matrix(self, mode: str):
        """Rows are the basis vectors written in z coordinates."""
        if not self.single:
            raise BasisError("multi-register basis has no 2x2 matrix")
        return _basis_matrix(self.kind, self.theta, mode)

    def __str__(self) -> str:
        return self.name


def _exact_theta(theta: float | None) -> str | None:
    if theta is None:
        return None
    for name, value in (("0", 0.0), ("pi/4", math.pi / 4), ("pi/2", math.pi / 2)):
        if abs(theta - value) < 1e-15:
            return name
    return None


@lru_cache(maxsize=None)
def _basis_matrix(kind: str, theta: float | None, mode: str):
    if kind == "z":
        m = ((ONE, ZERO), (ZERO, ONE))
    elif kind == "x":
        m = ((INV_SQRT2, INV_SQRT2), (INV_SQRT2, -INV_SQRT2))
    else:
        t = _exact_theta(theta)
        if t == "0":
            m = ((ONE, ZERO), (ZERO, -ONE))
        elif t == "pi/4":
            m = ((INV_SQRT2, INV_SQRT2), (INV_SQRT2, -INV_SQRT2))
        elif t == "pi/2":
            m = ((ZERO, ONE), (ONE, ZERO))
        else:
            if mode == EXACT:
                raise BasisError(f"theta({theta}) needs float mode")
            c, s = math.cos(theta), math.sin(theta)
            return ((complex(c), complex(s)), (complex(s), complex(-c)))
    if mode == FLOAT:
        return tuple(tuple(complex(v) for v in row) for row in m)
    return m


def _frame_key(b: Basis):
    return (b.kind, b.theta)


@lru_cache(maxsize=None)
def _transition(old_key, new_key, mode: str):
    """G[j][i] = <new_j | old_i>; new coefficients are G @ old coefficients."""
    old = _basis_matrix(old_key[0], old_key[1], mode)
    new = _basis_matrix(new_key[0], new_key[1], mode)
    return tuple(
        tuple(new[j][0] * old[i][0] + new[j][1] * old[i][1] for i in range(2))
        for j in range(2)
    )


Z = Basis("z")
X = Basis("x")


def theta_basis(theta: float) -> Basis:
    return Basis("theta", theta=float(theta))


def states_basis(kets: Sequence[Sequence[tuple[tuple[int, ...], Amp]]]) -> Basis:
    kets = tuple(tuple((tuple(cfg), amp) for cfg, amp in ket) for ket in kets)
    arity = len(kets[0][0][0]) if kets and kets[0] else 1
    return Basis("states", kets=kets, arity=arity)


def _ket_inner(k1, k2):
    d2 = dict(k2)
    total = None
    for cfg, a in k1:
        b = d2.get(cfg)
        if b is None:
            continue
        term = _conj(a) * b
        total = term if total is None else total + term
    return ZERO if total is None else total


def resolve_label(label: str, basis: Basis | None = None) -> tuple[Basis, int]:
    """Map a user label to (basis, outcome index)."""
    if basis is not None:
        return basis, basis.outcome_of(label)
    alias = LABEL_ALIASES.get(str(label))
    if alias is None:
        raise BasisError(f"label {label!r} needs an explicit basis")
    return (Z if alias[0] == "z" else X), alias[1]


# -- amplitude helpers ------------------------------------------------------

def _conj(a: Amp) -> Amp:
    return a.conjugate()


def _is_zero(a: Amp) -> bool:
    if isinstance(a, QuadAmp):
        return a.is_zero()
    return abs(a) < FLOAT_EPS


def _abs_sq(a: Amp):
    if isinstance(a, QuadAmp):
        return a * a
    return a.real * a.real + a.imag * a.imag


def to_float_amp(a) -> complex:
    if isinstance(a, QuadAmp):
        return complex(float(a), 0.0)
    return complex(a)


def coerce_amp(a, mode: str) -> Amp:
    if mode == FLOAT:
        return to_float_amp(a)
    if isinstance(a, QuadAmp):
        return a
    if isinstance(a, (int, Fraction)):
        return QuadAmp(a)
    raise TypeError(f"exact mode needs QuadAmp amplitudes, got {type(a).__name__}")


def _zero(mode: str) -> Amp:
    return ZERO if mode == EXACT else 0j


def _one(mode: str) -> Amp:
    return ONE if mode == EXACT else 1 + 0j


# -- state vector -----------------------------------------------------------

class StateVector:
    """Immutable sparse state over named two-level registers."""

    __slots__ = ("registers", "frames", "terms", "mode", "scale", "unnormalized", "records",
                 "_norm")

    def __init__(self, registers: Sequence[str], frames: Sequence[Basis],
                 terms: Mapping[tuple[int, ...], Amp], mode: str = EXACT,
                 scale=None, unnormalized: bool = False,
                 records: Mapping[str, Basis] | None = None) -> None:
        self.registers = tuple(registers)
        self.frames = tuple(frames)
        self.mode = mode
        if scale is None:
            scale = ONE if mode == EXACT else 1.0
        terms, scale = _fold_scale(
            {k: v for k, v in terms.items() if not _is_zero(v)}, scale, mode
        )
        self.terms = terms
        self.scale = scale
        self.unnormalized = unnormalized
        self.records = dict(records or {})
        self._norm = None

    # -- basic queries --
    def index(self, register: str) -> int:
        try:
            return self.registers.index(register)
        except ValueError:
            raise UnknownRegister(register) from None

    def frame(self, register: str) -> Basis:
        return self.frames[self.index(register)]

    def norm_sq(self):
        """Squared norm, including the scale factor."""
        if self._norm is not None:
            return self._norm
        total = _zero(self.mode)
        for a in self.terms.values():
            total = total + _abs_sq(a)
        if self.mode == EXACT:
            total = total * self.scale
        else:
            total = float(total.real if isinstance(total, complex) else total)
        self._norm = total
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def physical_terms(self) -> dict[tuple[int, ...], Amp]:
        """Terms with the scale folded in (float mode only when it does not fold exactly)."""
        if self.mode == EXACT and self.scale == ONE:
            return dict(self.terms)
        if self.mode == FLOAT:
            return dict(self.terms)
        root = math.sqrt(float(self.scale))
        return {k: complex(float(v) * root, 0.0) for k, v in self.terms.items()}

    def replace(self, **kw) -> StateVector:
        args = dict(
            registers=self.registers, frames=self.frames, terms=self.terms,
            mode=self.mode, scale=self.scale, unnormalized=self.unnormalized,
            records=self.records,
        )
        args.update(kw)
        return StateVector(**args)

    def scaled(self, factor: Amp) -> StateVector:
        factor = coerce_amp(factor, self.mode)
        return self.replace(terms={k: v * factor for k, v in self.terms.items()})

    def rescaled(self, scale_factor) -> StateVector:
        """Multiply the squared norm by ``scale_factor`` (a positive exact number)."""
        if self.mode == FLOAT:
            root = math.sqrt(float(scale_factor))
            return self.replace(terms={k: v * root for k, v in self.terms.items()})
        return self.replace(scale=self.scale * scale_factor)

    def normalized(self) -> StateVector:
        p = self.norm_sq()
        if _is_zero(p if isinstance(p, QuadAmp) else complex(p)):
            raise ZeroDivisionError("cannot normalize a zero state")
        if self.mode == FLOAT:
            return self.rescaled(1.0 / p).replace(unnormalized=False)
        return self.rescaled(p.inverse()).replace(unnormalized=False)

    def to_mode(self, mode: str) -> StateVector:
        if mode == self.mode:
            return self
        if mode == EXACT:
            raise BasisError("cannot convert a float state to exact mode")
        terms = {k: to_float_amp(v) for k, v in self.physical_terms().items()}
        return StateVector(
            self.registers, self.frames, terms, FLOAT,
            unnormalized=self.unnormalized, records=self.records,
        )

    def amplitude(self, config: Mapping[str, str]) -> Amp:
        """Physical amplitude of a configuration given as register -> label."""
        st = self
        idx = []
        for reg in self.registers:
            basis, o = resolve_label(config[reg])
            st = change_basis(st, reg, basis)
            idx.append(o)
        terms = st.physical_terms()
        default = ZERO if self.mode == EXACT and self.scale == ONE else 0j
        return terms.get(tuple(idx), default)

    # -- equality --
    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        if set(self.registers) != set(other.registers):
            return False
        a = to_z(self)
        b = to_z(reorder(other, self.registers))
        if self.mode != other.mode:
            a, b = a.to_mode(FLOAT), b.to_mode(FLOAT)
        if self.mode == FLOAT or other.mode == FLOAT:
            ta, tb = a.physical_terms(), b.physical_terms()
            keys = set(ta) | set(tb)
            return all(abs(ta.get(k, 0j) - tb.get(k, 0j)) < FLOAT_TOL for k in keys)
        if a.scale == b.scale:
            return a.terms == b.terms
        # compare amp_a^2 s_a with amp_b^2 s_b and signs
        if set(a.terms) != set(b.terms):
            return False
        for k in a.terms:
            x, y = a.terms[k], b.terms[k]
            if x.sign() != y.sign() or x * x * a.scale != y * y * b.scale:
                return False
        return True

    __hash__ = None

    def __repr__(self) -> str:
        return f"StateVector({format_state(self)})"


def _fold_scale(terms: dict, scale, mode: str):
    if mode == FLOAT:
        if scale != 1.0 and scale != ONE:
            root = math.sqrt(float(scale))
            terms = {k: v * root for k, v in terms.items()}
        return terms, 1.0
    if not isinstance(scale, QuadAmp):
        scale = QuadAmp(scale)
    if scale == ONE:
        return terms, ONE
    if scale.is_rational():
        root = sqrt_of_rational(scale.to_fraction())
        if root is not None:
            return {k: v * root for k, v in terms.items()}, ONE
    return terms, scale


# -- construction -----------------------------------------------------------

def make_state(registers: Sequence[str], terms: Iterable[tuple], *, mode: str = EXACT,
               scale=None, frames: Sequence[Basis] | None = None,
               allow_unnormalized: bool = False) -> StateVector:
    """Build a state from ``(config, amplitude)`` pairs.

    A config is a tuple of labels or indices in register order, or a mapping
    register -> label.  Labels pick the frame (``up``/``down`` for z,
    ``+``/``-`` for x); duplicate configs are summed.
    """
    registers = tuple(registers)
    if len(set(registers)) != len(registers):
        raise DuplicateRegister(next(r for r in registers if registers.count(r) > 1))
    terms = list(terms)
    if not terms:
        raise ValueError("a state needs at least one term")
    frame_of: list[Basis | None] = list(frames) if frames is not None else [None] * len(registers)
    acc: dict[tuple[int, ...], Amp] = {}
    for config, amp in terms:
        if isinstance(config, Mapping):
            for name in config:
                if name not in registers:
                    raise UnknownRegister(name)
            config = tuple(config[r] for r in registers)
        if len(config) != len(registers):
            raise RegisterMismatch(f"config {config!r} does not cover {registers!r}")
        idx = []
        for pos, label in enumerate(config):
            if isinstance(label, int):
                if label not in (0, 1):
                    raise BasisError(f"outcome index {label} out of range")
                if frame_of[pos] is None:
                    frame_of[pos] = Z
                idx.append(label)
                continue
            label = str(label)
            if label in INDEX_LABELS:
                if frame_of[pos] is None:
                    frame_of[pos] = Z
                idx.append(int(label))
                continue
            if frame_of[pos] is not None and frame_of[pos].kind not in ("z", "x"):
                idx.append(frame_of[pos].outcome_of(label))
                continue
            basis, o = resolve_label(label)
            if frame_of[pos] is None:
                frame_of[pos] = basis
            elif _frame_key(frame_of[pos]) != _frame_key(basis):
                raise BasisError(f"register {registers[pos]!r} mixes bases across terms")
            idx.append(o)
        key = tuple(idx)
        amp = coerce_amp(amp, mode)
        acc[key] = acc[key] + amp if key in acc else amp
    frames = tuple(f if f is not None else Z for f in frame_of)
    for f in frames:
        if mode == EXACT and not f.exact_ok:
            raise BasisError(f"{f} needs float mode")
    state = StateVector(registers, frames, acc, mode, scale=scale)
    check_normalized(state, allow_unnormalized)
    if allow_unnormalized:
        state = state.replace(unnormalized=True)
    return state


def check_normalized(state: StateVector, allow_unnormalized: bool = False) -> None:
    p = state.norm_sq()
    if state.mode == EXACT:
        if p != ONE and not allow_unnormalized:
            raise NotNormalized(ONE - p)
    elif abs(p - 1.0) > FLOAT_TOL and not allow_unnormalized:
        raise NotNormalized(1.0 - p)


def basis_state(register: str, label: str, mode: str = EXACT) -> StateVector:
    return make_state([register], [((label,), 1)], mode=mode)


def tensor(s1: StateVector, s2: StateVector) -> StateVector:
    """Tensor product; registers of ``s1`` come first."""
    clash = set(s1.registers) & set(s2.registers)
    if clash:
        raise DuplicateRegister(sorted(clash)[0])
    if s1.mode != s2.mode:
        s1, s2 = s1.to_mode(FLOAT), s2.to_mode(FLOAT)
    terms = {k1 + k2: a1 * a2 for k1, a1 in s1.terms.items() for k2, a2 in s2.terms.items()}
    scale = s1.scale * s2.scale if s1.mode == EXACT else 1.0
    return StateVector(
        s1.registers + s2.registers, s1.frames + s2.frames, terms, s1.mode, scale,
        s1.unnormalized or s2.unnormalized, {**s1.records, **s2.records},
    )


# -- re-expression ----------------------------------------------------------

def change_basis(state: StateVector, register: str, basis: Basis) -> StateVector:
    """Re-express ``register``'s labels in ``basis``; the vector is unchanged."""
    pos = state.index(register)
    if not basis.single:
        raise BasisError("change_basis takes a single-register basis")
    old = state.frames[pos]
    if _frame_key(old) == _frame_key(basis):
        return state
    g = _transition(_frame_key(old), _frame_key(basis), state.mode)
    acc: dict[tuple[int, ...], Amp] = {}
    for key, amp in state.terms.items():
        i = key[pos]
        for j in (0, 1):
            c = g[j][i]
            if _is_zero(c):
                continue
            nk = key[:pos] + (j,) + key[pos + 1:]
            v = c * amp
            acc[nk] = acc[nk] + v if nk in acc else v
    frames = state.frames[:pos] + (basis,) + state.frames[pos + 1:]
    return state.replace(frames=frames, terms=acc)


def to_z(state: StateVector) -> StateVector:
    for reg in state.registers:
        state = change_basis(state, reg, Z)
    return state


def reorder(state: StateVector, registers: Sequence[str]) -> StateVector:
    registers = tuple(registers)
    if registers == state.registers:
        return state
    if set(registers) != set(state.registers) or len(registers) != len(state.registers):
        raise RegisterMismatch(f"{registers!r} vs {state.registers!r}")
    perm = [state.index(r) for r in registers]
    terms = {tuple(k[p] for p in perm): v for k, v in state.terms.items()}
    return state.replace(registers=registers, frames=tuple(state.frames[p] for p in perm), terms=terms)


def rename_register(state: StateVector, old: str, new: str) -> StateVector:
    pos = state.index(old)
    if new != old and new in state.registers:
        raise DuplicateRegister(new)
    regs = state.registers[:pos] + (new,) + state.registers[pos + 1:]
    records = dict(state.records)
    if old in records:
        records[new] = records.pop(old)
    return state.replace(registers=regs, records=records)


def drop_register(state: StateVector, register: str, outcome: int = 0) -> StateVector:
    """Remove a register assumed to sit in ``outcome`` of its frame."""
    pos = state.index(register)
    terms = {}
    for k, v in state.terms.items():
        if k[pos] != outcome:
            raise RegisterMismatch(f"register {register!r} is not in a definite state")
        terms[k[:pos] + k[pos + 1:]] = v
    records = {r: b for r, b in state.records.items() if r != register}
    return state.replace(
        registers=state.registers[:pos] + state.registers[pos + 1:],
        frames=state.frames[:pos] + state.frames[pos + 1:],
        terms=terms, records=records,
    )


def append_register(state: StateVector, register: str, frame: Basis, outcome: int = 0) -> StateVector:
    if register in state.registers:
        raise DuplicateRegister(register)
    terms = {k + (outcome,): v for k, v in state.terms.items()}
    return state.replace(
        registers=state.registers + (register,), frames=state.frames + (frame,), terms=terms,
    )


# -- projection and Born rule ------------------------------------------------

def _as_targets(targets) -> tuple[str, ...]:
    if isinstance(targets, str):
        return (targets,)
    return tuple(targets)


def project(state: StateVector, targets, basis: Basis, outcome) -> StateVector:
    """Unnormalized component of ``state`` on ``outcome``.

    With a single-register basis and several targets, ``outcome`` is a tuple
    with one index (or label) per target.  With a ``states`` basis the
    outcome is 0 or 1.
    """
    targets = _as_targets(targets)
    for t in targets:
        state.index(t)
    if basis.single:
        outcomes = outcome if isinstance(outcome, tuple) else (outcome,)
        if len(outcomes) != len(targets):
            raise RegisterMismatch("one outcome per target is required")
        for t, o in zip(targets, outcomes):
            if isinstance(o, str):
                o = basis.outcome_of(o)
            state = change_basis(state, t, basis)
            pos = state.index(t)
            state = state.replace(
                terms={k: v for k, v in state.terms.items() if k[pos] == o},
                unnormalized=True,
            )
        return state
    if len(targets) != basis.arity:
        raise RegisterMismatch(f"basis acts on {basis.arity} registers, got {len(targets)}")
    if isinstance(outcome, str):
        outcome = basis.outcome_of(outcome)
    if outcome == 0 or len(basis.kets) == 2:
        return _project_ket(state, targets, basis.kets[outcome])
    # complement of the single ket
    comp = _project_ket(state, targets, basis.kets[0])
    return add_states(state, comp.scaled(-_one(state.mode))).replace(unnormalized=True)


def _project_ket(state: StateVector, targets, ket) -> StateVector:
    """|k><k| acting on ``targets`` (ket coordinates in z)."""
    for t in targets:
        state = change_basis(state, t, Z)
    pos = [state.index(t) for t in targets]
    rest_pos = [i for i in range(len(state.registers)) if i not in pos]
    mode = state.mode
    ket = [(cfg, coerce_amp(a, mode)) for cfg, a in ket]
    overlap: dict[tuple[int, ...], Amp] = {}
    kd = dict(ket)
    for k, v in state.terms.items():
        t = tuple(k[p] for p in pos)
        c = kd.get(t)
        if c is None:
            continue
        r = tuple(k[p] for p in rest_pos)
        val = _conj(c) * v
        overlap[r] = overlap[r] + val if r in overlap else val
    terms: dict[tuple[int, ...], Amp] = {}
    n = len(state.registers)
    for r, ov in overlap.items():
        if _is_zero(ov):
            continue
        for cfg, c in ket:
            key = [0] * n
            for p, o in zip(pos, cfg):
                key[p] = o
            for p, o in zip(rest_pos, r):
                key[p] = o
            terms[tuple(key)] = c * ov
    return state.replace(terms=terms, unnormalized=True)


def add_states(s1: StateVector, s2: StateVector) -> StateVector:
    """Vector sum of two states on the same registers (frames and scale taken from ``s1``)."""
    if set(s1.registers) != set(s2.registers):
        raise RegisterMismatch(f"{s1.registers!r} vs {s2.registers!r}")
    s2 = reorder(s2, s1.registers)
    for reg, f in zip(s1.registers, s1.frames):
        s2 = change_basis(s2, reg, f)
    s2 = _match_scale(s2, s1)
    acc = dict(s1.terms)
    for k, v in s2.terms.items():
        acc[k] = acc[k] + v if k in acc else v
    return s1.replace(terms=acc)


def _match_scale(s: StateVector, target: StateVector) -> StateVector:
    """Re-express ``s`` with ``target``'s scale."""
    if s.mode == FLOAT or s.scale == target.scale:
        return s
    ratio = s.scale / target.scale
    if not ratio.is_rational():
        raise BasisError("scales are incommensurable in the exact field")
    root = sqrt_of_rational(ratio.to_fraction())
    if root is None:
        raise BasisError("scales are incommensurable in the exact field")
    return StateVector(s.registers, s.frames, {k: v * root for k, v in s.terms.items()},
                       s.mode, target.scale, s.unnormalized, s.records)


def born_probabilities(state: StateVector, targets, basis: Basis) -> dict:
    """Outcome -> probability, normalized by the state's own squared norm.

    Keys are outcome indices for one target or a ``states`` basis, and tuples
    of indices for several targets in a single-register basis.
    """
    targets = _as_targets(targets)
    total = state.norm_sq()
    if state.mode == EXACT:
        if total.is_zero():
            raise ZeroDivisionError("zero state has no Born distribution")
        inv = ONE if total == ONE else total.inverse()
    else:
        if total < FLOAT_EPS:
            raise ZeroDivisionError("zero state has no Born distribution")
        inv = 1.0 / total
    if basis.single:
        s = state
        for t in targets:
            s = change_basis(s, t, basis)
        pos = [s.index(t) for t in targets]
        acc: dict = {}
        for k, v in s.terms.items():
            key = tuple(k[p] for p in pos)
            acc[key] = acc[key] + _abs_sq(v) if key in acc else _abs_sq(v)
        out = {}
        for key in _all_outcomes(len(targets)):
            raw = acc.get(key, _zero(state.mode))
            if state.mode == EXACT:
                p = raw * s.scale * inv
            else:
                p = float(raw.real if isinstance(raw, complex) else raw) * inv
            out[key[0] if len(targets) == 1 else key] = p
        return out
    return {o: project(state, targets, basis, o).norm_sq() * inv for o in (0, 1)}


def _all_outcomes(n: int):
    if n == 0:
        return [()]
    rest = _all_outcomes(n - 1)
    return [(o,) + r for o in (0, 1) for r in rest]


def inner_product(s1: StateVector, s2: StateVector) -> Amp:
    """<s1|s2>, conjugate-linear in the first argument."""
    if set(s1.registers) != set(s2.registers):
        raise RegisterMismatch(f"{s1.registers!r} vs {s2.registers!r}")
    if s1.mode != s2.mode:
        s1, s2 = s1.to_mode(FLOAT), s2.to_mode(FLOAT)
    s2 = reorder(s2, s1.registers)
    for reg, f in zip(s1.registers, s1.frames):
        s2 = change_basis(s2, reg, f)
    total = _zero(s1.mode)
    small, big = (s1.terms, s2.terms)
    for k, v in small.items():
        w = big.get(k)
        if w is not None:
            total = total + _conj(v) * w
    if s1.mode == FLOAT:
        return total
    prod = s1.scale * s2.scale
    if prod == ONE:
        return total
    if not prod.is_rational():
        raise BasisError("overlap leaves the exact field")
    root = sqrt_of_rational(prod.to_fraction())
    if root is None:
        raise BasisError("overlap leaves the exact field")
    return total * root


# -- formatting -------------------------------------------------------------

def format_amp(a: Amp) -> str:
    if isinstance(a, QuadAmp):
        return str(a)
    if abs(a.imag) < FLOAT_EPS:
        return repr(round(a.real, 12))
    return f"({a.real:.12g}{a.imag:+.12g}j)"


def format_state(state: StateVector, max_terms: int = 16) -> str:
    """Ket rendering such as ``1/3*sqrt3 |up,down> + ...``."""
    if not state.terms:
        return "0"
    text = ""
    for key in sorted(state.terms)[:max_terms]:
        amp = format_amp(state.terms[key])
        labels = ",".join(f.label(o) for f, o in zip(state.frames, key))
        if " " in amp.lstrip("-"):
            amp = f"({amp})"
        if amp.startswith("-"):
            sep, amp = " - ", amp[1:]
        else:
            sep = " + "
        text += (sep if text else sep.strip(" +")) + f"{amp} |{labels}>"
    if len(state.terms) > max_terms:
        text += f" + ... ({len(state.terms) - max_terms} more)"
    if state.mode == EXACT and state.scale != ONE:
        text = f"sqrt({state.scale}) * ({text})"
    return text


def phase_factor(phi: float) -> complex:
    return cmath.exp(1j * phi)
