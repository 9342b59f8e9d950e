"""Line-oriented experiment description language.

::

    scenario fr_full
    register barred, unbarred
    state 1/sqrt3 |up,down> + 1/sqrt3 |down,up> + 1/sqrt3 |down,down>
    step 1: Fbar absorbs barred in z
    step 3: Wbar measures Fbar in x preserving
    statement S2: if Wbar@3 == - then F@2 == up mode=retro
    check transitivity S2 S3
    check mine includes S2

``#`` starts a comment.  :func:`parse` builds an :class:`ExperimentFile`
with source lines attached, :func:`compile_file` turns it into a
:class:`~frlogic.scenario.Scenario`, and :func:`emit` writes a scenario back
out in the same syntax.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .amplitude import AmplitudeSyntaxError, QuadAmp, parse_amplitude
from .engine import ABSORB, PRESERVE, MeasurementStep, resolve_steps
from .errors import BasisError, FRLogicError, NotNormalized
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
from .state import EXACT, FLOAT, INDEX_LABELS, LABEL_ALIASES, X, Z, Basis, make_state, states_basis, theta_basis

__all__ = ["ParseError", "SemanticError", "ExperimentFile", "parse", "compile_file", "load", "loads", "emit"]

VERDICTS = ("Holds", "Vacuous", "Fails", "Probabilistic")


class ParseError(FRLogicError):
    def __init__(self, line: int, col: int, expected: str) -> None:
        super().__init__(f"{line}:{col}: expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


class SemanticError(FRLogicError):
    def __init__(self, line: int, kind: str, message: str, **extra: Any) -> None:
        super().__init__(f"line {line}: {kind}: {message}")
        self.line = line
        self.kind = kind
        for k, v in extra.items():
            setattr(self, k, v)


# -- AST ----------------------------------------------------------------------

@dataclass
class EventNode:
    register: str
    step: int
    label: str
    basis: Basis | None
    line: int


@dataclass
class TermNode:
    labels: tuple[str, ...]
    amp: QuadAmp
    phase: float
    col: int


@dataclass
class StateNode:
    terms: list[TermNode]
    scale: Fraction
    line: int


@dataclass
class StepNode:
    index: int
    agent: str
    targets: tuple[str, ...]
    basis: Basis
    style: str
    collapse: str | None
    line: int


@dataclass
class StatementNode:
    name: str
    premises: list[EventNode]
    conclusion: EventNode
    mode: str
    claim: str | None
    expect: str | None
    p: Any
    line: int


@dataclass
class CheckNode:
    kind: str
    args: tuple
    expect: str | None
    value: Any
    line: int


@dataclass
class ExperimentFile:
    name: str | None = None
    mode: str | None = None
    about: str = ""
    registers: list[tuple[str, int]] = field(default_factory=list)
    state: StateNode | None = None
    steps: list[StepNode] = field(default_factory=list)
    statements: list[StatementNode] = field(default_factory=list)
    checks: list[CheckNode] = field(default_factory=list)
    joint: tuple[str, ...] = ()
    joint_line: int = 0


# -- scanner ------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.#]*")
_INT = re.compile(r"\d+")
_FLOAT = re.compile(r"[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?")
_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[+-]|[01]")


class _Line:
    def __init__(self, text: str, lineno: int) -> None:
        self.text = text
        self.n = lineno
        self.pos = 0

    def fail(self, expected: str, pos: int | None = None):
        p = self.pos if pos is None else pos
        raise ParseError(self.n, p + 1, expected)

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r":
            self.pos += 1

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str) -> None:
        if not self.accept(s):
            self.fail(repr(s))

    def match(self, rx: re.Pattern, what: str) -> str:
        self.ws()
        m = rx.match(self.text, self.pos)
        if not m:
            self.fail(what)
        self.pos = m.end()
        return m.group(0)

    def name(self, what: str = "a name") -> str:
        return self.match(_NAME, what)

    def keyword(self, *words: str) -> str:
        self.ws()
        start = self.pos
        m = _NAME.match(self.text, self.pos)
        if not m or m.group(0) not in words:
            self.fail(" or ".join(repr(w) for w in words), start)
        self.pos = m.end()
        return m.group(0)

    def peek_keyword(self, word: str) -> bool:
        self.ws()
        m = _NAME.match(self.text, self.pos)
        return bool(m) and m.group(0) == word

    def integer(self) -> int:
        return int(self.match(_INT, "an integer"))

    def number(self) -> float:
        start = self.pos
        text = self.match(_FLOAT, "a number")
        value = float(text)
        if not math.isfinite(value):
            self.fail("a finite number", start)
        return value

    def word(self) -> tuple[str, int]:
        """Raw text up to the next whitespace."""
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in " \t\r":
            self.pos += 1
        return self.text[start:self.pos], start

    def end(self) -> None:
        if not self.at_end():
            self.fail("end of line")


def _amp(line: _Line, text: str, start: int) -> QuadAmp:
    if not text.strip():
        line.fail("an amplitude", start)
    try:
        return parse_amplitude(text)
    except AmplitudeSyntaxError as exc:
        line.fail(f"an amplitude ({exc})", start + exc.offset)
    except (ZeroDivisionError, ValueError, OverflowError, RecursionError):
        line.fail("an amplitude", start)


def _number_or_amp(line: _Line, text: str, start: int):
    if re.fullmatch(r"[-+]?(\d+\.\d*|\.\d+|\d+(\.\d*)?[eE][-+]?\d+)", text):
        value = float(text)
        if not math.isfinite(value):
            line.fail("a finite number", start)
        return value
    return _amp(line, text, start)


# -- parser -------------------------------------------------------------------

def parse(text: str | bytes) -> ExperimentFile:
    """Parse experiment text; raises :class:`ParseError` with a 1-based position."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            head = bytes(text)[: exc.start].decode("utf-8", "replace")
            ln = head.count("\n") + 1
            col = len(head) - (head.rfind("\n") + 1) + 1
            raise ParseError(ln, col, "UTF-8 text") from None
    out = ExperimentFile()
    seen_any = False
    for i, raw in enumerate(text.split("\n"), start=1):
        line = _Line(_strip_comment(raw), i)
        if line.at_end():
            continue
        seen_any = True
        _parse_line(line, out)
    if not seen_any:
        raise ParseError(1, 1, "a 'scenario', 'register' or 'state' line")
    return out


def _strip_comment(raw: str) -> str:
    # '#' inside record names such as W#2 is part of the name; a comment
    # starts at a '#' that does not follow a name character
    for m in re.finditer("#", raw):
        j = m.start()
        if j == 0 or not (raw[j - 1].isalnum() or raw[j - 1] == "_"):
            return raw[:j]
    return raw


def _parse_line(line: _Line, out: ExperimentFile) -> None:
    start = line.pos
    kw = line.keyword("scenario", "mode", "about", "register", "state", "step",
                      "statement", "check", "joint")
    if kw == "scenario":
        out.name = line.name("a scenario name")
        line.end()
    elif kw == "mode":
        out.mode = line.keyword("exact", "float")
        line.end()
    elif kw == "about":
        line.ws()
        out.about = line.text[line.pos:].strip()
    elif kw == "register":
        out.registers.append((line.name("a register name"), line.n))
        while line.accept(","):
            out.registers.append((line.name("a register name"), line.n))
        line.end()
    elif kw == "state":
        if out.state is not None:
            raise SemanticError(line.n, "DuplicateState", "only one state line is allowed")
        out.state = _parse_state(line)
    elif kw == "step":
        out.steps.append(_parse_step(line))
    elif kw == "statement":
        out.statements.append(_parse_statement(line))
    elif kw == "check":
        out.checks.append(_parse_check(line))
    elif kw == "joint":
        regs = [line.name("a register name")]
        while line.accept(","):
            regs.append(line.name("a register name"))
        line.end()
        out.joint = tuple(regs)
        out.joint_line = line.n


def _parse_state(line: _Line) -> StateNode:
    scale = Fraction(1)
    if line.peek("scale="):
        line.expect("scale=")
        text, pos = line.word()
        value = _amp(line, text, pos)
        if not value.is_rational() or value.to_fraction() <= 0:
            line.fail("a positive rational scale", pos)
        scale = value.to_fraction()
    terms = _parse_terms(line, stop=())
    line.end()
    return StateNode(terms, scale, line.n)


def _parse_terms(line: _Line, stop: tuple[str, ...]) -> list[TermNode]:
    terms = [_parse_term(line, negate=False)]
    while True:
        line.ws()
        if line.at_end() or any(line.peek(s) for s in stop):
            return terms
        if line.accept("+"):
            terms.append(_parse_term(line, negate=False))
        elif line.accept("-"):
            terms.append(_parse_term(line, negate=True))
        else:
            line.fail("'+', '-'" + "".join(f" or {s!r}" for s in stop) + " between terms")


def _parse_term(line: _Line, negate: bool) -> TermNode:
    line.ws()
    start = line.pos
    # amplitude text runs to the ket bar or a phase() factor
    end = start
    depth = 0
    text = line.text
    while end < len(text):
        ch = text[end]
        if ch == "(":
            depth += 1
        elif ch == ")":
            if depth == 0:
                break
            depth -= 1
        elif depth == 0 and (ch == "|" or text.startswith("phase(", end)):
            break
        end += 1
    amp_text = text[start:end]
    if amp_text.strip():
        amp = _amp(line, amp_text, start)
    else:
        amp = QuadAmp(1)
    line.pos = end
    phase = 0.0
    if line.accept("phase("):
        phase = line.number()
        line.expect(")")
    line.expect("|")
    labels = [line.match(_LABEL, "a ket label")]
    while line.accept(","):
        labels.append(line.match(_LABEL, "a ket label"))
    line.expect(">")
    return TermNode(tuple(labels), -amp if negate else amp, phase, start + 1)


def _parse_basis(line: _Line) -> Basis:
    line.ws()
    start = line.pos
    if line.accept("theta("):
        value = line.number()
        line.expect(")")
        return theta_basis(value)
    if line.accept("states("):
        kets = [_parse_terms(line, stop=(";", ")"))]
        if line.accept(";"):
            kets.append(_parse_terms(line, stop=(")",)))
        line.expect(")")
        try:
            return _states_from_terms(kets)
        except (BasisError, ValueError) as exc:
            line.fail(f"an orthonormal states basis ({exc})", start)
    m = _NAME.match(line.text, line.pos)
    if not m or m.group(0) not in ("z", "x"):
        line.fail("'z', 'x', 'theta(' or 'states('", start)
    line.pos = m.end()
    return Z if m.group(0) == "z" else X


def _states_from_terms(kets: list[list[TermNode]]) -> Basis:
    out = []
    for ket in kets:
        pairs = []
        for t in ket:
            cfg = []
            for label in t.labels:
                if label in ("up", "0"):
                    cfg.append(0)
                elif label in ("down", "1"):
                    cfg.append(1)
                else:
                    raise BasisError("states() kets use z labels")
            if t.phase:
                raise BasisError("states() kets take no phase")
            pairs.append((tuple(cfg), t.amp))
        out.append(pairs)
    arities = {len(cfg) for ket in out for cfg, _ in ket}
    if len(arities) != 1:
        raise BasisError("kets disagree on the number of registers")
    return states_basis(out)


def _parse_step(line: _Line) -> StepNode:
    index = line.integer()
    line.expect(":")
    agent = line.name("an agent name")
    verb = line.keyword("absorbs", "measures")
    targets = [line.name("a target register")]
    while line.accept(","):
        targets.append(line.name("a target register"))
    line.keyword("in")
    basis = _parse_basis(line)
    preserving = False
    collapse = None
    while not line.at_end():
        if line.peek_keyword("preserving"):
            line.keyword("preserving")
            preserving = True
        elif line.accept("collapse="):
            collapse = line.match(_LABEL, "a collapse outcome")
        else:
            line.fail("'preserving', 'collapse=' or end of line")
    if verb == "absorbs" and preserving:
        line.fail("'measures' with 'preserving' (absorbs cannot preserve)")
    style = PRESERVE if preserving else ABSORB
    if style == ABSORB and len(targets) != 1:
        raise SemanticError(line.n, "AbsorbArity", "an absorbing measurement takes one target")
    return StepNode(index, agent, tuple(targets), basis, style, collapse, line.n)


def _parse_event(line: _Line) -> EventNode:
    reg = line.name("a register name")
    line.expect("@")
    step = line.integer()
    line.expect("==")
    label = line.match(_LABEL, "an outcome label")
    basis = None
    if line.accept("basis="):
        basis = _parse_basis(line)
    return EventNode(reg, step, label, basis, line.n)


_STATEMENT_OPTS = ("mode", "claim", "expect", "p")


def _parse_statement(line: _Line) -> StatementNode:
    name = line.name("a statement name")
    line.expect(":")
    line.keyword("if")
    premises = [_parse_event(line)]
    while line.peek_keyword("and"):
        line.keyword("and")
        premises.append(_parse_event(line))
    line.keyword("then")
    conclusion = _parse_event(line)
    opts = _parse_options(line, _STATEMENT_OPTS)
    mode = opts.get("mode", (FORWARD, 0))
    claim = opts.get("claim", (None, 0))
    expect = opts.get("expect", (None, 0))
    if mode[0] not in (FORWARD, RETRO, "retrodictive"):
        line.fail("mode=forward or mode=retro", mode[1])
    if claim[0] not in (None, CERTAIN, GRADED):
        line.fail("claim=certain or claim=graded", claim[1])
    if expect[0] not in (None,) + VERDICTS:
        line.fail("expect=" + "|".join(VERDICTS), expect[1])
    p = None
    if "p" in opts:
        p = _number_or_amp(line, *opts["p"])
    return StatementNode(name, premises, conclusion,
                         RETRO if mode[0] == "retrodictive" else mode[0],
                         claim[0], expect[0], p, line.n)


def _parse_options(line: _Line, allowed: tuple[str, ...]) -> dict[str, tuple[str, int]]:
    opts: dict[str, tuple[str, int]] = {}
    while not line.at_end():
        word, pos = line.word()
        key, eq, value = word.partition("=")
        if not eq or key not in allowed:
            line.fail(" or ".join(f"'{k}='" for k in allowed) + " or end of line", pos)
        if not value:
            line.fail(f"a value after '{key}='", pos + len(key) + 1)
        opts[key] = (value, pos + len(key) + 1)
    return opts


def _parse_check(line: _Line) -> CheckNode:
    kind = line.keyword("transitivity", "compatible", "or", "mine")
    if kind == "transitivity":
        a = line.name("a statement name")
        b = line.name("a statement name")
        opts = _parse_options(line, ("expect", "violation"))
        expect = opts.get("expect", (None, 0))
        if expect[0] not in (None, "valid", "violated"):
            line.fail("expect=valid or expect=violated", expect[1])
        value = _number_or_amp(line, *opts["violation"]) if "violation" in opts else None
        return CheckNode(kind, (a, b), expect[0], value, line.n)
    if kind == "compatible":
        e1 = _parse_event(line)
        e2 = _parse_event(line)
        opts = _parse_options(line, ("expect",))
        expect = opts.get("expect", (None, 0))
        if expect[0] not in (None, "compatible", "incompatible"):
            line.fail("expect=compatible or expect=incompatible", expect[1])
        return CheckNode(kind, (e1, e2), expect[0], None, line.n)
    if kind == "or":
        names = [line.name("a statement name")]
        while line.accept(","):
            names.append(line.name("a statement name"))
        line.keyword("merged")
        merged = line.name("a statement name")
        opts = _parse_options(line, ("expect",))
        expect = opts.get("expect", (None, 0))
        if expect[0] not in (None, "divergent", "consistent"):
            line.fail("expect=divergent or expect=consistent", expect[1])
        return CheckNode(kind, (tuple(names), merged), expect[0], None, line.n)
    names: list[str] = []
    if line.peek_keyword("includes"):
        line.keyword("includes")
        names.append(line.name("a statement name"))
        while line.accept(","):
            names.append(line.name("a statement name"))
    line.end()
    return CheckNode(kind, (tuple(names),), None, None, line.n)


# -- compilation ----------------------------------------------------------------

def compile_file(ast: ExperimentFile, name: str | None = None) -> Scenario:
    """Validate an :class:`ExperimentFile` and build a scenario."""
    if not ast.registers:
        raise SemanticError(1, "NoRegisters", "declare at least one register")
    regs = []
    for r, ln in ast.registers:
        if r in regs:
            raise SemanticError(ln, "DuplicateRegister", f"register {r!r} declared twice")
        regs.append(r)
    if ast.state is None:
        raise SemanticError(ast.registers[-1][1], "NoState", "a 'state' line is required")
    mode = ast.mode or EXACT
    initial = _compile_state(ast.state, tuple(regs), mode)
    steps, live = _compile_steps(ast.steps, regs)

    def event(node: EventNode) -> Event:
        if node.step not in live:
            raise SemanticError(node.line, "UnknownStep", f"no step {node.step}")
        regs_at = live[node.step]
        if node.register not in regs_at:
            raise SemanticError(node.line, "UnknownRegister",
                                f"register {node.register!r} is not live after step {node.step}",
                                name=node.register)
        basis = node.basis
        if basis is None:
            if node.label in LABEL_ALIASES:
                basis = Z if LABEL_ALIASES[node.label][0] == "z" else X
            else:
                basis = regs_at[node.register]
        try:
            return Event(node.register, basis.outcome_of(node.label), basis, node.step)
        except BasisError as exc:
            raise SemanticError(node.line, "BadLabel", str(exc)) from None

    specs = []
    names = set()
    for st in ast.statements:
        if st.name in names:
            raise SemanticError(st.line, "DuplicateStatement", f"statement {st.name!r} defined twice")
        names.add(st.name)
        try:
            stmt = Statement(tuple(event(e) for e in st.premises), event(st.conclusion),
                             st.mode, st.claim or GRADED, st.name)
        except ValueError as exc:
            raise SemanticError(st.line, "BadStatement", str(exc)) from None
        specs.append(StatementSpec(stmt, st.expect, st.p))

    checks = []
    for ch in ast.checks:
        def known(n: str) -> str:
            if n not in names:
                raise SemanticError(ch.line, "UnknownStatement", f"no statement named {n!r}")
            return n

        if ch.kind == "transitivity":
            checks.append(TransitivityCheck(known(ch.args[0]), known(ch.args[1]), ch.expect, ch.value))
        elif ch.kind == "compatible":
            checks.append(CompatibleCheck(event(ch.args[0]), event(ch.args[1]), ch.expect))
        elif ch.kind == "or":
            checks.append(OrCheck(tuple(known(n) for n in ch.args[0]), known(ch.args[1]), ch.expect))
        else:
            checks.append(MineCheck(tuple(known(n) for n in ch.args[0])))
    final = live[max(live)]
    for r in ast.joint:
        if r not in final:
            raise SemanticError(ast.joint_line, "UnknownRegister",
                                f"register {r!r} is not live at the end", name=r)
    return Scenario(ast.name or name or "scenario", initial, tuple(steps), tuple(specs),
                    tuple(checks), ast.joint, mode, ast.about)


def _compile_state(node: StateNode, regs: tuple[str, ...], mode: str) -> InitialState:
    terms = []
    for t in node.terms:
        if len(t.labels) != len(regs):
            raise SemanticError(node.line, "KetArity",
                                f"ket has {len(t.labels)} labels for {len(regs)} registers")
        for label in t.labels:
            if label not in LABEL_ALIASES and label not in INDEX_LABELS:
                raise SemanticError(node.line, "BadLabel", f"unknown ket label {label!r}")
        terms.append(Term(t.labels, t.amp, t.phase))
    initial = InitialState(regs, tuple(terms), node.scale)
    if mode == EXACT and initial.needs_float:
        raise SemanticError(node.line, "NeedsFloat", "a non-real phase needs 'mode float'")
    try:
        initial.build(mode)
    except NotNormalized as exc:
        raise SemanticError(node.line, "NotNormalized", str(exc), deficit=exc.deficit) from None
    except (BasisError, ValueError) as exc:
        raise SemanticError(node.line, "BadState", str(exc)) from None
    return initial


def _compile_steps(nodes: list[StepNode], regs: list[str]):
    seen: dict[int, int] = {}
    for s in nodes:
        if s.index in seen:
            raise SemanticError(s.line, "DuplicateStep", f"step {s.index} already defined on line {seen[s.index]}")
        if s.index <= 0:
            raise SemanticError(s.line, "BadStep", "step numbers start at 1")
        seen[s.index] = s.line
    nodes = sorted(nodes, key=lambda s: s.index)
    steps = []
    for s in nodes:
        try:
            steps.append(MeasurementStep(s.index, s.agent, s.targets, s.basis, s.style, s.collapse))
        except (BasisError, ValueError) as exc:
            raise SemanticError(s.line, "BadStep", str(exc)) from None
    steps = list(resolve_steps(steps))
    live: dict[int, dict[str, Basis]] = {0: {r: Z for r in regs}}
    current = dict(live[0])
    for s, node in zip(steps, nodes):
        for t in s.targets:
            if t not in current:
                raise SemanticError(node.line, "UnknownRegister",
                                    f"register {t!r} is not live before step {s.index}", name=t)
        if s.record in current:
            raise SemanticError(node.line, "DuplicateRegister", f"record {s.record!r} already exists")
        if s.collapse not in (None, "sample"):
            try:
                s.record_basis.outcome_of(s.collapse)
            except BasisError as exc:
                raise SemanticError(node.line, "BadLabel", str(exc)) from None
        if s.style == ABSORB:
            if s.targets[0] in _records(steps, s):
                raise SemanticError(node.line, "TargetIsRecord",
                                    f"register {s.targets[0]!r} is already a record")
            del current[s.targets[0]]
        current[s.record] = s.record_basis
        live[s.index] = dict(current)
    return steps, live


def _records(steps, upto) -> set[str]:
    out = set()
    for s in steps:
        if s is upto:
            break
        out.add(s.record)
    return out


def loads(text: str | bytes, name: str | None = None) -> Scenario:
    return compile_file(parse(text), name)


def load(path) -> Scenario:
    from pathlib import Path

    p = Path(path)
    return loads(p.read_bytes(), p.stem)


# -- emission -------------------------------------------------------------------

def _amp_text(a, compact: bool = False) -> str:
    if isinstance(a, float):
        return repr(a)
    s = str(a)
    if compact:
        return s.replace(" ", "")
    return s


def _basis_text(b: Basis) -> str:
    if b.kind in ("z", "x"):
        return b.kind
    if b.kind == "theta":
        return f"theta({b.theta!r})"
    kets = []
    for ket in b.kets:
        terms = [Term(tuple("up" if o == 0 else "down" for o in cfg), QuadAmp(amp) if not isinstance(amp, QuadAmp) else amp)
                 for cfg, amp in ket]
        kets.append(_terms_text(terms))
    return "states(" + "; ".join(kets) + ")"


def _terms_text(terms) -> str:
    out = ""
    for t in terms:
        amp = _amp_text(t.amp)
        if " " in amp.lstrip("-"):
            amp = f"({amp})"
        if amp.startswith("-"):
            sep, amp = ("-" if not out else " - "), amp[1:]
        else:
            sep = "" if not out else " + "
        phase = f" phase({t.phase!r})" if t.phase else ""
        out += f"{sep}{amp}{phase} |{','.join(t.labels)}>"
    return out


def _event_text(e: Event) -> str:
    text = f"{e.register}@{e.at_step} == {e.label}"
    if e.label in INDEX_LABELS or e.basis.kind not in ("z", "x"):
        text += f" basis={_basis_text(e.basis)}"
    return text


def emit(scenario: Scenario) -> str:
    """Write ``scenario`` in the experiment language."""
    lines = [f"scenario {scenario.name}", f"mode {scenario.mode}"]
    if scenario.description:
        lines.append(f"about {scenario.description}")
    lines.append("register " + ", ".join(scenario.initial.registers))
    scale = "" if scenario.initial.scale == 1 else f"scale={scenario.initial.scale} "
    lines.append(f"state {scale}{_terms_text(scenario.initial.terms)}")
    for s in scenario.steps:
        verb = "absorbs" if s.style == ABSORB else "measures"
        text = f"step {s.index}: {s.agent} {verb} {','.join(s.targets)} in {_basis_text(s.basis)}"
        if s.style == PRESERVE:
            text += " preserving"
        if s.collapse is not None:
            c = s.collapse if isinstance(s.collapse, str) else s.record_basis.label(s.collapse)
            text += f" collapse={c}"
        lines.append(text)
    for spec in scenario.statements:
        st = spec.statement
        prem = " and ".join(_event_text(e) for e in st.premises)
        text = f"statement {st.name}: if {prem} then {_event_text(st.conclusion)} mode={st.mode} claim={st.claim}"
        if spec.expect:
            text += f" expect={spec.expect}"
        if spec.expect_p is not None:
            text += f" p={_amp_text(spec.expect_p, compact=True)}"
        lines.append(text)
    for ch in scenario.checks:
        if isinstance(ch, TransitivityCheck):
            text = f"check transitivity {ch.first} {ch.second}"
            if ch.expect:
                text += f" expect={ch.expect}"
            if ch.violation is not None:
                text += f" violation={_amp_text(ch.violation, compact=True)}"
        elif isinstance(ch, CompatibleCheck):
            text = f"check compatible {_event_text(ch.first)} {_event_text(ch.second)}"
            if ch.expect:
                text += f" expect={ch.expect}"
        elif isinstance(ch, OrCheck):
            text = f"check or {','.join(ch.branches)} merged {ch.merged}"
            if ch.expect:
                text += f" expect={ch.expect}"
        else:
            text = "check mine" + (f" includes {','.join(ch.includes)}" if ch.includes else "")
        lines.append(text)
    if scenario.joint:
        lines.append("joint " + ",".join(scenario.joint))
    return "\n".join(lines) + "\n"


def write_corpus(directory, scenarios=None) -> list:
    """Emit every bundled scenario as ``<name>.fr`` under ``directory``."""
    from pathlib import Path

    from .scenarios import bundled

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for s in scenarios if scenarios is not None else bundled():
        p = d / f"{s.name}.fr"
        p.write_text(emit(s), encoding="utf-8")
        paths.append(p)
    return paths
