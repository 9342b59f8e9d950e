from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frlogic.amplitude import QuadAmp
from frlogic.dsl import ParseError, SemanticError, emit, load, loads, parse, write_corpus
from frlogic.scenario import evaluate
from frlogic.scenarios import bundled

CORPUS = Path(__file__).resolve().parent.parent / "scenarios"

HEADER = "register barred, unbarred\nstate 1/sqrt3 |up,down> + 1/sqrt3 |down,up> + 1/sqrt3 |down,down>\n"


def semantic(text):
    with pytest.raises(SemanticError) as info:
        loads(text)
    return info.value


def test_parse_fr_full():
    ast = parse((CORPUS / "fr_full.fr").read_text())
    assert [r for r, _ in ast.registers] == ["barred", "unbarred"]
    assert len(ast.steps) == 4 and len(ast.statements) == 4
    assert sum(1 for c in ast.checks if c.kind == "transitivity") == 3


def test_minimal_file_runs():
    sc = loads(HEADER + "step 1: Fbar absorbs barred in z\n"
               "statement A: if Fbar@1 == up then unbarred@1 == down expect=Holds\n")
    assert sc.name == "scenario"
    assert evaluate(sc).ok


def test_comments_and_record_names():
    sc = loads(HEADER + "# a comment\nstep 1: A absorbs barred in z  # trailing\n"
               "step 2: A absorbs unbarred in x\n"
               "statement T: if A#2@2 == plus then A@2 == down\n")
    assert sc.statement("T").premises[0].register == "A#2"


class TestParseErrors:
    def test_empty(self):
        with pytest.raises(ParseError) as info:
            loads("")
        assert (info.value.line, info.value.col) == (1, 1)

    def test_position(self):
        with pytest.raises(ParseError) as info:
            loads(HEADER + "step 1 Fbar absorbs barred in z\n")
        assert info.value.line == 3 and info.value.col == 8

    def test_bad_utf8(self):
        with pytest.raises(ParseError) as info:
            loads(b"register a\nstate |up>\nabout \xff\n")
        assert info.value.line == 3

    def test_unknown_keyword(self):
        with pytest.raises(ParseError):
            loads(HEADER + "stop 1: A absorbs barred in z\n")


class TestSemanticErrors:
    def test_not_normalized(self):
        err = semantic("register a, b\nstate 1/sqrt3 |up,down> + 1/sqrt3 |down,up>\n")
        assert err.kind == "NotNormalized" and err.deficit == QuadAmp(Fraction(1, 3))

    def test_unknown_register(self):
        err = semantic(HEADER + "step 1: A absorbs nobody in z\n")
        assert err.kind == "UnknownRegister" and err.name == "nobody" and err.line == 3

    def test_absorbed_register_is_gone(self):
        err = semantic(HEADER + "step 1: A absorbs barred in z\nstep 2: B measures barred in x preserving\n")
        assert err.kind == "UnknownRegister"

    def test_duplicate_step(self):
        err = semantic(HEADER + "step 1: A absorbs barred in z\nstep 1: B absorbs unbarred in z\n")
        assert err.kind == "DuplicateStep" and err.line == 4

    def test_no_registers(self):
        assert semantic("state |up>\n").kind == "NoRegisters"

    def test_no_state(self):
        assert semantic("register a\n").kind == "NoState"

    def test_arity(self):
        assert semantic("register a, b\nstate |up>\n").kind == "KetArity"

    def test_unknown_step(self):
        err = semantic(HEADER + "step 1: A absorbs barred in z\nstatement X: if A@7 == up then A@1 == up\n")
        assert err.kind == "UnknownStep"

    def test_unknown_statement(self):
        err = semantic(HEADER + "step 1: A absorbs barred in z\ncheck transitivity P Q\n")
        assert err.kind == "UnknownStatement"


@pytest.mark.parametrize("sc", bundled(), ids=lambda s: s.name)
def test_round_trip(sc):
    text = emit(sc)
    again = loads(text)
    assert emit(again) == text
    assert evaluate(again, checks=False).verdict_table() == evaluate(sc, checks=False).verdict_table()


@pytest.mark.parametrize("sc", bundled(), ids=lambda s: s.name)
def test_corpus_is_current(sc):
    assert (CORPUS / f"{sc.name}.fr").read_text() == emit(sc)


def test_load_uses_stem(tmp_path):
    write_corpus(tmp_path, [s for s in bundled() if s.name == "fr_full"])
    assert load(tmp_path / "fr_full.fr").name == "fr_full"


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_fuzz_bytes(data):
    try:
        loads(data)
    except (ParseError, SemanticError):
        pass


fragments = st.sampled_from([
    "register a, b\n", "state |up,down>\n", "state 1/sqrt2 |up,up> - 1/sqrt2 |down,down>\n",
    "step 1: A absorbs a in z\n", "step 2: B measures b in x preserving\n", "step 2: B absorbs b in theta(0.3)\n",
    "statement S: if A@1 == up then B@2 == plus\n", "check mine\n", "joint A,B\n", "mode float\n",
    "check transitivity S S\n", "step 3: C measures a,b in states(|up,up>;|down,down>)\n", "#\n", "scenario x\n",
])


@settings(max_examples=300, deadline=None)
@given(st.lists(fragments, max_size=8))
def test_fuzz_lines(lines):
    try:
        loads("".join(lines))
    except (ParseError, SemanticError):
        pass
