from __future__ import annotations

import pytest

from frlogic.scenario import evaluate
from frlogic.scenarios import bundled, by_name, fr_collapse_variants, fr_phase

NAMES = [s.name for s in bundled()]


def test_sixteen_unique_names():
    assert len(NAMES) == 16 and len(set(NAMES)) == 16


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("mode", ["exact", "float"])
def test_bundled_ok(name, mode):
    sc = by_name(name)
    if sc.mode == "float" and mode == "exact":
        pytest.skip("angle outside the exact field")
    result = evaluate(sc, mode=mode)
    assert result.error is None
    assert result.ok, [(s.name, s.verdict.classification) for s in result.statements if not s.ok]


def test_collapse_table():
    table = {sc.name: {n: c for n, c, _ in evaluate(sc, checks=False).verdict_table()}
             for sc in fr_collapse_variants()}
    assert table["fr_collapse_up"]["S2"] == "Fails"
    assert table["fr_collapse_down"]["S4"] == "Holds"
    assert table["fr_collapse_down_down"]["S3"] == "Vacuous"


def test_with_collapse_matches_variant():
    forced = by_name("fr_full").with_collapse(1, "up")
    table = {n: c for n, c, _ in evaluate(forced, checks=False).verdict_table()}
    assert table == {"S1p": table["S1p"], "S2": "Fails", "S3": "Vacuous", "S4": "Vacuous"}


def test_phase_family_runs_in_float():
    sc = fr_phase(0.0)
    assert sc.mode == "float"
    assert evaluate(sc).ok


def test_unknown_name():
    with pytest.raises(KeyError):
        by_name("nobody")
