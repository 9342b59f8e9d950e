"""Text and JSON renderings of scenario results."""

from __future__ import annotations

import json
from typing import Any

from .amplitude import QuadAmp
from .logic import Event
from .scenario import CompatibleCheck, MineCheck, OrCheck, ScenarioResult, TransitivityCheck
from .state import format_state


def number_json(x) -> dict[str, Any] | None:
    """Exact numbers as their four field coefficients plus a float value."""
    if x is None:
        return None
    if isinstance(x, QuadAmp):
        a, b, c, d = x.coefficients
        return {"rational": str(a), "sqrt2": str(b), "sqrt3": str(c), "sqrt6": str(d), "float": float(x)}
    if isinstance(x, complex):
        x = x.real
    return {"rational": None, "sqrt2": None, "sqrt3": None, "sqrt6": None, "float": float(x)}


def number_text(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, QuadAmp):
        return str(x)
    if isinstance(x, complex):
        x = x.real
    return f"{float(x):.12g}"


def _event(e: Event) -> str:
    return str(e)


def joint_keys(result: ScenarioResult) -> dict[str, Any]:
    """Joint distribution keyed by outcome labels, e.g. ``minus_minus``."""
    if result.joint is None or result.history is None:
        return {}
    final = result.history.final
    bases = [final.records.get(r, final.frame(r)) for r in result.scenario.joint]
    out = {}
    for combo, p in result.joint.items():
        key = "_".join(b.label(o) for b, o in zip(bases, combo))
        out[key] = p
    return out


def _check_dict(c) -> dict[str, Any]:
    chk = c.check
    d: dict[str, Any] = {"kind": c.kind, "outcome": c.outcome, "match": c.match}
    if c.error:
        d["error"] = c.error
    if isinstance(chk, TransitivityCheck):
        d["statements"] = [chk.first, chk.second]
        d["expect"] = chk.expect
        if c.detail is not None:
            rep = c.detail
            d["combined"] = str(rep.combined)
            d["combined_probability"] = number_json(rep.combined_probability)
            d["violation"] = number_json(rep.violation_fraction)
            d["shift"] = number_json(rep.shift_fraction)
    elif isinstance(chk, CompatibleCheck):
        d["events"] = [_event(chk.first), _event(chk.second)]
        d["expect"] = chk.expect
        d["defect"] = number_json(c.detail)
    elif isinstance(chk, OrCheck):
        d["branches"] = list(chk.branches)
        d["merged"] = chk.merged
        d["expect"] = chk.expect
        if c.detail is not None:
            d["expected_probability"] = number_json(c.detail.expected)
            d["merged_probability"] = number_json(c.detail.merged.probability)
    elif isinstance(chk, MineCheck):
        d["includes"] = list(chk.includes)
        if c.detail is not None:
            d["count"] = c.detail["count"]
            d["missing"] = c.detail["missing"]
    return d


def result_dict(result: ScenarioResult) -> dict[str, Any]:
    sc = result.scenario
    statements = []
    for r in result.statements:
        st = r.spec.statement
        d: dict[str, Any] = {
            "name": st.name,
            "text": str(st),
            "mode": st.mode,
            "claim": st.claim,
            "expect": r.spec.expect,
            "match": r.match,
        }
        if r.verdict is not None:
            v = r.verdict
            d["verdict"] = v.classification
            d["probability"] = number_json(v.probability)
            d["premise_probability"] = number_json(v.premise_probability)
            d["diagnostics"] = [
                {"kind": g.kind, "detail": g.detail, "defect": number_json(g.defect)} for g in v.diagnostics
            ]
        else:
            d["error"] = r.error
        statements.append(d)
    out: dict[str, Any] = {
        "scenario": sc.name,
        "mode": result.mode,
        "ok": result.ok,
        "error": result.error,
        "statements": statements,
        "checks": [_check_dict(c) for c in result.checks],
        "joint": {k: number_text(p) for k, p in joint_keys(result).items()},
    }
    h = result.history
    if h is not None:
        out["snapshots"] = [
            {"after_step": k, "terms": len(h.snapshot(k).terms), "state": format_state(h.snapshot(k))}
            for k in h.step_indices()
        ]
        out["collapse_log"] = [
            {"step": e.step, "outcome": e.label, "probability": number_json(e.probability)}
            for e in h.collapse_log
        ]
    return out


def to_json(results: list[ScenarioResult]) -> str:
    payload = {"ok": all(r.ok for r in results), "scenarios": [result_dict(r) for r in results]}
    return json.dumps(payload, indent=2)


def to_text(result: ScenarioResult, verbose: bool = True) -> str:
    sc = result.scenario
    lines = [f"== {sc.name} ({result.mode}) " + ("ok" if result.ok else "MISMATCH")]
    if result.error:
        lines.append(f"  error: {result.error}")
    if verbose and result.history is not None:
        h = result.history
        for k in h.step_indices():
            lines.append(f"  after step {k}: {format_state(h.snapshot(k))}")
        for e in h.collapse_log:
            lines.append(f"  collapse at step {e.step}: {e.label} (p={number_text(e.probability)})")
    for r in result.statements:
        mark = " " if r.match else "!"
        st = r.spec.statement
        if r.verdict is None:
            lines.append(f" {mark}{st.name:<8} error: {r.error}")
            continue
        v = r.verdict
        expect = f" expect {r.spec.expect}" if r.spec.expect else ""
        lines.append(
            f" {mark}{st.name:<8} {v.classification:<13} p={number_text(v.probability):<16}"
            f" premise={number_text(v.premise_probability):<14} [{st.mode}, {st.claim}]{expect}"
        )
        if verbose:
            lines.append(f"     {st}")
            for g in v.diagnostics:
                lines.append(f"     {g.kind}: {g.detail} (defect {number_text(g.defect)})")
    for c in result.checks:
        mark = " " if c.match else "!"
        d = _check_dict(c)
        extra = ""
        if c.error:
            extra = f" error: {c.error}"
        elif c.kind == "transitivity" and c.detail is not None:
            extra = f" violation={number_text(c.detail.violation_fraction)} shift={number_text(c.detail.shift_fraction)}"
        elif c.kind == "compatible":
            extra = f" defect={number_text(c.detail)}"
        elif c.kind == "or" and c.detail is not None:
            extra = (f" mixed={number_text(c.detail.expected)}"
                     f" merged={number_text(c.detail.merged.probability)}")
        elif c.kind == "mine" and c.detail is not None:
            extra = f" mined={c.detail['count']}"
        what = d.get("statements") or d.get("events") or d.get("branches") or d.get("includes") or []
        lines.append(f" {mark}check {c.kind} {' '.join(map(str, what))}: {c.outcome}{extra}")
    joint = joint_keys(result)
    if joint:
        lines.append("  joint " + ",".join(sc.joint) + ": "
                     + ", ".join(f"{k}={number_text(p)}" for k, p in joint.items()))
    return "\n".join(lines)
