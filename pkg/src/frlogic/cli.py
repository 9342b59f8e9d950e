"""Command line entry point.

``frlogic run FILE...`` evaluates experiment files and exits 0 when every
expectation matches, 1 on a mismatch and 2 when a file fails to load
or run.  ``frlogic emit DIR`` writes the bundled scenarios as
experiment files.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import dsl
from .errors import FRLogicError
from .report import to_json, to_text
from .scenario import evaluate

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


def _collapse_arg(text: str) -> tuple[int, str]:
    fields = dict(part.split("=", 1) for part in text.split(",") if "=" in part)
    try:
        return int(fields["step"]), fields["outcome"]
    except (KeyError, ValueError):
        raise argparse.ArgumentTypeError("expected step=<k>,outcome=<label>") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="frlogic", description="Evaluate agent-reasoning statements in measurement experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate experiment files")
    run.add_argument("files", nargs="+", type=Path)
    run.add_argument("--report", choices=("text", "json"), default="text")
    run.add_argument("--mode", choices=("exact", "float"), help="override the arithmetic mode")
    run.add_argument("--seed", type=int, help="seed for collapse=sample steps")
    run.add_argument("--out", type=Path, help="write the report here instead of stdout")
    run.add_argument("--quiet", action="store_true", help="one summary line per file")
    run.add_argument("--jobs", type=int, default=1, help="files evaluated concurrently")
    run.add_argument("--collapse", type=_collapse_arg, action="append", default=[],
                     metavar="step=K,outcome=LABEL", help="force a collapse at a step (repeatable)")

    emit = sub.add_parser("emit", help="write the bundled scenarios as .fr files")
    emit.add_argument("directory", type=Path)
    return p


def _run_one(path: Path, args):
    """(result, error message) for one file."""
    try:
        scenario = dsl.load(path)
        for step, outcome in args.collapse:
            scenario = scenario.with_collapse(step, outcome)
    except OSError as exc:
        return None, f"{path}: {exc.strerror or exc}"
    except dsl.ParseError as exc:
        return None, f"{path}:{exc.line}:{exc.col}: parse error: expected {exc.expected}"
    except (FRLogicError, KeyError) as exc:
        return None, f"{path}: {exc}"
    result = evaluate(scenario, mode=args.mode, seed=args.seed)
    return result, (f"{path}: {result.error}" if result.error is not None else None)


def _run(args) -> int:
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(lambda p: _run_one(p, args), args.files))
    else:
        outcomes = [_run_one(p, args) for p in args.files]
    results = [r for r, _ in outcomes if r is not None]
    errors = [e for _, e in outcomes if e is not None]
    status = EXIT_OK
    for r in results:
        if not r.ok and status == EXIT_OK:
            status = EXIT_MISMATCH
    if errors:
        status = EXIT_ERROR

    if args.report == "json":
        text = to_json(results)
    elif args.quiet:
        text = "\n".join(f"{r.scenario.name}: {'ok' if r.ok else 'MISMATCH'}" for r in results)
    else:
        text = "\n\n".join(to_text(r) for r in results)
    if args.out is not None:
        args.out.write_text(text + "\n", encoding="utf-8")
    elif text:
        print(text)
    for e in errors:
        print(f"frlogic: {e}", file=sys.stderr)
    return status


def _emit(args) -> int:
    try:
        paths = dsl.write_corpus(args.directory)
    except OSError as exc:
        print(f"frlogic: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for p in paths:
        print(p)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _run(args)
    return _emit(args)


if __name__ == "__main__":
    sys.exit(main())
