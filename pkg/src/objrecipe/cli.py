"""Command-line entry point.

Exit status is 0 on success, 1 when a check, lint or evaluation fails and
2 for bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path
from typing import Optional, Sequence

from .evaluator import eval_program
from .recipe import (
    SpecError,
    emit_interface_comment,
    generate_class_template,
    generate_wrappers,
    has_errors,
    lint_manager,
    parse_spec_text,
    verify_dispatch,
)
from .syntax import Program, SourceError, parse_source
from .testing import Outcome
from .values import EvaluationError, write_value

OK, FAILED, USAGE = 0, 1, 2


class _Abort(Exception):
    def __init__(self, status: int):
        self.status = status


def _read(path: str, err) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{path}: cannot read file: {exc}", file=err)
        raise _Abort(USAGE)


def _load_program(path: str, err) -> Program:
    text = _read(path, err)
    try:
        return parse_source(text)
    except SourceError as exc:
        print(f"{path}:{exc.line}:{exc.column}: {exc.message}", file=err)
        raise _Abort(USAGE)


def _load_spec(path: str, err):
    text = _read(path, err)
    try:
        return parse_spec_text(text)
    except SpecError as exc:
        print(f"error {exc.code} {path}:{exc.line} {exc.message}", file=err)
        raise _Abort(USAGE)
    except SourceError as exc:
        print(f"{path}:{exc.line}:{exc.column}: {exc.message}", file=err)
        raise _Abort(USAGE)


def _runtime_error(path: str, exc: EvaluationError, err) -> None:
    print(f"error: {exc.message}", file=err)
    if exc.location:
        print(f"  at {path}:{exc.location[0]}:{exc.location[1]}", file=err)


def cmd_run(path: str, out=sys.stdout, err=sys.stderr) -> int:
    try:
        program = _load_program(path, err)
    except _Abort as a:
        return a.status
    try:
        eval_program(program, on_value=lambda v: print(write_value(v), file=out), run_checks=True)
    except EvaluationError as exc:
        _runtime_error(path, exc, err)
        return FAILED
    except RecursionError:
        print("error: recursion too deep", file=err)
        return FAILED
    return OK


def _test_one(path: str, out, err) -> int:
    try:
        program = _load_program(path, err)
    except _Abort as a:
        return a.status
    try:
        _, report = eval_program(program)
    except EvaluationError as exc:
        _runtime_error(path, exc, err)
        return FAILED
    except RecursionError:
        print("error: recursion too deep", file=err)
        return FAILED
    if report.all_passed:
        print(f"PASS {report.passed}/{report.total} {path}", file=out)
        return OK
    for r in report.results:
        if r.outcome is not Outcome.PASS:
            print(f"FAIL {path}:{r.line} {r.detail}", file=out)
    print(f"{report.passed}/{report.total} passed {path}", file=out)
    return FAILED


def cmd_test(paths: Sequence[str], out=sys.stdout, err=sys.stderr) -> int:
    status = OK
    for path in paths:
        # buffer per file so each file's output stays contiguous
        fout, ferr = io.StringIO(), io.StringIO()
        s = _test_one(path, fout, ferr)
        out.write(fout.getvalue())
        err.write(ferr.getvalue())
        status = max(status, s)
    return status


def scaffold_files(specs) -> dict[str, str]:
    """File name -> contents for every artifact generated from a spec set."""
    files: dict[str, str] = {}
    for i in specs.interfaces.values():
        files[f"{i.name}-interface.rkts"] = emit_interface_comment(i)
    for c in specs.classes.values():
        files[f"{c.variant}-template.rkts"] = generate_class_template(c, specs.interfaces[c.implements])
    for i in specs.interfaces.values():
        files[f"{i.name}-wrappers.rkts"] = generate_wrappers(i, i.name)
    return files


def cmd_scaffold(spec_path: str, outdir: str, force: bool = False, out=sys.stdout, err=sys.stderr) -> int:
    try:
        specs = _load_spec(spec_path, err)
    except _Abort as a:
        return a.status
    target = Path(outdir)
    if target.exists() and not target.is_dir():
        print(f"{outdir}: not a directory", file=err)
        return USAGE
    if target.exists() and any(target.iterdir()) and not force:
        print(f"{outdir}: directory is not empty (use --force to overwrite)", file=err)
        return USAGE
    files = scaffold_files(specs)
    for name, text in files.items():
        try:
            parse_source(text)
        except SourceError as exc:  # generator bug; never write unparsable output
            print(f"internal error: generated {name} does not parse: {exc}", file=err)
            return USAGE
    target.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (target / name).write_text(text, encoding="utf-8")
        print(target / name, file=out)
    return OK


def cmd_lint(path: str, spec_path: str, out=sys.stdout, err=sys.stderr) -> int:
    try:
        program = _load_program(path, err)
        specs = _load_spec(spec_path, err)
    except _Abort as a:
        return a.status
    if not specs.interfaces:
        print(f"{spec_path}: no interface declared", file=err)
        return USAGE
    several = len(specs.interfaces) > 1
    diags = []
    for i in specs.interfaces.values():
        for d in lint_manager(program, i, specs.classes, known_only=several):
            if d not in diags:
                diags.append(d)
    for d in diags:
        print(d.render(path), file=err)
    return FAILED if has_errors(diags) else OK


def cmd_check_union(path: str, spec_path: str, out=sys.stdout, err=sys.stderr) -> int:
    try:
        program = _load_program(path, err)
        specs = _load_spec(spec_path, err)
    except _Abort as a:
        return a.status
    if not specs.unions:
        print(f"{spec_path}: no union declared", file=err)
        return USAGE
    diags = []
    for u in specs.unions.values():
        diags.extend(verify_dispatch(program, u, specs.interfaces[u.name], specs.classes))
    for d in diags:
        print(d.render(path), file=err)
    return FAILED if has_errors(diags) else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="objrecipe",
        description="Run, test, scaffold and lint message-passing object programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a program and print its top-level values")
    p.add_argument("file")

    p = sub.add_parser("test", help="run the check forms of one or more programs")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("scaffold", help="generate interface comment, class templates and wrappers")
    p.add_argument("spec")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--force", action="store_true", help="write into a non-empty directory")

    p = sub.add_parser("lint", help="check managers for message exhaustiveness")
    p.add_argument("file")
    p.add_argument("--interface", required=True, metavar="SPEC")

    p = sub.add_parser("check-union", help="verify every variant of a union dispatches every message")
    p.add_argument("file")
    p.add_argument("--union", required=True, metavar="SPEC")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    out, err = sys.stdout, sys.stderr
    if args.command == "run":
        return cmd_run(args.file, out, err)
    if args.command == "test":
        return cmd_test(args.files, out, err)
    if args.command == "scaffold":
        return cmd_scaffold(args.spec, args.output, args.force, out, err)
    if args.command == "lint":
        return cmd_lint(args.file, args.interface, out, err)
    return cmd_check_union(args.file, args.union, out, err)


if __name__ == "__main__":
    sys.exit(main())
