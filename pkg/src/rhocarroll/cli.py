"""Command line interface.

    rho-carroll check <file> [--seed N] [--format text|records]
    rho-carroll repl
    rho-carroll catalog list
    rho-carroll catalog build <key> [--seed N] [--format text|records]
    rho-carroll eval -a <builtin> "<expr>"

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, catalog
from .dsl import (DslEvalError, DslSyntaxError, Report, Session, parse,
                  run_source)


def _emit(report: Report, fmt: str):
    if fmt == "records":
        print(report.render_records())
    else:
        print(report.render_text())


def cmd_check(args) -> int:
    try:
        with open(args.file) as fh:
            source = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        report, session = run_source(source, seed=args.seed, name=args.file)
    except (DslSyntaxError, DslEvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "text":
        for line in session.printed:
            print(line)
    _emit(report, args.format)
    return 0 if report.ok else 1


def cmd_repl(args) -> int:
    session = Session(seed=args.seed, name="<repl>")
    print(f"rho-carroll {__version__} repl -- blank line or :quit to exit")
    buffer = ""
    while True:
        prompt = "....> " if buffer else "rho> "
        try:
            line = input(prompt)
        except EOFError:
            break
        if not buffer and line.strip() in (":quit", ":q", "exit", ""):
            if line.strip() in (":quit", ":q", "exit"):
                break
            continue
        buffer += line + "\n"
        if buffer.count("{") > buffer.count("}"):
            continue
        try:
            ast = parse(buffer)
            before = len(session.printed)
            for stmt in ast.statements:
                session.run_statement(stmt)
            for out in session.printed[before:]:
                print(out)
        except (DslSyntaxError, DslEvalError, Exception) as exc:
            print(f"error: {exc}")
        buffer = ""
    n_fail = sum(1 for c in session.report.checks if c.status == "fail")
    return 0 if n_fail == 0 else 1


def cmd_catalog(args) -> int:
    if args.action == "list":
        for key in catalog.catalog_keys():
            entry = catalog.build(key)
            print(f"{key:15s} {entry.description}")
        return 0
    try:
        entry = catalog.build(args.key)
    except catalog.CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = entry.verify_all(samples=50, seed=args.seed)
    if args.format == "records":
        report = Report(f"catalog:{args.key}", args.seed, __version__)
        report.extend(args.key, rep)
        print(report.render_records())
    else:
        print(rep.render_text())
    return 0 if rep.ok else 1


def cmd_eval(args) -> int:
    source = f"use builtin {args.algebra}\neval {args.expr}\n"
    try:
        report, session = run_source(source, seed=args.seed, name="<eval>")
    except (DslSyntaxError, DslEvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in session.printed:
        print(line)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rho-carroll",
        description="exact verifier for Carrollian structures on graded "
                    "almost commutative algebras")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a session file")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("repl", help="interactive session")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_repl)

    p = sub.add_parser("catalog", help="list or build built-in structures")
    p.add_argument("action", choices=("list", "build"))
    p.add_argument("key", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("eval", help="evaluate an expression in a builtin algebra")
    p.add_argument("-a", "--algebra", required=True)
    p.add_argument("expr")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_eval)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "catalog" and args.action == "build" and not args.key:
        ap.error("catalog build requires a key")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
