"""Command-line front end.

Subcommands: validate, emit, traces, check, deadlocks. Exit status is
machine-stable: 0 success / check passed, 1 check failed or diagnostics,
2 usage or I/O error, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .adexec import ad_action_traces_by_input
from .adtext import AdSyntaxError, parse_ad
from .conformance import check_equivalence
from .fsmexec import (
    DEFAULT_DEPTH,
    DEFAULT_MAX_STATES,
    ResourceBoundError,
    action_traces_by_input,
    find_deadlocks,
)
from .model import ActivityDiagram, validate
from .smv import normalize, print_smv
from .translate import TranslationError, translate

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _load(path: str) -> ActivityDiagram:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IoError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_ad(text)


class _IoError(Exception):
    pass


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        ad = _load(args.path)
    except AdSyntaxError as exc:
        for error in exc.errors:
            print(f"{args.path}:{error}", file=sys.stderr)
        return EXIT_FAIL
    diagnostics = validate(ad)
    for d in diagnostics:
        print(f"{args.path}: {d}", file=sys.stderr)
    if diagnostics:
        return EXIT_FAIL
    print(f"{args.path}: ok")
    return EXIT_OK


def _cmd_emit(args: argparse.Namespace) -> int:
    try:
        ad = _load(args.path)
    except AdSyntaxError as exc:
        for error in exc.errors:
            print(f"{args.path}:{error}", file=sys.stderr)
        return EXIT_FAIL
    module = translate(ad)
    if args.normalized:
        module = normalize(module)
    text = print_smv(module)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _group_label(key) -> str:
    return " ".join(f"{name}={value}" for name, value in key)


def _cmd_traces(args: argparse.Namespace) -> int:
    ad = _load(args.path)
    input_names = [v.name for v in ad.input_vars()]
    if args.semantics == "fsm":
        groups = action_traces_by_input(
            translate(ad), args.depth, input_names, max_states=args.max_states
        )
    else:
        groups = ad_action_traces_by_input(ad, args.depth)
    if args.format == "structured":
        payload = {
            "path": args.path,
            "depth": args.depth,
            "semantics": args.semantics,
            "groups": [
                {
                    "inputs": {name: value for name, value in key},
                    "traces": [
                        {
                            "actions": list(t.actions),
                            "terminated": t.terminated,
                            "length": len(t.actions),
                        }
                        for t in sorted(traces, key=lambda t: (len(t.actions), t.actions))
                    ],
                }
                for key, traces in sorted(groups.items())
            ],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_OK
    for key, traces in sorted(groups.items()):
        if key:
            print(f"-- {_group_label(key)}")
        for t in sorted(traces, key=lambda t: (len(t.actions), t.actions)):
            print(t.render())
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    ad = _load(args.path)
    report = check_equivalence(ad, args.depth, max_states=args.max_states)
    if args.format == "structured":
        print(report.to_json())
    else:
        print(
            f"{report.verdict}: depth {report.depth}, "
            f"{report.stats.fsm_traces} machine traces "
            f"({report.stats.fsm_terminated} terminated), "
            f"{report.stats.ad_traces} diagram traces "
            f"({report.stats.ad_terminated} terminated)"
        )
        for key, trace in report.only_in_fsm:
            print(f"only in machine [{_group_label(key)}]: {trace.render()}")
        for key, trace in report.only_in_ad:
            print(f"only in diagram [{_group_label(key)}]: {trace.render()}")
    return EXIT_OK if report.verdict == "equal" else EXIT_FAIL


def _cmd_deadlocks(args: argparse.Namespace) -> int:
    ad = _load(args.path)
    witnesses = find_deadlocks(translate(ad), args.depth, max_states=args.max_states)
    if args.format == "structured":
        payload = {
            "path": args.path,
            "depth": args.depth,
            "deadlocks": [
                {"path": list(w.path), "state": w.state.as_dict()} for w in witnesses
            ],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        if not witnesses:
            print(f"{args.path}: no deadlocks within depth {args.depth}")
        for w in witnesses:
            path = "·".join(w.path) if w.path else "ε"
            print(f"deadlock after {path}")
            print(f"  state: {w.state.describe()}")
    return EXIT_FAIL if witnesses else EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ad2smv",
        description="Compile activity diagrams to SMV and execute both semantics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, depth: bool = True) -> None:
        p.add_argument("path", help="activity diagram source (.ad)")
        if depth:
            p.add_argument("--depth", type=_positive_int, default=DEFAULT_DEPTH)
            p.add_argument("--max-states", type=_positive_int, default=DEFAULT_MAX_STATES)
            p.add_argument("--format", choices=("text", "structured"), default="text")

    p = sub.add_parser("validate", help="parse and check well-formedness")
    common(p, depth=False)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("emit", help="translate to SMV text")
    common(p, depth=False)
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.add_argument("--normalized", action="store_true", help="canonicalize before printing")
    p.set_defaults(func=_cmd_emit)

    p = sub.add_parser("traces", help="enumerate bounded action traces")
    common(p)
    p.add_argument("--semantics", choices=("fsm", "ad"), default="fsm")
    p.set_defaults(func=_cmd_traces)

    p = sub.add_parser("check", help="compare both semantics' trace sets")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("deadlocks", help="search for stuck reachable states")
    common(p)
    p.set_defaults(func=_cmd_deadlocks)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _IoError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except AdSyntaxError as exc:
        for error in exc.errors:
            print(f"{args.path}:{error}", file=sys.stderr)
        return EXIT_FAIL
    except TranslationError as exc:
        for d in exc.diagnostics:
            print(f"{args.path}: {d}", file=sys.stderr)
        return EXIT_FAIL
    except ResourceBoundError as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
