"""Command line front end.

Exit codes follow the verdict where one exists: 0 observable (or success),
1 not observable (or stream desync for `monitor`), 2 for usage, format,
semantic, and resource errors. `CRITNET_BUDGET` overrides the default state
budget when `--budget` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .compose import Network, compose_network
from .equivalence import preservation_check, quotient_network
from .errors import CritnetError, DesyncError, InvalidInputError
from .monitor import start_session
from .netio import (
    export_dot,
    parse_network,
    parse_observers,
    serialize_network,
    serialize_observer,
)
from .observer import state_text
from .pipeline import (
    DEFAULT_STATE_BUDGET,
    run_algorithm1,
    run_algorithm3,
    run_onthefly_report,
)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _resolve_budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        budget = args.budget
    else:
        raw = os.environ.get("CRITNET_BUDGET")
        if raw is None:
            return DEFAULT_STATE_BUDGET
        try:
            budget = int(raw)
        except ValueError:
            raise InvalidInputError(f"CRITNET_BUDGET must be an integer, got {raw!r}")
    if budget < 1:
        raise InvalidInputError("state budget must be a positive integer")
    return budget


def _cmd_check(args) -> int:
    network = parse_network(_read(args.file))
    budget = _resolve_budget(args)
    if args.algorithm == "1":
        report = run_algorithm1(network, budget)
    elif args.algorithm == "otf":
        report = run_onthefly_report(network, budget)
    else:
        report = run_algorithm3(network, budget)
    if args.json:
        payload = {
            "algorithm": report.algorithm,
            "verdict": "observable" if report.verdict.observable else "not-observable",
            "witness": None
            if report.verdict.witness is None
            else state_text(report.verdict.witness),
            "space": report.ledger.space,
            "time": report.ledger.time,
            "classes": None
            if report.classes is None
            else [list(c) for c in report.classes.classes],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"algorithm: {report.algorithm}")
        if report.classes is not None:
            for cls, rep in zip(report.classes.classes, report.classes.representatives):
                print(f"class {rep}: {' '.join(cls)}")
        verdict = "observable" if report.verdict.observable else "not observable"
        print(f"verdict: {verdict}")
        if report.verdict.witness is not None:
            print(f"witness: {state_text(report.verdict.witness)}")
        print(f"space: {report.ledger.space}")
        print(f"time: {report.ledger.time}")
    return 0 if report.verdict.observable else 1


def _cmd_reduce(args) -> int:
    network = parse_network(_read(args.file))
    reduced, classes = quotient_network(network)
    print(f"# reduced {len(network.members)} members to {len(reduced.members)}")
    for cls, rep in zip(classes.classes, classes.representatives):
        print(f"# class {rep}: {' '.join(cls)}")
    print(serialize_network(reduced), end="")
    return 0


def _cmd_synth(args) -> int:
    network = parse_network(_read(args.file))
    report = run_algorithm3(network, _resolve_budget(args))
    if not report.verdict.observable:
        print(
            f"not observable, witness {state_text(report.verdict.witness)}; "
            "no observers synthesized",
            file=sys.stderr,
        )
        return 1
    if args.out is None:
        print("\n".join(serialize_observer(n, obs) for n, obs in report.locals), end="")
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, obs in report.locals:
        (out / f"{name}.obs").write_text(serialize_observer(name, obs), encoding="utf-8")
        (out / f"{name}.dot").write_text(export_dot(obs, name), encoding="utf-8")
        written.extend([f"{name}.obs", f"{name}.dot"])
    print(f"wrote {' '.join(written)} to {out}", file=sys.stderr)
    return 0


def _cmd_compose(args) -> int:
    network = parse_network(_read(args.file))
    composed = compose_network(network, _resolve_budget(args))
    print(serialize_network(Network((("composed", composed),))), end="")
    return 0


def _cmd_monitor(args) -> int:
    locals_: list = []
    for path in args.observers:
        locals_.extend(parse_observers(_read(path)))
    session = start_session(locals_)
    stream = sys.stdin if args.events == "-" else open(args.events, encoding="utf-8")
    try:
        for raw in stream:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if len(line.split()) != 1:
                print(f"error: one event per line, got {line!r}", file=sys.stderr)
                return 2
            try:
                record = session.feed(line)
            except DesyncError as e:
                print(f"desync: {e}", file=sys.stderr)
                return 1
            print(record.line())
    finally:
        if stream is not sys.stdin:
            stream.close()
    return 0


def _cmd_export(args) -> int:
    network = parse_network(_read(args.file))
    for name, m in network.members:
        print(export_dot(m, name), end="")
    return 0


def _cmd_preserve(args) -> int:
    network = parse_network(_read(args.file))
    report = preservation_check(
        network, runs=args.runs, max_len=args.length, seed=args.seed
    )
    consistent = report.verdicts_agree and (
        report.observer_serves_full == report.observer_serves_reduced
    )
    if args.json:
        payload = {
            "classes": [list(c) for c in report.classes.classes],
            "verdict_full": "observable" if report.verdict_full.observable else "not-observable",
            "verdict_reduced": "observable" if report.verdict_reduced.observable else "not-observable",
            "verdicts_agree": report.verdicts_agree,
            "observer_serves_full": report.observer_serves_full,
            "observer_serves_reduced": report.observer_serves_reduced,
            "sampled_full": report.sampled_full,
            "sampled_reduced": report.sampled_reduced,
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        for cls, rep in zip(report.classes.classes, report.classes.representatives):
            print(f"class {rep}: {' '.join(cls)}")
        print(f"verdict full: {report.verdict_full}")
        print(f"verdict reduced: {report.verdict_reduced}")
        print(f"verdicts agree: {'yes' if report.verdicts_agree else 'no'}")
        print(
            "reduced observer serves full network: "
            f"{'yes' if report.observer_serves_full else 'no'}"
        )
        print(
            "reduced observer serves reduced network: "
            f"{'yes' if report.observer_serves_reduced else 'no'}"
        )
    return 0 if consistent else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critnet",
        description="Critical observability of networks of finite state machines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide critical observability of a network")
    p.add_argument("file")
    p.add_argument("--algorithm", choices=["1", "otf", "3"], default="3")
    p.add_argument("--budget", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("reduce", help="drop members bisimilar to an earlier one")
    p.add_argument("file")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("synth", help="synthesize projected local observers")
    p.add_argument("file")
    p.add_argument("--out", help="directory for per-member .obs and .dot files")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("compose", help="materialize the monolithic composition")
    p.add_argument("file")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("monitor", help="replay an event stream through observers")
    p.add_argument("observers", nargs="+")
    p.add_argument("--events", default="-", help="event file, or - for stdin")
    p.set_defaults(func=_cmd_monitor)

    p = sub.add_parser("export", help="export network members as DOT graphs")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true", required=True)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("preserve", help="confirm reduction preserves the verdict")
    p.add_argument("file")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_preserve)
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    try:
        return args.func(args)
    except CritnetError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
