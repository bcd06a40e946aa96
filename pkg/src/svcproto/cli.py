"""Command-line front end.

Exit codes: 0 success (compliant, executable, step taken), 1 a valid run with
a negative verdict, 2 input or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .compliance import Level, find_compliance, find_compliant_subnetworks
from .errors import EnactmentError, FormatError, NotExecutable, ServiceProtocolError
from .formats import MatchReport, dumps, load
from .model import ServiceNetwork, ServiceNetworkSchema
from .protocol import (
    AbstractProtocol,
    ProtocolInstance,
    ProtocolLevel,
    PrototypeProtocol,
    classify,
    derive_implicit_schema,
    enabled_activities,
    instantiate,
    step,
)

OK, NEGATIVE, USAGE = 0, 1, 2


class InputError(Exception):
    """Bad input file; reported on stderr with exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"usage error: {message}")


def _load(path: str, *expected: type):
    try:
        document = load(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except FormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    if expected and not isinstance(document, expected):
        names = " or ".join(t.__name__ for t in expected)
        raise InputError(f"{path}: expected a {names}, got a {type(document).__name__}")
    return document


def _write(document, out: str | None) -> None:
    text = dumps(document)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------


def _validate(args) -> int:
    document = _load(args.file)
    print(f"{args.file}: valid {type(document).__name__}")
    return OK


def _check(args) -> int:
    network = _load(args.network, ServiceNetwork)
    schema = _load(args.schema, ServiceNetworkSchema)
    report = find_compliance(network, schema)
    if args.json:
        _write(report, None)
    else:
        print(report.summary)
        for (entity_id, class_id) in report.witness:
            print(f"  {entity_id} -> {class_id}")
        for line in report.diagnostics:
            print(f"  {line}")
    accepted = {Level.FULL, Level.PARTIAL} if args.partial else {Level.FULL}
    if args.partial and not schema.class_ids:
        accepted.add(Level.NONE)
    return OK if report.level in accepted else NEGATIVE


def _implicit(args) -> int:
    protocol = _load(args.protocol, AbstractProtocol, PrototypeProtocol)
    _write(derive_implicit_schema(protocol), args.output)
    return OK


def _classify(args) -> int:
    protocol = _load(args.protocol, AbstractProtocol, PrototypeProtocol)
    verdict = classify(protocol)
    if args.json:
        _write(verdict, None)
    else:
        print(verdict.level.value)
        for reason in verdict.reasons:
            print(f"  {reason}")
    return OK if verdict.level is ProtocolLevel.EXECUTABLE else NEGATIVE


def _match(args) -> int:
    network = _load(args.network, ServiceNetwork)
    schema = _load(args.schema, ServiceNetworkSchema)
    matches = find_compliant_subnetworks(network, schema, args.limit)
    if args.json:
        _write(MatchReport(tuple(matches)), None)
    else:
        if not matches:
            print("no compliant subnetwork")
        for match in matches:
            pairs = ", ".join(f"{e}->{c}" for e, c in match.witness)
            print(f"{{{', '.join(match.entities)}}}  witness: {pairs}")
    return OK if matches else NEGATIVE


def _instance_new(args) -> int:
    protocol = _load(args.protocol, AbstractProtocol, PrototypeProtocol)
    try:
        instance = instantiate(protocol, args.start)
    except NotExecutable as exc:
        print(exc, file=sys.stderr)
        return NEGATIVE
    _write(instance, args.output)
    return OK


def _instance_enabled(args) -> int:
    instance = _load(args.state, ProtocolInstance)
    enabled = sorted(enabled_activities(instance))
    print(f"state: {instance.current_state}")
    for activity, description in enabled:
        print(f"  {activity} ({description})")
    return OK if enabled else NEGATIVE


def _instance_step(args) -> int:
    instance = _load(args.state, ProtocolInstance)
    try:
        successor = step(instance, args.activity, args.performer)
    except EnactmentError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return NEGATIVE
    _write(successor, args.output)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="svcproto", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="load a document and check its invariants")
    p.add_argument("file")
    p.set_defaults(run=_validate)

    p = sub.add_parser("check", help="check a network against a schema")
    p.add_argument("--network", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--partial", action="store_true", help="accept partial compliance")
    p.add_argument("--json", action="store_true", help="print the canonical report document")
    p.set_defaults(run=_check)

    p = sub.add_parser("implicit", help="derive the implicit schema of a protocol")
    p.add_argument("--protocol", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(run=_implicit)

    p = sub.add_parser("classify", help="classify a protocol bundle")
    p.add_argument("--protocol", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_classify)

    p = sub.add_parser("match", help="list minimal compliant subnetworks")
    p.add_argument("--network", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--limit", type=_positive, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_match)

    inst = sub.add_parser("instance", help="enact an executable protocol")
    isub = inst.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = isub.add_parser("new", help="start an instance")
    p.add_argument("--protocol", required=True)
    p.add_argument("--start", help="start state (default: the initial state)")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_instance_new)
    p = isub.add_parser("enabled", help="list enabled activities")
    p.add_argument("--state", required=True)
    p.set_defaults(run=_instance_enabled)
    p = isub.add_parser("step", help="perform one activity")
    p.add_argument("--state", required=True)
    p.add_argument("--activity", required=True)
    p.add_argument("--performer", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(run=_instance_step)
    return parser


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ServiceProtocolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else USAGE


if __name__ == "__main__":
    sys.exit(main())
