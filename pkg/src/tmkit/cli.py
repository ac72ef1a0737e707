"""Command-line interface.

Exit codes: 0 success, 1 validation errors (or refused preconditions),
2 parse/reference errors in model text, 3 I/O or document-schema errors,
4 exhausted step budget. Reports and diagnostics go to stderr; requested
output (traces, exports, listings) goes to stdout or the chosen file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .dsl import ModelBundle, parse, print_bundle, validate_bundle
from .dynamics import validate_behavior
from .errors import (
    DisconnectedRegionError,
    DuplicateIdError,
    InvalidInputError,
    MultipleInitialError,
    ParseError,
    SchemaError,
    SchemaVersionError,
    StepBudgetError,
    UndefinedReferenceError,
    UnsupportedNodeError,
)
from .interop import (
    export_dot,
    export_json,
    import_activity,
    import_json,
    load_ad_document,
    trace_to_json,
)
from .model import Mode
from .sim import SimConfig, simulate, trace_to_text

_PARSE_ERRORS = (ParseError, DuplicateIdError, UndefinedReferenceError, DisconnectedRegionError)
_DOCUMENT_ERRORS = (SchemaError, SchemaVersionError, MultipleInitialError, UnsupportedNodeError)


def _read_json_file(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from exc


def _read_bundle(path: str, allow_disconnected: bool = False) -> ModelBundle:
    """Bundles come from DSL text, or from a version-1 JSON document when
    the file name ends in .json."""
    if path.endswith(".json"):
        return import_json(_read_json_file(path))
    return parse(Path(path).read_text(encoding="utf-8"), allow_disconnected_regions=allow_disconnected)


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")
        print(f"wrote {out_path}", file=sys.stderr)


def _cmd_validate(args: argparse.Namespace) -> int:
    bundle = _read_bundle(args.file, allow_disconnected=args.allow_disconnected_regions)
    if args.mode is not None:
        bundle = replace(bundle, static=replace(bundle.static, mode=Mode(args.mode)))
    report = validate_bundle(
        bundle,
        relaxed_triggers=args.relaxed_triggers,
        allow_disconnected_regions=args.allow_disconnected_regions,
    )
    if args.json:
        print(json.dumps(report.to_json_obj(), indent=2))
    else:
        print(report.render())
    return 0 if report.ok else 1


def _cmd_events(args: argparse.Namespace) -> int:
    bundle = _read_bundle(args.file)
    for ev in bundle.events:
        count = len(ev.region.action_ids)
        noun = "action" if count == 1 else "actions"
        print(f"{ev.id}\t{count} {noun}\t{ev.name}")
    report = validate_behavior(bundle.behavior, bundle.events, bundle.static)
    for violation in report.violations:
        if violation.rule == "COVERAGE":
            print(violation.render())
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    bundle = _read_bundle(args.file)
    config = SimConfig(max_steps=args.max_steps, default_loop_bound=args.loop_bound)
    try:
        trace = simulate(bundle, config)
    except StepBudgetError as exc:
        if args.trace_out is not None and exc.trace is not None:
            Path(args.trace_out).write_text(trace_to_text(exc.trace), encoding="utf-8")
            print(f"wrote partial trace to {args.trace_out}", file=sys.stderr)
        print(str(exc), file=sys.stderr)
        return 4
    rendered = json.dumps(trace_to_json(trace), indent=2) + "\n" if args.json else trace_to_text(trace)
    _emit(rendered, args.trace_out)
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    bundle = _read_bundle(args.file)
    if args.format == "dot":
        rendered = export_dot(bundle, show_events=args.show_events)
    else:
        rendered = export_json(bundle)
    _emit(rendered, args.output)
    return 0


def _cmd_import_ad(args: argparse.Namespace) -> int:
    try:
        bundle = import_activity(load_ad_document(_read_json_file(args.file)))
    except UndefinedReferenceError as exc:
        # Bad references inside a document are a document problem, not a
        # model-text parse problem.
        print(str(exc), file=sys.stderr)
        return 3
    _emit(print_bundle(bundle), args.output)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmkit",
        description="Model toolkit: validate, inspect, simulate, and convert model bundles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a bundle against the rule tables")
    p_validate.add_argument("file", help="bundle file (.tm text or .json document)")
    p_validate.add_argument(
        "--mode", choices=[m.value for m in Mode], default=None,
        help="override the rule set (default: the model's own mode)",
    )
    p_validate.add_argument(
        "--relaxed-triggers", action="store_true",
        help="downgrade trigger-shape findings to warnings",
    )
    p_validate.add_argument(
        "--allow-disconnected-regions", action="store_true",
        help="accept event regions that are not weakly connected",
    )
    p_validate.add_argument("--json", action="store_true", help="machine-readable report")
    p_validate.set_defaults(handler=_cmd_validate)

    p_events = sub.add_parser("events", help="list events with region sizes and coverage gaps")
    p_events.add_argument("file", help="bundle file (.tm text or .json document)")
    p_events.set_defaults(handler=_cmd_events)

    p_sim = sub.add_parser("simulate", help="run the chronology and print the trace")
    p_sim.add_argument("file", help="bundle file (.tm text or .json document)")
    p_sim.add_argument("--max-steps", type=int, default=10_000, help="step budget (default 10000)")
    p_sim.add_argument(
        "--loop-bound", type=int, default=1,
        help="default repeat bound for unbounded back edges (default 1)",
    )
    p_sim.add_argument("--trace-out", default=None, help="write the trace to this file")
    p_sim.add_argument("--json", action="store_true", help="emit the trace as JSON")
    p_sim.set_defaults(handler=_cmd_simulate)

    p_export = sub.add_parser("export", help="render a bundle as DOT or a JSON document")
    p_export.add_argument("file", help="bundle file (.tm text or .json document)")
    p_export.add_argument("--format", choices=["dot", "json"], required=True)
    p_export.add_argument(
        "--show-events", action="store_true", help="DOT only: draw event notes over their regions"
    )
    p_export.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    p_export.set_defaults(handler=_cmd_export)

    p_import = sub.add_parser("import-ad", help="convert an activity-diagram document to a bundle")
    p_import.add_argument("file", help="activity-diagram JSON document")
    p_import.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    p_import.set_defaults(handler=_cmd_import_ad)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except StepBudgetError as exc:
        print(str(exc), file=sys.stderr)
        return 4
    except InvalidInputError as exc:
        print(str(exc), file=sys.stderr)
        if exc.report is not None:
            print(exc.report.render(), file=sys.stderr)
        return 1
    except _PARSE_ERRORS as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except _DOCUMENT_ERRORS as exc:
        print(str(exc), file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
