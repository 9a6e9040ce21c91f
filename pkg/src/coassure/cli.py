"""Command-line entry point.

Exit codes are a contract for CI scripting:
0 success, 1 validation error, 2 parse/IO error, 3 oracle mismatch.
Standard output carries only the machine-readable payload (or the
human-readable report for `report`); diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .bbn import (
    Network,
    STATES,
    brute_force_marginals,
    build_network,
    posterior_marginals,
)
from .catalog import Catalog, parse_catalog, validate_catalog
from .errors import CoassureError, ModelError, NotFoundError, ParseError, TransitionError
from .impact import generate_report, render_text, report_to_doc, what_if, whatif_to_doc
from .links import (
    CompileParams,
    LinkTable,
    compile_network_spec,
    parse_link_table,
    spec_to_json,
    validate_links,
)
from .machine import EventKind, Machine, MachineEvent
from .validation import ValidationReport

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_ORACLE = 3

ORACLE_TOLERANCE = 1e-9

logger = logging.getLogger(__name__)


def _err(message: str) -> None:
    print(message, file=sys.stderr)


@dataclass
class Scenario:
    """Practitioner input: class evidence plus an optional machine event list."""

    evidence: dict[str, str] = field(default_factory=dict)
    events: list[MachineEvent] = field(default_factory=list)


_SCENARIO_KEYS = {"evidence", "events"}
_EVENT_KEYS = {"kind", "requirement_id"}


def scenario_from_doc(doc: Mapping) -> Scenario:
    if not isinstance(doc, Mapping):
        raise ParseError("scenario document must be a JSON object")
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise ParseError(f"unknown key(s) in scenario: {', '.join(sorted(unknown))}")
    evidence = doc.get("evidence", {})
    if not isinstance(evidence, Mapping):
        raise ParseError("'evidence' must be an object")
    for class_id, state in evidence.items():
        if state not in STATES:
            raise ParseError(
                f"evidence for {class_id!r} must be 'violated' or 'not_violated', got {state!r}"
            )
    raw_events = doc.get("events", [])
    if not isinstance(raw_events, list):
        raise ParseError("'events' must be a list")
    events = []
    for seq, entry in enumerate(raw_events):
        if not isinstance(entry, Mapping):
            raise ParseError("event entry must be an object")
        unknown = set(entry) - _EVENT_KEYS
        if unknown:
            raise ParseError(f"unknown key(s) in event: {', '.join(sorted(unknown))}")
        try:
            kind = EventKind(entry["kind"])
        except (KeyError, ValueError):
            raise ParseError(
                f"event {seq}: 'kind' must be 'Violation' or 'Resolution'"
            ) from None
        requirement = entry.get("requirement_id")
        if not isinstance(requirement, str):
            raise ParseError(f"event {seq}: 'requirement_id' must be a string")
        events.append(MachineEvent(kind, requirement, seq))
    return Scenario(dict(evidence), events)


def _read_json(path: str) -> object:
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _load_model(catalog_path: str, links_path: str) -> tuple[Catalog, LinkTable, CompileParams]:
    """Parse both model files; semantic problems raise ModelError."""
    catalog = parse_catalog(_read_json(catalog_path))
    table, params = parse_link_table(_read_json(links_path))
    report = validate_catalog(catalog)
    report.extend(validate_links(catalog, table))
    if not report.ok:
        raise ModelError("; ".join(f.render() for f in report.errors))
    return catalog, table, params


def _check_evidence_classes(network: Network, evidence: Mapping[str, str]) -> None:
    for class_id in evidence:
        if class_id not in network:
            raise ModelError(f"scenario names unknown security class {class_id!r}")


# -- commands -----------------------------------------------------------------

def cmd_validate(args: argparse.Namespace) -> int:
    catalog = parse_catalog(_read_json(args.catalog))
    table, _ = parse_link_table(_read_json(args.links))
    report = ValidationReport()
    report.extend(validate_catalog(catalog))
    report.extend(validate_links(catalog, table))
    for line in report.render_lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_compile(args: argparse.Namespace) -> int:
    catalog, table, params = _load_model(args.catalog, args.links)
    spec = compile_network_spec(catalog, table, params)
    payload = spec_to_json(spec)
    if args.output:
        Path(args.output).write_text(payload, "utf-8")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _build_session(
    args: argparse.Namespace, replay_events: bool = True
) -> tuple[Catalog, Network, Scenario, Machine]:
    catalog, table, params = _load_model(args.catalog, args.links)
    network = build_network(compile_network_spec(catalog, table, params))
    scenario = Scenario()
    if getattr(args, "scenario", None):
        scenario = scenario_from_doc(_read_json(args.scenario))
    _check_evidence_classes(network, scenario.evidence)
    machine = Machine(catalog)
    if replay_events:
        for event in scenario.events:
            machine.apply_event(event)
    return catalog, network, scenario, machine


def cmd_infer(args: argparse.Namespace) -> int:
    catalog, network, scenario, machine = _build_session(args)
    report = generate_report(network, scenario.evidence, machine, catalog)
    print(json.dumps(report_to_doc(report), sort_keys=True, indent=2))
    if args.oracle:
        exact = posterior_marginals(network, scenario.evidence)
        reference = brute_force_marginals(network, scenario.evidence)
        worst = max((abs(exact[n] - reference[n]) for n in exact), default=0.0)
        if worst > ORACLE_TOLERANCE:
            _err(f"oracle mismatch: max node-wise deviation {worst:.3e}")
            return EXIT_ORACLE
        _err(f"oracle agreement: max node-wise deviation {worst:.3e}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    catalog, _, scenario, _ = _build_session(args, replay_events=False)
    machine = Machine(catalog)
    for event in scenario.events:
        try:
            state = machine.apply_event(event)
        except (TransitionError, NotFoundError) as exc:
            _err(f"event {event.seq} rejected: {exc}")
            return EXIT_VALIDATION
        print(json.dumps({
            "seq": event.seq,
            "kind": event.kind.value,
            "requirement": event.requirement_id,
            "state": state.value,
        }))
    return EXIT_OK


def _write_report_outputs(args: argparse.Namespace, report, diff) -> None:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(report_to_doc(report), sort_keys=True, indent=2) + "\n", "utf-8"
    )
    with open(out_dir / "report.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["state", "p_violated", "affected_safety_requirements"])
        for state, probability in report.state_probabilities.items():
            affected = ";".join(report.affected_safety_requirements[state])
            writer.writerow([state.value, repr(probability), affected])
    from .figures import save_state_probability_figure, save_whatif_figure

    save_state_probability_figure(report, out_dir / "state_probabilities.png")
    if diff is not None:
        (out_dir / "whatif.json").write_text(
            json.dumps(whatif_to_doc(diff), sort_keys=True, indent=2) + "\n", "utf-8"
        )
        save_whatif_figure(diff, out_dir / "whatif_deltas.png")


def cmd_report(args: argparse.Namespace) -> int:
    catalog, network, scenario, machine = _build_session(args)
    report = generate_report(network, scenario.evidence, machine, catalog)
    diff = None
    if args.whatif:
        overlay_doc = _read_json(args.whatif)
        overlay = scenario_from_doc(overlay_doc).evidence if isinstance(overlay_doc, Mapping) else {}
        alternative = dict(scenario.evidence)
        alternative.update(overlay)
        _check_evidence_classes(network, alternative)
        diff = what_if(network, scenario.evidence, alternative)
    sys.stdout.write(render_text(report))
    if args.out_dir:
        _write_report_outputs(args, report, diff)
        _err(f"report files written to {args.out_dir}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import load_session_from_dir, create_app

    session = load_session_from_dir(args.model_dir)
    app = create_app(session, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coassure",
        description="Safety-security co-assurance engine",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate catalog and link files")
    p.add_argument("catalog")
    p.add_argument("links")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compile", help="compile links into a network spec (JSON)")
    p.add_argument("catalog")
    p.add_argument("links")
    p.add_argument("-o", "--output", help="write spec here instead of stdout")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("infer", help="run inference and print the impact report (JSON)")
    p.add_argument("catalog")
    p.add_argument("links")
    p.add_argument("scenario")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against enumeration; exit 3 on mismatch")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("simulate", help="replay scenario events through the state machine")
    p.add_argument("catalog")
    p.add_argument("links")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="human-readable impact report, optional files/figures")
    p.add_argument("catalog")
    p.add_argument("links")
    p.add_argument("scenario", nargs="?")
    p.add_argument("--whatif", help="scenario JSON overlaying hypothetical evidence")
    p.add_argument("--out-dir", help="write report.json/report.csv and figures here")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="serve the HTTP API and dashboard")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--model-dir", required=True,
                   help="directory containing catalog.json and links.json")
    p.add_argument("--static-dir", help="directory of dashboard static files")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _err(str(exc))
        return EXIT_PARSE
    except CoassureError as exc:
        _err(str(exc))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
