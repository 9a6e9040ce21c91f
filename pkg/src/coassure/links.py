"""Cross-domain link table and its compilation into a network specification.

Links connect a security class (future leaf node) to one of the seven
requirement types (future type node). Compilation produces a three-layer
DAG spec: leaf -> type -> state indicator, with noisy-OR tables on type
nodes and a deterministic OR on each state indicator. Compilation is
deterministic: node and parent order is lexicographic, so identical
inputs serialize byte-identically.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Mapping, Union

from .catalog import Catalog, ReqType
from .errors import ModelError, ParseError
from .machine import STATE_GROUPS, SafetyState
from .validation import ValidationReport

logger = logging.getLogger(__name__)

LEAF_LAYER = "leaf"
TYPE_LAYER = "type"
INDICATOR_LAYER = "indicator"


def type_node_id(req_type: ReqType) -> str:
    return req_type.value


def indicator_node_id(state: SafetyState) -> str:
    return f"{state.value}-indicator"


def state_for_indicator(node_id: str) -> SafetyState | None:
    for state in (SafetyState.S1, SafetyState.S2, SafetyState.S3):
        if node_id == indicator_node_id(state):
            return state
    return None


@dataclass(frozen=True)
class Link:
    source_class: str
    target_type: ReqType
    weight: float | None = None  # None means CompileParams.default_weight


@dataclass(frozen=True)
class LinkTable:
    links: tuple[Link, ...] = ()

    def classes(self) -> tuple[str, ...]:
        return tuple(sorted({link.source_class for link in self.links}))

    def types(self) -> tuple[ReqType, ...]:
        return tuple(sorted({link.target_type for link in self.links}, key=lambda t: t.value))

    def links_to(self, req_type: ReqType) -> tuple[Link, ...]:
        return tuple(
            sorted(
                (l for l in self.links if l.target_type is req_type),
                key=lambda l: l.source_class,
            )
        )


@dataclass(frozen=True)
class CompileParams:
    default_weight: float = 0.9
    leak: float = 0.0
    leaf_prior: float = 0.05

    def __post_init__(self) -> None:
        for name in ("default_weight", "leak", "leaf_prior"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ModelError(f"{name} must be in [0, 1], got {value}")


# -- network specification --------------------------------------------------

@dataclass(frozen=True)
class PriorCpt:
    p: float


@dataclass(frozen=True)
class NoisyOrCpt:
    weights: tuple[float, ...]  # parallel to the node's parent list
    leak: float = 0.0


@dataclass(frozen=True)
class OrCpt:
    """Deterministic OR of the parents."""


CptSpec = Union[PriorCpt, NoisyOrCpt, OrCpt]


@dataclass(frozen=True)
class NodeSpec:
    id: str
    layer: str
    parents: tuple[str, ...]
    cpt: CptSpec


@dataclass(frozen=True)
class NetworkSpec:
    """Three-layer DAG: leaves, type nodes, state indicators.

    ``governs`` maps each type node to the safety requirement ids of that
    type, carried along for impact reporting.
    """

    nodes: tuple[NodeSpec, ...]
    governs: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def node_ids(self, layer: str | None = None) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes if layer is None or n.layer == layer)

    def __post_init__(self) -> None:
        _validate_spec_structure(self)


def _validate_spec_structure(spec: NetworkSpec) -> None:
    ids: set[str] = set()
    by_layer: dict[str, set[str]] = {LEAF_LAYER: set(), TYPE_LAYER: set(), INDICATOR_LAYER: set()}
    for node in spec.nodes:
        if node.id in ids:
            raise ModelError(f"duplicate node id {node.id!r} in network spec")
        ids.add(node.id)
        if node.layer not in by_layer:
            raise ModelError(f"node {node.id!r}: unknown layer {node.layer!r}")
        by_layer[node.layer].add(node.id)
    parent_layer = {TYPE_LAYER: LEAF_LAYER, INDICATOR_LAYER: TYPE_LAYER}
    for node in spec.nodes:
        if node.layer == LEAF_LAYER:
            if node.parents:
                raise ModelError(f"leaf node {node.id!r} must not have parents")
            if not isinstance(node.cpt, PriorCpt):
                raise ModelError(f"leaf node {node.id!r} must carry a prior")
            continue
        allowed = by_layer[parent_layer[node.layer]]
        for parent in node.parents:
            if parent not in allowed:
                raise ModelError(
                    f"node {node.id!r}: parent {parent!r} is not a {parent_layer[node.layer]} node"
                )
        if isinstance(node.cpt, PriorCpt):
            raise ModelError(f"non-leaf node {node.id!r} cannot carry a bare prior")
        if isinstance(node.cpt, NoisyOrCpt) and len(node.cpt.weights) != len(node.parents):
            raise ModelError(
                f"node {node.id!r}: {len(node.cpt.weights)} weights for {len(node.parents)} parents"
            )
    for govern_id in spec.governs:
        if govern_id not in by_layer[TYPE_LAYER]:
            raise ModelError(f"governs entry {govern_id!r} is not a type node")


# -- link table loading ------------------------------------------------------

_DOC_KEYS = {"defaults", "links"}
_DEFAULT_KEYS = {"weight", "leak", "leaf_prior"}
_LINK_KEYS = {"source_class", "target_type", "weight"}


def parse_link_table(doc: Mapping) -> tuple[LinkTable, CompileParams]:
    """Structural parse only; range and uniqueness are left to load/validate."""
    if not isinstance(doc, Mapping):
        raise ParseError("links document must be a JSON object")
    unknown = set(doc) - _DOC_KEYS
    if unknown:
        raise ParseError(f"unknown key(s) in links document: {', '.join(sorted(unknown))}")
    defaults = doc.get("defaults", {})
    if not isinstance(defaults, Mapping):
        raise ParseError("'defaults' must be an object")
    unknown = set(defaults) - _DEFAULT_KEYS
    if unknown:
        raise ParseError(f"unknown key(s) in defaults: {', '.join(sorted(unknown))}")
    base = CompileParams()
    params = CompileParams(
        default_weight=_require_number(defaults.get("weight", base.default_weight), "defaults.weight"),
        leak=_require_number(defaults.get("leak", base.leak), "defaults.leak"),
        leaf_prior=_require_number(defaults.get("leaf_prior", base.leaf_prior), "defaults.leaf_prior"),
    )
    raw_links = doc.get("links", [])
    if not isinstance(raw_links, list):
        raise ParseError("'links' must be a list")
    links: list[Link] = []
    for entry in raw_links:
        if not isinstance(entry, Mapping):
            raise ParseError("link entry must be an object")
        unknown = set(entry) - _LINK_KEYS
        if unknown:
            raise ParseError(f"unknown key(s) in link: {', '.join(sorted(unknown))}")
        try:
            source = entry["source_class"]
            raw_type = entry["target_type"]
        except KeyError as exc:
            raise ParseError(f"link missing required key {exc.args[0]!r}") from None
        if not isinstance(source, str):
            raise ParseError("link 'source_class' must be a string")
        try:
            target = ReqType(raw_type)
        except ValueError:
            raise ParseError(f"link {source!r}: unknown target_type {raw_type!r}") from None
        weight = None
        if "weight" in entry:
            weight = _require_number(entry["weight"], f"link {source}->{target.value} weight")
        links.append(Link(source, target, weight))
    return LinkTable(tuple(links)), params


def load_link_table(doc: Mapping) -> tuple[LinkTable, CompileParams]:
    """Parse and validate a links document."""
    table, params = parse_link_table(doc)
    seen: set[tuple[str, ReqType]] = set()
    for link in table.links:
        if link.weight is not None and not 0.0 <= link.weight <= 1.0:
            raise ModelError(
                f"link {link.source_class}->{link.target_type.value}: "
                f"weight must be in [0, 1], got {link.weight}"
            )
        pair = (link.source_class, link.target_type)
        if pair in seen:
            raise ModelError(f"duplicate link {link.source_class}->{link.target_type.value}")
        seen.add(pair)
    return table, params


def _require_number(value: object, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where} must be a number")
    return float(value)


def links_to_doc(table: LinkTable, params: CompileParams) -> dict:
    entries = []
    for link in table.links:
        entry: dict = {"source_class": link.source_class, "target_type": link.target_type.value}
        if link.weight is not None:
            entry["weight"] = link.weight
        entries.append(entry)
    return {
        "defaults": {
            "weight": params.default_weight,
            "leak": params.leak,
            "leaf_prior": params.leaf_prior,
        },
        "links": entries,
    }


# -- validation and reporting -------------------------------------------------

def validate_links(catalog: Catalog, table: LinkTable) -> ValidationReport:
    """Cross-check a link table against a catalog."""
    report = ValidationReport()
    known_classes = set(catalog.class_ids())
    seen_pairs: set[tuple[str, ReqType]] = set()
    for link in table.links:
        if link.source_class not in known_classes:
            report.add_error(link.source_class, "link from unknown security class")
        if link.weight is not None and not 0.0 <= link.weight <= 1.0:
            report.add_error(link.source_class, f"link weight {link.weight} out of [0, 1]")
        pair = (link.source_class, link.target_type)
        if pair in seen_pairs:
            report.add_error(link.source_class, f"duplicate link to {link.target_type.value}")
        seen_pairs.add(pair)
        if not catalog.safety_requirements_of_type(link.target_type):
            report.add_warning(
                link.target_type.value,
                f"link targets type {link.target_type.value} with no safety requirements in catalog",
            )
    linked = {link.source_class for link in table.links}
    for cls in catalog.classes:
        if cls.class_id not in linked:
            report.add_warning(cls.class_id, "security class has no links")
    return report


@dataclass(frozen=True)
class GroupEntry:
    state: SafetyState
    safety_ids: tuple[str, ...]
    class_ids: tuple[str, ...]


@dataclass(frozen=True)
class GroupingReport:
    """Machine-readable per-group layout: safety requirements vs. linked classes."""

    groups: tuple[GroupEntry, ...]

    def group(self, state: SafetyState) -> GroupEntry:
        for entry in self.groups:
            if entry.state is state:
                return entry
        raise KeyError(state)


def grouping_report(catalog: Catalog, table: LinkTable) -> GroupingReport:
    entries = []
    for state in (SafetyState.S1, SafetyState.S2, SafetyState.S3):
        types = STATE_GROUPS[state]
        safety = sorted(
            r.id
            for t in types
            for r in catalog.safety_requirements_of_type(t)
        )
        classes = sorted({l.source_class for l in table.links if l.target_type in types})
        entries.append(GroupEntry(state, tuple(safety), tuple(classes)))
    return GroupingReport(tuple(entries))


# -- compilation ---------------------------------------------------------------

def compile_network_spec(
    catalog: Catalog, table: LinkTable, params: CompileParams | None = None
) -> NetworkSpec:
    """Compile catalog + links into the three-layer network specification."""
    params = params or CompileParams()
    report = validate_links(catalog, table)
    if not report.ok:
        first = report.errors[0]
        raise ModelError(f"cannot compile invalid links: {first.render()}")
    if not table.links:
        logger.warning("link table is empty; compiling an empty network")

    nodes: list[NodeSpec] = []
    for class_id in table.classes():
        nodes.append(NodeSpec(class_id, LEAF_LAYER, (), PriorCpt(params.leaf_prior)))

    governs: dict[str, tuple[str, ...]] = {}
    for req_type in table.types():
        incoming = table.links_to(req_type)
        parents = tuple(l.source_class for l in incoming)
        weights = tuple(
            l.weight if l.weight is not None else params.default_weight for l in incoming
        )
        node_id = type_node_id(req_type)
        nodes.append(NodeSpec(node_id, TYPE_LAYER, parents, NoisyOrCpt(weights, params.leak)))
        governs[node_id] = tuple(
            sorted(r.id for r in catalog.safety_requirements_of_type(req_type))
        )

    for state in (SafetyState.S1, SafetyState.S2, SafetyState.S3):
        members = tuple(
            type_node_id(t)
            for t in sorted(STATE_GROUPS[state], key=lambda t: t.value)
            if t in set(table.types())
        )
        if members:
            nodes.append(NodeSpec(indicator_node_id(state), INDICATOR_LAYER, members, OrCpt()))

    nodes.sort(key=lambda n: n.id)
    return NetworkSpec(tuple(nodes), {k: governs[k] for k in sorted(governs)})


# -- spec serialization ---------------------------------------------------------

_SPEC_DOC_KEYS = {"nodes", "governs"}
_SPEC_NODE_KEYS = {"id", "layer", "parents", "cpt"}


def _cpt_to_doc(cpt: CptSpec) -> dict:
    if isinstance(cpt, PriorCpt):
        return {"kind": "prior", "p": cpt.p}
    if isinstance(cpt, NoisyOrCpt):
        return {"kind": "noisy_or", "weights": list(cpt.weights), "leak": cpt.leak}
    return {"kind": "or"}


def _cpt_from_doc(doc: Mapping, node_id: str) -> CptSpec:
    kind = doc.get("kind")
    if kind == "prior":
        return PriorCpt(_require_number(doc["p"], f"node {node_id} prior"))
    if kind == "noisy_or":
        weights = doc.get("weights")
        if not isinstance(weights, list):
            raise ParseError(f"node {node_id}: noisy_or 'weights' must be a list")
        return NoisyOrCpt(
            tuple(_require_number(w, f"node {node_id} weight") for w in weights),
            _require_number(doc.get("leak", 0.0), f"node {node_id} leak"),
        )
    if kind == "or":
        return OrCpt()
    raise ParseError(f"node {node_id}: unknown cpt kind {kind!r}")


def spec_to_doc(spec: NetworkSpec) -> dict:
    return {
        "nodes": [
            {
                "id": n.id,
                "layer": n.layer,
                "parents": list(n.parents),
                "cpt": _cpt_to_doc(n.cpt),
            }
            for n in sorted(spec.nodes, key=lambda n: n.id)
        ],
        "governs": {k: list(v) for k, v in sorted(spec.governs.items())},
    }


def spec_to_json(spec: NetworkSpec) -> str:
    """Canonical serialization; identical specs yield identical bytes."""
    return json.dumps(spec_to_doc(spec), sort_keys=True, indent=2) + "\n"


def spec_from_doc(doc: Mapping) -> NetworkSpec:
    if not isinstance(doc, Mapping):
        raise ParseError("network spec document must be a JSON object")
    unknown = set(doc) - _SPEC_DOC_KEYS
    if unknown:
        raise ParseError(f"unknown key(s) in network spec: {', '.join(sorted(unknown))}")
    raw_nodes = doc.get("nodes", [])
    if not isinstance(raw_nodes, list):
        raise ParseError("'nodes' must be a list")
    nodes = []
    for entry in raw_nodes:
        if not isinstance(entry, Mapping):
            raise ParseError("node entry must be an object")
        unknown = set(entry) - _SPEC_NODE_KEYS
        if unknown:
            raise ParseError(f"unknown key(s) in node: {', '.join(sorted(unknown))}")
        try:
            node_id = entry["id"]
            layer = entry["layer"]
            parents = entry["parents"]
            cpt = entry["cpt"]
        except KeyError as exc:
            raise ParseError(f"node missing required key {exc.args[0]!r}") from None
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise ParseError(f"node {node_id}: 'parents' must be a list of ids")
        if not isinstance(cpt, Mapping):
            raise ParseError(f"node {node_id}: 'cpt' must be an object")
        nodes.append(NodeSpec(node_id, layer, tuple(parents), _cpt_from_doc(cpt, node_id)))
    raw_governs = doc.get("governs", {})
    if not isinstance(raw_governs, Mapping):
        raise ParseError("'governs' must be an object")
    governs = {}
    for key, value in raw_governs.items():
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ParseError(f"governs[{key!r}] must be a list of requirement ids")
        governs[key] = tuple(value)
    return NetworkSpec(tuple(sorted(nodes, key=lambda n: n.id)), governs)
