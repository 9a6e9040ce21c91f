"""Cross-domain causal meta-model: typed conditions, labeled relations, sync points.

The admissibility catalog pins which (source kind, label, target kind)
triples are allowed; anything outside it must be explicitly flagged as a
user extension. TradeOff is the single symmetric label: stored once,
reported and traversed in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .catalog import Domain
from .errors import ModelError, NotFoundError, ParseError


class ConditionKind(str, Enum):
    VULNERABILITY = "Vulnerability"
    FAILURE = "Failure"
    HAZARD = "Hazard"
    THREAT = "Threat"
    ATTACK = "Attack"
    SAFETY_EFFECT = "SafetyEffect"
    SAFETY_REQUIREMENT = "SafetyRequirement"
    SECURITY_REQUIREMENT = "SecurityRequirement"
    SECURITY_CONTROL = "SecurityControl"


# Each kind lives in exactly one domain.
KIND_DOMAINS: dict[ConditionKind, Domain] = {
    ConditionKind.VULNERABILITY: Domain.SECURITY,
    ConditionKind.FAILURE: Domain.SAFETY,
    ConditionKind.HAZARD: Domain.SAFETY,
    ConditionKind.THREAT: Domain.SECURITY,
    ConditionKind.ATTACK: Domain.SECURITY,
    ConditionKind.SAFETY_EFFECT: Domain.SAFETY,
    ConditionKind.SAFETY_REQUIREMENT: Domain.SAFETY,
    ConditionKind.SECURITY_REQUIREMENT: Domain.SECURITY,
    ConditionKind.SECURITY_CONTROL: Domain.SECURITY,
}


class RelationLabel(str, Enum):
    CAUSES = "Causes"
    CONTRIBUTES_TO = "ContributesTo"
    MOTIVATES = "Motivates"
    SAFETY_IMPACT = "SafetyImpact"
    INFLUENCES = "Influences"
    TRADE_OFF = "TradeOff"
    CONFLICTS_WITH = "ConflictsWith"


# The published relation vocabulary: exactly these eight triples.
ADMISSIBLE_TRIPLES: frozenset[tuple[ConditionKind, RelationLabel, ConditionKind]] = frozenset(
    {
        (ConditionKind.VULNERABILITY, RelationLabel.CAUSES, ConditionKind.FAILURE),
        (ConditionKind.VULNERABILITY, RelationLabel.CONTRIBUTES_TO, ConditionKind.HAZARD),
        (ConditionKind.SAFETY_EFFECT, RelationLabel.MOTIVATES, ConditionKind.ATTACK),
        (ConditionKind.THREAT, RelationLabel.SAFETY_IMPACT, ConditionKind.HAZARD),
        (ConditionKind.THREAT, RelationLabel.INFLUENCES, ConditionKind.SAFETY_REQUIREMENT),
        (ConditionKind.SAFETY_REQUIREMENT, RelationLabel.TRADE_OFF, ConditionKind.SECURITY_REQUIREMENT),
        (ConditionKind.SECURITY_REQUIREMENT, RelationLabel.TRADE_OFF, ConditionKind.SAFETY_REQUIREMENT),
        (ConditionKind.SECURITY_CONTROL, RelationLabel.CONFLICTS_WITH, ConditionKind.SAFETY_REQUIREMENT),
    }
)

DEFAULT_MAX_PATH_LENGTH = 8


@dataclass(frozen=True)
class Condition:
    id: str
    kind: ConditionKind
    description: str = ""

    @property
    def domain(self) -> Domain:
        return KIND_DOMAINS[self.kind]


@dataclass(frozen=True)
class SyncPoint:
    id: str
    phase: str
    description: str = ""


@dataclass(frozen=True)
class CausalRelation:
    source: str
    target: str
    label: RelationLabel
    sync_point: str | None = None
    rationale: str = ""
    user_extended: bool = False

    def endpoints(self) -> tuple[str, str]:
        return (self.source, self.target)


@dataclass(frozen=True)
class Crossing:
    """One domain-boundary hop along a path."""

    source: str
    target: str
    from_domain: Domain
    to_domain: Domain


@dataclass(frozen=True)
class PathStep:
    relation: CausalRelation
    source: str  # traversal direction; differs from relation.source on a reversed TradeOff
    target: str


@dataclass(frozen=True)
class CausalPath:
    steps: tuple[PathStep, ...]
    crossings: tuple[Crossing, ...]

    @property
    def nodes(self) -> tuple[str, ...]:
        if not self.steps:
            return ()
        return (self.steps[0].source,) + tuple(s.target for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


class CausalGraph:
    """Mutable condition/relation graph.

    Every mutator validates fully before touching state, so a reader
    between mutations never sees a half-applied relation.
    """

    def __init__(self) -> None:
        self.conditions: dict[str, Condition] = {}
        self.sync_points: dict[str, SyncPoint] = {}
        self._relations: list[CausalRelation] = []

    # -- mutation ---------------------------------------------------------

    def add_condition(self, condition: Condition, domain: Domain | None = None) -> None:
        """Store a condition; ``domain`` (if given) must agree with its kind."""
        if condition.id in self.conditions:
            raise ModelError(f"duplicate condition id {condition.id!r}")
        expected = KIND_DOMAINS[condition.kind]
        if domain is not None and domain is not expected:
            raise ModelError(
                f"condition {condition.id!r}: kind {condition.kind.value} belongs to the "
                f"{expected.value} domain, not {domain.value}"
            )
        self.conditions[condition.id] = condition

    def add_sync_point(self, sync_point: SyncPoint) -> None:
        if sync_point.id in self.sync_points:
            raise ModelError(f"duplicate sync point id {sync_point.id!r}")
        self.sync_points[sync_point.id] = sync_point

    def add_relation(self, relation: CausalRelation) -> None:
        for endpoint in relation.endpoints():
            if endpoint not in self.conditions:
                raise NotFoundError(f"relation endpoint {endpoint!r} does not exist")
        if relation.sync_point is not None and relation.sync_point not in self.sync_points:
            raise NotFoundError(f"sync point {relation.sync_point!r} does not exist")
        source_kind = self.conditions[relation.source].kind
        target_kind = self.conditions[relation.target].kind
        triple = (source_kind, relation.label, target_kind)
        if triple not in ADMISSIBLE_TRIPLES and not relation.user_extended:
            raise ModelError(
                f"inadmissible relation {source_kind.value} -{relation.label.value}-> "
                f"{target_kind.value}; flag it user_extended to store anyway"
            )
        if self._find_edge(relation.source, relation.target, relation.label) is not None:
            raise ModelError(
                f"relation {relation.source!r} -{relation.label.value}-> {relation.target!r} already stored"
            )
        self._relations.append(relation)

    def _find_edge(self, source: str, target: str, label: RelationLabel) -> CausalRelation | None:
        for rel in self._relations:
            if rel.label is not label:
                continue
            if (rel.source, rel.target) == (source, target):
                return rel
            # TradeOff is symmetric: the mirror is the same edge.
            if label is RelationLabel.TRADE_OFF and (rel.target, rel.source) == (source, target):
                return rel
        return None

    # -- queries ----------------------------------------------------------

    @property
    def relations(self) -> tuple[CausalRelation, ...]:
        return tuple(self._relations)

    def relations_of(self, condition_id: str) -> tuple[CausalRelation, ...]:
        """All relations touching a condition; TradeOff edges appear for both endpoints."""
        if condition_id not in self.conditions:
            raise NotFoundError(f"condition {condition_id!r} does not exist")
        out = []
        for rel in self._relations:
            if condition_id in rel.endpoints():
                out.append(rel)
        return tuple(out)

    def _out_steps(self, node: str) -> Iterator[PathStep]:
        for rel in self._relations:
            if rel.source == node:
                yield PathStep(rel, rel.source, rel.target)
            elif rel.label is RelationLabel.TRADE_OFF and rel.target == node:
                yield PathStep(rel, rel.target, rel.source)

    def cross_domain_paths(
        self,
        from_id: str,
        to_id: str,
        max_length: int = DEFAULT_MAX_PATH_LENGTH,
    ) -> list[CausalPath]:
        """All simple directed paths between two conditions.

        TradeOff edges are traversable both ways. Each path is annotated
        with the domain-boundary crossings it makes.
        """
        for endpoint in (from_id, to_id):
            if endpoint not in self.conditions:
                raise NotFoundError(f"condition {endpoint!r} does not exist")
        paths: list[CausalPath] = []
        steps: list[PathStep] = []
        visited = {from_id}

        def walk(node: str) -> None:
            if node == to_id and steps:
                paths.append(CausalPath(tuple(steps), self._crossings(steps)))
                return
            if len(steps) >= max_length:
                return
            for step in self._out_steps(node):
                if step.target in visited:
                    continue
                visited.add(step.target)
                steps.append(step)
                walk(step.target)
                steps.pop()
                visited.discard(step.target)

        walk(from_id)
        return paths

    def _crossings(self, steps: list[PathStep]) -> tuple[Crossing, ...]:
        out = []
        for step in steps:
            from_domain = self.conditions[step.source].domain
            to_domain = self.conditions[step.target].domain
            if from_domain is not to_domain:
                out.append(Crossing(step.source, step.target, from_domain, to_domain))
        return tuple(out)


# -- serialization ---------------------------------------------------------

_CONDITION_KEYS = {"id", "kind", "domain", "description"}
_RELATION_KEYS = {"source", "target", "label", "sync_point", "rationale", "user_extended"}
_SYNC_KEYS = {"id", "phase", "description"}
_DOC_KEYS = {"conditions", "relations", "sync_points"}


def graph_to_doc(graph: CausalGraph) -> dict:
    return {
        "conditions": [
            {
                "id": c.id,
                "kind": c.kind.value,
                "domain": c.domain.value,
                "description": c.description,
            }
            for c in graph.conditions.values()
        ],
        "relations": [
            {
                "source": r.source,
                "target": r.target,
                "label": r.label.value,
                "sync_point": r.sync_point,
                "rationale": r.rationale,
                "user_extended": r.user_extended,
            }
            for r in graph.relations
        ],
        "sync_points": [
            {"id": s.id, "phase": s.phase, "description": s.description}
            for s in graph.sync_points.values()
        ],
    }


def _check_keys(entry: object, allowed: set[str], where: str) -> Mapping:
    if not isinstance(entry, Mapping):
        raise ParseError(f"{where} entry must be an object")
    unknown = set(entry) - allowed
    if unknown:
        raise ParseError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")
    return entry


def graph_from_doc(doc: Mapping) -> CausalGraph:
    if not isinstance(doc, Mapping):
        raise ParseError("graph document must be a JSON object")
    _check_keys(doc, _DOC_KEYS, "graph document")
    graph = CausalGraph()
    for entry in doc.get("sync_points", []):
        entry = _check_keys(entry, _SYNC_KEYS, "sync point")
        graph.add_sync_point(
            SyncPoint(entry["id"], entry["phase"], entry.get("description", ""))
        )
    for entry in doc.get("conditions", []):
        entry = _check_keys(entry, _CONDITION_KEYS, "condition")
        try:
            kind = ConditionKind(entry["kind"])
        except ValueError:
            raise ParseError(f"unknown condition kind {entry.get('kind')!r}") from None
        domain = None
        if "domain" in entry:
            try:
                domain = Domain(entry["domain"])
            except ValueError:
                raise ParseError(f"unknown domain {entry['domain']!r}") from None
        graph.add_condition(
            Condition(entry["id"], kind, entry.get("description", "")), domain=domain
        )
    for entry in doc.get("relations", []):
        entry = _check_keys(entry, _RELATION_KEYS, "relation")
        try:
            label = RelationLabel(entry["label"])
        except ValueError:
            raise ParseError(f"unknown relation label {entry.get('label')!r}") from None
        graph.add_relation(
            CausalRelation(
                source=entry["source"],
                target=entry["target"],
                label=label,
                sync_point=entry.get("sync_point"),
                rationale=entry.get("rationale", ""),
                user_extended=bool(entry.get("user_extended", False)),
            )
        )
    return graph
