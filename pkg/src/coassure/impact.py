"""Practitioner-facing impact reports and what-if differentials.

A report couples the three indicator posteriors with the discrete machine
state. The three probabilities are independent per-state posteriors and
need not sum to one; the report says so explicitly so nobody reads them
as a distribution over states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bbn import Evidence, Network, Posterior, VIOLATED, posterior_marginals
from .catalog import Catalog
from .links import state_for_indicator, type_node_id
from .machine import DEFAULT_SEVERITY_ORDER, STATE_GROUPS, Machine, SafetyState

VIOLATED_STATES = (SafetyState.S1, SafetyState.S2, SafetyState.S3)

EXCLUSIVITY_NOTE = (
    "State probabilities are independent per-state posteriors and need not sum to 1; "
    "the discrete machine state is tracked separately."
)


@dataclass(frozen=True)
class Recommendation:
    state: SafetyState
    probability: float
    req_types: tuple[str, ...]
    violated_classes: tuple[str, ...]


@dataclass(frozen=True)
class ImpactReport:
    state_probabilities: dict[SafetyState, float]
    current_machine_state: SafetyState
    violated_classes: tuple[str, ...]
    affected_safety_requirements: dict[SafetyState, tuple[str, ...]]
    recommendation: tuple[Recommendation, ...]


@dataclass(frozen=True)
class WhatIfDiff:
    baseline: dict[str, str]
    alternative: dict[str, str]
    state_deltas: dict[SafetyState, float]
    node_deltas: dict[str, float]


def _rank(
    entries: Sequence[Recommendation],
    severity_order: Sequence[SafetyState] = DEFAULT_SEVERITY_ORDER,
) -> tuple[Recommendation, ...]:
    # Zero-probability states carry no action; drop them.
    kept = [e for e in entries if e.probability > 0.0]
    rank = {state: i for i, state in enumerate(severity_order)}
    kept.sort(key=lambda e: (rank[e.state], -e.probability, e.state.value))
    return tuple(kept)


def _state_probability(posteriors: Posterior, state: SafetyState) -> float:
    """Indicator posterior, or 0 for states absent from the compiled network."""
    for node_id, value in posteriors.items():
        if state_for_indicator(node_id) is state:
            return value
    return 0.0


def generate_report(
    network: Network,
    evidence: Evidence,
    machine: Machine,
    catalog: Catalog,
) -> ImpactReport:
    """Run inference and assemble the impact report."""
    posteriors = posterior_marginals(network, evidence)
    violated = tuple(sorted(k for k, v in evidence.items() if v == VIOLATED))

    state_probabilities = {
        state: _state_probability(posteriors, state) for state in VIOLATED_STATES
    }
    affected = {
        state: tuple(
            sorted(
                r.id
                for req_type in STATE_GROUPS[state]
                for r in catalog.safety_requirements_of_type(req_type)
            )
        )
        for state in VIOLATED_STATES
    }

    candidates = []
    for state in VIOLATED_STATES:
        implicated: list[str] = []
        feeders: set[str] = set()
        for req_type in sorted(STATE_GROUPS[state], key=lambda t: t.value):
            node_id = type_node_id(req_type)
            if node_id not in network:
                continue
            implicated.append(req_type.value)
            feeders.update(
                p for p in network.node(node_id).parents if evidence.get(p) == VIOLATED
            )
        candidates.append(
            Recommendation(
                state,
                state_probabilities[state],
                tuple(implicated),
                tuple(sorted(feeders)),
            )
        )

    return ImpactReport(
        state_probabilities=state_probabilities,
        current_machine_state=machine.state,
        violated_classes=violated,
        affected_safety_requirements=affected,
        recommendation=_rank(candidates, machine.severity_order),
    )


def recommend(
    report: ImpactReport,
    severity_order: Sequence[SafetyState] = DEFAULT_SEVERITY_ORDER,
) -> tuple[Recommendation, ...]:
    """Ranked action list: severity class first, probability second, state name third."""
    existing = {entry.state: entry for entry in report.recommendation}
    entries = []
    for state in VIOLATED_STATES:
        probability = report.state_probabilities.get(state, 0.0)
        prior_entry = existing.get(state)
        if prior_entry is not None:
            req_types = prior_entry.req_types
            classes = prior_entry.violated_classes
        else:
            req_types = tuple(sorted(t.value for t in STATE_GROUPS[state]))
            classes = report.violated_classes
        entries.append(Recommendation(state, probability, req_types, classes))
    return _rank(entries, severity_order)


def what_if(network: Network, baseline: Evidence, alternative: Evidence) -> WhatIfDiff:
    """Posterior deltas (alternative minus baseline), node-wise and state-wise."""
    base = posterior_marginals(network, baseline)
    alt = posterior_marginals(network, alternative)
    node_deltas = {node_id: alt[node_id] - base[node_id] for node_id in base}
    state_deltas = {
        state: _state_probability(alt, state) - _state_probability(base, state)
        for state in VIOLATED_STATES
    }
    return WhatIfDiff(
        baseline=dict(baseline),
        alternative=dict(alternative),
        state_deltas=state_deltas,
        node_deltas=node_deltas,
    )


# -- serialization and rendering ------------------------------------------------

def report_to_doc(report: ImpactReport) -> dict:
    return {
        "state_probabilities": {
            state.value: report.state_probabilities[state] for state in VIOLATED_STATES
        },
        "current_machine_state": report.current_machine_state.value,
        "violated_classes": list(report.violated_classes),
        "affected_safety_requirements": {
            state.value: list(report.affected_safety_requirements[state])
            for state in VIOLATED_STATES
        },
        "recommendation": [
            {
                "state": entry.state.value,
                "probability": entry.probability,
                "req_types": list(entry.req_types),
                "violated_classes": list(entry.violated_classes),
            }
            for entry in report.recommendation
        ],
        "note": EXCLUSIVITY_NOTE,
    }


def whatif_to_doc(diff: WhatIfDiff) -> dict:
    return {
        "baseline": dict(sorted(diff.baseline.items())),
        "alternative": dict(sorted(diff.alternative.items())),
        "state_deltas": {
            state.value: diff.state_deltas[state] for state in VIOLATED_STATES
        },
        "node_deltas": dict(sorted(diff.node_deltas.items())),
    }


def render_text(report: ImpactReport) -> str:
    """Plain-text table for terminal use."""
    lines = []
    lines.append(f"Machine state: {report.current_machine_state.value} "
                 f"({report.current_machine_state.label})")
    violated = ", ".join(report.violated_classes) if report.violated_classes else "(none)"
    lines.append(f"Violated security classes: {violated}")
    lines.append("")
    lines.append(f"{'State':<6} {'P(violated)':>12}  Affected safety requirements")
    lines.append("-" * 72)
    for state in VIOLATED_STATES:
        probability = report.state_probabilities[state]
        affected = ", ".join(report.affected_safety_requirements[state]) or "(none)"
        lines.append(f"{state.value:<6} {probability:>12.6f}  {affected}")
    lines.append("")
    if report.recommendation:
        lines.append("Recommended order of attention:")
        for i, entry in enumerate(report.recommendation, start=1):
            types = ", ".join(entry.req_types) or "(no linked types)"
            feeders = ", ".join(entry.violated_classes) or "no violated classes"
            lines.append(
                f"  {i}. {entry.state.value} (p={entry.probability:.6f}) "
                f"via {types}; driven by {feeders}"
            )
    else:
        lines.append("Recommended order of attention: nothing to address.")
    lines.append("")
    lines.append(f"Note: {EXCLUSIVITY_NOTE}")
    return "\n".join(lines) + "\n"
