"""Safety-requirements-violation state machine.

Four states: S0 (nothing violated) plus one state per requirement-type
group. The machine tracks the full set of outstanding violations and
reports the single highest-severity state, so no information is lost to
the four-state interface. Severity order is S2 > S1 > S3 by default and
can be overridden per machine.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .catalog import Catalog, Domain, ReqType, Requirement
from .errors import NotFoundError, TransitionError


class SafetyState(str, Enum):
    S0 = "S0"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"

    @property
    def label(self) -> str:
        return _STATE_LABELS[self]


_STATE_LABELS = {
    SafetyState.S0: "None",
    SafetyState.S1: "ResourceTimingViolated",
    SafetyState.S2: "FailureBehaviourViolated",
    SafetyState.S3: "CommunicationViolated",
}

# Total partition of the seven requirement types into the three violated states.
STATE_GROUPS: dict[SafetyState, frozenset[ReqType]] = {
    SafetyState.S1: frozenset({ReqType.RESOURCE_USE, ReqType.TIMING}),
    SafetyState.S2: frozenset(
        {ReqType.FAILURE_BEHAVIOUR, ReqType.FAILURE_DETECTION, ReqType.RECOVERY}
    ),
    SafetyState.S3: frozenset({ReqType.COMMUNICATION, ReqType.TRUST}),
}

# S2 above S1 is an editorial placement; see the project docs.
DEFAULT_SEVERITY_ORDER: tuple[SafetyState, ...] = (
    SafetyState.S2,
    SafetyState.S1,
    SafetyState.S3,
)


def group_of(req_type: ReqType) -> SafetyState:
    """The violated state a requirement type belongs to."""
    for state, types in STATE_GROUPS.items():
        if req_type in types:
            return state
    raise AssertionError(f"requirement type {req_type!r} not in any group")


class EventKind(str, Enum):
    VIOLATION = "Violation"
    RESOLUTION = "Resolution"


@dataclass(frozen=True)
class MachineEvent:
    kind: EventKind
    requirement_id: str
    seq: int = 0


@dataclass(frozen=True)
class TraceEntry:
    event: MachineEvent
    state: SafetyState


def _resolve_safety(catalog: Catalog, requirement_id: str) -> Requirement:
    element = catalog.lookup(requirement_id)
    if not isinstance(element, Requirement) or element.domain is not Domain.SAFETY:
        raise NotFoundError(f"{requirement_id!r} is not a safety requirement")
    return element


def classify(
    outstanding: Iterable[str],
    catalog: Catalog,
    severity_order: Sequence[SafetyState] = DEFAULT_SEVERITY_ORDER,
) -> SafetyState:
    """Map a set of outstanding violations to the machine state.

    S0 iff the set is empty; otherwise the highest-severity group with at
    least one outstanding violation.
    """
    present: set[SafetyState] = set()
    for rid in outstanding:
        req = _resolve_safety(catalog, rid)
        assert req.req_type is not None  # guaranteed for safety requirements
        present.add(group_of(req.req_type))
    if not present:
        return SafetyState.S0
    for state in severity_order:
        if state in present:
            return state
    raise AssertionError("severity order does not cover all groups")


class Machine:
    """Event-sourced violation machine over one catalog.

    Mutation is strictly per-instance; the current state is always a pure
    function of the outstanding set.
    """

    def __init__(
        self,
        catalog: Catalog,
        severity_order: Sequence[SafetyState] = DEFAULT_SEVERITY_ORDER,
    ) -> None:
        self.catalog = catalog
        self.severity_order = tuple(severity_order)
        self.outstanding: set[str] = set()
        self._trace: list[TraceEntry] = []

    @property
    def state(self) -> SafetyState:
        return classify(self.outstanding, self.catalog, self.severity_order)

    @property
    def trace(self) -> tuple[TraceEntry, ...]:
        return tuple(self._trace)

    def next_seq(self) -> int:
        return self._trace[-1].event.seq + 1 if self._trace else 0

    def apply_event(self, event: MachineEvent) -> SafetyState:
        """Process one event; returns the resulting state.

        Raises TransitionError for a duplicate violation or a resolution
        with nothing outstanding, NotFoundError for an id that is not a
        safety requirement. The machine is unchanged on error.
        """
        _resolve_safety(self.catalog, event.requirement_id)
        if self._trace and event.seq < self._trace[-1].event.seq:
            raise TransitionError(
                f"event seq {event.seq} is lower than the last applied seq"
            )
        if event.kind is EventKind.VIOLATION:
            if event.requirement_id in self.outstanding:
                raise TransitionError(
                    f"requirement {event.requirement_id!r} is already violated"
                )
            self.outstanding.add(event.requirement_id)
        else:
            if event.requirement_id not in self.outstanding:
                raise TransitionError(
                    f"requirement {event.requirement_id!r} is not outstanding"
                )
            self.outstanding.discard(event.requirement_id)
        state = self.state
        self._trace.append(TraceEntry(event, state))
        return state

    def apply(self, kind: EventKind, requirement_id: str) -> SafetyState:
        """Convenience wrapper assigning the next sequence number."""
        return self.apply_event(MachineEvent(kind, requirement_id, self.next_seq()))


def replay(events: Iterable[MachineEvent], catalog: Catalog) -> Machine:
    """Rebuild a machine from an event sequence."""
    machine = Machine(catalog)
    for event in events:
        machine.apply_event(event)
    return machine


def trace_records(machine: Machine) -> list[dict]:
    """Trace as JSON-lines records: one per event, in application order."""
    return [
        {
            "seq": entry.event.seq,
            "kind": entry.event.kind.value,
            "requirement": entry.event.requirement_id,
            "state": entry.state.value,
        }
        for entry in machine.trace
    ]
