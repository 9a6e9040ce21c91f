"""Registry of socio-technical confidence claims attached to model elements.

Claims are declarative records: five closed factors, two confidence
tiers, optional attachment to model element ids. The registry only
stores and counts them; it carries no argument semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Collection, Iterable, Mapping

from .bbn import Network
from .catalog import Catalog
from .errors import ModelError, NotFoundError, ParseError
from .links import LinkTable


class StmFactor(str, Enum):
    STRUCTURE = "Structure"
    PROCESS = "Process"
    PEOPLE = "People"
    TOOLS = "Tools"
    CONCEPTUAL = "Conceptual"


class Confidence(str, Enum):
    PRIMARY = "Primary"
    SECONDARY = "Secondary"


@dataclass(frozen=True)
class StmClaim:
    id: str
    factor: StmFactor
    confidence: Confidence
    text: str
    attached_to: tuple[str, ...] = ()  # empty means model-wide
    supports: str | None = None  # documentation-only link to another claim


@dataclass(frozen=True)
class FactorCoverage:
    factor: StmFactor
    primary: int
    secondary: int

    @property
    def total(self) -> int:
        return self.primary + self.secondary


@dataclass(frozen=True)
class CoverageReport:
    factors: tuple[FactorCoverage, ...]  # always all five, in enum order
    uncovered: tuple[StmFactor, ...]

    @property
    def total(self) -> int:
        return sum(f.total for f in self.factors)


def model_element_ids(
    catalog: Catalog | None = None,
    links: LinkTable | None = None,
    network: Network | None = None,
) -> set[str]:
    """Assemble the id universe claims may attach to.

    Link elements are addressed as "<class>-><type>"; machine elements are
    the safety requirement ids, already covered by the catalog.
    """
    ids: set[str] = set()
    if catalog is not None:
        ids.update(r.id for r in catalog.requirements)
        ids.update(catalog.class_ids())
    if links is not None:
        ids.update(f"{l.source_class}->{l.target_type.value}" for l in links.links)
    if network is not None:
        ids.update(n.id for n in network.nodes)
    return ids


class ClaimRegistry:
    """Single-writer claim store resolving attachments against a fixed id universe."""

    def __init__(self, known_elements: Collection[str] = ()):
        self.known_elements = frozenset(known_elements)
        self._claims: dict[str, StmClaim] = {}

    @property
    def claims(self) -> tuple[StmClaim, ...]:
        return tuple(self._claims.values())

    def __len__(self) -> int:
        return len(self._claims)

    def add_claim(self, claim: StmClaim) -> None:
        if claim.id in self._claims:
            raise ModelError(f"duplicate claim id {claim.id!r}")
        for element_id in claim.attached_to:
            if element_id not in self.known_elements:
                raise NotFoundError(
                    f"claim {claim.id!r} references unknown element {element_id!r}"
                )
        if claim.supports is not None and claim.supports not in self._claims:
            raise NotFoundError(
                f"claim {claim.id!r} supports unknown claim {claim.supports!r}"
            )
        self._claims[claim.id] = claim

    def coverage_report(self) -> CoverageReport:
        """Per-factor Primary/Secondary counts plus the factors left uncovered."""
        counts = {factor: [0, 0] for factor in StmFactor}
        for claim in self._claims.values():
            slot = 0 if claim.confidence is Confidence.PRIMARY else 1
            counts[claim.factor][slot] += 1
        factors = tuple(
            FactorCoverage(factor, counts[factor][0], counts[factor][1])
            for factor in StmFactor
        )
        uncovered = tuple(f.factor for f in factors if f.total == 0)
        return CoverageReport(factors, uncovered)


# -- serialization ----------------------------------------------------------

_CLAIM_KEYS = {"id", "factor", "confidence", "text", "attached_to", "supports"}


def claims_to_doc(claims: Iterable[StmClaim]) -> list[dict]:
    out = []
    for claim in claims:
        entry: dict = {
            "id": claim.id,
            "factor": claim.factor.value,
            "confidence": claim.confidence.value,
            "text": claim.text,
            "attached_to": list(claim.attached_to),
        }
        if claim.supports is not None:
            entry["supports"] = claim.supports
        out.append(entry)
    return out


def claims_from_doc(doc: object) -> list[StmClaim]:
    if not isinstance(doc, list):
        raise ParseError("claims document must be a JSON list")
    claims = []
    for entry in doc:
        if not isinstance(entry, Mapping):
            raise ParseError("claim entry must be an object")
        unknown = set(entry) - _CLAIM_KEYS
        if unknown:
            raise ParseError(f"unknown key(s) in claim: {', '.join(sorted(unknown))}")
        try:
            claim_id = entry["id"]
            factor = StmFactor(entry["factor"])
            confidence = Confidence(entry["confidence"])
            text = entry["text"]
        except KeyError as exc:
            raise ParseError(f"claim missing required key {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        attached = entry.get("attached_to", [])
        if not isinstance(attached, list) or not all(isinstance(a, str) for a in attached):
            raise ParseError(f"claim {claim_id!r}: 'attached_to' must be a list of ids")
        claims.append(
            StmClaim(
                id=claim_id,
                factor=factor,
                confidence=confidence,
                text=text,
                attached_to=tuple(attached),
                supports=entry.get("supports"),
            )
        )
    return claims


def load_claims(doc: object, registry: ClaimRegistry) -> ClaimRegistry:
    for claim in claims_from_doc(doc):
        registry.add_claim(claim)
    return registry
