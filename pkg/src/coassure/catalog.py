"""Requirement catalogs: the safety and security entries plus the seven-type ontology.

A catalog is a validated, immutable index of requirements from both
domains together with the security classes that group security
requirements. Catalogs are plain data: they carry no probabilities and no
link information (see :mod:`coassure.links` for that).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

from .errors import ModelError, NotFoundError, ParseError
from .validation import ValidationReport


class ReqType(str, Enum):
    """The seven requirement types of the shared ontology."""

    RESOURCE_USE = "ResourceUse"
    TIMING = "Timing"
    FAILURE_BEHAVIOUR = "FailureBehaviour"
    FAILURE_DETECTION = "FailureDetection"
    RECOVERY = "Recovery"
    COMMUNICATION = "Communication"
    TRUST = "Trust"


class Domain(str, Enum):
    SAFETY = "safety"
    SECURITY = "security"


@dataclass(frozen=True)
class Requirement:
    """A single catalog entry from either domain.

    Safety requirements must carry a ``req_type``; security requirements
    are typed through their class membership and may leave it unset.
    """

    id: str
    domain: Domain
    standard: str
    title: str
    req_type: ReqType | None = None


@dataclass(frozen=True)
class SecurityClass:
    """A grouping of security requirements (the future BBN leaves)."""

    class_id: str
    name: str
    members: tuple[str, ...] = ()


@dataclass(frozen=True)
class Catalog:
    requirements: tuple[Requirement, ...]
    classes: tuple[SecurityClass, ...]
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        # Last entry wins on duplicate ids; validate_catalog reports them.
        for req in self.requirements:
            self._index[req.id] = req
        for cls in self.classes:
            self._index[cls.class_id] = cls

    @property
    def safety_count(self) -> int:
        return sum(1 for r in self.requirements if r.domain is Domain.SAFETY)

    @property
    def security_count(self) -> int:
        return sum(1 for r in self.requirements if r.domain is Domain.SECURITY)

    def lookup(self, element_id: str) -> Union[Requirement, SecurityClass]:
        try:
            return self._index[element_id]
        except KeyError:
            raise NotFoundError(f"no catalog element with id {element_id!r}") from None

    def __contains__(self, element_id: str) -> bool:
        return element_id in self._index

    def safety_requirements(self) -> tuple[Requirement, ...]:
        return tuple(r for r in self.requirements if r.domain is Domain.SAFETY)

    def safety_requirements_of_type(self, req_type: ReqType) -> tuple[Requirement, ...]:
        return tuple(
            r
            for r in self.requirements
            if r.domain is Domain.SAFETY and r.req_type is req_type
        )

    def class_ids(self) -> tuple[str, ...]:
        return tuple(c.class_id for c in self.classes)


_REQUIREMENT_KEYS = {"id", "domain", "standard", "title", "req_type"}
_CLASS_KEYS = {"id", "name", "members"}
_DOC_KEYS = {"requirements", "classes"}


def _reject_unknown_keys(entry: Mapping, allowed: set[str], where: str) -> None:
    unknown = set(entry) - allowed
    if unknown:
        names = ", ".join(sorted(unknown))
        raise ParseError(f"unknown key(s) in {where}: {names}")


def _parse_requirement(entry: object) -> Requirement:
    if not isinstance(entry, Mapping):
        raise ParseError("requirement entry must be an object")
    _reject_unknown_keys(entry, _REQUIREMENT_KEYS, "requirement")
    try:
        rid = entry["id"]
        domain = entry["domain"]
        standard = entry["standard"]
        title = entry["title"]
    except KeyError as exc:
        raise ParseError(f"requirement missing required key {exc.args[0]!r}") from None
    for name, value in (("id", rid), ("domain", domain), ("standard", standard), ("title", title)):
        if not isinstance(value, str):
            raise ParseError(f"requirement field {name!r} must be a string")
    try:
        dom = Domain(domain)
    except ValueError:
        raise ParseError(f"requirement {rid!r}: domain must be 'safety' or 'security', got {domain!r}") from None
    req_type = None
    if "req_type" in entry:
        raw = entry["req_type"]
        try:
            req_type = ReqType(raw)
        except ValueError:
            raise ParseError(f"requirement {rid!r}: unknown req_type {raw!r}") from None
    return Requirement(id=rid, domain=dom, standard=standard, title=title, req_type=req_type)


def _parse_class(entry: object) -> SecurityClass:
    if not isinstance(entry, Mapping):
        raise ParseError("class entry must be an object")
    _reject_unknown_keys(entry, _CLASS_KEYS, "class")
    try:
        cid = entry["id"]
        name = entry["name"]
        members = entry["members"]
    except KeyError as exc:
        raise ParseError(f"class missing required key {exc.args[0]!r}") from None
    if not isinstance(cid, str) or not isinstance(name, str):
        raise ParseError("class 'id' and 'name' must be strings")
    if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
        raise ParseError(f"class {cid!r}: 'members' must be a list of ids")
    return SecurityClass(class_id=cid, name=name, members=tuple(members))


def parse_catalog(doc: Mapping) -> Catalog:
    """Structural parse only; semantic invariants are left to validate_catalog."""
    if not isinstance(doc, Mapping):
        raise ParseError("catalog document must be a JSON object")
    _reject_unknown_keys(doc, _DOC_KEYS, "catalog document")
    raw_reqs = doc.get("requirements", [])
    raw_classes = doc.get("classes", [])
    if not isinstance(raw_reqs, list) or not isinstance(raw_classes, list):
        raise ParseError("'requirements' and 'classes' must be lists")
    return Catalog(
        requirements=tuple(_parse_requirement(e) for e in raw_reqs),
        classes=tuple(_parse_class(e) for e in raw_classes),
    )


def load_catalog(doc: Mapping) -> Catalog:
    """Parse and validate a catalog document.

    Raises :class:`ParseError` on structural problems and
    :class:`ModelError` on the first error-severity validation finding,
    naming the offending id.
    """
    catalog = parse_catalog(doc)
    report = validate_catalog(catalog)
    if not report.ok:
        first = report.errors[0]
        raise ModelError(f"invalid catalog: {first.render()}")
    return catalog


def validate_catalog(catalog: Catalog) -> ValidationReport:
    """Check every catalog invariant; findings are data, never raised."""
    report = ValidationReport()
    seen: set[str] = set()
    for req in catalog.requirements:
        if req.id in seen:
            report.add_error(req.id, "duplicate id")
        seen.add(req.id)
        if req.domain is Domain.SAFETY and req.req_type is None:
            report.add_error(req.id, "safety requirement without req_type")
    classed: set[str] = set()
    for cls in catalog.classes:
        if cls.class_id in seen:
            report.add_error(cls.class_id, "duplicate id")
        seen.add(cls.class_id)
        for member in cls.members:
            target = next((r for r in catalog.requirements if r.id == member), None)
            if target is None:
                report.add_error(member, f"class {cls.class_id!r} references unknown requirement {member!r}")
            elif target.domain is not Domain.SECURITY:
                report.add_error(member, f"class {cls.class_id!r} member {member!r} is not a security requirement")
            classed.add(member)
    for req in catalog.requirements:
        if req.domain is Domain.SECURITY and req.id not in classed:
            report.add_warning(req.id, "security requirement belongs to no class")
    return report


def catalog_to_doc(catalog: Catalog) -> dict:
    """Serialize back to the catalog file format (inverse of load_catalog)."""
    reqs = []
    for r in catalog.requirements:
        entry: dict = {
            "id": r.id,
            "domain": r.domain.value,
            "standard": r.standard,
            "title": r.title,
        }
        if r.req_type is not None:
            entry["req_type"] = r.req_type.value
        reqs.append(entry)
    classes = [
        {"id": c.class_id, "name": c.name, "members": list(c.members)}
        for c in catalog.classes
    ]
    return {"requirements": reqs, "classes": classes}
