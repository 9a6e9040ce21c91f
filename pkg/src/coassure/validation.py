"""Validation findings shared by the catalog and linker checks.

Findings are data, not exceptions: a report can mix errors and warnings,
and only error-severity findings make a model unusable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    element_id: str
    message: str

    def render(self) -> str:
        return f"{self.severity.value} {self.element_id}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    def add_error(self, element_id: str, message: str) -> None:
        self.findings.append(Finding(Severity.ERROR, element_id, message))

    def add_warning(self, element_id: str, message: str) -> None:
        self.findings.append(Finding(Severity.WARNING, element_id, message))

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.WARNING]

    @property
    def ok(self) -> bool:
        """True when no error-severity findings exist (warnings allowed)."""
        return not self.errors

    def extend(self, other: "ValidationReport") -> None:
        self.findings.extend(other.findings)

    def render_lines(self) -> list[str]:
        return [f.render() for f in self.findings]
