from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from groupoidal.constants import REPORT_SCHEMA


class Status(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


@dataclass
class Violation:
    axiom: str
    witness: str

    def __str__(self) -> str:
        return f"{self.axiom}: {self.witness}"


@dataclass
class ValidationReport:
    subject: str  # "groupoid", "algebra" or "action"
    violations: list[Violation] = field(default_factory=list)

    def add(self, axiom: str, witness: str) -> None:
        self.violations.append(Violation(axiom, witness))

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [{"axiom": v.axiom, "witness": v.witness} for v in self.violations],
        }


@dataclass
class CheckResult:
    name: str
    status: Status
    summary: str
    details: dict[str, Any] = field(default_factory=dict)
    elapsed_sec: Optional[float] = None

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    def to_dict(self, include_timing: bool = True) -> dict[str, Any]:
        data = {
            "name": self.name,
            "status": self.status.value,
            "summary": self.summary,
            "details": self.details,
        }
        if include_timing and self.elapsed_sec is not None:
            data["elapsed_sec"] = round(self.elapsed_sec, 6)
        return data


@dataclass
class Report:
    instance: str
    prime: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(c.failed for c in self.checks)

    @property
    def counts(self) -> dict[Status, int]:
        counts = {status: 0 for status in Status}
        for check in self.checks:
            counts[check.status] += 1
        return counts

    def status_of(self, name: str) -> Status:
        for check in self.checks:
            if check.name == name:
                return check.status
        raise KeyError(name)

    def to_dict(self, include_timing: bool = True) -> dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "instance": self.instance,
            "prime": self.prime,
            "checks": [c.to_dict(include_timing) for c in self.checks],
        }
