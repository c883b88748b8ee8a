from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional


class PreconditionError(ValueError):
    """An operation was called on inputs outside its documented domain."""


class InvariantViolation(RuntimeError):
    """A search that is guaranteed to succeed came back empty."""


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    holds: bool
    counterexample: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.holds == (self.counterexample is not None):
            raise ValueError("a report fails exactly when it carries a counterexample")

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict[str, Any]:
        d = {"check": self.check_name, "holds": self.holds, "counterexample": self.counterexample}
        if self.details:
            d["details"] = self.details
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def passed(name: str, **details) -> CheckReport:
    return CheckReport(name, True, None, details)


def failed(name: str, counterexample: dict, **details) -> CheckReport:
    return CheckReport(name, False, counterexample, details)


def describe(report: CheckReport) -> str:
    """One human-readable line, citing the identity label when there is one."""
    if report.holds:
        extra = ""
        if report.details.get("applicable") is False:
            extra = " (not applicable: " + report.details.get("reason", "hypothesis fails") + ")"
        return f"PASS {report.check_name}{extra}"
    cx = report.counterexample or {}
    label = cx.get("identity") or cx.get("condition") or cx.get("violated") or ""
    rest = {k: v for k, v in cx.items() if k not in ("identity", "condition", "violated")}
    return f"FAIL {report.check_name}: {label} fails at {json.dumps(rest, sort_keys=True)}"
