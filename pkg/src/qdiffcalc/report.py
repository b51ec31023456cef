"""Structured verdicts shared by the verification modules and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

__all__ = ["Check", "Report", "TOOL_VERSION", "jsonable"]

TOOL_VERSION = "0.1.0"


def jsonable(x: Any) -> Any:
    """Plain-JSON view: Scalars and other objects become their string form."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


@dataclass
class Check:
    """One named verdict.  ``ok`` is True/False, or None for skipped."""

    name: str
    ok: bool | None
    details: dict = field(default_factory=dict)
    certificate: str = "exact"

    @property
    def status(self) -> str:
        if self.ok is None:
            return "skipped"
        return "pass" if self.ok else "fail"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "details": jsonable(self.details),
            "certificate": self.certificate,
        }


@dataclass
class Report:
    params: dict
    results: list = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.ok is False]

    @property
    def all_passed(self) -> bool:
        return not self.failed

    def to_dict(self) -> dict:
        return {
            "tool_version": TOOL_VERSION,
            "params": jsonable(self.params),
            "results": jsonable(self.results),
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
