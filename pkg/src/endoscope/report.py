"""Machine-readable verification outcomes shared by every module."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .cyclo import CycNum, to_json

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
SCHEMA_VERSION = 1


@dataclass
class VerifyReport:
    check: str
    inputs: dict[str, Any]
    outcome: str
    values: dict[str, Any] = field(default_factory=dict)
    reason: str | None = None
    rows: list[dict[str, Any]] = field(default_factory=list)
    timing: float | None = None

    @property
    def passed(self) -> bool:
        return self.outcome == PASS

    @property
    def failed(self) -> bool:
        return self.outcome == FAIL

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "inputs": jsonable(self.inputs), "outcome": self.outcome}
        if self.values:
            out["values"] = jsonable(self.values)
        if self.rows:
            out["rows"] = jsonable(self.rows)
        if self.reason is not None:
            out["reason"] = self.reason
        if self.timing is not None:
            out["timing"] = round(self.timing, 6)
        return out


def verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def compare(check: str, inputs: dict[str, Any], lhs: CycNum, rhs: CycNum, **extra: Any) -> VerifyReport:
    """Report for an exact equality lhs == rhs; both values are always recorded."""
    ok = lhs.ring.M == rhs.ring.M and lhs.coeffs == rhs.coeffs
    values = {"lhs": lhs, "rhs": rhs, **extra}
    return VerifyReport(check, inputs, verdict(ok), values)


def jsonable(obj: Any) -> Any:
    if isinstance(obj, CycNum):
        return to_json(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    return str(obj)


def dumps(payload: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(jsonable(payload), sort_keys=True, indent=1, ensure_ascii=False) + "\n"
