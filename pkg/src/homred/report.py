"""Deterministic report documents.

A report is a JSON object with schema ``homred.report/1``::

    {
      "schema": "homred.report/1",
      "tool": {"name": "homred", "version": "..."},
      "command": "check" | "classify" | "reduce" | "verify-all",
      "example": {"name": ..., "parameters": {...}, "display": "λ₀=2 λ₁=3"} | null,
      "settings": {"points": 20, "seed": 0, "tol": 1e-08},
      "checks": [{"name", "passed", "origin", "residual"?, "tolerance"?,
                  "expected"?, "observed"?, "detail"?, "criterion"?}, ...],
      "results": {...},            # command-specific payload
      "summary": {"total": n, "passed": k, "failed": n - k},
      "passed": true | false,
      "timing": {"wall_seconds": ...}   # only when requested
    }

Serialization sorts keys and uses ``repr`` floats, so identical inputs and
seed give identical bytes.  Wall time is left out unless asked for, since it
is the one field that changes between identical runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .suite import CheckResult

SCHEMA = "homred.report/1"

PARAM_SYMBOLS = {"lambda": "λ", "lambda0": "λ₀", "lambda1": "λ₁", "n": "n"}


def display_params(params: Mapping[str, float]) -> str:
    return " ".join(f"{PARAM_SYMBOLS.get(k, k)}={_short(v)}" for k, v in sorted(params.items()))


def _short(v: float) -> str:
    return f"{v:g}" if isinstance(v, float) else str(v)


def _clean(obj: Any) -> Any:
    """JSON-safe copy: numpy scalars and arrays become Python values, non-finite floats strings."""
    if hasattr(obj, "tolist"):
        obj = obj.tolist()
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


@dataclass
class Report:
    """A command's outcome; see the module docstring for the schema."""

    command: str
    version: str
    settings: Mapping[str, Any]
    checks: Sequence[CheckResult] = ()
    example: Optional[str] = None
    parameters: Mapping[str, float] = field(default_factory=dict)
    results: Mapping[str, Any] = field(default_factory=dict)
    wall_seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, include_timing: bool = False) -> dict:
        n_pass = sum(c.passed for c in self.checks)
        doc = {
            "schema": SCHEMA,
            "tool": {"name": "homred", "version": self.version},
            "command": self.command,
            "example": None
            if self.example is None
            else {"name": self.example, "parameters": dict(self.parameters), "display": display_params(self.parameters)},
            "settings": dict(self.settings),
            "checks": [c.as_dict() for c in self.checks],
            "results": dict(self.results),
            "summary": {"total": len(self.checks), "passed": n_pass, "failed": len(self.checks) - n_pass},
            "passed": self.passed,
        }
        if include_timing and self.wall_seconds is not None:
            doc["timing"] = {"wall_seconds": self.wall_seconds}
        return _clean(doc)

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        """Human-readable table derived from the document."""
        doc = self.to_dict()
        lines = []
        if doc["example"]:
            ex = doc["example"]
            lines.append(f"{doc['command']} {ex['name']} {ex['display']}".rstrip())
        else:
            lines.append(doc["command"])
        width = max((len(c["name"]) for c in doc["checks"]), default=10)
        for c in doc["checks"]:
            flag = "PASS" if c["passed"] else "FAIL"
            if "residual" in c:
                value = f"{c['residual']:.3e} <= {c['tolerance']:.1e}"
            elif "expected" in c:
                value = f"{c.get('observed')!s} (expected {c['expected']!s})"
            else:
                value = ""
            crit = f"[{c['criterion']}] " if "criterion" in c else ""
            extra = f"  {c['detail']}" if "detail" in c else ""
            lines.append(f"{flag}  {crit}{c['name']:<{width}}  {value}  ({c['origin']}){extra}".rstrip())
        s = doc["summary"]
        lines.append(f"{s['passed']}/{s['total']} checks passed")
        return "\n".join(lines) + "\n"
