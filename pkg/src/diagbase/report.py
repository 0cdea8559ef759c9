"""Inequality reports and JSON helpers shared by the engine and the CLI."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class BoundReport:
    name: str
    lhs: Any
    rhs: Any
    verdict: str  # holds | fails | inconclusive
    rounding_note: str = "exact integers"
    parameters: dict = field(default_factory=dict)
    citations: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in ("holds", "fails", "inconclusive"):
            raise ValueError(f"bad verdict {self.verdict!r}")

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "bound_report",
            "inequality": self.name,
            "parameters": self.parameters,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "rounding": self.rounding_note,
            "verdict": self.verdict,
            "citations": self.citations,
        }


def _num(x):
    # big integers and interval endpoints are kept as strings so any JSON
    # reader round-trips them exactly
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= 2**53 else x
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return str(x)


def compare_exact(name: str, lhs: int, rhs: int, **kw) -> BoundReport:
    """Report for the strict integer inequality ``lhs > rhs``."""
    return BoundReport(name, lhs, rhs, "holds" if lhs > rhs else "fails", **kw)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
