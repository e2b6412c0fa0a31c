"""Verdicts and machine-checkable evidence bundles for the obstruction wing.

All exact values serialize as decimal-free strings ("num/den" for rationals,
nested int lists for matrices), so a bundle can be replayed bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .exactmat import IntMatrix


class Verdict(str, Enum):
    OBSTRUCTED_TOPOLOGICAL = "ObstructedTopological"
    OBSTRUCTED_SMOOTH_ONLY = "ObstructedSmoothOnly"
    INCONCLUSIVE = "Inconclusive"
    PRECONDITION_FAILED = "PreconditionFailed"


def exact(value):
    """Render an exact value as a JSON-ready structure (never a float)."""
    if isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if isinstance(value, IntMatrix):
        return [row[:] for row in value.data]
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return [exact(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((exact(v) for v in value), key=str)
    if isinstance(value, dict):
        return {str(k): exact(v) for k, v in value.items()}
    if value is None:
        return None
    raise TypeError(f"not an exact value: {type(value).__name__}")


@dataclass(frozen=True)
class EvidenceItem:
    name: str
    value: object

    def to_json(self):
        return {"name": self.name, "value": exact(self.value)}


@dataclass
class ObstructionReport:
    """Verdict for one knot/manifold together with a replayable evidence trail."""

    subject: str
    verdict: Verdict
    evidence: list[EvidenceItem] = field(default_factory=list)

    def add(self, name: str, value) -> None:
        self.evidence.append(EvidenceItem(name, value))

    def get(self, name: str):
        for item in self.evidence:
            if item.name == name:
                return item.value
        raise KeyError(name)

    def to_json(self):
        return {
            "subject": self.subject,
            "verdict": self.verdict.value,
            "evidence": [item.to_json() for item in self.evidence],
        }

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_json(), **kwargs)
