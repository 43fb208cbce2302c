"""
Distance estimate record.

Date: 2026-10-18

kind is one of:
- "exact": the distance between the two laws as given (empirical or
  enumerated), up to quadrature tolerance
- "lower_bound": a maximum over a finite dictionary of test functions;
  never read it as the distance itself
- "mc_estimate": a Monte Carlo estimate, with stderr when available
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional

from models.behavior.errors import ContractError

DISTANCE_KINDS = ("exact", "lower_bound", "mc_estimate")


@dataclass(frozen=True)
class DistanceEstimate:
    name: str
    value: float
    kind: str
    stderr: Optional[float] = None
    argmax: Optional[str] = None

    def __post_init__(self):
        if self.kind not in DISTANCE_KINDS:
            raise ContractError(f"unknown distance kind '{self.kind}'")
        if not self.value >= 0:
            raise ContractError(f"{self.name}: distance must be >= 0, got {self.value}")

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "value": self.value, "kind": self.kind, "stderr": self.stderr}
        if self.argmax is not None:
            out["argmax"] = self.argmax
        return out
