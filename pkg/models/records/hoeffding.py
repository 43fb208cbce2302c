"""
Hoeffding decomposition records.

Date: 2026-10-18

Architectural role:
- Results of models.behavior.hoeffding
- Subsets J ⊆ {0, …, n−1} are bitmasks; reports list them as sorted
  0-based index tuples

Design notes:
- Only non-zero components are stored; `component(mask)` returns a zero
  table for every other subset.
- When the decomposition was truncated at `max_order`, components above
  it are unknown individually; `residual_variance` = Var(W) minus the
  retained variance is zero exactly when they all vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np


def mask_to_subset(mask: int) -> Tuple[int, ...]:
    """Bitmask -> sorted tuple of coordinate indices."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subset_to_mask(subset) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << int(i)
    return mask


@dataclass(frozen=True)
class HoeffdingDecomposition:
    """
    W = Σ_J W_J with W_J a table over the coordinates in J.

    Fields:
    - n, shape: number of coordinates and support sizes
    - components: mask -> table (axes = coordinates of J in increasing order)
    - sigma2: mask -> Var(W_J) for stored components
    - mean: W_∅ = E[W]
    - variance: Var(W)
    - max_order: largest |J| computed (n for a full decomposition)
    - exact: True when computed in rational arithmetic
    - probs: per-coordinate probability vectors the tables are weighted by
    """

    n: int
    shape: Tuple[int, ...]
    components: Dict[int, np.ndarray]
    sigma2: Dict[int, Any]
    mean: Any
    variance: Any
    max_order: int
    exact: bool = False
    method: str = "mobius"
    probs: Tuple[np.ndarray, ...] = field(default=(), compare=False, repr=False)

    @property
    def is_full(self) -> bool:
        return self.max_order >= self.n

    @property
    def residual_variance(self) -> float:
        """Var(W) not explained by the stored components."""
        return float(self.variance - sum(self.sigma2.values()))

    def component(self, mask: int) -> np.ndarray:
        if mask in self.components:
            return self.components[mask]
        dims = tuple(self.shape[i] for i in mask_to_subset(mask))
        return np.zeros(dims, dtype=object if self.exact else float)

    def orders(self) -> Dict[int, float]:
        """Total variance carried by each order |J|."""
        out: Dict[int, float] = {}
        for mask, s2 in self.sigma2.items():
            k = bin(mask).count("1")
            out[k] = out.get(k, 0.0) + float(s2)
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "shape": list(self.shape),
            "mean": float(self.mean),
            "variance": float(self.variance),
            "max_order": self.max_order,
            "exact": self.exact,
            "method": self.method,
            "residual_variance": self.residual_variance,
            "variance_by_order": {str(k): v for k, v in sorted(self.orders().items())},
            "components": [
                {"J": list(mask_to_subset(m)), "sigma2": float(self.sigma2[m])}
                for m in sorted(self.components, key=lambda m: (bin(m).count("1"), m))
            ],
        }


@dataclass(frozen=True)
class DegeneracyCheck:
    """Outcome of checking W_K = 0 for all |K| ≠ d."""

    ok: bool
    d: int
    offending: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)
    unresolved_variance: float = 0.0

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "d": self.d,
            "offending": [list(s) for s in self.offending],
            "unresolved_variance": self.unresolved_variance,
        }


@dataclass(frozen=True)
class ComponentStats:
    """
    Variance statistics of a degenerate decomposition of order d.

    - rho2 = max_i Σ_{K∋i, |K|=d} σ²_K
    - big_d = max_J E[W_J⁴]/σ⁴_J over components with σ²_J > 0
    - excluded: order-d subsets with σ²_J = 0 (left out of big_d)
    """

    d: int
    rho2: float
    big_d: Optional[float]
    sigma2_list: Tuple[Tuple[Tuple[int, ...], float], ...]
    excluded: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "rho2": self.rho2,
            "D": self.big_d,
            "sigma2": [{"J": list(j), "sigma2": s} for j, s in self.sigma2_list],
            "excluded_zero_variance": [list(j) for j in self.excluded],
        }
