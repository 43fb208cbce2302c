"""
Finite-dimensional Wiener and Poisson chaos functionals.

Date: 2026-10-18

Gaussian side: an isonormal process on ℝ^k, so the multiple integrals of
order 1 and 2 are I_1(f) = Σ f_i x_i and I_2(f) = Σ f_ij (x_i x_j − δ_ij).

Poisson side: a Poisson measure on m cells with control weights μ_i, and
integrals against the compensated counts η̂_i = η_i − μ_i. Order-2 kernels
vanish on the diagonal, so I_2(f) = Σ_{i≠j} f_ij η̂_i η̂_j.

Design notes:
- A functional is a list of chaos levels (order, kernel). `order`/`kernel`
  give the leading level and `mixture` any further ones, which keeps pure
  chaoses a one-liner to build.
- Kernels are stored as read-only float arrays.

This class does NOT:
- support orders above 2
- extract chaos components from arbitrary functionals
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from models.behavior.errors import ContractError

SYMMETRY_TOL = 1e-14
CHAOS_ORDERS = (1, 2)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _check_level(order: int, kernel: np.ndarray, dim: int, zero_diagonal: bool) -> None:
    if order not in CHAOS_ORDERS:
        raise ContractError(f"chaos order must be 1 or 2, got {order}")
    expected = (dim,) if order == 1 else (dim, dim)
    if kernel.shape != expected:
        raise ContractError(f"order-{order} kernel must have shape {expected}, got {kernel.shape}")
    if not np.all(np.isfinite(kernel)):
        raise ContractError("kernel has non-finite entries")
    if order == 2:
        scale = max(1.0, float(np.max(np.abs(kernel))))
        if float(np.max(np.abs(kernel - kernel.T))) > SYMMETRY_TOL * scale:
            raise ContractError("order-2 kernel must be symmetric")
        if zero_diagonal and np.any(np.diag(kernel) != 0.0):
            raise ContractError("order-2 Poisson kernels must vanish on the diagonal")


def _levels(order, kernel, mixture) -> Tuple[Tuple[int, np.ndarray], ...]:
    return ((int(order), kernel),) + tuple((int(q), g) for q, g in mixture)


@dataclass(frozen=True)
class GaussChaosFunctional:
    """
    F = I_order(kernel) + Σ I_q(g) over the mixture, on ℝ^dim.

    Invariants:
    - order-2 kernels symmetric to 1e-14
    - at least one kernel is non-zero
    """

    dim: int
    order: int
    kernel: np.ndarray
    mixture: Tuple[Tuple[int, np.ndarray], ...] = field(default_factory=tuple)
    name: str = "gauss"

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise ContractError(f"dimension must be a positive integer, got {self.dim}")
        object.__setattr__(self, "kernel", _frozen(self.kernel))
        object.__setattr__(self, "mixture", tuple((int(q), _frozen(g)) for q, g in self.mixture))
        nonzero = False
        for q, g in self.levels:
            _check_level(q, g, self.dim, zero_diagonal=False)
            nonzero = nonzero or bool(np.any(g != 0.0))
        if not nonzero:
            raise ContractError("at least one chaos kernel must be non-zero")

    @property
    def levels(self) -> Tuple[Tuple[int, np.ndarray], ...]:
        return _levels(self.order, self.kernel, self.mixture)

    @property
    def is_pure(self) -> bool:
        return len({q for q, _ in self.levels}) == 1

    def variance(self) -> float:
        """Isometry: Σ_q q!·‖f_q‖² over the (merged) levels."""
        merged = {}
        for q, g in self.levels:
            merged[q] = merged.get(q, 0.0) + g
        return float(sum((1.0 if q == 1 else 2.0) * np.sum(g * g) for q, g in merged.items()))


@dataclass(frozen=True)
class PoissonSpace:
    """m cells with positive finite control weights μ_i."""

    mu: Tuple[float, ...]

    def __post_init__(self):
        mu = tuple(float(v) for v in self.mu)
        object.__setattr__(self, "mu", mu)
        if not mu:
            raise ContractError("a Poisson space needs at least one cell")
        if any(not (np.isfinite(v) and v > 0) for v in mu):
            raise ContractError("control weights must be finite and positive")

    @property
    def cells(self) -> int:
        return len(self.mu)

    def mu_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)

    @classmethod
    def uniform(cls, cells: int, total: float) -> "PoissonSpace":
        return cls(tuple(total / cells for _ in range(cells)))


@dataclass(frozen=True)
class PoissonChaosFunctional:
    """
    F = I_order(kernel) + Σ I_q(g) against the compensated measure.

    Invariants:
    - order-2 kernels symmetric with an exactly zero diagonal
    """

    order: int
    kernel: np.ndarray
    space: PoissonSpace
    mixture: Tuple[Tuple[int, np.ndarray], ...] = field(default_factory=tuple)
    name: str = "poisson"

    def __post_init__(self):
        object.__setattr__(self, "kernel", _frozen(self.kernel))
        object.__setattr__(self, "mixture", tuple((int(q), _frozen(g)) for q, g in self.mixture))
        for q, g in self.levels:
            _check_level(q, g, self.space.cells, zero_diagonal=True)

    @property
    def levels(self) -> Tuple[Tuple[int, np.ndarray], ...]:
        return _levels(self.order, self.kernel, self.mixture)

    @property
    def is_pure(self) -> bool:
        return len({q for q, _ in self.levels}) == 1

    def variance(self) -> float:
        """Isometry: Σ f_i²μ_i + 2Σ_{i≠j} f_ij²μ_iμ_j."""
        mu = self.space.mu_array()
        merged = {}
        for q, g in self.levels:
            merged[q] = merged.get(q, 0.0) + g
        total = 0.0
        if 1 in merged:
            total += float(np.sum(merged[1] ** 2 * mu))
        if 2 in merged:
            total += 2.0 * float(mu @ (merged[2] ** 2) @ mu)
        return total
