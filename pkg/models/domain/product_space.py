"""
Finite product spaces and U-statistic kernels.

Date: 2026-10-18

A DiscreteProductSpace is a finite sequence of independent coordinates
X_1, …, X_n, each with a finite labeled support and positive
probabilities. A UStatKernel maps one atom per coordinate to a real
number and so defines W = ψ(X_1, …, X_n).

Architectural role:
- Domain value objects consumed by models.behavior.hoeffding and
  models.behavior.dejong
- Built from JSON descriptions by models.behavior.model_factory

Design notes:
- Kernels may carry a vectorized `batch` evaluator working on support
  indices; enumeration and Monte Carlo use it when present and fall back
  to calling psi on atom tuples otherwise.
- Probabilities may be Fractions; `probs_array(exact=True)` then yields
  an object array for the rational arithmetic mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Optional, Sequence, Tuple

import numpy as np

from models.behavior.errors import ContractError

PROB_SUM_TOL = 1e-12


def _as_fraction(p: Any) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    return Fraction(float(p)).limit_denominator(10 ** 9)


@dataclass(frozen=True)
class DiscreteFactor:
    """
    One coordinate: labeled atoms and their probabilities.

    Invariants:
    - support atoms are distinct
    - probs are positive and sum to 1 within 1e-12
    """

    support: Tuple[Any, ...]
    probs: Tuple[Any, ...]

    def __post_init__(self):
        support = tuple(self.support)
        probs = tuple(self.probs)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        if not support:
            raise ContractError("a factor needs at least one atom")
        if len(support) != len(probs):
            raise ContractError(f"support has {len(support)} atoms but {len(probs)} probabilities")
        if len(set(support)) != len(support):
            raise ContractError(f"support atoms must be distinct, got {support}")
        if any(float(p) <= 0 for p in probs):
            raise ContractError(f"probabilities must be positive, got {probs}")
        if abs(math.fsum(float(p) for p in probs) - 1.0) > PROB_SUM_TOL:
            raise ContractError(f"probabilities must sum to 1, got {math.fsum(float(p) for p in probs)}")

    @property
    def size(self) -> int:
        return len(self.support)

    def probs_array(self, exact: bool = False) -> np.ndarray:
        if exact:
            return np.array([_as_fraction(p) for p in self.probs], dtype=object)
        return np.array([float(p) for p in self.probs], dtype=float)

    def values_array(self) -> np.ndarray:
        """Atoms as floats (only for numeric supports)."""
        try:
            return np.array([float(a) for a in self.support])
        except (TypeError, ValueError) as e:
            raise ContractError("factor support is not numeric") from e

    @classmethod
    def rademacher(cls) -> "DiscreteFactor":
        return cls((-1, 1), (Fraction(1, 2), Fraction(1, 2)))


@dataclass(frozen=True)
class DiscreteProductSpace:
    """
    Ordered list of independent DiscreteFactors.

    Invariants:
    - 1 <= n <= 63 (subsets are bitmasks)
    """

    factors: Tuple[DiscreteFactor, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if not 1 <= len(factors) <= 63:
            raise ContractError(f"need 1 <= n <= 63 coordinates, got {len(factors)}")

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(f.size for f in self.factors)

    @property
    def size(self) -> int:
        """Number of product-space points."""
        return reduce(lambda a, b: a * b, self.shape, 1)

    @property
    def max_support(self) -> int:
        return max(self.shape)

    def prob_vectors(self, exact: bool = False) -> Tuple[np.ndarray, ...]:
        return tuple(f.probs_array(exact) for f in self.factors)

    def atoms(self, indices: Sequence[int]) -> Tuple[Any, ...]:
        return tuple(f.support[i] for f, i in zip(self.factors, indices))

    @classmethod
    def iid(cls, factor: DiscreteFactor, n: int) -> "DiscreteProductSpace":
        return cls(tuple(factor for _ in range(n)))


@dataclass(frozen=True)
class UStatKernel:
    """
    Kernel ψ defining W = ψ(X_1, …, X_n).

    Fields:
    - psi: callable on a tuple of atoms (one per coordinate), or None for
      table kernels
    - d: declared degeneracy order, if known
    - name: label for reports
    - batch: optional vectorized evaluator on an (m, n) array of support
      indices, returning m values
    - table: optional explicit value table indexed by support indices

    Invariants:
    - at least one of psi, batch, table is given
    - psi is finite on the whole product support (checked on enumeration)
    """

    psi: Optional[Callable[[Tuple[Any, ...]], float]]
    d: Optional[int] = None
    name: str = "kernel"
    batch: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    table: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.psi is None and self.batch is None and self.table is None:
            raise ContractError("a kernel needs psi, a batch evaluator or a value table")
        if self.d is not None and self.d < 0:
            raise ContractError(f"degeneracy order must be >= 0, got {self.d}")

    def evaluate_indices(self, space: DiscreteProductSpace, indices: np.ndarray) -> np.ndarray:
        """ψ at each row of an (m, n) index array."""
        indices = np.asarray(indices, dtype=np.int64).reshape(-1, space.n)
        if self.table is not None:
            return np.asarray(self.table, dtype=float)[tuple(indices.T)]
        if self.batch is not None:
            return np.asarray(self.batch(indices), dtype=float).reshape(-1)
        return np.array([float(self.psi(space.atoms(row))) for row in indices])

    def evaluate_atoms(self, space: DiscreteProductSpace, indices: Sequence[int]) -> Any:
        """ψ at one point, keeping the kernel's own number type (rational mode)."""
        if self.table is not None:
            return self.table[tuple(indices)]
        if self.psi is not None:
            return self.psi(space.atoms(indices))
        return float(self.batch(np.asarray([indices], dtype=np.int64))[0])

    @classmethod
    def from_table(cls, table: np.ndarray, d: Optional[int] = None, name: str = "table") -> "UStatKernel":
        """Kernel given as an explicit value table indexed by support indices."""
        return cls(psi=None, d=d, name=name, table=np.asarray(table))
