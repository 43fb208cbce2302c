"""
Gamma and centered-Gamma parameter values.

Date: 2026-10-18

GammaParams describes the law Γ(r, λ) with shape r and rate λ (mean r/λ).
CenteredGammaParams describes the centered Gamma law of Z_ν = 2X − ν with
X ~ Γ(ν/2, 1), which has mean 0 and variance 2ν.

Architectural role:
- Domain value objects
- Passed to every solver, bound and sampler that targets a Gamma law

Invariants:
- r > 0, lam > 0, nu > 0, all finite
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict

from models.behavior.errors import ContractError


def _check_positive(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ContractError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value) or value <= 0:
        raise ContractError(f"{name} must be finite and > 0, got {value}")


@dataclass(frozen=True)
class GammaParams:
    """
    Shape/rate parameters of Γ(r, λ).

    The rate is stored as `lam` since `lambda` is reserved.
    """

    r: float
    lam: float = 1.0

    def __post_init__(self):
        _check_positive("r", self.r)
        _check_positive("lambda", self.lam)

    @property
    def mean(self) -> float:
        return self.r / self.lam

    @property
    def variance(self) -> float:
        return self.r / self.lam ** 2

    def unit_rate(self) -> "GammaParams":
        """Same shape with λ = 1; solvers work there and rescale."""
        return GammaParams(self.r, 1.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"target": "gamma", "r": self.r, "lambda": self.lam}


@dataclass(frozen=True)
class CenteredGammaParams:
    """
    Parameter ν of the centered Gamma law Γ̄(ν).

    Z_ν is a centered chi-square with ν degrees of freedom when ν is an
    integer.
    """

    nu: float

    def __post_init__(self):
        _check_positive("nu", self.nu)

    @property
    def variance(self) -> float:
        return 2.0 * self.nu

    @property
    def underlying(self) -> GammaParams:
        """The Gamma law X with Z_ν = 2X − ν."""
        return GammaParams(self.nu / 2.0, 1.0)

    @property
    def coefficient(self) -> float:
        """max(1, 2/ν), the factor that recurs in every centered bound."""
        return max(1.0, 2.0 / self.nu)

    def to_dict(self) -> Dict[str, Any]:
        return {"target": "centered", "nu": self.nu}
