"""
Chaos bound and integration-by-parts records.

Date: 2026-10-18

Architectural role:
- Results of models.behavior.malliavin_gauss and
  models.behavior.malliavin_poisson, serialized by the CLI

All values are Monte Carlo estimates; every estimate carries a standard
error from batch means over the (deterministic) sample stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional

JENSEN_SIGMAS = 3.0
IBP_SIGMAS = 4.0


@dataclass(frozen=True)
class GaussBoundResult:
    """
    d₁(F, Z_ν) majorants on a finite Gaussian space.

    Fields:
    - l1_term: max(1, 2/ν)·E|2(F+ν) − ⟨DF, −DL⁻¹F⟩|
    - l2_term: max(1, 2/ν)·E[(2(F+ν) − ⟨DF, −DL⁻¹F⟩)²]^{1/2}
    - bound: the reported bound (l1_term)
    - stderr / stderr_l2: standard errors of the two terms
    - conditional_diagnostic: 64-bin estimate of the conditional form;
      biased, diagnostic only
    """

    nu: float
    l1_term: float
    l2_term: float
    bound: float
    stderr: float
    stderr_l2: float
    conditional_diagnostic: float
    mean_F: float
    var_F: float
    n_samples: int
    seed: int
    pure: bool

    @property
    def jensen_ok(self) -> bool:
        return self.l1_term <= self.l2_term + JENSEN_SIGMAS * max(self.stderr, self.stderr_l2) + 1e-15

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": "gauss",
            "nu": self.nu,
            "l1_term": self.l1_term,
            "l2_term": self.l2_term,
            "bound": self.bound,
            "stderr": self.stderr,
            "stderr_l2": self.stderr_l2,
            "conditional_diagnostic": self.conditional_diagnostic,
            "mean_F": self.mean_F,
            "var_F": self.var_F,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "pure": self.pure,
        }


@dataclass(frozen=True)
class PoissonBoundResult:
    """
    d₂(F, Z_ν) bound on a discretized Poisson space.

    - first_term: max(1, 2/ν)·E|2(F+ν) − ⟨DF, −DL⁻¹F⟩|
    - first_term_l2: same with the L² norm
    - cubic_integral: Σ_z μ_z E[|D_zF|²|D_zL⁻¹F|] (p⁻¹Σ_z μ_z E|D_zF|³ for
      a pure chaos)
    - cubic_term: max(1, 1/ν + 1/2)·cubic_integral
    - form: "pure" (p⁻¹‖DF‖² form) or "general" (1/q weights per level)
    """

    nu: float
    first_term: float
    first_term_l2: float
    cubic_integral: float
    cubic_term: float
    bound: float
    bound_l2: float
    stderr: Dict[str, float]
    mean_F: float
    var_F: float
    n_samples: int
    seed: int
    form: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": "poisson",
            "nu": self.nu,
            "form": self.form,
            "first_term": self.first_term,
            "first_term_l2": self.first_term_l2,
            "cubic_integral": self.cubic_integral,
            "cubic_term": self.cubic_term,
            "bound": self.bound,
            "bound_l2": self.bound_l2,
            "stderr": dict(self.stderr),
            "mean_F": self.mean_F,
            "var_F": self.var_F,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class IbpReport:
    """Both sides of an integration-by-parts identity with pooled stderr."""

    function: str
    lhs: float
    rhs: float
    stderr: float
    n_samples: int
    seed: int
    model: str
    note: Optional[str] = None

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def ok(self) -> bool:
        return self.difference <= IBP_SIGMAS * self.stderr + 1e-12 * max(1.0, abs(self.lhs))

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "model": self.model,
            "function": self.function,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "difference": self.difference,
            "stderr": self.stderr,
            "ok": self.ok,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }
        if self.note:
            out["note"] = self.note
        return out
