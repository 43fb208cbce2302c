"""
Stein solution and bound-certification records.

Date: 2026-10-18

Architectural role:
- Immutable results produced by models.behavior.stein_core
- Serialized by the CLI through to_dict()

SteinSolution holds function handles, so only its parameters and E[h]
serialize; BoundReport and ExplosionWitness serialize completely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Tuple, Union

from models.domain.gamma_params import CenteredGammaParams, GammaParams
from models.domain.test_function import TestFunction

Target = Union[GammaParams, CenteredGammaParams]


@dataclass(frozen=True)
class SteinSolution:
    """
    Bounded solution f of a Gamma Stein equation together with f′.

    For a GammaParams target f solves x f′ + (r − λx) f = h − E h(X_{r,λ});
    for a CenteredGammaParams target f solves
    2(x + ν) f′ − x f = h − E h(Z_ν).

    Invariants:
    - f and fprime are pure and thread-safe
    - expected_h is the E[h(target)] the equation was centered with
    """

    f: Callable[[float], float]
    fprime: Callable[[float], float]
    params: Target
    expected_h: float
    h: TestFunction

    def residual(self, x: float) -> float:
        """Left side minus right side of the defining equation at x."""
        fx = self.f(x)
        dfx = self.fprime(x)
        rhs = self.h(x) - self.expected_h
        if isinstance(self.params, CenteredGammaParams):
            nu = self.params.nu
            return 2.0 * (x + nu) * dfx - x * fx - rhs
        p = self.params
        return x * dfx + (p.r - p.lam * x) * fx - rhs

    def to_dict(self) -> Dict[str, Any]:
        return {"h": self.h.name, "params": self.params.to_dict(), "expected_h": self.expected_h}


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid lo:hi:step (inclusive ends)."""

    lo: float = -20.0
    hi: float = 20.0
    step: float = 0.05

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse 'lo:hi:step' (the CLI --grid format)."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be lo:hi:step, got '{text}'")
        lo, hi, step = (float(p) for p in parts)
        if not (hi > lo and step > 0):
            raise ValueError(f"grid needs hi > lo and step > 0, got '{text}'")
        return cls(lo, hi, step)

    def to_dict(self) -> Dict[str, float]:
        return {"lo": self.lo, "hi": self.hi, "step": self.step}


@dataclass(frozen=True)
class BoundReport:
    """
    Measured sups/Lipschitz constants of a Stein solution against theorem
    right-hand sides.

    Invariants:
    - passed is True iff measured[k] <= theorem[k] + slack for every k in theorem
    - margin[k] = theorem[k] - measured[k]

    Grid estimates approximate the true sups from below, so passing is
    necessary for the theorems to hold, not a proof that they do.
    """

    h: str
    params: Dict[str, Any]
    measured: Dict[str, float]
    theorem: Dict[str, float]
    margin: Dict[str, float]
    passed: bool
    violations: Tuple[str, ...] = field(default_factory=tuple)
    skipped: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": self.h,
            "params": self.params,
            "measured": dict(self.measured),
            "theorem": dict(self.theorem),
            "margin": dict(self.margin),
            "pass": self.passed,
            "violations": list(self.violations),
            "skipped": list(self.skipped),
        }


@dataclass(frozen=True)
class ExplosionWitness:
    """
    |f′_h(x)| at x = −1/2 for h = min(x, 0), λ = 1.

    closed_form evaluates the double-integral representation of f′ on the
    negative axis and is the witness value checked against e^{−1/2}/r.
    bounded_solution_derivative is f′ of the bounded solution returned by
    solve_stein_gamma. On the negative axis these are different solutions
    of the same equation, so the two numbers are not a cross-check.
    """

    r: float
    x: float
    closed_form: float
    bounded_solution_derivative: float
    lower_bound: float

    @property
    def value(self) -> float:
        return self.closed_form

    @property
    def exceeds_lower_bound(self) -> bool:
        return self.closed_form >= self.lower_bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "x": self.x,
            "value": self.closed_form,
            "value_source": "closed_form_double_integral",
            "bounded_solution_derivative": self.bounded_solution_derivative,
            "lower_bound": self.lower_bound,
            "exceeds_lower_bound": self.exceeds_lower_bound,
        }
