"""
Error hierarchy for the gamma-stein library.

Date: 2026-10-18

Every failure the library raises on purpose derives from GammaSteinError.
Each class carries the process exit code the CLI maps it to, so the
command layer never has to inspect messages.

Structure:
- ContractError: a caller broke a precondition (bad parameters, missing
  Lipschitz constants, out-of-range orders).
- ConfigurationError: bad CLI/config/env input or unknown named families.
- AccuracyError: a numerical routine could not reach its tolerance.
- ResourceError: an exact enumeration would exceed the configured cap.
- CertificationError: a certified bound was violated beyond slack.
"""

from __future__ import annotations

from typing import Optional


class GammaSteinError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1


class ContractError(GammaSteinError, ValueError):
    """Raised when an operation is called outside its preconditions."""

    exit_code = 2


class ConfigurationError(GammaSteinError):
    """Raised for invalid configuration, CLI flags or model descriptions."""

    exit_code = 2

    def __init__(self, message: str, problems: Optional[list[str]] = None):
        super().__init__(message)
        self.problems = list(problems or [])


class AccuracyError(GammaSteinError, ArithmeticError):
    """Raised when quadrature or an iterative method misses its tolerance."""

    exit_code = 3

    def __init__(self, message: str, achieved: float = float("nan"), requested: float = float("nan")):
        super().__init__(f"{message} (achieved {achieved:.3g}, requested {requested:.3g})")
        self.achieved = achieved
        self.requested = requested


class ResourceError(GammaSteinError):
    """Raised when an exact enumeration would exceed the configured cap."""

    exit_code = 3

    def __init__(self, required: int, cap: int):
        super().__init__(
            f"Enumeration needs {required} product-space points, cap is {cap}"
        )
        self.required = required
        self.cap = cap


class CertificationError(GammaSteinError):
    """Raised by the command layer when a certified bound fails."""

    exit_code = 4
