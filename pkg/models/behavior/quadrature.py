"""
Adaptive quadrature wrapper.

Date: 2026-10-18

Thin layer over scipy.integrate.quad (QUADPACK Gauss-Kronrod) that turns
silent accuracy loss into AccuracyError. Every integral in the library goes
through `integrate` so tolerances and failure handling live in one place.

No module state: callers pass epsabs. GSTEIN_QUAD_TOL travels as
Settings.quad_tol through the controllers, like threads and enum_cap.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import Callable, Optional, Sequence

from scipy import integrate as _integrate

from models.behavior.errors import AccuracyError

logger = logging.getLogger(__name__)

DEFAULT_EPSABS = 1e-12
DEFAULT_EPSREL = 1e-12
DEFAULT_LIMIT = 500

# Reported error estimates above this multiple of the request are failures.
ACCEPT_FACTOR = 1e3

def integrate(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    epsabs: float = DEFAULT_EPSABS,
    epsrel: float = DEFAULT_EPSREL,
    points: Optional[Sequence[float]] = None,
    weight: Optional[str] = None,
    wvar=None,
    limit: int = DEFAULT_LIMIT,
) -> float:
    """
    ∫_a^b func(t) dt, raising AccuracyError when QUADPACK gives up.

    `weight`/`wvar` are passed through (e.g. weight="alg" for algebraic
    end-point singularities). `points` is only valid on finite intervals.
    """
    if a == b:
        return 0.0
    kwargs = {"epsabs": epsabs, "epsrel": epsrel, "limit": limit}
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
    elif points:
        inside = sorted(p for p in points if min(a, b) < p < max(a, b))
        if inside:
            if math.isinf(a) or math.isinf(b):
                return _split_infinite(func, a, b, inside, epsabs, epsrel, limit)
            kwargs["points"] = inside

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        value, abserr = _integrate.quad(func, a, b, **kwargs)[:2]

    requested = max(epsabs, epsrel * abs(value))
    if not math.isfinite(value) or abserr > ACCEPT_FACTOR * requested:
        raise AccuracyError(f"quadrature on [{a}, {b}] did not converge", abserr, requested)
    return value


def _split_infinite(func, a, b, inside, epsabs, epsrel, limit) -> float:
    edges = [a, *inside, b]
    parts = [
        integrate(func, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit)
        for lo, hi in zip(edges[:-1], edges[1:])
    ]
    return math.fsum(parts)
