"""
Probability distances between samples, enumerated laws and Z_ν.

Date: 2026-10-18

Architectural role:
- Empirical checks for every bound in the library: the de Jong demo and
  the chaos bounds compare their bound values with d₁ and with the d₂
  dictionary lower bound computed here
- Gaussian mollification utilities behind the d₁/d₂ smoothing inequality

Design notes:
- d₂ is only ever reported as a maximum over a finite dictionary of test
  functions with ‖h′‖, ‖h″‖ <= 1, i.e. a lower bound of the true d₂.
- Laws are passed as sample arrays, optionally with weights (exactly
  enumerated laws arrive as distinct values with probabilities).
- Expectations under Z_ν go through stein_core.expected_h on the affine
  image 2X − ν, X ~ Gamma(ν/2, 1).
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import hermite_e
from scipy.stats import wasserstein_distance

from catalog.test_functions import certification_dictionary, smooth_step
from models.behavior.errors import ContractError
from models.behavior.quadrature import integrate
from models.behavior.stein_core import EXPECTATION_EPSABS, expected_h
from models.domain.gamma_params import CenteredGammaParams
from models.domain.test_function import TestFunction
from models.records.distance import DistanceEstimate

logger = logging.getLogger(__name__)

SMOOTHING_CONSTANT = 4.0 / math.sqrt(math.pi)
HERMITE_POINTS = 61
SMOOTH_STEP_SCALES = (0.5, 1.0, 2.0, 4.0)
MAX_CM_ORDER = 8
CERTIFIED_LIMIT = 1.0

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _as_samples(values, label: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ContractError(f"{label} is empty")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{label} contains non-finite values")
    return arr


def _as_weights(weights, size: int) -> np.ndarray:
    if weights is None:
        return np.full(size, 1.0 / size)
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != size or np.any(w < 0) or abs(math.fsum(w) - 1.0) > 1e-9:
        raise ContractError("weights must be nonnegative, one per value, and sum to 1")
    return w


# ---------------------------------------------------------------------
# d₁ and Kolmogorov
# ---------------------------------------------------------------------

def wasserstein1(samples_a, samples_b) -> DistanceEstimate:
    """
    d₁ between two empirical laws.

    Equal sizes use the mean absolute difference of the sorted samples;
    unequal sizes use the exact quantile-coupling integral.
    """
    a = _as_samples(samples_a, "samples_a")
    b = _as_samples(samples_b, "samples_b")
    if a.size == b.size:
        value = math.fsum(np.abs(np.sort(a) - np.sort(b))) / a.size
    else:
        value = float(wasserstein_distance(a, b))
    return DistanceEstimate("d1", value, "exact")


def wasserstein1_to_target(
    values,
    weights,
    target_cdf: Callable[[float], float],
    lower: float = -math.inf,
    epsabs: float = 1e-10,
) -> DistanceEstimate:
    """
    d₁ = ∫ |F_law(x) − F_target(x)| dx for a finite weighted law and a
    continuous target whose cdf vanishes below `lower`.
    """
    x = _as_samples(values, "values")
    w = _as_weights(weights, x.size)
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]
    atoms, starts = np.unique(x, return_index=True)
    cumulative = np.cumsum(np.add.reduceat(w, starts))

    def piece(lo: float, hi: float, level: float) -> float:
        # ∫_lo^hi |level − F_target|; F_target = 0 left of `lower`
        flat = 0.0
        if lo < lower:
            cut = min(hi, lower)
            flat = level * (cut - lo)
            lo = cut
        if hi <= lo:
            return flat
        return flat + integrate(lambda t: abs(level - target_cdf(t)), lo, hi, epsabs=epsabs)

    parts = []
    if atoms[0] > lower:
        parts.append(integrate(target_cdf, lower, float(atoms[0]), epsabs=epsabs))
    for i in range(atoms.size - 1):
        parts.append(piece(float(atoms[i]), float(atoms[i + 1]), float(cumulative[i])))
    last = float(atoms[-1])
    if last < lower:
        parts.append(lower - last)
    parts.append(integrate(lambda t: 1.0 - target_cdf(t), max(last, lower), math.inf, epsabs=epsabs))
    return DistanceEstimate("d1", math.fsum(parts), "exact")


def kolmogorov(samples, target_cdf: Callable[[float], float], weights=None) -> DistanceEstimate:
    """sup_x |F_law(x) − F_target(x)|, attained at an atom or just left of it."""
    x = _as_samples(samples, "samples")
    w = _as_weights(weights, x.size)
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]
    atoms, starts = np.unique(x, return_index=True)
    cumulative = np.cumsum(np.add.reduceat(w, starts))
    before = np.concatenate(([0.0], cumulative[:-1]))
    cdf = np.array([target_cdf(float(t)) for t in atoms])
    value = float(max(np.max(np.abs(cumulative - cdf)), np.max(np.abs(cdf - before))))
    return DistanceEstimate("kolmogorov", value, "exact")


# ---------------------------------------------------------------------
# d₂ dictionary
# ---------------------------------------------------------------------

def d2_dictionary_members() -> Tuple[TestFunction, ...]:
    """Dictionary entries with lip1, lip2 <= 1 plus smoothed steps at four scales."""
    members = [
        h for h in certification_dictionary()
        if h.lip1 is not None and h.lip2 is not None
        and h.lip1 <= CERTIFIED_LIMIT and h.lip2 <= CERTIFIED_LIMIT
    ]
    members.extend(smooth_step(rho) for rho in SMOOTH_STEP_SCALES)
    return tuple(members)


@lru_cache(maxsize=256)
def _target_expectation(name: str, nu: float, epsabs: float) -> float:
    h = next(m for m in d2_dictionary_members() if m.name == name)
    return target_expectation(h, nu, epsabs)


def target_expectation(h: TestFunction, nu: float, epsabs: float = EXPECTATION_EPSABS) -> float:
    """E[h(Z_ν)] by quadrature."""
    base = CenteredGammaParams(nu).underlying
    return expected_h(h.composed_affine(2.0, -nu), base, epsabs)


def d2_dictionary(
    samples_a,
    target: Union[CenteredGammaParams, Sequence[float], np.ndarray],
    members: Optional[Sequence[TestFunction]] = None,
    weights_a=None,
    weights_b=None,
    epsabs: float = EXPECTATION_EPSABS,
) -> DistanceEstimate:
    """
    max over the dictionary of |E h(A) − E h(B)|, B either Z_ν or a sample.
    E h(Z_ν) is computed by quadrature with absolute tolerance epsabs.

    Raises:
        ContractError: a member lacks lip1/lip2 <= 1
    """
    a = _as_samples(samples_a, "samples_a")
    wa = _as_weights(weights_a, a.size)
    if isinstance(target, CenteredGammaParams):
        b, wb = None, None
    else:
        b = _as_samples(target, "target samples")
        wb = _as_weights(weights_b, b.size)

    default = members is None
    members = d2_dictionary_members() if default else tuple(members)
    best, arg = 0.0, None
    for h in members:
        if h.lip1 is None or h.lip2 is None or h.lip1 > CERTIFIED_LIMIT or h.lip2 > CERTIFIED_LIMIT:
            raise ContractError(f"'{h.name}' is not certified with lip1, lip2 <= 1")
        ea = math.fsum(wa * h.evaluate_many(a))
        if b is None:
            if default:
                eb = _target_expectation(h.name, target.nu, epsabs)
            else:
                eb = target_expectation(h, target.nu, epsabs)
        else:
            eb = math.fsum(wb * h.evaluate_many(b))
        gap = abs(ea - eb)
        if arg is None or gap > best:
            best, arg = gap, h.name
    logger.debug("d2 dictionary: %.3g attained by %s", best, arg)
    return DistanceEstimate("d2_dictionary", best, "lower_bound", argmax=arg)


def smoothing_bound(d2_value: float) -> float:
    """d₁ <= (4/√π)·√d₂ whenever d₂ <= 1."""
    if not 0.0 <= d2_value <= 1.0:
        raise ContractError(f"the smoothing inequality needs 0 <= d2 <= 1, got {d2_value}")
    return SMOOTHING_CONSTANT * math.sqrt(d2_value)


# ---------------------------------------------------------------------
# Mollification
# ---------------------------------------------------------------------

def _hermite_rule(points: int = HERMITE_POINTS) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = hermite_e.hermegauss(points)
    return nodes, weights / _SQRT_2PI


def mollify(h: TestFunction, rho: float) -> TestFunction:
    """
    h_ρ(x) = E[h(x − N/ρ)], N standard normal (convolution with ρφ(ρ·)).

    Smooth h uses a 61-point Gauss-Hermite rule; h with kinks uses adaptive
    quadrature split where x − t/ρ hits a kink. Declared constants:
    ‖h_ρ′‖ <= ‖h′‖ and ‖h_ρ″‖ <= C₂·ρ·‖h′‖.
    """
    if not rho > 0:
        raise ContractError(f"rho must be > 0, got {rho}")
    lip1 = h.require_lip1()
    nodes, weights = _hermite_rule()
    shifts = nodes / rho

    if h.kinks:
        def value(x: float) -> float:
            return integrate(
                lambda t: h(x - t / rho) * math.exp(-0.5 * t * t) / _SQRT_2PI,
                -math.inf,
                math.inf,
                points=[rho * (x - k) for k in h.kinks],
                epsabs=1e-13,
            )
    else:
        def value(x: float) -> float:
            return math.fsum(weights * h.evaluate_many(x - shifts))

    if h.d1eval is not None and not h.kinks:
        def slope(x: float) -> float:
            return math.fsum(weights * np.array([h.d1eval(float(v)) for v in x - shifts]))
    else:
        def slope(x: float) -> float:
            return -rho * integrate(
                lambda t: t * h(x - t / rho) * math.exp(-0.5 * t * t) / _SQRT_2PI,
                -math.inf,
                math.inf,
                points=[rho * (x - k) for k in h.kinks],
                epsabs=1e-13,
            )

    return TestFunction(
        name=f"{h.name}_moll{rho:g}",
        eval=value,
        lip1=lip1,
        lip2=cm_constant(2) * rho * lip1,
        d1eval=slope,
    )


def cm_constant(m: int) -> float:
    """
    C_m = ∫ |He_{m−1}(x)| φ(x) dx (monic Hermite), so that
    ‖h_ρ^{(m)}‖ <= C_m ρ^{m−1} ‖h′‖.
    """
    if not isinstance(m, int) or not 1 <= m <= MAX_CM_ORDER:
        raise ContractError(f"m must be an integer in [1, {MAX_CM_ORDER}], got {m}")
    coeffs = [0.0] * (m - 1) + [1.0]
    roots = sorted(float(r) for r in hermite_e.hermeroots(coeffs)) if m > 1 else []
    edges = [-math.inf, *roots, math.inf]
    parts = [
        integrate(
            lambda x: abs(float(hermite_e.hermeval(x, coeffs))) * math.exp(-0.5 * x * x) / _SQRT_2PI,
            lo,
            hi,
            epsabs=1e-14,
        )
        for lo, hi in zip(edges[:-1], edges[1:])
    ]
    return math.fsum(parts)


def mollification_error(h: TestFunction, rho: float, xs) -> Tuple[float, float]:
    """
    (max |h − h_ρ| on xs, envelope ‖h′‖√(2/π)/ρ).
    """
    smooth = mollify(h, rho)
    xs = np.asarray(xs, dtype=float)
    gap = max(abs(h(float(x)) - smooth(float(x))) for x in xs)
    return gap, h.require_lip1() * math.sqrt(2.0 / math.pi) / rho
