"""
Gamma Stein equation solver and bound certifier.

Date: 2026-10-18

Solves
    x f′(x) + (r − λx) f(x) = h(x) − E[h(X_{r,λ})]            (Gamma target)
    2(x + ν) f′(x) − x f(x) = h(x) − E[h(Z_ν)]                 (centered target)
on the whole real line, and compares numerical sup/Lipschitz estimates of
the solutions with the known smoothness bounds.

Architectural role:
- Behavior layer; consumed by controllers.stein and by the de Jong and
  chaos bounds (plugin_bound)

Design notes:
- Everything is solved at unit rate and rescaled: if g solves the λ = 1
  equation for h₁(y) = h(y/λ), then f(x) = g(λx). The centered solution is
  f(x) = ½ g((x+ν)/2) with r = ν/2 and h₁(y) = h(2y − ν).
- At unit rate, for y ≤ r + 1 (including every y < 0) the bounded solution
  is the head integral
      g(y) = ∫₀¹ (h₁(ys) − c) s^{r−1} e^{y(1−s)} ds,
  which on the negative axis is the weight q_l(t) = −(−t)^{r−1}e^{−t}
  representation after t = ys. For y > r + 1 the tail integral
      g(y) = −(1/y) ∫₀^∞ (h₁(y+u) − c)(1 + u/y)^{r−1} e^{−u} du
  is used. Both integrands stay O(1) on their branch.
- The s^{r−1} end-point singularity is handed to QUADPACK as an algebraic
  weight, so r < 1 needs no special casing.
- |y| ≤ 1e-6 uses g(0) = (h₁(0) − c)/r and
  g′(0) = h₁′(0)/(r+1) + (h₁(0) − c)/(r(r+1)) (first-order Taylor for g).
- Away from 0, f′ is defined through the equation itself.

Invariants:
- SteinSolution objects are immutable; evaluation is thread-safe
  (the per-solution cache is an lru_cache).
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from catalog.test_functions import DICTIONARY_VERSION, certification_dictionary, hinge
from models.behavior.errors import ContractError
from models.behavior.parallel import chunk, ordered_map
from models.behavior.quadrature import integrate
from models.domain.gamma_params import CenteredGammaParams, GammaParams
from models.domain.test_function import TestFunction
from models.records.dejong import ExchangeablePairStats
from models.records.stein import BoundReport, ExplosionWitness, GridSpec, SteinSolution

logger = logging.getLogger(__name__)

Target = Union[GammaParams, CenteredGammaParams]

__all__ = [
    "DICTIONARY_VERSION",
    "certification_dictionary",
    "expected_h",
    "solve_stein_gamma",
    "solve_stein_centered",
    "stein_derivative",
    "stein_residual",
    "certify_bounds",
    "explosion_witness",
    "higher_order_bound",
    "plugin_bound",
    "plugin_bound_general",
]

ZERO_BAND = 1e-6
EXPECTATION_EPSABS = 1e-12
SOLUTION_EPSABS = 1e-14
SOLUTION_EPSREL = 1e-13
GROWTH_CONSTANT = 1e6
GROWTH_POINTS = (1.0, 10.0, 100.0, 1000.0)
LIPSCHITZ_STEP = 1e-4
REL_SLACK = 1e-6
ABS_SLACK = 1e-7


def within_slack(measured: float, theorem: float) -> bool:
    """Certifier tolerance: measured ≤ theorem·(1 + 1e-6) + 1e-7."""
    return measured <= theorem * (1.0 + REL_SLACK) + ABS_SLACK


# ---------------------------------------------------------------------------
# Expectations
# ---------------------------------------------------------------------------

def check_growth(h: TestFunction) -> None:
    """
    Enforce |h(x)| ≤ C(1 + |x|⁸) at ±1, ±10, ±100, ±1000.

    Raises:
        ContractError when h is non-finite or grows too fast.
    """
    for x in GROWTH_POINTS:
        for point in (x, -x):
            value = h(point)
            if not math.isfinite(value) or abs(value) > GROWTH_CONSTANT * (1.0 + abs(point) ** 8):
                raise ContractError(f"test function '{h.name}' is not polynomially bounded at x={point}")


def expected_h(h: TestFunction, p: GammaParams, epsabs: float = EXPECTATION_EPSABS) -> float:
    """
    E[h(X_{r,λ})] by adaptive quadrature against the Gamma density.

    The density's u^{r−1} factor near 0 is integrated as an algebraic
    weight; the rest of the half-line is split at the kinks of h.

    Raises:
        ContractError if h is not polynomially bounded.
        AccuracyError if quadrature fails.
    """
    check_growth(h)
    r, lam = p.r, p.lam
    log_gamma = float(gammaln(r))
    kinks_u = sorted(lam * k for k in h.kinks if k > 0)
    split = min([1.0, *kinks_u])

    head = integrate(
        lambda u: h(u / lam) * math.exp(-u - log_gamma),
        0.0,
        split,
        weight="alg",
        wvar=(r - 1.0, 0.0),
        epsabs=epsabs,
    )
    tail = integrate(
        lambda u: h(u / lam) * math.exp((r - 1.0) * math.log(u) - u - log_gamma),
        split,
        math.inf,
        points=[k for k in kinks_u if k > split],
        epsabs=epsabs,
    )
    return math.fsum([head, tail])


# ---------------------------------------------------------------------------
# Unit-rate solver
# ---------------------------------------------------------------------------

class _UnitRateSolution:
    """
    Bounded solution g of y g′ + (r − y) g = h₁ − E h₁(X_{r,1}).

    This class does NOT:
    - know about λ or ν (callers rescale)
    """

    def __init__(self, h1: TestFunction, r: float, c: float):
        self.h1 = h1
        self.r = r
        self.c = c
        self.g0 = (h1(0.0) - c) / r
        self.dg0 = h1.derivative(0.0) / (r + 1.0) + (h1(0.0) - c) / (r * (r + 1.0))
        self.g = lru_cache(maxsize=1 << 16)(self._g)

    def _g(self, y: float) -> float:
        if abs(y) <= ZERO_BAND:
            return self.g0 + self.dg0 * y
        if y <= self.r + 1.0:
            return self._head(y)
        return self._tail(y)

    def _head(self, y: float) -> float:
        h1, r, c = self.h1, self.r, self.c
        breaks = sorted(k / y for k in h1.kinks if 0.0 < k / y < 1.0)
        edges = [0.0, *breaks, 1.0]
        parts = [
            integrate(
                lambda s: (h1(y * s) - c) * math.exp(y * (1.0 - s)),
                edges[0],
                edges[1],
                weight="alg",
                wvar=(r - 1.0, 0.0),
                epsabs=SOLUTION_EPSABS,
                epsrel=SOLUTION_EPSREL,
            )
        ]
        for lo, hi in zip(edges[1:-1], edges[2:]):
            parts.append(
                integrate(
                    lambda s: (h1(y * s) - c) * s ** (r - 1.0) * math.exp(y * (1.0 - s)),
                    lo,
                    hi,
                    epsabs=SOLUTION_EPSABS,
                    epsrel=SOLUTION_EPSREL,
                )
            )
        return math.fsum(parts)

    def _tail(self, y: float) -> float:
        h1, r, c = self.h1, self.r, self.c
        value = integrate(
            lambda u: (h1(y + u) - c) * (1.0 + u / y) ** (r - 1.0) * math.exp(-u),
            0.0,
            math.inf,
            points=[k - y for k in h1.kinks if k > y],
            epsabs=SOLUTION_EPSABS,
            epsrel=SOLUTION_EPSREL,
        )
        return -value / y

    def gprime(self, y: float) -> float:
        if abs(y) <= ZERO_BAND:
            return self.dg0
        return (self.h1(y) - self.c - (self.r - y) * self.g(y)) / y


def solve_stein_gamma(h: TestFunction, p: GammaParams, epsabs: float = EXPECTATION_EPSABS) -> SteinSolution:
    """
    Bounded solution of x f′ + (r − λx) f = h − E h(X_{r,λ}) on ℝ.

    Raises:
        ContractError if h has no declared lip1.
        AccuracyError if a quadrature fails (at construction or later
        evaluation).
    """
    h.require_lip1()
    lam = p.lam
    h1 = h.composed_affine(1.0 / lam, 0.0)
    c = expected_h(h1, p.unit_rate(), epsabs)
    unit = _UnitRateSolution(h1, p.r, c)
    logger.debug("gamma stein solution for %s at r=%g lambda=%g, E[h]=%.15g", h.name, p.r, lam, c)

    def f(x: float) -> float:
        return unit.g(lam * float(x))

    def fprime(x: float) -> float:
        return lam * unit.gprime(lam * float(x))

    return SteinSolution(f=f, fprime=fprime, params=p, expected_h=c, h=h)


def solve_stein_centered(h: TestFunction, nu: float, epsabs: float = EXPECTATION_EPSABS) -> SteinSolution:
    """
    Bounded solution of 2(x + ν) f′ − x f = h − E h(Z_ν) on ℝ,
    via f(x) = ½ g((x+ν)/2).
    """
    target = CenteredGammaParams(nu)
    h.require_lip1()
    h1 = h.composed_affine(2.0, -nu)
    base = target.underlying
    c = expected_h(h1, base, epsabs)
    unit = _UnitRateSolution(h1, base.r, c)
    logger.debug("centered stein solution for %s at nu=%g, E[h]=%.15g", h.name, nu, c)

    def f(x: float) -> float:
        return 0.5 * unit.g((float(x) + nu) / 2.0)

    def fprime(x: float) -> float:
        return 0.25 * unit.gprime((float(x) + nu) / 2.0)

    return SteinSolution(f=f, fprime=fprime, params=target, expected_h=c, h=h)


def solve(h: TestFunction, target: Target, epsabs: float = EXPECTATION_EPSABS) -> SteinSolution:
    """Dispatch on the target type; epsabs is the tolerance for E[h]."""
    if isinstance(target, CenteredGammaParams):
        return solve_stein_centered(h, target.nu, epsabs)
    return solve_stein_gamma(h, target, epsabs)


def stein_derivative(sol: SteinSolution, x: float) -> float:
    """f′(x); at non-differentiability points the value the equation assigns."""
    return sol.fprime(x)


def stein_residual(sol: SteinSolution, xs: Sequence[float]) -> np.ndarray:
    """Residual of the defining equation at each grid point."""
    return np.array([sol.residual(float(x)) for x in xs])


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

def grid_points(grid: GridSpec) -> np.ndarray:
    """Grid lo:hi:step with 0 always included."""
    n = int(math.floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1
    xs = grid.lo + grid.step * np.arange(n)
    if grid.lo < 0.0 < grid.hi:
        xs = np.append(xs, 0.0)
    return np.unique(np.round(xs, 12))


def theorem_values(target: Target, lip1: float, lip2: Optional[float]) -> Dict[str, float]:
    """
    Right-hand sides of the first- and (if lip2 is known) second-order bounds.

    Keys: sup_f, lip_f, lip_f_pos, lip_f_neg, lip_fprime.
    For the centered target "pos"/"neg" split at x = −ν.
    """
    if isinstance(target, CenteredGammaParams):
        coef = target.coefficient
        out = {
            "sup_f": lip1,
            "lip_f": coef * lip1,
            "lip_f_pos": lip1,
            "lip_f_neg": (2.0 / target.nu) * lip1,
        }
        if lip2 is not None:
            out["lip_fprime"] = coef * lip1 + lip2
        return out
    coef = max(1.0, 1.0 / target.r)
    out = {
        "sup_f": lip1 / target.lam,
        "lip_f": 2.0 * coef * lip1,
        "lip_f_pos": 2.0 * lip1,
        "lip_f_neg": (2.0 / target.r) * lip1,
    }
    if lip2 is not None:
        out["lip_fprime"] = 4.0 * target.lam * coef * lip1 + 2.0 * lip2
    return out


def _side_boundary(target: Target) -> float:
    return -target.nu if isinstance(target, CenteredGammaParams) else 0.0


def _sample(sol: SteinSolution, xs: np.ndarray, delta: float) -> np.ndarray:
    # columns: f(x), f(x−δ), f(x+δ), f′(x), f′(x−δ), f′(x+δ)
    rows = []
    for x in xs:
        x = float(x)
        rows.append(
            (
                sol.f(x), sol.f(x - delta), sol.f(x + delta),
                sol.fprime(x), sol.fprime(x - delta), sol.fprime(x + delta),
            )
        )
    return np.array(rows, dtype=float).reshape(-1, 6)


def _lipschitz(xs: np.ndarray, values: np.ndarray, minus: np.ndarray, plus: np.ndarray, delta: float, mask_adj, mask_sym) -> float:
    adjacent = np.abs(np.diff(values) / np.diff(xs))[mask_adj]
    symmetric = (np.abs(plus - minus) / (2.0 * delta))[mask_sym]
    candidates = [0.0]
    if adjacent.size:
        candidates.append(float(adjacent.max()))
    if symmetric.size:
        candidates.append(float(symmetric.max()))
    return max(candidates)


def certify_bounds(
    h: TestFunction,
    target: Target,
    grid: GridSpec = GridSpec(),
    threads: int = 1,
    second_order: bool = True,
    delta: float = LIPSCHITZ_STEP,
    epsabs: float = EXPECTATION_EPSABS,
) -> BoundReport:
    """
    Estimate sup|f|, Lip(f) (overall and per side) and Lip(f′) on a grid
    and compare them with the bound theorems.

    Lipschitz estimates are the max of adjacent-grid quotients and
    symmetric quotients at spacing delta.

    Raises:
        ContractError if lip1 (or lip2 when second_order) is undeclared.
    """
    lip1 = h.require_lip1()
    lip2 = h.lip2 if second_order else None
    skipped: List[str] = []
    if second_order and lip2 is None:
        skipped.append("lip_fprime")

    sol = solve(h, target, epsabs)
    xs = grid_points(grid)
    parts = chunk(list(xs), max(threads, 1) * 4)
    samples = np.vstack(ordered_map(lambda part: _sample(sol, np.asarray(part), delta), parts, threads))

    f0, fm, fp, d0, dm, dp = samples.T
    b = _side_boundary(target)
    everywhere_adj = np.ones(xs.size - 1, dtype=bool)
    everywhere_sym = np.ones(xs.size, dtype=bool)
    pos_adj = (xs[:-1] >= b)
    neg_adj = (xs[1:] <= b)
    pos_sym = (xs - delta >= b)
    neg_sym = (xs + delta <= b)

    measured = {
        "sup_f": float(np.max(np.abs(f0))),
        "lip_f": _lipschitz(xs, f0, fm, fp, delta, everywhere_adj, everywhere_sym),
        "lip_f_pos": _lipschitz(xs, f0, fm, fp, delta, pos_adj, pos_sym),
        "lip_f_neg": _lipschitz(xs, f0, fm, fp, delta, neg_adj, neg_sym),
    }
    if lip2 is not None:
        measured["lip_fprime"] = _lipschitz(xs, d0, dm, dp, delta, everywhere_adj, everywhere_sym)

    theorem = theorem_values(target, lip1, lip2)
    margin = {k: theorem[k] - measured[k] for k in theorem}
    violations = tuple(k for k in theorem if not within_slack(measured[k], theorem[k]))
    if violations:
        logger.warning("bound violation for %s at %s: %s", h.name, target.to_dict(), ", ".join(violations))
    return BoundReport(
        h=h.name,
        params=target.to_dict(),
        measured=measured,
        theorem=theorem,
        margin=margin,
        passed=not violations,
        violations=violations,
        skipped=tuple(skipped),
    )


# ---------------------------------------------------------------------------
# Explosion of the negative-axis derivative for small r
# ---------------------------------------------------------------------------

def explosion_witness(r: float, x: float = -0.5) -> ExplosionWitness:
    """
    |f′_h(x)| for h = min(x, 0), λ = 1, from the closed form
        f′_h(x) = (2x − r) ∫ₓ⁰ Q_l(t) dt / (−x² q_l(x)),
    with Q_l(t) = ∫ₜ⁰ (−s)^{r−1} e^{−s} ds.

    With y = −x the double integral is ∫₀^y (y − u) u^{r−1} e^{u} du and
    −x² q_l(x) = y^{r+1} e^{y}. f′ of the bounded numerical solution is
    reported alongside; it is a different solution on x < 0.
    """
    p = GammaParams(r, 1.0)
    if x >= 0:
        raise ContractError(f"the witness lives on the negative axis, got x={x}")
    y = -x
    double_integral = integrate(
        math.exp, 0.0, y, weight="alg", wvar=(r - 1.0, 1.0), epsabs=SOLUTION_EPSABS, epsrel=SOLUTION_EPSREL
    )
    closed = (r + 2.0 * y) * double_integral / (y ** (r + 1.0) * math.exp(y))
    sol = solve_stein_gamma(hinge(), p)
    return ExplosionWitness(
        r=r,
        x=x,
        closed_form=abs(closed),
        bounded_solution_derivative=abs(sol.fprime(x)),
        lower_bound=math.exp(-y) * (r + 2.0 * y) / (r * (r + 1.0)),
    )


# ---------------------------------------------------------------------------
# Closed-form bounds
# ---------------------------------------------------------------------------

def higher_order_bound(k: int, p: GammaParams, lips: Sequence[float]) -> float:
    """
    Bound on ‖f^{(k)}‖ from ‖h′‖, …, ‖h^{(k)}‖ (lips[0] = ‖h′‖):
        2^k λ^{k−1} (k−1)! max(1, 1/r) ‖h′‖
        + Σ_{j=0}^{k−2} 2^{j+1} λ^j (k−1)!/(k−j−1)! ‖h^{(k−j)}‖
    """
    if not isinstance(k, int) or k < 1:
        raise ContractError(f"k must be an integer >= 1, got {k}")
    if len(lips) != k:
        raise ContractError(f"need {k} derivative norms, got {len(lips)}")
    lam = p.lam
    fact = math.factorial(k - 1)
    terms = [2.0 ** k * lam ** (k - 1) * fact * max(1.0, 1.0 / p.r) * lips[0]]
    for j in range(k - 1):
        terms.append(2.0 ** (j + 1) * lam ** j * fact / math.factorial(k - j - 1) * lips[k - j - 1])
    return math.fsum(terms)


def plugin_bound(stats: ExchangeablePairStats, nu: float, lip1: float, lip2: float) -> float:
    """
    |E h(W) − E h(Z_ν)| ≤ max(1,2/ν)·lip1·√Var(S)
                          + (max(1,2/ν)·lip1 + lip2)/(6λ)·E|W′−W|³
    for an exchangeable pair with R = 0 and E[W²] = 2ν.

    Raises:
        ContractError if stats lack Var(S) or E|W′−W|³, or R ≠ 0.
    """
    if stats.var_S is None or stats.e_abs_dW3 is None:
        raise ContractError("pair statistics need var_S and e_abs_dW3 for the plug-in bound")
    if not stats.r_zero:
        raise ContractError("the plug-in bound needs R = 0; use plugin_bound_general")
    coef = CenteredGammaParams(nu).coefficient
    return (
        coef * lip1 * math.sqrt(max(stats.var_S, 0.0))
        + (coef * lip1 + lip2) / (6.0 * stats.lambda_pair) * stats.e_abs_dW3
    )


def plugin_bound_general(
    e_abs_S: float,
    e_abs_R: float,
    e_abs_dW3: float,
    lambda_pair: float,
    nu: float,
    lip1: float,
    lip2: float,
) -> float:
    """
    General-remainder form:
        lip1·(max(1,2/ν)·E|S| + E|R|) + (max(1,2/ν)·lip1 + lip2)/(6λ)·E|W′−W|³
    """
    if lambda_pair <= 0:
        raise ContractError(f"lambda must be > 0, got {lambda_pair}")
    coef = CenteredGammaParams(nu).coefficient
    return lip1 * (coef * e_abs_S + e_abs_R) + (coef * lip1 + lip2) / (6.0 * lambda_pair) * e_abs_dW3
