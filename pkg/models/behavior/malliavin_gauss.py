"""
Gamma bounds for Wiener chaos functionals on ℝ^k.

Date: 2026-10-18

Architectural role:
- Evaluates F = Σ_q I_q(f_q) (q ∈ {1, 2}) on standard normal vectors,
  its Malliavin derivative and ⟨DF, −DL⁻¹F⟩, and estimates the d₁ bound
  max(1, 2/ν)·E|2(F+ν) − ⟨DF, −DL⁻¹F⟩| by Monte Carlo
- Used by controllers.chaos

Design notes:
- Everything is vectorized over a batch of sample rows x of shape (m, k):
  I_1(f) = x·f, I_2(f) = xᵀfx − tr f, D I_1(f) = f, D I_2(f) = 2fx.
- −DL⁻¹F weights the derivative of the q-th level by 1/q. For a pure
  second chaos ⟨DF, −DL⁻¹F⟩ = ½‖DF‖².
- The conditional expectation given F in the sharp form of the bound is
  replaced by the unconditional L¹ and L² majorants. A 64-bin estimator of
  the conditional form is reported as a diagnostic only.

This module does NOT:
- handle chaos orders above 2
- estimate the total-variation rate (its constant is not explicit)
"""

from __future__ import annotations

import logging
import math
from typing import List, Sequence

import numpy as np

from models.behavior.errors import ContractError
from models.behavior.gamma_dist import make_generator
from models.behavior.parallel import batch_stderr, exact_mean, run_mc
from models.domain.chaos import GaussChaosFunctional
from models.domain.gamma_params import CenteredGammaParams
from models.domain.test_function import TestFunction
from models.records.chaos import GaussBoundResult, IbpReport

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000
DIAGNOSTIC_BINS = 64
VARIANCE_RTOL = 1e-6


def _rows(F: GaussChaosFunctional, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != F.dim:
        raise ContractError(f"expected vectors of length {F.dim}, got shape {x.shape}")
    return x.reshape(-1, F.dim)


def _eval_rows(F: GaussChaosFunctional, X: np.ndarray) -> np.ndarray:
    out = np.zeros(X.shape[0])
    for q, f in F.levels:
        if q == 1:
            out += X @ f
        else:
            out += np.einsum("ni,ij,nj->n", X, f, X) - np.trace(f)
    return out


def _derivatives(F: GaussChaosFunctional, X: np.ndarray):
    """(DF, −DL⁻¹F), each of shape (m, k)."""
    df = np.zeros_like(X)
    dl = np.zeros_like(X)
    for q, f in F.levels:
        level = np.broadcast_to(f, X.shape) if q == 1 else 2.0 * X @ f
        df = df + level
        dl = dl + level / q
    return df, dl


def _inner_rows(F: GaussChaosFunctional, X: np.ndarray) -> np.ndarray:
    df, dl = _derivatives(F, X)
    return np.einsum("ni,ni->n", df, dl)


def eval_chaos(F: GaussChaosFunctional, x):
    """F at one point x ∈ ℝ^k (float) or at each row of an (m, k) array."""
    X = _rows(F, x)
    values = _eval_rows(F, X)
    return float(values[0]) if np.asarray(x).ndim == 1 else values


def malliavin_derivative(F: GaussChaosFunctional, x) -> np.ndarray:
    return _derivatives(F, _rows(F, x))[0].reshape(np.shape(x))


def malliavin_inner(F: GaussChaosFunctional, x):
    """⟨DF, −DL⁻¹F⟩ at x (float) or at each row of an (m, k) array."""
    X = _rows(F, x)
    values = _inner_rows(F, X)
    return float(values[0]) if np.asarray(x).ndim == 1 else values


def gamma_defect(F: GaussChaosFunctional, nu: float, x):
    """2(F+ν) − ⟨DF, −DL⁻¹F⟩ pointwise."""
    X = _rows(F, x)
    values = 2.0 * (_eval_rows(F, X) + nu) - _inner_rows(F, X)
    return float(values[0]) if np.asarray(x).ndim == 1 else values


def sample_gauss_chaos(F: GaussChaosFunctional, n_samples: int, seed: int, threads: int = 1) -> np.ndarray:
    def block(size: int, ss) -> np.ndarray:
        return _eval_rows(F, make_generator(ss).standard_normal((size, F.dim)))

    return run_mc(block, n_samples, seed, threads)


def _conditional_diagnostic(values: np.ndarray, defect: np.ndarray) -> float:
    order = np.argsort(values, kind="stable")
    total = values.size
    parts = [
        idx.size / total * abs(exact_mean(defect[idx]))
        for idx in np.array_split(order, DIAGNOSTIC_BINS)
        if idx.size
    ]
    return math.fsum(parts)


def gauss_gamma_bound(
    F: GaussChaosFunctional,
    nu: float,
    n_samples: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> GaussBoundResult:
    """
    Monte Carlo L¹ and L² majorants of the d₁ bound with standard errors.

    Raises:
        ContractError: fewer than 10⁴ samples, or ν <= 0
    """
    coef = CenteredGammaParams(nu).coefficient
    if n_samples < MIN_SAMPLES:
        raise ContractError(f"the chaos bound needs at least {MIN_SAMPLES} samples, got {n_samples}")
    variance = F.variance()
    if abs(variance - 2.0 * nu) > VARIANCE_RTOL * 2.0 * nu:
        logger.warning("E[F²] = %.6g differs from 2nu = %.6g", variance, 2.0 * nu)

    def block(size: int, ss) -> np.ndarray:
        X = make_generator(ss).standard_normal((size, F.dim))
        values = _eval_rows(F, X)
        return np.column_stack([values, 2.0 * (values + nu) - _inner_rows(F, X)])

    table = run_mc(block, n_samples, seed, threads)
    values, defect = table[:, 0], table[:, 1]
    abs_defect = np.abs(defect)
    sq_defect = defect * defect
    mean_abs = exact_mean(abs_defect)
    mean_sq = exact_mean(sq_defect)
    root = math.sqrt(mean_sq)
    stderr_sq = batch_stderr(sq_defect)
    mean_F = exact_mean(values)

    l1 = coef * mean_abs
    logger.debug("gauss bound: l1 %.6g, l2 %.6g over %d samples", l1, coef * root, n_samples)
    return GaussBoundResult(
        nu=nu,
        l1_term=l1,
        l2_term=coef * root,
        bound=l1,
        stderr=coef * batch_stderr(abs_defect),
        stderr_l2=coef * stderr_sq / (2.0 * root) if root > 0 else 0.0,
        conditional_diagnostic=coef * _conditional_diagnostic(values, defect),
        mean_F=mean_F,
        var_F=exact_mean((values - mean_F) ** 2),
        n_samples=n_samples,
        seed=seed,
        pure=F.is_pure,
    )


def sar_condition_trend(
    sequence: Sequence[GaussChaosFunctional],
    nu: float,
    n_samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
) -> List[float]:
    """L¹ majorant of E|E{2(F_n+ν) − ⟨DF_n, −DL⁻¹F_n⟩ | F_n}| for each F_n (same seed)."""
    return [gauss_gamma_bound(F, nu, n_samples, seed, threads).l1_term for F in sequence]


def gauss_ibp_check(
    F: GaussChaosFunctional,
    g: TestFunction,
    n_samples: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> IbpReport:
    """E[F g(F)] against E[g′(F)⟨DF, −DL⁻¹F⟩]."""
    if n_samples < MIN_SAMPLES:
        raise ContractError(f"the integration-by-parts check needs at least {MIN_SAMPLES} samples")

    def block(size: int, ss) -> np.ndarray:
        X = make_generator(ss).standard_normal((size, F.dim))
        values = _eval_rows(F, X)
        lhs = values * g.evaluate_many(values)
        rhs = g.derivative_many(values) * _inner_rows(F, X)
        return np.column_stack([lhs, rhs])

    table = run_mc(block, n_samples, seed, threads)
    return IbpReport(
        function=g.name,
        lhs=exact_mean(table[:, 0]),
        rhs=exact_mean(table[:, 1]),
        stderr=batch_stderr(table[:, 0] - table[:, 1]),
        n_samples=n_samples,
        seed=seed,
        model="gauss",
    )
