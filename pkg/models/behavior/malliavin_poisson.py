"""
Gamma bounds for Poisson chaos functionals on a finite cell grid.

Date: 2026-10-18

Architectural role:
- Samples the Poisson measure (independent counts η_i ~ Poisson(μ_i)),
  evaluates multiple integrals against η̂ = η − μ, the add-one-point
  derivative and ⟨DF, −DL⁻¹F⟩, and estimates the d₂ bound
- Used by controllers.chaos

Design notes:
- Order-2 kernels vanish on the diagonal, so
  I_2(f) = Σ_{i≠j} f_ij η̂_i η̂_j and adding a point at z gives
  D_z I_2(f) = 2Σ_j f_zj η̂_j exactly.
- Two derivative paths: `add_point_derivative` recomputes F on the
  shifted counts and works for any functional handle; `chaos_derivative`
  uses the kernel formula. Tests hold them against each other.
- −D_zL⁻¹F weights level q by 1/q, so for a pure chaos of order p,
  ⟨DF, −DL⁻¹F⟩ = p⁻¹‖DF‖² and the cubic term is p⁻¹Σ_z μ_z|D_zF|³.
- Per-sample sums over cells are computed exactly; only the outer
  expectation is Monte Carlo.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Optional, Tuple, Union

import numpy as np

from models.behavior.errors import ContractError
from models.behavior.gamma_dist import make_generator
from models.behavior.parallel import batch_stderr, exact_mean, run_mc
from models.domain.chaos import PoissonChaosFunctional, PoissonSpace
from models.domain.gamma_params import CenteredGammaParams
from models.domain.test_function import TestFunction
from models.records.chaos import IbpReport, PoissonBoundResult

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1_000

Functional = Union[PoissonChaosFunctional, Callable[[np.ndarray], np.ndarray]]


def cubic_coefficient(nu: float) -> float:
    """max(1, 1/ν + 1/2)."""
    CenteredGammaParams(nu)
    return max(1.0, 1.0 / nu + 0.5)


def sample_counts(space: PoissonSpace, seed) -> np.ndarray:
    """One draw of the m cell counts."""
    return make_generator(seed).poisson(space.mu_array())


def sample_count_matrix(space: PoissonSpace, n_samples: int, seed) -> np.ndarray:
    """n_samples independent draws, one per row."""
    return make_generator(seed).poisson(space.mu_array(), size=(n_samples, space.cells))


def _rows(space: PoissonSpace, counts) -> np.ndarray:
    counts = np.asarray(counts, dtype=float)
    if counts.shape[-1] != space.cells:
        raise ContractError(f"expected {space.cells} cell counts, got shape {counts.shape}")
    return counts.reshape(-1, space.cells)


def _eval_rows(F: PoissonChaosFunctional, counts: np.ndarray) -> np.ndarray:
    hat = counts - F.space.mu_array()
    out = np.zeros(counts.shape[0])
    for q, f in F.levels:
        if q == 1:
            out += hat @ f
        else:
            out += np.einsum("ni,ij,nj->n", hat, f, hat)
    return out


def eval_poisson_chaos(F: PoissonChaosFunctional, counts):
    """F at one count vector (float) or at each row of an (n, m) array."""
    values = _eval_rows(F, _rows(F.space, counts))
    return float(values[0]) if np.asarray(counts).ndim == 1 else values


def _evaluator(F: Functional) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(F, PoissonChaosFunctional):
        return lambda rows: _eval_rows(F, rows)
    return lambda rows: np.asarray(F(rows), dtype=float).reshape(-1)


def add_point_derivative(F: Functional, counts, z: int, cells: Optional[int] = None):
    """D_zF = F(η + δ_z) − F(η), for a chaos functional or any handle on count rows."""
    rows = np.asarray(counts, dtype=float)
    m = rows.shape[-1] if cells is None else cells
    if not 0 <= z < m:
        raise ContractError(f"cell index {z} outside 0..{m - 1}")
    rows = rows.reshape(-1, m)
    shifted = rows.copy()
    shifted[:, z] += 1.0
    fn = _evaluator(F)
    out = fn(shifted) - fn(rows)
    return float(out[0]) if np.asarray(counts).ndim == 1 else out


def _derivatives(F: PoissonChaosFunctional, counts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(D_zF, −D_zL⁻¹F) for every cell, each of shape (n, m)."""
    hat = counts - F.space.mu_array()
    df = np.zeros_like(hat)
    dl = np.zeros_like(hat)
    for q, f in F.levels:
        if q == 1:
            df = df + f
            dl = dl + f
        else:
            half = hat @ f
            df = df + 2.0 * half
            dl = dl + half
    return df, dl


def chaos_derivative(F: PoissonChaosFunctional, counts) -> np.ndarray:
    """D_zF for all z by the kernel formula; shape matches counts."""
    rows = _rows(F.space, counts)
    return _derivatives(F, rows)[0].reshape(np.shape(counts))


def poisson_inner(F: PoissonChaosFunctional, counts):
    """⟨DF, −DL⁻¹F⟩ = Σ_z μ_z D_zF·(−D_zL⁻¹F)."""
    rows = _rows(F.space, counts)
    df, dl = _derivatives(F, rows)
    values = (df * dl) @ F.space.mu_array()
    return float(values[0]) if np.asarray(counts).ndim == 1 else values


def pure_inner(F: PoissonChaosFunctional, counts):
    """p⁻¹‖DF‖² for a pure chaos of order p."""
    if not F.is_pure:
        raise ContractError("p⁻¹‖DF‖² is only the inner product for a pure chaos")
    rows = _rows(F.space, counts)
    df, _ = _derivatives(F, rows)
    values = (df * df) @ F.space.mu_array() / F.order
    return float(values[0]) if np.asarray(counts).ndim == 1 else values


def _bound_columns(F: PoissonChaosFunctional, nu: float, counts: np.ndarray) -> np.ndarray:
    mu = F.space.mu_array()
    values = _eval_rows(F, counts)
    df, dl = _derivatives(F, counts)
    if F.is_pure:
        inner = (df * df) @ mu / F.order
        cubic = np.abs(df) ** 3 @ mu / F.order
    else:
        inner = (df * dl) @ mu
        cubic = (df * df * np.abs(dl)) @ mu
    return np.column_stack([values, 2.0 * (values + nu) - inner, cubic])


def poisson_gamma_bound(
    F: PoissonChaosFunctional,
    nu: float,
    n_samples: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> PoissonBoundResult:
    """
    Monte Carlo estimate of both summands of the d₂ bound and of the L²
    variant of the first summand, with standard errors.

    Raises:
        ContractError: fewer than 1000 samples, or ν <= 0
    """
    coef = CenteredGammaParams(nu).coefficient
    cubic_coef = cubic_coefficient(nu)
    if n_samples < MIN_SAMPLES:
        raise ContractError(f"the Poisson bound needs at least {MIN_SAMPLES} samples, got {n_samples}")

    def block(size: int, ss) -> np.ndarray:
        return _bound_columns(F, nu, sample_count_matrix(F.space, size, ss).astype(float))

    table = run_mc(block, n_samples, seed, threads)
    values, defect, cubic = table[:, 0], table[:, 1], table[:, 2]
    abs_defect = np.abs(defect)
    sq_defect = defect * defect
    root = math.sqrt(exact_mean(sq_defect))
    first = coef * exact_mean(abs_defect)
    first_l2 = coef * root
    cubic_integral = exact_mean(cubic)
    mean_F = exact_mean(values)
    stderr = {
        "first_term": coef * batch_stderr(abs_defect),
        "first_term_l2": coef * batch_stderr(sq_defect) / (2.0 * root) if root > 0 else 0.0,
        "cubic_integral": batch_stderr(cubic),
        "mean_F": batch_stderr(values),
    }
    logger.debug("poisson bound: first %.6g, cubic %.6g over %d samples", first, cubic_integral, n_samples)
    return PoissonBoundResult(
        nu=nu,
        first_term=first,
        first_term_l2=first_l2,
        cubic_integral=cubic_integral,
        cubic_term=cubic_coef * cubic_integral,
        bound=first + cubic_coef * cubic_integral,
        bound_l2=first_l2 + cubic_coef * cubic_integral,
        stderr=stderr,
        mean_F=mean_F,
        var_F=exact_mean((values - mean_F) ** 2),
        n_samples=n_samples,
        seed=seed,
        form="pure" if F.is_pure else "general",
    )


def sample_poisson_chaos(F: PoissonChaosFunctional, n_samples: int, seed: int, threads: int = 1) -> np.ndarray:
    def block(size: int, ss) -> np.ndarray:
        return _eval_rows(F, sample_count_matrix(F.space, size, ss).astype(float))

    return run_mc(block, n_samples, seed, threads)


def ibp_check(
    F: PoissonChaosFunctional,
    g: TestFunction,
    n_samples: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> IbpReport:
    """
    E[F g(F)] against E[⟨Dg(F), −DL⁻¹F⟩], with D_z g(F) = g(F + D_zF) − g(F).
    """
    g.require_lip1()
    if n_samples < MIN_SAMPLES:
        raise ContractError(f"the integration-by-parts check needs at least {MIN_SAMPLES} samples")
    mu = F.space.mu_array()

    def block(size: int, ss) -> np.ndarray:
        counts = sample_count_matrix(F.space, size, ss).astype(float)
        values = _eval_rows(F, counts)
        df, dl = _derivatives(F, counts)
        gv = g.evaluate_many(values)
        dg = g.evaluate_many(values[:, None] + df) - gv[:, None]
        return np.column_stack([values * gv, (dg * dl) @ mu])

    table = run_mc(block, n_samples, seed, threads)
    return IbpReport(
        function=g.name,
        lhs=exact_mean(table[:, 0]),
        rhs=exact_mean(table[:, 1]),
        stderr=batch_stderr(table[:, 0] - table[:, 1]),
        n_samples=n_samples,
        seed=seed,
        model="poisson",
    )
