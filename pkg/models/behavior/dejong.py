"""
Exchangeable pairs for degenerate U-statistics and the non-central de Jong
bound.

Date: 2026-10-18

Architectural role:
- Builds the pair (W, W′) where W′ re-draws one uniformly chosen coordinate
  of X, and evaluates every quantity of the Gamma plug-in bound exactly on
  small product spaces (Monte Carlo beyond the enumeration cap)
- Used by controllers.dejong and by the convergence demo

Design notes:
- Only coordinate α changes between W and W′, so conditional moments of
  ΔW = W′ − W given X are computed from n·max|support| shifted copies of
  the value tensor (np.take along axis j), never from the |Ω|² joint table.
- For W degenerate of order d, E[ΔW | X] = −(d/n)W: the regression
  holds with λ = d/n and R = 0.
- S = (1/2λ)E[ΔW² | X] − 2(W + ν). Its Hoeffding decomposition uses the
  components U_M of W²: S = S₁ + ½S₂ with
  S₁ = Σ_{|M|∉{0,d}} (1 − |M|/2d) U_M and S₂ = Σ_{|J|=d} (U_J − 4W_J).
- The C_d·D·ρ² surrogate of the bound stands for n·E[ΔW⁴]/16. The default
  "exact" policy replaces it with the fourth-moment sum
  T = Σ_j E[(W − E[W | X_{−j}])⁴], which majorizes n·E[ΔW⁴]/16, so no
  constant is needed. "require" insists on a user C_d.
- Monte Carlo mode draws X only; every conditional expectation given X is
  still computed exactly per sample. Standard errors come from 32 batch
  means over the sample stream.

Invariants:
- exact mode: E[S] = 0 and E[ΔW²] = 4dν/n up to rounding
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from catalog.kernel_families import build_ustat
from models.behavior.distances import (
    d2_dictionary,
    wasserstein1,
    wasserstein1_to_target,
)
from models.behavior.errors import ConfigurationError, ContractError, ResourceError
from models.behavior.gamma_dist import (
    centered_gamma_cdf,
    make_generator,
    moment_discrepancy,
    sample_centered_gamma,
)
from models.behavior.hoeffding import (
    DEFAULT_ENUM_CAP,
    component_stats,
    decompose_tensor,
    kernel_tensor,
    popcount,
    sigma_quadruple_sum,
    tensor_fourth_moment_sum,
    verify_degeneracy,
    weighted_mean,
)
from models.behavior.parallel import batch_stderr, exact_mean, ordered_map, run_mc
from models.behavior.stein_core import EXPECTATION_EPSABS, plugin_bound
from models.domain.gamma_params import CenteredGammaParams
from models.domain.product_space import DiscreteProductSpace, UStatKernel
from models.records.dejong import (
    ChainInequalityReport,
    ConvergenceRow,
    DeJongBound,
    ExchangeabilityReport,
    ExchangeablePairStats,
    MomentIdentityReport,
    SDecomposition,
)
from models.records.hoeffding import HoeffdingDecomposition

logger = logging.getLogger(__name__)

MIN_MC_SAMPLES = 1_000
DEFAULT_MC_SAMPLES = 200_000
NU_RTOL = 1e-6
REGRESSION_TOL = 1e-11
EXCHANGE_DIGITS = 9

POLICIES = ("exact", "require")


# ---------------------------------------------------------------------
# Enumeration tables
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class _PairTables:
    """Value tensor, its law, and E[ΔW^k | X] tables for k = 1..4 (|ΔW|³ for k=3)."""

    W: np.ndarray
    P: np.ndarray
    probs: Tuple[np.ndarray, ...]
    cond1: np.ndarray
    cond2: np.ndarray
    cond3: np.ndarray
    cond4: np.ndarray
    lam: float

    def mean(self, table: np.ndarray) -> float:
        return math.fsum((self.P * table).ravel())


def _joint_law(probs: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.multiply.outer, probs)


def _pair_tables(W: np.ndarray, probs: Sequence[np.ndarray], d: int, threads: int = 1) -> _PairTables:
    n = W.ndim

    def one_coordinate(j: int) -> Tuple[np.ndarray, ...]:
        acc = [np.zeros(W.shape) for _ in range(4)]
        for y, py in enumerate(probs[j]):
            delta = np.expand_dims(np.take(W, y, axis=j), j) - W
            w = float(py) / n
            sq = delta * delta
            acc[0] += w * delta
            acc[1] += w * sq
            acc[2] += w * np.abs(delta) * sq
            acc[3] += w * sq * sq
        return tuple(acc)

    parts = ordered_map(one_coordinate, range(n), threads)
    sums = [reduce(np.add, [p[i] for p in parts]) for i in range(4)]
    return _PairTables(
        W=W,
        P=_joint_law(probs),
        probs=tuple(probs),
        cond1=sums[0],
        cond2=sums[1],
        cond3=sums[2],
        cond4=sums[3],
        lam=d / n,
    )


def _degenerate_decomposition(
    W: np.ndarray, probs: Sequence[np.ndarray], d: int, threads: int, cap: int
) -> HoeffdingDecomposition:
    """Components up to order d, after checking W is degenerate of order d."""
    dec = decompose_tensor(W, probs, max_order=d, threads=threads, cap=cap)
    check = verify_degeneracy(dec, d)
    if not check:
        raise ContractError(
            f"W is not degenerate of order {d}: offending {list(check.offending)}, "
            f"unresolved variance {check.unresolved_variance}"
        )
    return dec


def _check_nu(m2: float, nu: float) -> None:
    CenteredGammaParams(nu)
    if abs(m2 - 2.0 * nu) > NU_RTOL * 2.0 * nu:
        raise ConfigurationError(
            f"E[W²] = {m2!r} implies nu = {m2 / 2.0!r}, but nu = {nu!r} was declared"
        )


def _check_d(d: int, n: int) -> None:
    if not isinstance(d, (int, np.integer)) or not 1 <= d <= n:
        raise ContractError(f"degeneracy order must satisfy 1 <= d <= n = {n}, got {d}")


# ---------------------------------------------------------------------
# Pair statistics
# ---------------------------------------------------------------------

def build_pair_stats(
    k: UStatKernel,
    s: DiscreteProductSpace,
    d: int,
    nu: float,
    mode: str = "exact",
    seed: Optional[int] = None,
    n_samples: Optional[int] = None,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> ExchangeablePairStats:
    """
    Moments of (W, W′) and of S, exactly or by Monte Carlo.

    Raises:
        ResourceError: exact mode above the enumeration cap
        ContractError: W not degenerate of order d; mc with < 1000 samples
        ConfigurationError: E[W²] disagrees with the declared ν
    """
    _check_d(d, s.n)
    if mode == "exact":
        return _exact_stats(k, s, d, nu, threads, cap)
    if mode == "mc":
        return _mc_stats(k, s, d, nu, seed, n_samples, threads)[0]
    raise ConfigurationError(f"unknown mode '{mode}' (exact, mc)")


def _exact_stats(k, s, d, nu, threads, cap) -> ExchangeablePairStats:
    W = kernel_tensor(k, s, cap=cap)
    probs = s.prob_vectors()
    _degenerate_decomposition(W, probs, d, threads, cap)
    t = _pair_tables(W, probs, d, threads)
    moments = {"m2": t.mean(W ** 2), "m3": t.mean(W ** 3), "m4": t.mean(W ** 4)}
    _check_nu(moments["m2"], nu)

    S = t.cond2 / (2.0 * t.lam) - 2.0 * (W + nu)
    mean_S = t.mean(S)
    regression = float(np.max(np.abs(t.cond1 + t.lam * W)))
    scale = max(1.0, float(np.max(np.abs(W))))
    return ExchangeablePairStats(
        lambda_pair=t.lam,
        var_S=t.mean((S - mean_S) ** 2),
        e_abs_dW3=t.mean(t.cond3),
        e_dW2=t.mean(t.cond2),
        e_dW4=t.mean(t.cond4),
        moments=moments,
        r_zero=regression <= REGRESSION_TOL * scale,
        nu=nu,
        d=d,
        n=s.n,
        mode="exact",
        mean_S=mean_S,
        e_abs_S=t.mean(np.abs(S)),
        regression_error=regression,
        fourth_sum=tensor_fourth_moment_sum(W, probs),
    )


def _mc_block(k: UStatKernel, s: DiscreteProductSpace, size: int, seedseq) -> np.ndarray:
    """Columns: W, E[ΔW|X], E[ΔW²|X], E[|ΔW|³|X], E[ΔW⁴|X], Σ_j (W − E_j W)⁴."""
    rng = make_generator(seedseq)
    n = s.n
    idx = np.column_stack(
        [rng.choice(f.size, size=size, p=f.probs_array()) for f in s.factors]
    ).astype(np.int64)
    W = k.evaluate_indices(s, idx)
    out = np.zeros((size, 6))
    out[:, 0] = W
    for j, factor in enumerate(s.factors):
        p = factor.probs_array()
        averaged = np.zeros(size)
        moved = idx.copy()
        for y in range(factor.size):
            moved[:, j] = y
            Wy = k.evaluate_indices(s, moved)
            delta = Wy - W
            sq = delta * delta
            w = p[y] / n
            out[:, 1] += w * delta
            out[:, 2] += w * sq
            out[:, 3] += w * np.abs(delta) * sq
            out[:, 4] += w * sq * sq
            averaged += p[y] * Wy
        out[:, 5] += (W - averaged) ** 4
    return out


def _mc_stats(k, s, d, nu, seed, n_samples, threads) -> Tuple[ExchangeablePairStats, np.ndarray]:
    n_samples = DEFAULT_MC_SAMPLES if n_samples is None else int(n_samples)
    if n_samples < MIN_MC_SAMPLES:
        raise ContractError(f"mc mode needs at least {MIN_MC_SAMPLES} samples, got {n_samples}")
    seed = 0 if seed is None else int(seed)
    CenteredGammaParams(nu)
    lam = d / s.n

    table = run_mc(lambda size, ss: _mc_block(k, s, size, ss), n_samples, seed, threads)
    W = table[:, 0]
    S = table[:, 2] / (2.0 * lam) - 2.0 * (W + nu)
    mean_S = exact_mean(S)
    centered_sq = (S - mean_S) ** 2
    columns = {
        "m2": W ** 2,
        "m3": W ** 3,
        "m4": W ** 4,
        "e_dW2": table[:, 2],
        "e_abs_dW3": table[:, 3],
        "e_dW4": table[:, 4],
        "var_S": centered_sq,
        "mean_S": S,
        "e_abs_S": np.abs(S),
        "fourth_sum": table[:, 5],
    }
    est = {name: exact_mean(col) for name, col in columns.items()}
    stderr = {name: batch_stderr(col) for name, col in columns.items()}

    if abs(est["m2"] - 2.0 * nu) > 6.0 * stderr["m2"] + 1e-9:
        logger.warning("mc estimate E[W²] = %.6g is far from 2nu = %.6g", est["m2"], 2.0 * nu)
    regression = float(np.max(np.abs(table[:, 1] + lam * W)))
    scale = max(1.0, float(np.max(np.abs(W))))

    stats = ExchangeablePairStats(
        lambda_pair=lam,
        var_S=est["var_S"],
        e_abs_dW3=est["e_abs_dW3"],
        e_dW2=est["e_dW2"],
        e_dW4=est["e_dW4"],
        moments={"m2": est["m2"], "m3": est["m3"], "m4": est["m4"]},
        r_zero=regression <= REGRESSION_TOL * scale,
        nu=nu,
        d=d,
        n=s.n,
        mode="mc",
        mean_S=est["mean_S"],
        e_abs_S=est["e_abs_S"],
        regression_error=regression,
        fourth_sum=est["fourth_sum"],
        stderr=stderr,
        n_samples=n_samples,
        seed=seed,
    )
    return stats, W


# ---------------------------------------------------------------------
# Identities and checks
# ---------------------------------------------------------------------

def hoeffding_S_decomposition(
    k: UStatKernel,
    s: DiscreteProductSpace,
    d: int,
    nu: float,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> SDecomposition:
    """S = S₁ + ½S₂ from the components of W², against S enumerated directly."""
    _check_d(d, s.n)
    W = kernel_tensor(k, s, cap=cap)
    probs = s.prob_vectors()
    dec_w = _degenerate_decomposition(W, probs, d, threads, cap)
    t = _pair_tables(W, probs, d, threads)
    _check_nu(t.mean(W ** 2), nu)

    dec_u = decompose_tensor(W * W, probs, max_order=min(2 * d, s.n), threads=threads, cap=cap)
    var_s1 = math.fsum(
        (1.0 - popcount(m) / (2.0 * d)) ** 2 * float(s2)
        for m, s2 in dec_u.sigma2.items()
        if popcount(m) != d
    )
    order_d = sorted({m for m in dec_u.components if popcount(m) == d} | {m for m in dec_w.components if popcount(m) == d})
    var_s2_parts, cov_parts, u_var_parts = [], [], []
    for m in order_d:
        u, w = dec_u.component(m), dec_w.component(m)
        var_s2_parts.append(weighted_mean((u - 4.0 * w) ** 2, m, probs))
        cov_parts.append(weighted_mean(u * w, m, probs))
        u_var_parts.append(weighted_mean(u * u, m, probs))

    S = t.cond2 / (2.0 * t.lam) - 2.0 * (W + nu)
    mean_S = t.mean(S)
    e_w3 = t.mean(W ** 3)
    u_variance = math.fsum(u_var_parts)
    return SDecomposition(
        u_empty=float(dec_u.mean),
        var_S_direct=t.mean((S - mean_S) ** 2),
        var_S1=var_s1,
        var_S2=math.fsum(var_s2_parts),
        e_w3_direct=e_w3,
        e_w3_components=math.fsum(cov_parts),
        mean_S=mean_S,
        u_variance=u_variance,
        s2_variance_formula=u_variance + 32.0 * nu - 8.0 * e_w3,
    )


def moment_identities_check(
    k: UStatKernel,
    s: DiscreteProductSpace,
    d: int,
    stats: Optional[ExchangeablePairStats] = None,
    tol: float = 1e-10,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> MomentIdentityReport:
    """
    E[W⁴] = 3E[W²T] − (1/4λ)E[ΔW⁴] and E[W³] = 2E[W T],
    T = (1/2λ)E[ΔW² | X], on the enumerated pair.
    """
    _check_d(d, s.n)
    W = kernel_tensor(k, s, cap=cap)
    t = _pair_tables(W, s.prob_vectors(), d, threads)
    if stats is not None and abs(stats.lambda_pair - t.lam) > 1e-15:
        raise ContractError(f"stats were built with lambda={stats.lambda_pair}, expected {t.lam}")
    T = t.cond2 / (2.0 * t.lam)
    e_w4 = stats.m4 if stats is not None else t.mean(W ** 4)
    e_w3 = stats.m3 if stats is not None else t.mean(W ** 3)
    return MomentIdentityReport(
        e_w4=e_w4,
        rhs4=3.0 * t.mean(W * W * T) - t.mean(t.cond4) / (4.0 * t.lam),
        e_w3=e_w3,
        rhs3=2.0 * t.mean(W * T),
        tol=tol,
    )


def chain_inequality_check(stats: ExchangeablePairStats) -> ChainInequalityReport:
    """3·Var(S) against |moment functional| + (n/4d)E[ΔW⁴], and E|S| <= √Var(S)."""
    if stats.e_abs_S is None:
        raise ContractError("pair statistics lack E|S|")
    return ChainInequalityReport(
        var_S=stats.var_S,
        moment_functional=moment_discrepancy(stats.m3, stats.m4, stats.nu),
        fourth_term=stats.n / (4.0 * stats.d) * stats.e_dW4,
        e_abs_S=stats.e_abs_S,
    )


def exchangeability_check(
    k: UStatKernel, s: DiscreteProductSpace, cap: int = DEFAULT_ENUM_CAP
) -> ExchangeabilityReport:
    """Max |P(W=a, W′=b) − P(W=b, W′=a)| over the enumerated joint table."""
    W = kernel_tensor(k, s, cap=cap)
    probs = s.prob_vectors()
    P = _joint_law(probs)
    n = s.n
    scale = max(1.0, float(np.max(np.abs(W))))

    def key(v: np.ndarray) -> np.ndarray:
        return np.round(v.ravel() / scale * 10 ** EXCHANGE_DIGITS).astype(np.int64)

    left, right, mass = [], [], []
    for j in range(n):
        for y, py in enumerate(probs[j]):
            moved = np.broadcast_to(np.expand_dims(np.take(W, y, axis=j), j), W.shape)
            left.append(key(W))
            right.append(key(moved))
            mass.append((P * float(py) / n).ravel())
    pairs = np.column_stack([np.concatenate(left), np.concatenate(right)])
    atoms, inverse = np.unique(pairs, axis=0, return_inverse=True)
    totals = np.bincount(inverse.ravel(), weights=np.concatenate(mass), minlength=len(atoms))
    table: Dict[Tuple[int, int], float] = {(int(a), int(b)): float(m) for (a, b), m in zip(atoms, totals)}
    worst = max(abs(m - table.get((b, a), 0.0)) for (a, b), m in table.items())
    return ExchangeabilityReport(max_asymmetry=worst, atoms=len(table))


# ---------------------------------------------------------------------
# The bound
# ---------------------------------------------------------------------

def rho_coefficient(nu: float, d: int) -> float:
    """((2√3 + 4√ν)·max(1, 2/ν) + 4√ν) / (3√d)."""
    coef = CenteredGammaParams(nu).coefficient
    root = math.sqrt(nu)
    return ((2.0 * math.sqrt(3.0) + 4.0 * root) * coef + 4.0 * root) / (3.0 * math.sqrt(d))


def moment_term(stats: ExchangeablePairStats, nu: float) -> float:
    coef = CenteredGammaParams(nu).coefficient
    return coef / math.sqrt(3.0) * math.sqrt(abs(moment_discrepancy(stats.m3, stats.m4, nu)))


def dejong_bound(
    k: UStatKernel,
    s: DiscreteProductSpace,
    d: int,
    nu: float,
    c_d: Optional[float] = None,
    policy: str = "exact",
    stats: Optional[ExchangeablePairStats] = None,
    rho2: Optional[float] = None,
    big_d: Optional[float] = None,
    quadruple: Optional[float] = None,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> DeJongBound:
    """
    moment_term + rho_term, plus the plug-in variant and the side columns.

    The ρ term bounds (n/16)·E|W′−W|⁴ through one of:
    - D·Q with Q = Σ |J∩K∩L∩M|·σ_Jσ_Kσ_Lσ_M over quadruples covering every
      index at least twice (policy "exact", rho_term_quadruple)
    - fourth_sum T = Σ_{J,K,L,M} |J∩K∩L∩M|·E[W_J W_K W_L W_M], which equals
      Σ_j E[(W − E[W | X_{−j}])⁴] and satisfies T <= D·Q
      (rho_term_fourth_sum, reported when the pair statistics carry it)
    - C_d·D·ρ² with a user-supplied C_d (policy "require", rho_term_cd)

    rho2/big_d/quadruple may be passed in (closed forms) when W is too large
    to decompose; stats may be passed in to reuse an earlier (e.g. mc) run.

    Raises:
        ConfigurationError: unknown policy, or policy "require" without C_d
    """
    if policy not in POLICIES:
        raise ConfigurationError(f"unknown C_d policy '{policy}' ({', '.join(POLICIES)})")
    if c_d is not None and not c_d > 0:
        raise ConfigurationError(f"C_d must be positive, got {c_d}")
    if policy == "require" and c_d is None:
        raise ConfigurationError("policy 'require' needs a user-supplied C_d")
    _check_d(d, s.n)

    if stats is None:
        stats = build_pair_stats(k, s, d, nu, "exact", threads=threads, cap=cap)

    excluded: Tuple[Tuple[int, ...], ...] = ()
    if rho2 is None or big_d is None:
        W = kernel_tensor(k, s, cap=cap)
        dec = _degenerate_decomposition(W, s.prob_vectors(), d, threads, cap)
        cstats = component_stats(dec, d)
        rho2, big_d, excluded = cstats.rho2, cstats.big_d, cstats.excluded
        quadruple = sigma_quadruple_sum(cstats)

    coef_rho = rho_coefficient(nu, d)
    fourth = stats.fourth_sum
    rho_cd = coef_rho * math.sqrt(c_d * big_d * rho2) if c_d is not None else None
    rho_fourth = coef_rho * math.sqrt(fourth) if fourth is not None else None
    rho_quadruple = coef_rho * math.sqrt(big_d * quadruple) if quadruple is not None else None
    if policy == "exact":
        if rho_quadruple is None:
            raise ContractError("policy 'exact' needs the paired quadruple sum of the component σ_J")
        rho = rho_quadruple
        rho_without_d = coef_rho * math.sqrt(quadruple)
    else:
        rho = rho_cd
        rho_without_d = coef_rho * math.sqrt(c_d * rho2)

    moments = moment_term(stats, nu)
    exact_variant = plugin_bound(stats, nu, 1.0, 1.0) if stats.r_zero else None
    return DeJongBound(
        moment_term=moments,
        rho_term=rho,
        total=moments + rho,
        exact_variant_total=exact_variant,
        policy=policy,
        rho2=rho2,
        big_d=big_d,
        fourth_sum=fourth,
        sigma_quadruple_sum=quadruple,
        c_d=c_d,
        rho_term_fourth_sum=rho_fourth,
        total_fourth_sum=None if rho_fourth is None else moments + rho_fourth,
        rho_term_quadruple=rho_quadruple,
        total_quadruple=None if rho_quadruple is None else moments + rho_quadruple,
        rho_term_cd=rho_cd,
        rho_term_without_d=rho_without_d,
        total_without_d=moments + rho_without_d,
        excluded_zero_variance=excluded,
    )


# ---------------------------------------------------------------------
# Convergence demo
# ---------------------------------------------------------------------

def exact_law(k: UStatKernel, s: DiscreteProductSpace, cap: int = DEFAULT_ENUM_CAP) -> Tuple[np.ndarray, np.ndarray]:
    """Distinct values of W and their probabilities."""
    W = kernel_tensor(k, s, cap=cap).ravel()
    P = _joint_law(s.prob_vectors()).ravel()
    scale = max(1.0, float(np.max(np.abs(W))))
    keys = np.round(W / scale * 1e12).astype(np.int64)
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    weights = np.bincount(inverse.ravel(), weights=P, minlength=len(uniq))
    return W[first], weights / math.fsum(weights)


def demo_sequence(
    family: str,
    n_list: Sequence[int],
    nu: Optional[float] = None,
    seed: int = 0,
    family_params: Optional[Dict] = None,
    n_samples: int = DEFAULT_MC_SAMPLES,
    exact_only: bool = False,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
    epsabs: float = EXPECTATION_EPSABS,
) -> List[ConvergenceRow]:
    """
    One row per n: moment discrepancy, ρ², D, bound (with and without D),
    plug-in variant, d₂-dictionary and d₁ discrepancies to Z_ν.

    epsabs is the quadrature tolerance for E h(Z_ν) in the d₂ column.
    n beyond the enumeration cap switches to Monte Carlo with closed-form
    ρ² and D, unless exact_only is set.
    """
    params = dict(family_params or {})
    rows: List[ConvergenceRow] = []
    for n in n_list:
        model = build_ustat(family, int(n), **params)
        target_nu = model.nu if nu is None else float(nu)
        if model.space.size <= cap:
            stats = build_pair_stats(model.kernel, model.space, model.d, target_nu, "exact", threads=threads, cap=cap)
            bound = dejong_bound(model.kernel, model.space, model.d, target_nu, stats=stats, threads=threads, cap=cap)
            values, weights = exact_law(model.kernel, model.space, cap)
            d2 = d2_dictionary(values, CenteredGammaParams(target_nu), weights_a=weights, epsabs=epsabs).value
            d1 = wasserstein1_to_target(
                values, weights, lambda x: centered_gamma_cdf(x, target_nu), lower=-target_nu
            ).value
            mode = "exact"
        else:
            if exact_only:
                raise ResourceError(model.space.size, cap)
            logger.warning("n=%d exceeds the enumeration cap; falling back to monte carlo", n)
            _check_d(model.d, model.space.n)
            stats, samples = _mc_stats(model.kernel, model.space, model.d, target_nu, seed, n_samples, threads)
            bound = dejong_bound(
                model.kernel, model.space, model.d, target_nu,
                stats=stats, rho2=model.rho2, big_d=model.big_d, quadruple=model.quadruple,
                threads=threads, cap=cap,
            )
            d2 = d2_dictionary(samples, CenteredGammaParams(target_nu), epsabs=epsabs).value
            d1 = wasserstein1(samples, sample_centered_gamma(target_nu, samples.size, seed + 1)).value
            mode = "mc"
        rows.append(
            ConvergenceRow(
                n=int(n),
                mode=mode,
                moment_discrepancy=abs(moment_discrepancy(stats.m3, stats.m4, target_nu)),
                rho2=bound.rho2,
                big_d=bound.big_d,
                bound=bound.total,
                bound_without_d=bound.total_without_d,
                exact_variant=bound.exact_variant_total,
                d2_dictionary=d2,
                d1=d1,
            )
        )
        logger.debug("demo row n=%d: bound %.6g, d2 %.6g", n, bound.total, d2)
    return rows


def log_log_slope(ns: Sequence[int], values: Sequence[float]) -> float:
    """Least-squares slope of log(value) against log(n)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])
