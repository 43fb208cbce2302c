"""
de Jong controller.

Date: 2026-10-18

Purpose:
- Orchestrate Hoeffding decompositions, exchangeable-pair statistics, the
  de Jong bound and the convergence demo for the hoeffding and dejong
  commands

Architectural role:
- Application Controller
- Passes the worker count and enumeration cap from Settings into every
  library call
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional, Sequence

from catalog.kernel_families import UStatModel
from config.settings import Settings
from models.behavior import dejong, hoeffding
from models.records.dejong import ConvergenceRow

logger = logging.getLogger(__name__)


class DeJongController:
    """
    Application controller for product-space models.

    Responsibilities:
    - Decompose a model and summarize degeneracy, ρ² and D
    - Compute pair statistics and the bound, with optional identity checks
    - Run the convergence demo over a list of n
    """

    def __init__(self, *, settings: Settings) -> None:
        self._settings = settings

    @property
    def _cap(self) -> int:
        return self._settings.enum_cap

    @property
    def _threads(self) -> int:
        return self._settings.threads

    def decompose(
        self,
        model: UStatModel,
        max_order: Optional[int] = None,
        exact: bool = False,
        oracle: bool = False,
    ) -> Dict[str, Any]:
        dec = hoeffding.hoeffding_decompose(
            model.kernel, model.space, max_order, exact=exact, threads=self._threads, cap=self._cap
        )
        out: Dict[str, Any] = {"decomposition": dec}
        d = model.d
        if d is not None and (dec.is_full or dec.max_order >= d):
            check = hoeffding.verify_degeneracy(dec, d)
            out["degeneracy"] = check
            if check:
                stats = hoeffding.component_stats(dec, d)
                out["component_stats"] = stats
                out["sigma_quadruple_sum"] = hoeffding.sigma_quadruple_sum(stats)
                out["fourth_moment_sum"] = hoeffding.fourth_moment_sum(model.kernel, model.space, self._cap)
        if oracle:
            other = hoeffding.sequential_projection_decompose(
                model.kernel, model.space, max_order, exact=exact, cap=self._cap
            )
            out["oracle_max_difference"] = _max_component_difference(dec, other)
        if not exact:
            tensor = hoeffding.kernel_tensor(model.kernel, model.space, cap=self._cap)
            if dec.is_full:
                out["reconstruction_error"] = hoeffding.reconstruction_error(dec, tensor)
            out["orthogonality_defect"] = hoeffding.max_orthogonality_defect(dec)
        return out

    def bound(
        self,
        model: UStatModel,
        nu: Optional[float] = None,
        c_d: Optional[float] = None,
        policy: str = "exact",
        mode: str = "exact",
        seed: int = 0,
        n_samples: Optional[int] = None,
        checks: bool = False,
    ) -> Dict[str, Any]:
        nu = model.nu if nu is None else nu
        stats = dejong.build_pair_stats(
            model.kernel, model.space, model.d, nu, mode,
            seed=seed, n_samples=n_samples, threads=self._threads, cap=self._cap,
        )
        closed = {} if mode == "exact" else {"rho2": model.rho2, "big_d": model.big_d, "quadruple": model.quadruple}
        result = dejong.dejong_bound(
            model.kernel, model.space, model.d, nu, c_d=c_d, policy=policy,
            stats=stats, threads=self._threads, cap=self._cap, **closed,
        )
        out: Dict[str, Any] = {"stats": stats, "bound": result}
        if checks and mode == "exact":
            out["moment_identities"] = dejong.moment_identities_check(
                model.kernel, model.space, model.d, stats, threads=self._threads, cap=self._cap
            )
            out["chain_inequality"] = dejong.chain_inequality_check(stats)
            out["exchangeability"] = dejong.exchangeability_check(model.kernel, model.space, cap=self._cap)
            out["S_decomposition"] = dejong.hoeffding_S_decomposition(
                model.kernel, model.space, model.d, nu, threads=self._threads, cap=self._cap
            )
        return out

    def demo(
        self,
        family: str,
        n_list: Sequence[int],
        nu: Optional[float] = None,
        seed: int = 0,
        family_params: Optional[Dict[str, Any]] = None,
        n_samples: int = dejong.DEFAULT_MC_SAMPLES,
        exact_only: bool = False,
    ) -> List[ConvergenceRow]:
        rows = dejong.demo_sequence(
            family, n_list, nu=nu, seed=seed, family_params=family_params,
            n_samples=n_samples, exact_only=exact_only, threads=self._threads, cap=self._cap,
            epsabs=self._settings.quad_tol,
        )
        logger.info("convergence demo for %s: %d rows", family, len(rows))
        return rows


def _max_component_difference(a, b) -> float:
    worst = 0.0
    for mask in set(a.components) | set(b.components):
        diff = a.component(mask) - b.component(mask)
        if diff.size:
            worst = max(worst, float(abs(diff.astype(float)).max()))
    return worst
