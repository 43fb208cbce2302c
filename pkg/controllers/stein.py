"""
Stein controller.

Date: 2026-10-18

Purpose:
- Drive models.behavior.stein_core for the solve and certify commands
- Return plain, serializable results; formatting is the CLI's job

Architectural role:
- Application Controller
- Holds the runtime Settings (threads, quad_tol) and nothing else
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from catalog.test_functions import DICTIONARY_VERSION, certification_dictionary, get_test_function
from config.settings import Settings
from models.behavior import stein_core
from models.domain.gamma_params import CenteredGammaParams, GammaParams
from models.records.stein import BoundReport, ExplosionWitness, GridSpec

logger = logging.getLogger(__name__)

SOLVE_COLUMNS = ("x", "f", "fprime", "residual")


class SteinController:
    """
    Application controller for Stein-equation commands.

    Responsibilities:
    - Resolve test-function names
    - Solve on a grid and summarize residuals
    - Run bound certification over functions × targets
    - Evaluate the explosion witness
    """

    def __init__(self, *, settings: Settings) -> None:
        self._settings = settings

    def solve(self, h_name: str, target, grid: GridSpec) -> Dict[str, Any]:
        h = get_test_function(h_name)
        sol = stein_core.solve(h, target, self._settings.quad_tol)
        xs = stein_core.grid_points(grid)
        f = np.array([sol.f(float(x)) for x in xs])
        fprime = np.array([sol.fprime(float(x)) for x in xs])
        residual = stein_core.stein_residual(sol, xs)
        worst = float(np.max(np.abs(residual))) if residual.size else 0.0
        logger.debug("solved %s on %d points, max residual %.3g", h.name, xs.size, worst)
        return {
            "solution": sol.to_dict(),
            "grid": grid.to_dict(),
            "max_abs_residual": worst,
            "points": {"x": xs, "f": f, "fprime": fprime, "residual": residual},
        }

    @staticmethod
    def solve_rows(result: Dict[str, Any]) -> List[Sequence[float]]:
        pts = result["points"]
        return [tuple(float(pts[c][i]) for c in SOLVE_COLUMNS) for i in range(len(pts["x"]))]

    def certify(
        self,
        h_names: Optional[Sequence[str]],
        targets: Sequence,
        grid: GridSpec,
        second_order: bool = True,
    ) -> Dict[str, Any]:
        functions = (
            certification_dictionary() if not h_names else tuple(get_test_function(n) for n in h_names)
        )
        reports: List[BoundReport] = [
            stein_core.certify_bounds(
                h, t, grid, threads=self._settings.threads, second_order=second_order,
                epsabs=self._settings.quad_tol,
            )
            for t in targets
            for h in functions
        ]
        failed = [f"{r.h}@{r.params}" for r in reports if not r.passed]
        return {
            "dictionary_version": DICTIONARY_VERSION,
            "grid": grid.to_dict(),
            "reports": reports,
            "passed": not failed,
            "failed": failed,
        }

    def explosion(self, r_values: Sequence[float]) -> Dict[str, Any]:
        witnesses: List[ExplosionWitness] = [stein_core.explosion_witness(float(r)) for r in r_values]
        return {
            "witnesses": witnesses,
            "passed": all(w.exceeds_lower_bound for w in witnesses),
        }


def gamma_targets(rs: Sequence[float], lams: Sequence[float]) -> List[GammaParams]:
    return [GammaParams(float(r), float(lam)) for r in rs for lam in lams]


def centered_targets(nus: Sequence[float]) -> List[CenteredGammaParams]:
    return [CenteredGammaParams(float(nu)) for nu in nus]
