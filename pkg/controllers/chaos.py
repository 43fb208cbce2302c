"""
Chaos controller.

Date: 2026-10-18

Purpose:
- Run the Gaussian and Poisson Malliavin bounds for the chaos command
- Optionally compare the sampled law with Z_ν through the d₂ dictionary
- Run integration-by-parts checks and the conditional-defect trend

Architectural role:
- Application Controller
- Dispatches on the model name; both Malliavin modules share the same
  (F, ν, n_samples, seed, threads) calling convention
"""

from __future__ import annotations

import logging
from typing import Any, Dict, Sequence, Union

from catalog.kernel_families import perturbed
from catalog.test_functions import get_test_function
from config.settings import Settings
from models.behavior import distances, malliavin_gauss, malliavin_poisson
from models.behavior.errors import ConfigurationError
from models.domain.chaos import GaussChaosFunctional, PoissonChaosFunctional
from models.domain.gamma_params import CenteredGammaParams

logger = logging.getLogger(__name__)

Functional = Union[GaussChaosFunctional, PoissonChaosFunctional]

# d₂ comparisons only need a moderate sample
COMPARE_SAMPLES = 200_000


def describe(F: Functional) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "name": F.name,
        "orders": sorted({q for q, _ in F.levels}),
        "pure": F.is_pure,
        "variance": F.variance(),
    }
    if isinstance(F, GaussChaosFunctional):
        out["dim"] = F.dim
    else:
        out["cells"] = F.space.cells
    return out


class ChaosController:
    """
    Application controller for chaos functionals.

    Responsibilities:
    - Pick the Gaussian or Poisson machinery for a functional
    - Attach sampled-law distances when asked
    """

    def __init__(self, *, settings: Settings) -> None:
        self._settings = settings

    def bound(
        self,
        F: Functional,
        nu: float,
        n_samples: int,
        seed: int = 0,
        compare: bool = False,
    ) -> Dict[str, Any]:
        threads = self._settings.threads
        if isinstance(F, GaussChaosFunctional):
            result = malliavin_gauss.gauss_gamma_bound(F, nu, n_samples, seed, threads)
        else:
            result = malliavin_poisson.poisson_gamma_bound(F, nu, n_samples, seed, threads)
        out: Dict[str, Any] = {"functional": describe(F), "result": result}
        if compare:
            out["distances"] = self._compare(F, nu, seed)
        return out

    def _compare(self, F: Functional, nu: float, seed: int) -> Dict[str, Any]:
        # fresh seed so the comparison sample is independent of the bound's
        sample = self.sample(F, COMPARE_SAMPLES, seed + 1)
        d2 = distances.d2_dictionary(sample, CenteredGammaParams(nu), epsabs=self._settings.quad_tol)
        out: Dict[str, Any] = {"d2_dictionary": d2, "n_samples": COMPARE_SAMPLES}
        if d2.value <= distances.CERTIFIED_LIMIT:
            out["d1_smoothing_bound"] = distances.smoothing_bound(d2.value)
        return out

    def sample(self, F: Functional, n_samples: int, seed: int):
        threads = self._settings.threads
        if isinstance(F, GaussChaosFunctional):
            return malliavin_gauss.sample_gauss_chaos(F, n_samples, seed, threads)
        return malliavin_poisson.sample_poisson_chaos(F, n_samples, seed, threads)

    def ibp(self, F: Functional, g_name: str, n_samples: int, seed: int = 0):
        g = get_test_function(g_name)
        threads = self._settings.threads
        if isinstance(F, GaussChaosFunctional):
            return malliavin_gauss.gauss_ibp_check(F, g, n_samples, seed, threads)
        return malliavin_poisson.ibp_check(F, g, n_samples, seed, threads)

    def trend(self, nu: int, eps_values: Sequence[float], n_samples: int, seed: int = 0) -> Dict[str, Any]:
        """Conditional-defect majorant along the perturbed family as ε shrinks."""
        if not eps_values:
            raise ConfigurationError("the trend needs at least one eps value")
        sequence = [perturbed(nu, float(eps)) for eps in eps_values]
        values = malliavin_gauss.sar_condition_trend(
            sequence, float(nu), n_samples, seed, self._settings.threads
        )
        logger.info("defect trend over %d perturbations", len(values))
        return {"nu": nu, "eps": [float(e) for e in eps_values], "l1_term": values}
