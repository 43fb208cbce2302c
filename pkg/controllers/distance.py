"""
Distance controller.

Date: 2026-10-18

Compares a sample file with Z_ν (or with a second sample) for the
distance command: d₁, the d₂ dictionary, Kolmogorov distance and the
smoothing bound d₁ <= (4/√π)·√d₂.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from config.settings import Settings
from models.behavior import distances
from models.behavior.errors import ConfigurationError
from models.behavior.gamma_dist import centered_gamma_cdf
from models.domain.gamma_params import CenteredGammaParams

logger = logging.getLogger(__name__)


def load_samples(path: str) -> np.ndarray:
    """
    Read a one-dimensional sample.

    Accepted files: .json (a list of numbers), .npy, .csv (first column),
    anything else as whitespace-separated numbers.
    """
    p = Path(path)
    try:
        if p.suffix == ".json":
            data = np.asarray(json.loads(p.read_text(encoding="utf-8")), dtype=float)
        elif p.suffix == ".npy":
            data = np.load(p)
        elif p.suffix == ".csv":
            data = np.loadtxt(p, delimiter=",", ndmin=2)[:, 0]
        else:
            data = np.loadtxt(p, ndmin=1)
    except (OSError, ValueError) as e:
        raise ConfigurationError(f"Could not read samples from {path}: {e}") from e
    return np.asarray(data, dtype=float).ravel()


class DistanceController:
    """
    Application controller for sample comparisons.

    Design decisions:
    - Against Z_ν, d₁ and Kolmogorov are computed exactly for the empirical
      law; the d₂ value is a dictionary lower bound
    - Against a second sample only d₁ and d₂ are defined
    """

    def __init__(self, *, settings: Settings) -> None:
        self._settings = settings

    def compare(
        self,
        samples: np.ndarray,
        nu: Optional[float] = None,
        other: Optional[np.ndarray] = None,
        weights: Optional[np.ndarray] = None,
    ) -> Dict[str, Any]:
        if (nu is None) == (other is None):
            raise ConfigurationError("compare against exactly one of --nu or --other")
        out: Dict[str, Any] = {"n_samples": int(np.size(samples))}
        if other is not None:
            out["d1"] = distances.wasserstein1(samples, other)
            d2 = distances.d2_dictionary(samples, other, weights_a=weights)
        else:
            target = CenteredGammaParams(nu)
            cdf = lambda t: centered_gamma_cdf(t, target.nu)  # noqa: E731
            out["nu"] = target.nu
            out["d1"] = distances.wasserstein1_to_target(samples, weights, cdf, lower=-target.nu)
            out["kolmogorov"] = distances.kolmogorov(samples, cdf, weights)
            d2 = distances.d2_dictionary(samples, target, weights_a=weights, epsabs=self._settings.quad_tol)
        out["d2_dictionary"] = d2
        if d2.value <= distances.CERTIFIED_LIMIT:
            out["d1_smoothing_bound"] = distances.smoothing_bound(d2.value)
        logger.debug("distance report: %s", {k: v for k, v in out.items() if k != "n_samples"})
        return out
