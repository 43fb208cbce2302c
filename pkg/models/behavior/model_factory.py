"""
Model factory.

Date: 2026-10-18

Single entry point for turning JSON model descriptions (config files, CLI
flags) into validated domain objects: U-statistic models on product
spaces and Gaussian or Poisson chaos functionals.

Architectural role:
- Boundary between external formats and domain models
- Runs the shape checks of models.behavior.validation, then the domain
  constructors; any ContractError raised while building is reported as a
  ConfigurationError since it stems from user input
"""

from __future__ import annotations

import math
from typing import Any, Dict

import numpy as np

from catalog.kernel_families import UStatModel, build_chaos, build_ustat
from models.behavior.errors import ConfigurationError, ContractError
from models.behavior.validation import validate_chaos_definition, validate_product_definition
from models.domain.chaos import GaussChaosFunctional, PoissonChaosFunctional, PoissonSpace
from models.domain.product_space import DiscreteFactor, DiscreteProductSpace, UStatKernel


class ModelFactory:
    """
    Factory for models described by dictionaries.

    Design notes:
    - Named families resolve through catalog.kernel_families.
    - Explicit product kernels are either a full value table indexed by
      support positions or a list of multilinear terms coef·Π_{j∈J} x_j.
    """

    @staticmethod
    def product_model(defn: Dict[str, Any]) -> UStatModel:
        validate_product_definition(defn)
        try:
            if "family" in defn:
                return build_ustat(defn["family"], defn["n"], **defn.get("params", {}))
            return ModelFactory._explicit_product(defn)
        except ContractError as e:
            raise ConfigurationError(f"Invalid product model: {e}", [str(e)]) from e

    @staticmethod
    def _explicit_product(defn: Dict[str, Any]) -> UStatModel:
        if "factors" in defn:
            space = DiscreteProductSpace(tuple(_factor(f) for f in defn["factors"]))
        else:
            space = DiscreteProductSpace.iid(_factor(defn["iid"]["factor"]), defn["iid"]["n"])
        kernel_defn = defn["kernel"]
        d = defn["d"]
        if "table" in kernel_defn:
            table = np.asarray(kernel_defn["table"], dtype=float)
            if table.shape != space.shape:
                raise ConfigurationError(f"kernel table has shape {table.shape}, space has {space.shape}")
            kernel = UStatKernel.from_table(table, d=d, name=defn.get("name", "table"))
        else:
            kernel = _terms_kernel(space, kernel_defn["terms"], d, defn.get("name", "terms"))
        return UStatModel(space, kernel, d=d, nu=float(defn["nu"]))

    @staticmethod
    def chaos_model(model: str, defn: Dict[str, Any]):
        validate_chaos_definition(model, defn)
        try:
            if "family" in defn:
                return build_chaos(model, defn["family"], **defn.get("params", {}))
            mixture = tuple((m["order"], np.asarray(m["kernel"], dtype=float)) for m in defn.get("mixture", []))
            kernel = np.asarray(defn["kernel"], dtype=float)
            if model == "gauss":
                return GaussChaosFunctional(defn["dim"], defn["order"], kernel, mixture, name=defn.get("name", "gauss"))
            space = PoissonSpace(tuple(defn["mu"]))
            return PoissonChaosFunctional(defn["order"], kernel, space, mixture, name=defn.get("name", "poisson"))
        except ContractError as e:
            raise ConfigurationError(f"Invalid {model} chaos model: {e}", [str(e)]) from e


def _factor(defn: Dict[str, Any]) -> DiscreteFactor:
    support = tuple(tuple(a) if isinstance(a, list) else a for a in defn["support"])
    return DiscreteFactor(support, tuple(defn["probs"]))


def _terms_kernel(space: DiscreteProductSpace, terms, d: int, name: str) -> UStatKernel:
    subsets = []
    for t in terms:
        J = tuple(int(j) for j in t["J"])
        if any(not 0 <= j < space.n for j in J):
            raise ConfigurationError(f"term {list(J)} refers to coordinates outside 0..{space.n - 1}")
        subsets.append((float(t["coef"]), J))
    values = [f.values_array() for f in space.factors]

    def psi(atoms) -> float:
        return math.fsum(c * math.prod(float(atoms[j]) for j in J) for c, J in subsets)

    def batch(idx: np.ndarray) -> np.ndarray:
        x = np.column_stack([values[j][idx[:, j]] for j in range(space.n)])
        out = np.zeros(idx.shape[0])
        for c, J in subsets:
            out += c * np.prod(x[:, list(J)], axis=1)
        return out

    return UStatKernel(psi, d=d, name=name, batch=batch)
