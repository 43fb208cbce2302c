"""
Built-in kernel families.

Date: 2026-10-18

Named, parameterized constructors for the models the CLI and the JSON
factory can refer to by name:

- product-space families (degenerate U-statistics): "rademacher-quadratic",
  "multilinear"
- Gaussian chaos families: "identity_nu", "perturbed", "eigenvalues", "dense"
- Poisson chaos families: "indicator", "zero", "square", "random"

Every product-space family also returns its closed-form ρ² and D, which the
de Jong pipeline uses when n is too large to enumerate.

Seeds are part of a family's identity: the same (name, parameters, seed)
always builds the same kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
from scipy.stats import special_ortho_group

from models.behavior.errors import ConfigurationError
from models.behavior.gamma_dist import make_generator
from models.behavior.hoeffding import paired_quadruple_sum
from models.domain.chaos import GaussChaosFunctional, PoissonChaosFunctional, PoissonSpace
from models.domain.product_space import DiscreteFactor, DiscreteProductSpace, UStatKernel

DEFAULT_CELLS = 64

SKEWED_FACTOR = DiscreteFactor(
    (-math.sqrt(2.0), 1.0 / math.sqrt(2.0)), (Fraction(1, 3), Fraction(2, 3))
)
SKEWED_FOURTH_MOMENT = 1.5


@dataclass(frozen=True)
class UStatModel:
    """A degenerate U-statistic W on a product space, with closed-form stats."""

    space: DiscreteProductSpace
    kernel: UStatKernel
    d: int
    nu: float
    rho2: Optional[float] = None
    big_d: Optional[float] = None
    quadruple: Optional[float] = None


# ---------------------------------------------------------------------
# Product-space families
# ---------------------------------------------------------------------

def rademacher_quadratic(n: int) -> UStatModel:
    """
    W = c·Σ_{i<j} x_i x_j, c = 2/√(n(n−1)), Rademacher x.

    E[W²] = 2 (ν = 1), ρ² = 4/n, D = 1 and the paired quadruple sum is
    n·c⁴·(n−1)(3n−5) = 16(3n−5)/(n(n−1)): per coordinate, the four other
    endpoints must pair up.
    """
    if n < 2:
        raise ConfigurationError(f"rademacher-quadratic needs n >= 2, got {n}")
    c = 2.0 / math.sqrt(n * (n - 1))

    def batch(idx: np.ndarray) -> np.ndarray:
        x = 2.0 * idx - 1.0
        s = x.sum(axis=1)
        return c * 0.5 * (s * s - n)

    def psi(atoms) -> float:
        s = sum(atoms)
        return c * 0.5 * (s * s - n)

    space = DiscreteProductSpace.iid(DiscreteFactor.rademacher(), n)
    kernel = UStatKernel(psi, d=2, name=f"rademacher-quadratic[{n}]", batch=batch)
    quadruple = 16.0 * (3 * n - 5) / (n * (n - 1))
    return UStatModel(space, kernel, d=2, nu=1.0, rho2=4.0 / n, big_d=1.0, quadruple=quadruple)


def multilinear(n: int, d: int = 2, seed: int = 0, law: str = "rademacher", nu: float = 1.0) -> UStatModel:
    """
    W = c·Σ_{|J|=d} a_J Π_{j∈J} x_j with seeded Gaussian a_J and centered,
    unit-variance x, normalized to E[W²] = 2ν.

    law "rademacher" uses ±1; law "skewed" uses {−√2, 1/√2} w.p. {1/3, 2/3}.
    """
    if not 1 <= d <= n:
        raise ConfigurationError(f"multilinear needs 1 <= d <= n, got d={d}, n={n}")
    if law == "rademacher":
        factor, fourth = DiscreteFactor.rademacher(), 1.0
    elif law == "skewed":
        factor, fourth = SKEWED_FACTOR, SKEWED_FOURTH_MOMENT
    else:
        raise ConfigurationError(f"unknown multilinear law '{law}' (rademacher, skewed)")

    subsets = list(combinations(range(n), d))
    coeffs = make_generator(seed).standard_normal(len(subsets))
    c = math.sqrt(2.0 * nu / float(np.sum(coeffs ** 2)))
    weights = c * coeffs
    cols = np.array(subsets, dtype=np.int64)
    values = factor.values_array()

    def batch(idx: np.ndarray) -> np.ndarray:
        out = np.empty(idx.shape[0])
        for start in range(0, idx.shape[0], 4096):
            x = values[idx[start:start + 4096]]
            out[start:start + 4096] = np.prod(x[:, cols], axis=2) @ weights
        return out

    def psi(atoms) -> float:
        return float(sum(w * math.prod(float(atoms[j]) for j in J) for w, J in zip(weights, subsets)))

    per_coord = np.zeros(n)
    for w, J in zip(weights, subsets):
        per_coord[list(J)] += w * w
    space = DiscreteProductSpace.iid(factor, n)
    kernel = UStatKernel(psi, d=d, name=f"multilinear[{n},{d},{law},{seed}]", batch=batch)
    return UStatModel(
        space, kernel, d=d, nu=nu,
        rho2=float(per_coord.max()), big_d=fourth ** d,
        quadruple=paired_quadruple_sum([(J, abs(w)) for w, J in zip(weights, subsets)]),
    )


PRODUCT_FAMILIES: Dict[str, Callable[..., UStatModel]] = {
    "rademacher-quadratic": rademacher_quadratic,
    "multilinear": multilinear,
}


def build_ustat(family: str, n: int, **params: Any) -> UStatModel:
    try:
        factory = PRODUCT_FAMILIES[family]
    except KeyError:
        raise ConfigurationError(
            f"Unknown kernel family '{family}'. Known: {', '.join(PRODUCT_FAMILIES)}"
        ) from None
    try:
        return factory(n, **params)
    except TypeError as e:
        raise ConfigurationError(f"bad parameters for family '{family}': {e}") from e


# ---------------------------------------------------------------------
# Gaussian chaos families
# ---------------------------------------------------------------------

def identity_nu(nu: int, dim: Optional[int] = None) -> GaussChaosFunctional:
    """F = Σ_{i<=ν}(x_i² − 1), exactly distributed as Z_ν."""
    if int(nu) != nu or nu < 1:
        raise ConfigurationError(f"identity_nu needs a positive integer nu, got {nu}")
    nu = int(nu)
    dim = nu if dim is None else int(dim)
    if dim < nu:
        raise ConfigurationError(f"dimension {dim} is smaller than nu={nu}")
    f = np.zeros((dim, dim))
    f[np.arange(nu), np.arange(nu)] = 1.0
    return GaussChaosFunctional(dim, 2, f, name=f"identity_nu[{nu}]")


def perturbed(nu: int, eps: float) -> GaussChaosFunctional:
    """Identity kernel on ν coordinates plus ε on every off-diagonal entry."""
    if int(nu) != nu or nu < 1:
        raise ConfigurationError(f"perturbed needs a positive integer nu, got {nu}")
    nu = int(nu)
    f = np.eye(nu) + eps * (np.ones((nu, nu)) - np.eye(nu))
    return GaussChaosFunctional(nu, 2, f, name=f"perturbed[{nu},{eps:g}]")


def eigenvalues(values: Sequence[float], seed: int = 0) -> GaussChaosFunctional:
    """f = Q·diag(values)·Qᵀ with a seeded rotation Q; F ~ Σ values_i (N_i² − 1)."""
    lam = np.asarray(values, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ConfigurationError("eigenvalues needs a non-empty list")
    if lam.size == 1:
        return GaussChaosFunctional(1, 2, lam.reshape(1, 1), name="eigenvalues")
    q = special_ortho_group.rvs(lam.size, random_state=make_generator(seed))
    f = q @ np.diag(lam) @ q.T
    f = 0.5 * (f + f.T)
    return GaussChaosFunctional(lam.size, 2, f, name=f"eigenvalues[{seed}]")


def dense(matrix: Sequence[Sequence[float]]) -> GaussChaosFunctional:
    f = np.asarray(matrix, dtype=float)
    if f.ndim != 2:
        raise ConfigurationError("dense kernel must be a square matrix")
    return GaussChaosFunctional(f.shape[0], 2, f, name="dense")


GAUSS_FAMILIES: Dict[str, Callable[..., GaussChaosFunctional]] = {
    "identity_nu": identity_nu,
    "perturbed": perturbed,
    "eigenvalues": eigenvalues,
    "dense": dense,
}


# ---------------------------------------------------------------------
# Poisson chaos families
# ---------------------------------------------------------------------

def indicator(nu: float, cells: int = DEFAULT_CELLS, p: int = 1) -> PoissonChaosFunctional:
    """
    F = I_1(2·1_B), B = all cells, μ_i = ν/(2m): E[F²] = 4μ(B) = 2ν.

    Only p = 1 is meaningful; other orders are rejected.
    """
    if p != 1:
        raise ConfigurationError("the indicator family is a first-chaos family (p=1)")
    space = PoissonSpace.uniform(cells, nu / 2.0)
    return PoissonChaosFunctional(1, np.full(cells, 2.0), space, name="indicator")


def zero(cells: int = DEFAULT_CELLS, p: int = 1, nu: float = 1.0) -> PoissonChaosFunctional:
    space = PoissonSpace.uniform(cells, nu)
    kernel = np.zeros(cells) if p == 1 else np.zeros((cells, cells))
    return PoissonChaosFunctional(p, kernel, space, name="zero")


def square(nu: float = 1.0, cells: int = DEFAULT_CELLS, total: float = 50.0) -> PoissonChaosFunctional:
    """
    Constant off-diagonal kernel c on uniform cells of total mass M.

    E[F²] = 2c²(M² − Σμ_i²) = 2ν fixes c. F = c(η̂(Z)² − Σ η̂_i²); for fine
    cells and large M it approaches a centered chi-square.
    """
    space = PoissonSpace.uniform(cells, total)
    mu = space.mu_array()
    c = math.sqrt(nu / (total * total - float(np.sum(mu * mu))))
    f = c * (np.ones((cells, cells)) - np.eye(cells))
    return PoissonChaosFunctional(2, f, space, name="square")


def random_kernel(nu: float = 1.0, cells: int = DEFAULT_CELLS, p: int = 2, seed: int = 0) -> PoissonChaosFunctional:
    """Seeded Gaussian kernel with weights in [0.5, 1.5]·ν/m, normalized to E[F²] = 2ν."""
    rng = make_generator(seed)
    mu = rng.uniform(0.5, 1.5, cells) * nu / cells
    space = PoissonSpace(tuple(float(v) for v in mu))
    if p == 1:
        f = rng.standard_normal(cells)
        f *= math.sqrt(2.0 * nu / float(np.sum(f * f * mu)))
        return PoissonChaosFunctional(1, f, space, name=f"random[{seed}]")
    if p != 2:
        raise ConfigurationError(f"chaos order must be 1 or 2, got {p}")
    g = rng.standard_normal((cells, cells))
    f = 0.5 * (g + g.T)
    np.fill_diagonal(f, 0.0)
    f *= math.sqrt(nu / float(mu @ (f * f) @ mu))
    return PoissonChaosFunctional(2, f, space, name=f"random[{seed}]")


POISSON_FAMILIES: Dict[str, Callable[..., PoissonChaosFunctional]] = {
    "indicator": indicator,
    "zero": zero,
    "square": square,
    "random": random_kernel,
}


def build_chaos(model: str, family: str, **params: Any):
    """Look up a Gaussian or Poisson family and build it with params."""
    table = {"gauss": GAUSS_FAMILIES, "poisson": POISSON_FAMILIES}.get(model)
    if table is None:
        raise ConfigurationError(f"Unknown chaos model '{model}' (gauss, poisson)")
    try:
        factory = table[family]
    except KeyError:
        raise ConfigurationError(
            f"Unknown {model} kernel family '{family}'. Known: {', '.join(table)}"
        ) from None
    try:
        return factory(**params)
    except TypeError as e:
        raise ConfigurationError(f"bad parameters for family '{family}': {e}") from e
