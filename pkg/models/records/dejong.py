"""
Exchangeable-pair and de Jong bound records.

Date: 2026-10-18

Architectural role:
- Results of models.behavior.dejong, consumed by stein_core.plugin_bound
  and by the CLI
- ConvergenceRow.CSV_COLUMNS fixes the column order of convergence tables

Invariants:
- e_dW2 = 4·d·ν/n when m2 = 2ν (exact mode, within 1e-10)
- var_S >= 0
- DeJongBound.total = moment_term + rho_term
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple


@dataclass(frozen=True)
class ExchangeablePairStats:
    """
    Moments of the pair (W, W′) obtained by resampling one uniformly chosen
    coordinate.

    Fields:
    - lambda_pair: d/n
    - var_S, mean_S, e_abs_S: variance, mean and E|S| of
      S = (1/2λ)E[(W′−W)² | X] − 2(W+ν)
    - e_abs_dW3, e_dW2, e_dW4: moments of W′ − W
    - moments: {"m2", "m3", "m4"} of W
    - r_zero: E[W′ − W | X] = −λW held (exact: to 1e-11 pointwise)
    - regression_error: max |E[W′ − W | X] + λW| (exact mode only)
    - fourth_sum: Σ_j E[(W − E[W | X_{−j}])⁴]
    - stderr: batch-means standard errors per estimated quantity (mc only)
    """

    lambda_pair: float
    var_S: float
    e_abs_dW3: float
    e_dW2: float
    e_dW4: float
    moments: Dict[str, float]
    r_zero: bool
    nu: float
    d: int
    n: int
    mode: str = "exact"
    mean_S: float = 0.0
    e_abs_S: Optional[float] = None
    regression_error: Optional[float] = None
    fourth_sum: Optional[float] = None
    stderr: Dict[str, float] = field(default_factory=dict)
    n_samples: Optional[int] = None
    seed: Optional[int] = None

    @property
    def m2(self) -> float:
        return self.moments["m2"]

    @property
    def m3(self) -> float:
        return self.moments["m3"]

    @property
    def m4(self) -> float:
        return self.moments["m4"]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "mode": self.mode,
            "n": self.n,
            "d": self.d,
            "nu": self.nu,
            "lambda": self.lambda_pair,
            "moments": dict(self.moments),
            "e_dW2": self.e_dW2,
            "e_abs_dW3": self.e_abs_dW3,
            "e_dW4": self.e_dW4,
            "var_S": self.var_S,
            "mean_S": self.mean_S,
            "e_abs_S": self.e_abs_S,
            "r_zero": self.r_zero,
            "regression_error": self.regression_error,
            "fourth_sum": self.fourth_sum,
        }
        if self.mode == "mc":
            out["n_samples"] = self.n_samples
            out["seed"] = self.seed
            out["stderr"] = dict(self.stderr)
        return out


@dataclass(frozen=True)
class SDecomposition:
    """
    S = S₁ + ½S₂ assembled from the Hoeffding components U_M of W².

    var_S_direct comes from enumerating S itself; var_S_hoeffding from
    Var(S₁) + ¼Var(S₂).
    """

    u_empty: float
    var_S_direct: float
    var_S1: float
    var_S2: float
    e_w3_direct: float
    e_w3_components: float
    mean_S: float
    u_variance: float
    s2_variance_formula: float

    @property
    def var_S_hoeffding(self) -> float:
        return self.var_S1 + 0.25 * self.var_S2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "U_empty": self.u_empty,
            "var_S_direct": self.var_S_direct,
            "var_S1": self.var_S1,
            "var_S2": self.var_S2,
            "var_S_hoeffding": self.var_S_hoeffding,
            "mean_S": self.mean_S,
            "E_W3_direct": self.e_w3_direct,
            "E_W3_components": self.e_w3_components,
            "sum_var_U_J": self.u_variance,
            "var_S2_formula": self.s2_variance_formula,
        }


@dataclass(frozen=True)
class MomentIdentityReport:
    """Third and fourth moment identities of an exchangeable pair."""

    e_w4: float
    rhs4: float
    e_w3: float
    rhs3: float
    tol: float = 1e-10

    @property
    def error4(self) -> float:
        return abs(self.e_w4 - self.rhs4)

    @property
    def error3(self) -> float:
        return abs(self.e_w3 - self.rhs3)

    @property
    def ok(self) -> bool:
        return self.error4 <= self.tol and self.error3 <= self.tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "E_W4": self.e_w4,
            "rhs4": self.rhs4,
            "E_W3": self.e_w3,
            "rhs3": self.rhs3,
            "error4": self.error4,
            "error3": self.error3,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class ChainInequalityReport:
    """
    3·Var(S) <= |moment functional| + (n/4d)·E[(W′−W)⁴] and
    E|S| <= √Var(S), with exact moments.
    """

    var_S: float
    moment_functional: float
    fourth_term: float
    e_abs_S: float

    @property
    def variance_chain_holds(self) -> bool:
        lhs = 3.0 * self.var_S
        return lhs <= abs(self.moment_functional) + self.fourth_term + 1e-10 * max(1.0, lhs)

    @property
    def cauchy_schwarz_holds(self) -> bool:
        return self.e_abs_S <= (max(self.var_S, 0.0)) ** 0.5 * (1 + 1e-10) + 1e-12

    @property
    def holds(self) -> bool:
        return self.variance_chain_holds and self.cauchy_schwarz_holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "three_var_S": 3.0 * self.var_S,
            "moment_functional": self.moment_functional,
            "fourth_term": self.fourth_term,
            "E_abs_S": self.e_abs_S,
            "variance_chain_holds": self.variance_chain_holds,
            "cauchy_schwarz_holds": self.cauchy_schwarz_holds,
        }


@dataclass(frozen=True)
class ExchangeabilityReport:
    """Symmetry of the enumerated joint law of (W, W′)."""

    max_asymmetry: float
    atoms: int
    tol: float = 1e-12

    @property
    def ok(self) -> bool:
        return self.max_asymmetry <= self.tol

    def to_dict(self) -> Dict[str, Any]:
        return {"max_asymmetry": self.max_asymmetry, "atoms": self.atoms, "ok": self.ok}


@dataclass(frozen=True)
class DeJongBound:
    """
    Non-central de Jong bound for d₂(W, Z_ν).

    - moment_term: coefficient·√|E W⁴ − 12E W³ − 12ν² + 48ν|
    - rho_term: fourth-moment term under the active C_d policy
    - exact_variant_total: plug-in bound from exact pair moments
    - rho_term_fourth_sum: rho term from the exact fourth-moment sum T
    - rho_term_quadruple: rho term from D·Σ|J∩K∩L∩M|σ_Jσ_Kσ_Lσ_M over
      quadruples covering every index twice; active under policy "exact"
    - sigma_quadruple_sum: that paired σ-product sum; D times it majorizes T
    - rho_term_cd: rho term with a user-supplied C_d (None otherwise)
    - *_without_d: same terms with D replaced by 1
    """

    moment_term: float
    rho_term: float
    total: float
    exact_variant_total: Optional[float]
    policy: str
    rho2: float
    big_d: Optional[float]
    fourth_sum: Optional[float] = None
    sigma_quadruple_sum: Optional[float] = None
    c_d: Optional[float] = None
    rho_term_fourth_sum: Optional[float] = None
    total_fourth_sum: Optional[float] = None
    rho_term_quadruple: Optional[float] = None
    total_quadruple: Optional[float] = None
    rho_term_cd: Optional[float] = None
    rho_term_without_d: Optional[float] = None
    total_without_d: Optional[float] = None
    excluded_zero_variance: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "moment_term": self.moment_term,
            "rho_term": self.rho_term,
            "total": self.total,
            "exact_variant_total": self.exact_variant_total,
            "policy": self.policy,
            "rho2": self.rho2,
            "D": self.big_d,
            "fourth_sum": self.fourth_sum,
            "sigma_quadruple_sum": self.sigma_quadruple_sum,
            "C_d": self.c_d,
            "rho_term_fourth_sum": self.rho_term_fourth_sum,
            "total_fourth_sum": self.total_fourth_sum,
            "rho_term_quadruple": self.rho_term_quadruple,
            "total_quadruple": self.total_quadruple,
            "rho_term_cd": self.rho_term_cd,
            "rho_term_without_D": self.rho_term_without_d,
            "total_without_D": self.total_without_d,
            "excluded_zero_variance": [list(j) for j in self.excluded_zero_variance],
        }


@dataclass(frozen=True)
class ConvergenceRow:
    """One n of a convergence table."""

    CSV_COLUMNS = (
        "n",
        "mode",
        "moment_discrepancy",
        "rho2",
        "D",
        "bound",
        "bound_without_D",
        "exact_variant",
        "d2_dictionary",
        "d1",
    )

    n: int
    mode: str
    moment_discrepancy: float
    rho2: float
    big_d: Optional[float]
    bound: float
    bound_without_d: Optional[float]
    exact_variant: Optional[float]
    d2_dictionary: Optional[float]
    d1: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return dict(zip(self.CSV_COLUMNS, self.csv_values()))

    def csv_values(self) -> Tuple[Any, ...]:
        return (
            self.n,
            self.mode,
            self.moment_discrepancy,
            self.rho2,
            self.big_d,
            self.bound,
            self.bound_without_d,
            self.exact_variant,
            self.d2_dictionary,
            self.d1,
        )
