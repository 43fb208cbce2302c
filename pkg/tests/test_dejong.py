"""
tests/test_dejong.py

Date: 2026-10-18

Exchangeable pair statistics, the moment identities behind the de Jong
bound, the bound itself and the convergence demo.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catalog.kernel_families import multilinear, rademacher_quadratic
from models.behavior import dejong
from models.behavior.errors import ConfigurationError, ContractError, ResourceError
from models.behavior.hoeffding import expand_to, hoeffding_decompose, weighted_mean
from models.domain.product_space import UStatKernel
from models.records.dejong import ConvergenceRow


def test_pair_product_statistics(rademacher_space_2, pair_product_kernel):
    stats = dejong.build_pair_stats(pair_product_kernel, rademacher_space_2, d=2, nu=0.5)
    assert stats.lambda_pair == 1.0
    # E[ΔW²] = 4dν/n
    assert stats.e_dW2 == pytest.approx(2.0, abs=1e-12)
    assert stats.m2 == pytest.approx(1.0)
    assert stats.r_zero
    assert stats.regression_error < 1e-11
    assert stats.mean_S == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_regression_and_second_moment(n):
    model = rademacher_quadratic(n)
    stats = dejong.build_pair_stats(model.kernel, model.space, model.d, model.nu)
    assert stats.r_zero
    assert stats.lambda_pair == pytest.approx(2.0 / n)
    assert stats.e_dW2 == pytest.approx(4.0 * model.d * model.nu / n, rel=1e-12)
    assert stats.mean_S == pytest.approx(0.0, abs=1e-10)


def test_declared_nu_must_match_second_moment(rademacher_space_2, pair_product_kernel):
    with pytest.raises(ConfigurationError):
        dejong.build_pair_stats(pair_product_kernel, rademacher_space_2, d=2, nu=1.0)


def test_non_degenerate_statistic_is_rejected(rademacher_space_2):
    k = UStatKernel(lambda a: a[0] + a[0] * a[1])
    with pytest.raises(ContractError):
        dejong.build_pair_stats(k, rademacher_space_2, d=2, nu=1.0)


def test_degeneracy_order_range(rademacher_space_2, pair_product_kernel):
    with pytest.raises(ContractError):
        dejong.build_pair_stats(pair_product_kernel, rademacher_space_2, d=3, nu=0.5)


def test_unknown_mode(rademacher_space_2, pair_product_kernel):
    with pytest.raises(ConfigurationError):
        dejong.build_pair_stats(pair_product_kernel, rademacher_space_2, d=2, nu=0.5, mode="fast")


def test_monte_carlo_needs_enough_samples(rademacher_space_2, pair_product_kernel):
    with pytest.raises(ContractError):
        dejong.build_pair_stats(
            pair_product_kernel, rademacher_space_2, d=2, nu=0.5, mode="mc", seed=1, n_samples=999
        )


def test_monte_carlo_agrees_with_enumeration():
    model = rademacher_quadratic(6)
    exact = dejong.build_pair_stats(model.kernel, model.space, 2, 1.0)
    mc = dejong.build_pair_stats(model.kernel, model.space, 2, 1.0, mode="mc", seed=5, n_samples=50_000)
    assert mc.mode == "mc" and mc.n_samples == 50_000
    assert mc.r_zero
    assert mc.m2 == pytest.approx(exact.m2, abs=6.0 * mc.stderr["m2"] + 1e-9)
    assert mc.e_dW2 == pytest.approx(exact.e_dW2, abs=6.0 * mc.stderr["e_dW2"] + 1e-9)


def test_monte_carlo_is_deterministic_per_seed():
    model = rademacher_quadratic(6)
    a = dejong.build_pair_stats(model.kernel, model.space, 2, 1.0, mode="mc", seed=9, n_samples=2000)
    b = dejong.build_pair_stats(model.kernel, model.space, 2, 1.0, mode="mc", seed=9, n_samples=2000, threads=3)
    assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("n", [4, 7])
def test_moment_identities(n):
    model = rademacher_quadratic(n)
    report = dejong.moment_identities_check(model.kernel, model.space, model.d)
    assert report.ok, report.to_dict()


def test_chain_inequality():
    model = rademacher_quadratic(6)
    stats = dejong.build_pair_stats(model.kernel, model.space, model.d, model.nu)
    report = dejong.chain_inequality_check(stats)
    assert report.holds, report.to_dict()


def test_exchangeability():
    model = rademacher_quadratic(5)
    report = dejong.exchangeability_check(model.kernel, model.space)
    assert report.ok
    assert report.atoms > 1


@st.composite
def seeded_kernels(draw):
    n = draw(st.integers(min_value=3, max_value=8))
    d = draw(st.integers(min_value=2, max_value=min(3, n)))
    seed = draw(st.integers(min_value=0, max_value=10_000))
    law = draw(st.sampled_from(["rademacher", "skewed"]))
    nu = draw(st.sampled_from([0.5, 1.0, 2.0]))
    return multilinear(n, d=d, seed=seed, law=law, nu=nu)


@given(seeded_kernels())
@settings(max_examples=50, deadline=None)
def test_identities_on_seeded_degenerate_kernels(model):
    n, d, nu = model.space.n, model.d, model.nu
    stats = dejong.build_pair_stats(model.kernel, model.space, d, nu)
    assert stats.r_zero
    assert stats.lambda_pair == pytest.approx(d / n)
    assert stats.e_dW2 == pytest.approx(4.0 * d * nu / n, rel=1e-10)
    assert stats.mean_S == pytest.approx(0.0, abs=1e-9)

    report = dejong.moment_identities_check(model.kernel, model.space, d, stats=stats)
    assert report.ok, report.to_dict()

    dec = dejong.hoeffding_S_decomposition(model.kernel, model.space, d, nu)
    assert dec.var_S_hoeffding == pytest.approx(dec.var_S_direct, rel=1e-9, abs=1e-10)
    assert dec.u_empty == pytest.approx(2.0 * nu, rel=1e-10)

    assert dejong.exchangeability_check(model.kernel, model.space).ok


def test_s_decomposition_matches_direct_enumeration():
    model = rademacher_quadratic(6)
    dec = dejong.hoeffding_S_decomposition(model.kernel, model.space, model.d, model.nu)
    # U_∅ = E[W²] = 2ν
    assert dec.u_empty == pytest.approx(2.0 * model.nu, rel=1e-12)
    assert dec.mean_S == pytest.approx(0.0, abs=1e-10)
    assert dec.var_S_hoeffding == pytest.approx(dec.var_S_direct, rel=1e-9, abs=1e-12)
    assert dec.e_w3_components == pytest.approx(dec.e_w3_direct, rel=1e-9, abs=1e-12)
    assert dec.var_S2 == pytest.approx(dec.s2_variance_formula, rel=1e-9, abs=1e-12)


def test_rho_coefficient():
    expected = (2.0 * math.sqrt(3.0) + 8.0 * math.sqrt(2.0)) / 3.0
    assert dejong.rho_coefficient(2.0, 1) == pytest.approx(expected)
    # ν < 2 scales the first part by 2/ν
    assert dejong.rho_coefficient(0.5, 2) == pytest.approx(
        ((2.0 * math.sqrt(3.0) + 4.0 * math.sqrt(0.5)) * 4.0 + 4.0 * math.sqrt(0.5)) / (3.0 * math.sqrt(2.0))
    )


def test_bound_exact_policy():
    model = rademacher_quadratic(6)
    bound = dejong.dejong_bound(model.kernel, model.space, model.d, model.nu)
    coef = dejong.rho_coefficient(model.nu, model.d)
    assert bound.policy == "exact"
    assert bound.rho2 == pytest.approx(4.0 / 6.0)
    assert bound.big_d == pytest.approx(1.0)
    # σ_J = c on every pair; per coordinate the other endpoints pair up:
    # Q = n·c⁴·(3·5² − 2·5) = 104/15
    assert bound.sigma_quadruple_sum == pytest.approx(104.0 / 15.0, rel=1e-12)
    assert bound.rho_term == pytest.approx(coef * math.sqrt(104.0 / 15.0), rel=1e-12)
    assert bound.rho_term_quadruple == bound.rho_term
    assert bound.total == pytest.approx(bound.moment_term + bound.rho_term)
    assert bound.total_quadruple == bound.total
    # W − E[W | X_{−j}] = c·x_j·Σ_{i≠j} x_i: T = n·c⁴·(3·5² − 2·5) as well
    assert bound.fourth_sum == pytest.approx(104.0 / 15.0, rel=1e-12)
    assert bound.rho_term_fourth_sum == pytest.approx(coef * math.sqrt(104.0 / 15.0), rel=1e-12)
    assert bound.total_fourth_sum == pytest.approx(bound.moment_term + bound.rho_term_fourth_sum)
    assert bound.exact_variant_total is not None
    assert bound.rho_term_cd is None
    data = bound.to_dict()
    assert data["rho_term_quadruple"] == bound.rho_term
    assert data["total_fourth_sum"] == bound.total_fourth_sum


def test_exact_policy_dominates_the_fourth_sum_column():
    model = multilinear(5, d=2, seed=3, law="skewed")
    bound = dejong.dejong_bound(model.kernel, model.space, model.d, model.nu)
    assert bound.big_d > 1.0
    assert bound.rho_term == bound.rho_term_quadruple
    assert bound.rho_term_fourth_sum <= bound.rho_term * (1.0 + 1e-12)
    assert bound.rho_term_without_d == pytest.approx(
        dejong.rho_coefficient(model.nu, model.d) * math.sqrt(bound.sigma_quadruple_sum), rel=1e-12
    )


def _quadruple_expectation_sum(model):
    """Σ_{J,K,L,M} |J∩K∩L∩M|·E[W_J W_K W_L W_M] over order-d components."""
    dec = hoeffding_decompose(model.kernel, model.space)
    full = (1 << model.space.n) - 1
    probs = model.space.prob_vectors()
    masks = [m for m in dec.components if bin(m).count("1") == model.d]
    tables = {m: np.broadcast_to(expand_to(dec.components[m], m, full), model.space.shape) for m in masks}
    total = 0.0
    for quad in itertools.product(masks, repeat=4):
        common = quad[0] & quad[1] & quad[2] & quad[3]
        if common:
            product = tables[quad[0]] * tables[quad[1]] * tables[quad[2]] * tables[quad[3]]
            total += bin(common).count("1") * float(weighted_mean(product, full, probs))
    return total


@pytest.mark.parametrize(
    "model",
    [rademacher_quadratic(4), multilinear(4, d=2, seed=1, law="skewed"), multilinear(4, d=3, seed=2)],
    ids=["rademacher4", "skewed4", "cubic4"],
)
def test_fourth_sum_is_the_quadruple_expectation_sum(model):
    bound = dejong.dejong_bound(model.kernel, model.space, model.d, model.nu)
    expected = _quadruple_expectation_sum(model)
    assert bound.fourth_sum == pytest.approx(expected, rel=1e-10)
    # Hölder: |E[W_J W_K W_L W_M]| <= D·σ_Jσ_Kσ_Lσ_M
    assert bound.fourth_sum <= bound.big_d * bound.sigma_quadruple_sum * (1.0 + 1e-12)
    assert bound.sigma_quadruple_sum == pytest.approx(model.quadruple, rel=1e-10)


def test_bound_require_policy_uses_the_constant():
    model = rademacher_quadratic(6)
    bound = dejong.dejong_bound(model.kernel, model.space, model.d, model.nu, c_d=3.0, policy="require")
    coef = dejong.rho_coefficient(model.nu, model.d)
    assert bound.rho_term == pytest.approx(coef * math.sqrt(3.0 * 1.0 * 4.0 / 6.0))
    assert bound.rho_term_cd == bound.rho_term


def test_require_policy_without_constant():
    model = rademacher_quadratic(4)
    with pytest.raises(ConfigurationError):
        dejong.dejong_bound(model.kernel, model.space, model.d, model.nu, policy="require")


def test_bad_policy_and_constant():
    model = rademacher_quadratic(4)
    with pytest.raises(ConfigurationError):
        dejong.dejong_bound(model.kernel, model.space, model.d, model.nu, policy="guess")
    with pytest.raises(ConfigurationError):
        dejong.dejong_bound(model.kernel, model.space, model.d, model.nu, c_d=-1.0)


def test_exact_law_sums_to_one():
    model = rademacher_quadratic(5)
    values, weights = dejong.exact_law(model.kernel, model.space)
    assert math.fsum(weights) == pytest.approx(1.0)
    assert math.fsum(values * weights) == pytest.approx(0.0, abs=1e-12)
    assert len(values) == len(set(values.tolist()))


def test_demo_bound_decreases_with_n():
    ns = [4, 6, 8, 10]
    rows = dejong.demo_sequence("rademacher-quadratic", ns)
    assert [r.n for r in rows] == ns
    assert all(r.mode == "exact" for r in rows)
    assert rows[-1].bound < rows[0].bound
    assert rows[-1].rho2 == pytest.approx(4.0 / 10.0)
    assert dejong.log_log_slope(ns, [r.bound for r in rows]) < 0.0
    assert len(rows[0].csv_values()) == len(ConvergenceRow.CSV_COLUMNS)


@pytest.mark.slow
def test_demo_rademacher_quadratic_convergence():
    ns = [6, 8, 10, 12, 16]
    rows = dejong.demo_sequence("rademacher-quadratic", ns)
    assert all(r.mode == "exact" for r in rows)
    bounds = [r.bound for r in rows]
    assert all(later < earlier for earlier, later in zip(bounds, bounds[1:])), bounds
    for r in rows:
        assert r.rho2 == pytest.approx(4.0 / r.n)
        assert r.big_d == pytest.approx(1.0)
        assert r.bound >= r.d2_dictionary
        assert r.exact_variant >= r.d2_dictionary
    slope = dejong.log_log_slope(ns, [r.exact_variant for r in rows])
    assert -0.7 <= slope <= -0.3


def test_demo_exact_only_respects_cap():
    with pytest.raises(ResourceError):
        dejong.demo_sequence("rademacher-quadratic", [12], exact_only=True, cap=1000)


def test_demo_falls_back_to_monte_carlo():
    rows = dejong.demo_sequence("rademacher-quadratic", [12], seed=4, n_samples=5000, cap=1000)
    assert rows[0].mode == "mc"
    assert rows[0].rho2 == pytest.approx(4.0 / 12.0)
    assert rows[0].big_d == 1.0


def test_log_log_slope():
    assert dejong.log_log_slope([1, 10, 100], [1.0, 0.1, 0.01]) == pytest.approx(-1.0)
