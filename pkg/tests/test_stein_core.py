"""
tests/test_stein_core.py

Date: 2026-10-18

Stein solutions for Γ(r, λ) and Z_ν, bound certification, the explosion
witness and the closed-form bounds.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from catalog.test_functions import certification_dictionary, get_test_function
from models.behavior import stein_core
from models.behavior.errors import ConfigurationError, ContractError
from models.domain.gamma_params import CenteredGammaParams, GammaParams
from models.domain.test_function import TestFunction
from models.records.dejong import ExchangeablePairStats
from models.records.stein import GridSpec

XS = (-5.0, -2.0, -0.3, 0.0, 1e-7, 0.4, 1.0, 3.0, 6.0)


def test_expected_h_of_identity_is_the_mean():
    assert stein_core.expected_h(get_test_function("x"), GammaParams(2.0, 3.0)) == pytest.approx(2.0 / 3.0, abs=1e-10)


def test_expected_h_of_constant_and_hinge():
    one = TestFunction("one", lambda x: 1.0, lip1=0.0, lip2=0.0)
    assert stein_core.expected_h(one, GammaParams(1.5, 2.0)) == pytest.approx(1.0, abs=1e-10)
    assert stein_core.expected_h(get_test_function("min0"), GammaParams(1.0, 1.0)) == pytest.approx(0.0, abs=1e-12)


def test_growth_check_rejects_exploding_functions():
    fast = TestFunction("x12", lambda x: x ** 12, lip1=1.0)
    with pytest.raises(ContractError):
        stein_core.solve(fast, GammaParams(1.0))


def test_solver_needs_lipschitz_constant():
    with pytest.raises(ContractError):
        stein_core.solve(TestFunction("raw", lambda x: x), GammaParams(1.0))


@pytest.mark.parametrize("r,lam", [(0.5, 1.0), (2.0, 3.0), (5.0, 0.5)])
def test_identity_gives_constant_solution(r, lam):
    sol = stein_core.solve(get_test_function("x"), GammaParams(r, lam))
    for x in XS:
        assert sol.f(x) == pytest.approx(-1.0 / lam, abs=1e-9)
        assert stein_core.stein_derivative(sol, x) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("nu", [0.5, 1.0, 7.0])
def test_centered_identity_gives_constant_solution(nu):
    sol = stein_core.solve(get_test_function("x"), CenteredGammaParams(nu))
    for x in XS:
        assert sol.f(x) == pytest.approx(-1.0, abs=1e-9)
    assert np.max(np.abs(stein_core.stein_residual(sol, XS))) < 1e-8


def test_value_at_zero_matches_limit():
    h = TestFunction("min1", lambda x: min(x, 1.0), lip1=1.0, d1eval=lambda x: 1.0 if x < 1.0 else 0.0, kinks=(1.0,))
    sol = stein_core.solve(h, GammaParams(1.0, 1.0))
    assert sol.f(0.0) == pytest.approx(-(1.0 - math.exp(-1.0)), abs=1e-9)
    assert sol.f(1e-5) == pytest.approx(sol.f(0.0), abs=1e-4)


def test_derivative_at_zero_closed_form():
    h = TestFunction("atan", math.atan, lip1=1.0, lip2=0.65, d1eval=lambda x: 1.0 / (1.0 + x * x))
    sol = stein_core.solve(h, GammaParams(1.0, 1.0))
    # h′(0)/(r+1) + (h(0) − E h)/(r(r+1)) with r = 1
    expected = 0.5 + (0.0 - sol.expected_h) / 2.0
    assert sol.fprime(0.0) == pytest.approx(expected, abs=1e-8)


def test_arctan_residual_on_gamma_grid():
    sol = stein_core.solve(get_test_function("arctan"), GammaParams(2.0, 1.0))
    xs = stein_core.grid_points(GridSpec(-10.0, 10.0, 0.25))
    assert np.max(np.abs(stein_core.stein_residual(sol, xs))) < 1e-8


def test_cosine_residual_on_centered_grid():
    sol = stein_core.solve(get_test_function("cos"), CenteredGammaParams(2.0))
    xs = stein_core.grid_points(GridSpec(-20.0, 20.0, 0.5))
    assert np.max(np.abs(stein_core.stein_residual(sol, xs))) < 1e-8


@pytest.mark.parametrize("x", [-2.0, 2.0])
def test_derivative_matches_finite_difference(x):
    sol = stein_core.solve(get_test_function("arctan"), GammaParams(2.0, 1.0))
    step = 1e-4
    fd = (sol.f(x + step) - sol.f(x - step)) / (2.0 * step)
    assert sol.fprime(x) == pytest.approx(fd, abs=1e-6)


def test_grid_points_include_zero():
    xs = stein_core.grid_points(GridSpec(-1.05, 1.0, 0.1))
    assert 0.0 in xs
    assert np.all(np.diff(xs) > 0)


def test_grid_spec_parse():
    assert GridSpec.parse("-10:10:0.01") == GridSpec(-10.0, 10.0, 0.01)
    for bad in ("1:2", "2:1:0.1", "0:1:-1", "a:b:c"):
        with pytest.raises(ValueError):
            GridSpec.parse(bad)


def test_unknown_test_function_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        get_test_function("not-a-function")


def test_declared_constants_hold_on_a_grid():
    xs = np.linspace(-15.0, 15.0, 3001)
    for h in certification_dictionary():
        quotients = np.abs(np.diff(h.evaluate_many(xs)) / np.diff(xs))
        assert quotients.max() <= h.lip1 * (1.0 + 1e-6) + 1e-9, h.name


def test_theorem_values_gamma():
    values = stein_core.theorem_values(GammaParams(0.5, 2.0), 1.0, 1.0)
    assert values["sup_f"] == 0.5
    assert values["lip_f"] == 4.0
    assert values["lip_f_pos"] == 2.0
    assert values["lip_f_neg"] == 4.0
    assert values["lip_fprime"] == 4.0 * 2.0 * 2.0 + 2.0


def test_theorem_values_centered_without_second_derivative():
    values = stein_core.theorem_values(CenteredGammaParams(1.0), 1.0, None)
    assert values == {"sup_f": 1.0, "lip_f": 2.0, "lip_f_pos": 1.0, "lip_f_neg": 2.0}


def test_identity_saturates_sup_bound():
    report = stein_core.certify_bounds(get_test_function("x"), GammaParams(2.0, 1.0), GridSpec(-5.0, 5.0, 0.1))
    assert report.passed
    assert report.measured["sup_f"] == pytest.approx(1.0, abs=1e-9)
    assert report.to_dict()["pass"] is True


def test_centered_identity_saturates_sup_bound():
    report = stein_core.certify_bounds(get_test_function("x"), CenteredGammaParams(1.0), GridSpec(-5.0, 5.0, 0.1))
    assert report.passed
    assert report.measured["sup_f"] == pytest.approx(report.theorem["sup_f"], abs=1e-9)


def test_negative_side_bound_for_small_shape():
    report = stein_core.certify_bounds(
        get_test_function("smooth_min0"), GammaParams(0.5, 1.0), GridSpec(-6.0, 6.0, 0.05)
    )
    assert report.passed
    assert report.measured["lip_f_neg"] <= 4.0 * (1.0 + 1e-6)


def test_hinge_has_no_second_order_bound():
    report = stein_core.certify_bounds(get_test_function("min0"), GammaParams(1.0), GridSpec(-3.0, 3.0, 0.1))
    assert "lip_fprime" in report.skipped
    assert "lip_fprime" not in report.theorem


@pytest.mark.slow
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 5.0])
def test_full_dictionary_certifies(r):
    for h in certification_dictionary():
        report = stein_core.certify_bounds(h, GammaParams(r, 1.0), GridSpec(-10.0, 10.0, 0.05))
        assert report.passed, (h.name, report.violations)


@pytest.mark.parametrize("r", [0.05, 0.1, 0.5, 1.0, 2.0])
def test_explosion_witness_exceeds_lower_bound(r):
    w = stein_core.explosion_witness(r)
    assert w.lower_bound == pytest.approx(math.exp(-0.5) / r, rel=1e-12)
    assert w.value >= w.lower_bound * (1.0 - 1e-8)
    assert w.exceeds_lower_bound


def test_explosion_witness_small_shape_value():
    assert stein_core.explosion_witness(0.1).value >= 6.06
    assert stein_core.explosion_witness(1.0).value >= 0.6065


@pytest.mark.parametrize("r", [0.05, 0.5, 2.0])
def test_explosion_witness_reports_the_bounded_solution(r):
    # bounded solution for h = min(x, 0): f(−y) = −∫₀^y u^r e^u du / (y^r e^y)
    x = -0.5
    y = -x
    head, _ = quad(lambda u: u ** r * math.exp(u), 0.0, y, epsabs=1e-14, epsrel=1e-12)
    f = -head / (y ** r * math.exp(y))
    fprime = (x - (r - x) * f) / x
    w = stein_core.explosion_witness(r, x=x)
    assert w.bounded_solution_derivative == pytest.approx(abs(fprime), rel=1e-7)
    data = w.to_dict()
    assert data["value"] == w.closed_form
    assert data["value_source"] == "closed_form_double_integral"
    assert data["bounded_solution_derivative"] == w.bounded_solution_derivative
    assert "solution_derivative" not in data


def test_explosion_witness_needs_negative_point():
    with pytest.raises(ContractError):
        stein_core.explosion_witness(1.0, x=0.5)


def test_higher_order_bound():
    assert stein_core.higher_order_bound(3, GammaParams(1.0, 2.0), (1.0, 1.0, 1.0)) == pytest.approx(82.0)
    # k = 1 reduces to the first-derivative bound 2·max(1, 1/r)·‖h′‖
    assert stein_core.higher_order_bound(1, GammaParams(0.5, 1.0), (1.0,)) == pytest.approx(4.0)
    with pytest.raises(ContractError):
        stein_core.higher_order_bound(2, GammaParams(1.0), (1.0,))


def _pair_stats(r_zero=True):
    return ExchangeablePairStats(
        lambda_pair=0.5,
        var_S=0.04,
        e_abs_dW3=0.003,
        e_dW2=4.0,
        e_dW4=0.0,
        moments={"m2": 4.0, "m3": 16.0, "m4": 0.0},
        r_zero=r_zero,
        nu=2.0,
        d=1,
        n=2,
    )


def test_plugin_bound_arithmetic():
    assert stein_core.plugin_bound(_pair_stats(), 2.0, 1.0, 1.0) == pytest.approx(0.202, abs=1e-12)


def test_plugin_bound_needs_zero_remainder():
    with pytest.raises(ContractError):
        stein_core.plugin_bound(_pair_stats(r_zero=False), 2.0, 1.0, 1.0)


def test_general_plugin_bound_reduces_when_remainder_vanishes():
    value = stein_core.plugin_bound_general(0.1, 0.0, 0.003, 0.5, 2.0, 1.0, 1.0)
    assert value == pytest.approx(0.1 + 2.0 / 3.0 * 0.003)


FD_POINTS = (-50.0, -1.0, -1e-3, 1e-3, 1.0, 50.0)


def _derivative_mismatches(sol, h):
    """Points where fprime and a central difference of f disagree."""
    bad = []
    for x in FD_POINTS:
        step = min(1e-4, abs(x) / 20.0)
        if any(abs(x - k) <= 2.0 * step for k in h.kinks):
            continue
        fd = (sol.f(x + step) - sol.f(x - step)) / (2.0 * step)
        fp = sol.fprime(x)
        if abs(fd - fp) > 1e-6 * max(1.0, abs(fp)):
            bad.append((h.name, x, fp, fd))
    return bad


@pytest.mark.slow
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("r", [0.3, 0.5, 1.0, 2.0, 5.0])
def test_fprime_matches_central_differences(r, lam):
    bad = []
    for h in certification_dictionary():
        bad.extend(_derivative_mismatches(stein_core.solve(h, GammaParams(r, lam)), h))
    assert not bad, bad


@pytest.mark.slow
@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0, 7.0])
def test_centered_fprime_matches_central_differences(nu):
    bad = []
    for h in certification_dictionary():
        bad.extend(_derivative_mismatches(stein_core.solve(h, CenteredGammaParams(nu)), h))
    assert not bad, bad


@pytest.mark.parametrize("r", [0.3, 1.0, 5.0])
def test_solution_is_continuous_across_zero(r):
    for name in ("x", "arctan", "sin", "tanh", "smooth_min0"):
        sol = stein_core.solve(get_test_function(name), GammaParams(r, 1.0))
        # both sides of the series band around 0
        for inner, outer in ((0.9e-6, 1.1e-6), (-0.9e-6, -1.1e-6)):
            assert sol.f(outer) == pytest.approx(sol.f(inner), abs=1e-7), name
            assert sol.fprime(outer) == pytest.approx(sol.fprime(inner), abs=1e-5), name
        assert sol.f(1e-5) == pytest.approx(sol.f(-1e-5), abs=1e-3), name
        assert sol.fprime(1e-5) == pytest.approx(sol.fprime(-1e-5), abs=1e-3), name


@pytest.mark.parametrize("r,lam", [(0.5, 2.0), (2.0, 0.5), (5.0, 3.0)])
def test_rate_rescaling(r, lam):
    h = get_test_function("arctan")
    sol = stein_core.solve(h, GammaParams(r, lam))
    unit = stein_core.solve(h.composed_affine(1.0 / lam, 0.0), GammaParams(r, 1.0))
    for x in (-3.0, -0.2, 0.7, 4.0):
        assert sol.f(x) == pytest.approx(unit.f(lam * x), abs=1e-12)
        assert sol.fprime(x) == pytest.approx(lam * unit.fprime(lam * x), abs=1e-10)


@pytest.mark.parametrize("nu", [0.5, 3.0])
def test_centered_is_a_rescaled_gamma_solution(nu):
    h = get_test_function("tanh")
    sol = stein_core.solve(h, CenteredGammaParams(nu))
    base = stein_core.solve(h.composed_affine(2.0, -nu), GammaParams(nu / 2.0, 1.0))
    for x in (-0.4 * nu, 0.0, 1.5, 6.0):
        assert sol.f(x) == pytest.approx(0.5 * base.f((x + nu) / 2.0), abs=1e-12)
