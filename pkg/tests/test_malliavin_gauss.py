"""
tests/test_malliavin_gauss.py

Date: 2026-10-18

Wiener chaos functionals on ℝ^k: evaluation, Malliavin derivative,
⟨DF, −DL⁻¹F⟩ and the Monte Carlo Gamma bound.
"""

import math

import numpy as np
import pytest

from catalog.kernel_families import eigenvalues, identity_nu, perturbed
from catalog.test_functions import get_test_function
from models.behavior import malliavin_gauss as mg
from models.behavior.distances import d2_dictionary, d2_dictionary_members
from models.behavior.errors import ContractError
from models.domain.chaos import GaussChaosFunctional
from models.domain.gamma_params import CenteredGammaParams


def _first_chaos():
    f = np.array([0.6, 0.8])
    return GaussChaosFunctional(2, 1, f, name="unit")


def _mixed():
    return GaussChaosFunctional(1, 1, [1.0], mixture=((2, [[1.0]]),), name="mixed")


def test_evaluation_of_each_level():
    x = np.array([2.0])
    F = _mixed()
    # x + (x² − 1)
    assert mg.eval_chaos(F, x) == pytest.approx(5.0)
    rows = np.array([[0.0], [1.0], [-1.0]])
    assert np.allclose(mg.eval_chaos(F, rows), [-1.0, 1.0, -1.0])


def test_first_chaos_inner_product_is_kernel_norm():
    F = _first_chaos()
    for x in ([0.0, 0.0], [3.0, -1.0]):
        assert mg.malliavin_inner(F, np.array(x)) == pytest.approx(1.0)
    assert np.allclose(mg.malliavin_derivative(F, np.array([1.0, 2.0])), [0.6, 0.8])


def test_mixture_weights_levels_by_order():
    F = _mixed()
    x = np.array([2.0])
    assert np.allclose(mg.malliavin_derivative(F, x), [5.0])
    # ⟨1 + 2x, 1 + x⟩ at x = 2
    assert mg.malliavin_inner(F, x) == pytest.approx(15.0)
    assert F.variance() == pytest.approx(3.0)
    assert not F.is_pure


def test_wrong_vector_length():
    with pytest.raises(ContractError):
        mg.eval_chaos(_first_chaos(), np.zeros(3))


@pytest.mark.parametrize("nu", [1, 3, 5])
def test_identity_family_has_no_defect(nu):
    F = identity_nu(nu)
    x = np.random.default_rng(nu).standard_normal((100, nu))
    assert np.max(np.abs(mg.gamma_defect(F, float(nu), x))) < 1e-12
    result = mg.gauss_gamma_bound(F, float(nu), n_samples=10_000, seed=1)
    assert result.bound == pytest.approx(0.0, abs=1e-12)
    assert result.l2_term == pytest.approx(0.0, abs=1e-12)
    assert result.pure


def test_bound_is_reproducible_across_threads():
    F = eigenvalues([1.0, 0.7, 0.3], seed=2)
    a = mg.gauss_gamma_bound(F, 1.0, n_samples=20_000, seed=3, threads=1)
    b = mg.gauss_gamma_bound(F, 1.0, n_samples=20_000, seed=3, threads=4)
    assert a.to_dict() == b.to_dict()
    assert a.bound > 0.0
    assert a.jensen_ok


def test_small_nu_uses_the_larger_coefficient():
    F = identity_nu(1)
    # 2(F + ν) − ⟨DF, −DL⁻¹F⟩ = 2(ν − 1) for F = x² − 1
    result = mg.gauss_gamma_bound(F, 0.5, n_samples=10_000, seed=1)
    assert result.bound == pytest.approx(4.0 * 1.0, rel=1e-12)


def test_bound_needs_enough_samples():
    with pytest.raises(ContractError):
        mg.gauss_gamma_bound(identity_nu(2), 2.0, n_samples=9_999)


def test_perturbation_trend_grows_with_eps():
    seq = [perturbed(2, eps) for eps in (0.0, 0.1, 0.3)]
    trend = mg.sar_condition_trend(seq, 2.0, n_samples=20_000, seed=4)
    assert trend[0] == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < trend[1] < trend[2]


def test_sampled_law_matches_centered_chi_square():
    samples = mg.sample_gauss_chaos(identity_nu(2), 200_000, seed=6)
    assert samples.mean() == pytest.approx(0.0, abs=0.03)
    assert samples.var() == pytest.approx(4.0, rel=0.03)
    assert samples.min() > -2.0


def test_integration_by_parts():
    report = mg.gauss_ibp_check(eigenvalues([1.0, 0.5], seed=1), get_test_function("arctan"), 100_000, seed=8)
    assert report.ok, report.to_dict()
    assert report.model == "gauss"


@pytest.mark.slow
@pytest.mark.parametrize("eps", [0.05, 0.2, 0.5])
def test_bound_dominates_empirical_d2_for_perturbed_kernels(eps):
    F = perturbed(2, eps)
    nu = F.variance() / 2.0
    result = mg.gauss_gamma_bound(F, nu, n_samples=200_000, seed=3)
    samples = mg.sample_gauss_chaos(F, 200_000, seed=11)
    d2 = d2_dictionary(samples, CenteredGammaParams(nu))
    h = next(m for m in d2_dictionary_members() if m.name == d2.argmax)
    noise = float(np.std(h.evaluate_many(samples))) / math.sqrt(samples.size)
    assert d2.value <= result.bound + 4.0 * (result.stderr + noise), (d2.to_dict(), result.to_dict())
