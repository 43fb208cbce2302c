"""
tests/test_model_factory.py

Date: 2026-10-18

Building product-space and chaos models from JSON descriptions.
"""

import pytest

from models.behavior.errors import ConfigurationError
from models.behavior.hoeffding import hoeffding_decompose, verify_degeneracy
from models.behavior.model_factory import ModelFactory
from models.domain.chaos import GaussChaosFunctional, PoissonChaosFunctional

RADEMACHER = {"support": [-1, 1], "probs": [0.5, 0.5]}


def test_named_product_family():
    model = ModelFactory.product_model({"family": "rademacher-quadratic", "n": 5})
    assert model.space.n == 5
    assert model.rho2 == pytest.approx(0.8)


def test_named_family_with_bad_params():
    with pytest.raises(ConfigurationError):
        ModelFactory.product_model({"family": "multilinear", "n": 4, "params": {"order": 2}})


def test_unknown_product_family():
    with pytest.raises(ConfigurationError):
        ModelFactory.product_model({"family": "nope", "n": 4})


def test_terms_kernel():
    model = ModelFactory.product_model(
        {
            "iid": {"factor": RADEMACHER, "n": 3},
            "kernel": {"terms": [{"J": [0, 1], "coef": 1.0}, {"J": [1, 2], "coef": 1.0}]},
            "d": 2,
            "nu": 1.0,
        }
    )
    dec = hoeffding_decompose(model.kernel, model.space)
    assert verify_degeneracy(dec, 2)
    assert float(dec.variance) == pytest.approx(2.0)


def test_table_kernel_on_explicit_factors():
    model = ModelFactory.product_model(
        {
            "factors": [RADEMACHER, RADEMACHER],
            "kernel": {"table": [[1.0, -1.0], [-1.0, 1.0]]},
            "d": 2,
            "nu": 0.5,
        }
    )
    assert model.kernel.table.shape == (2, 2)


def test_table_shape_mismatch():
    with pytest.raises(ConfigurationError):
        ModelFactory.product_model(
            {"factors": [RADEMACHER, RADEMACHER], "kernel": {"table": [[1.0, 2.0]]}, "d": 2, "nu": 1.0}
        )


def test_term_outside_the_space():
    with pytest.raises(ConfigurationError):
        ModelFactory.product_model(
            {"iid": {"factor": RADEMACHER, "n": 2}, "kernel": {"terms": [{"J": [0, 4], "coef": 1.0}]}, "d": 2, "nu": 1.0}
        )


def test_all_shape_problems_are_reported_together():
    with pytest.raises(ConfigurationError) as err:
        ModelFactory.product_model({"kernel": {}, "d": 0, "nu": -1})
    assert len(err.value.problems) == 4


def test_probabilities_must_sum_to_one():
    with pytest.raises(ConfigurationError):
        ModelFactory.product_model(
            {
                "iid": {"factor": {"support": [0, 1], "probs": [0.5, 0.6]}, "n": 2},
                "kernel": {"terms": [{"J": [0, 1], "coef": 1.0}]},
                "d": 2,
                "nu": 1.0,
            }
        )


def test_explicit_gauss_functional():
    F = ModelFactory.chaos_model(
        "gauss",
        {"dim": 2, "order": 2, "kernel": [[1.0, 0.0], [0.0, 1.0]], "mixture": [{"order": 1, "kernel": [0.5, 0.0]}]},
    )
    assert isinstance(F, GaussChaosFunctional)
    assert F.variance() == pytest.approx(4.25)


def test_explicit_poisson_functional():
    F = ModelFactory.chaos_model("poisson", {"mu": [0.5, 0.5], "order": 2, "kernel": [[0.0, 1.0], [1.0, 0.0]]})
    assert isinstance(F, PoissonChaosFunctional)
    assert F.variance() == pytest.approx(2.0 * 2.0 * 0.25)


def test_named_chaos_family():
    F = ModelFactory.chaos_model("gauss", {"family": "identity_nu", "params": {"nu": 3}})
    assert F.variance() == pytest.approx(6.0)


def test_asymmetric_kernel_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        ModelFactory.chaos_model("gauss", {"dim": 2, "order": 2, "kernel": [[0.0, 1.0], [0.0, 0.0]]})


def test_unknown_chaos_model():
    with pytest.raises(ConfigurationError):
        ModelFactory.chaos_model("levy", {"family": "x"})


def test_chaos_order_and_shape_checks():
    with pytest.raises(ConfigurationError):
        ModelFactory.chaos_model("gauss", {"dim": 2, "order": 3, "kernel": [1.0, 2.0]})
    with pytest.raises(ConfigurationError):
        ModelFactory.chaos_model("poisson", {"mu": [], "order": 1, "kernel": [1.0]})
