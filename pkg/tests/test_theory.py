import math

import pytest

from trafficweb.core.config import build_params
from trafficweb.core.errors import ParameterDomainError
from trafficweb.services import theory
from trafficweb.services.growth_service import run_growth


@pytest.mark.parametrize("delta, expected", [(0.0, 1.0), (0.5, 1.5), (2.0, 3.0)])
def test_a_approx_is_mean_weight(delta, expected):
    assert theory.a_approx(delta) == expected


def test_theta_examples():
    assert theory.theta(0.0, 2, 1.0) == pytest.approx(2 / 3)
    assert theory.theta(0.5, 2, 1.5) == pytest.approx(0.75)
    assert theory.theta(1000.0, 2, 1001.0) == pytest.approx(1001.0 / 1001.5)


def test_theta_domain():
    with pytest.raises(ParameterDomainError):
        theory.theta(-0.1, 2, 1.0)
    with pytest.raises(ParameterDomainError):
        theory.theta(0.5, 0, 1.0)
    with pytest.raises(ParameterDomainError):
        theory.theta(0.5, 2, 0.0)


def test_gamma_from_theta():
    assert theory.gamma_from_theta(1.0) == 2.0
    assert theory.gamma_from_theta(2 / 3) == pytest.approx(2.5)
    assert theory.gamma_from_theta(0.855) == pytest.approx(2.17, abs=0.01)
    for bad in (0.0, -0.5, 1.01):
        with pytest.raises(ParameterDomainError):
            theory.gamma_from_theta(bad)


def test_theta_from_gamma_inverts():
    assert theory.theta_from_gamma(2.5) == pytest.approx(2 / 3)
    assert theory.gamma_from_theta(theory.theta_from_gamma(2.17)) == pytest.approx(2.17)
    with pytest.raises(ParameterDomainError):
        theory.theta_from_gamma(1.9)


def test_a_from_gamma():
    a_value = theory.a_from_gamma(2.17, m=2, delta=0.5)
    assert a_value == pytest.approx(1.709, abs=1e-3)
    assert theory.predict(2, 0.5, a_value).gamma == pytest.approx(2.17)


def test_predicted_strength():
    assert theory.predicted_strength(50, 50, 0.8) == 1.0
    assert theory.predicted_strength(10, 1000, 1.0) == pytest.approx(100.0)
    assert theory.predicted_strength(100, 100_000, 0.75) == pytest.approx(177.827941, rel=1e-6)
    with pytest.raises(ParameterDomainError):
        theory.predicted_strength(10, 5, 0.75)
    with pytest.raises(ParameterDomainError):
        theory.predicted_strength(0, 5, 0.75)


def test_expected_total_in_strength():
    assert theory.expected_total_in_strength(0, 2, 0.5) == 0.0
    assert theory.expected_total_in_strength(10, 2, 0.5) == pytest.approx(40.0)
    with pytest.raises(ParameterDomainError):
        theory.expected_total_in_strength(-1, 2, 0.5)


@pytest.mark.parametrize("m, delta", [(1, 0.0), (2, 0.5), (3, 2.0)])
def test_total_strength_matches_simulation(m, delta):
    state, _ = run_growth(build_params(m=m, delta=delta, n_final=10_000, rng_seed=m))
    grown = state.total_in_strength - state.initial_total_in_strength
    assert grown == pytest.approx(theory.expected_total_in_strength(state.t, m, delta), rel=1e-9)


def test_predict_without_reinforcement():
    prediction = theory.predict(2, 0.0)
    assert prediction.A == 1.0
    assert prediction.theta == pytest.approx(2 / 3)
    assert prediction.gamma == pytest.approx(2.5)
    assert prediction.mean_weight == 1.0
    assert prediction.a_source == "approx"


def test_predict_with_measured_a():
    prediction = theory.predict(2, 0.5, 1.71)
    assert prediction.a_source == "measured"
    assert prediction.theta == pytest.approx(0.855)
    assert prediction.gamma == pytest.approx(2.17, abs=0.01)


def test_predict_with_a_beyond_range_has_no_exponent():
    prediction = theory.predict(2, 0.5, 2.5)
    assert prediction.theta > 1
    assert math.isnan(prediction.gamma)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_exponent_stays_in_bracket_and_falls_with_delta(m):
    low, high = theory.gamma_bracket(m)
    assert (low, high) == (2.0, 2.0 + 1.0 / m)
    sweep = theory.exponent_sweep([0.0, 0.1, 0.5, 1.0, 5.0, 50.0, 1e4], [m])
    gammas = [p.gamma for p in sweep]
    assert gammas[0] == pytest.approx(high)
    assert all(low < g <= high + 1e-12 for g in gammas)
    assert all(a > b for a, b in zip(gammas, gammas[1:]))
    assert gammas[-1] == pytest.approx(2.0, abs=1e-3)


def test_gamma_bracket_domain():
    with pytest.raises(ParameterDomainError):
        theory.gamma_bracket(0)
