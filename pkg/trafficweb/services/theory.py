"""Closed-form predictions of the continuum (mean-field) solution.

With the proportionality s_in = A k_in, every node's in-strength grows as
(t / i)^theta with theta = A / (delta + 1 + 1/m), and s_in, k_in and s_out
share the tail exponent gamma = 1 + 1/theta. A ~ <w> = delta + 1 is the
approximate pathway; a measured A can be passed instead.
"""
from typing import Iterable, List, Optional, Tuple

from pydantic import BaseModel

from trafficweb.core.errors import ParameterDomainError


class Prediction(BaseModel):
    m: int
    delta: float
    A: float
    theta: float
    gamma: float
    mean_weight: float
    a_source: str


def _check_model(delta: float, m: int) -> None:
    if delta < 0:
        raise ParameterDomainError(f"delta must be non-negative, got {delta}")
    if m < 1:
        raise ParameterDomainError(f"m must be at least 1, got {m}")


def a_approx(delta: float) -> float:
    """A approximated by the mean edge weight <w> = delta + 1"""
    if delta < 0:
        raise ParameterDomainError(f"delta must be non-negative, got {delta}")
    return delta + 1.0


def theta(delta: float, m: int, A: float) -> float:
    _check_model(delta, m)
    if not A > 0:
        raise ParameterDomainError(f"A must be positive, got {A}")
    return A / (delta + 1.0 + 1.0 / m)


def gamma_from_theta(theta_value: float) -> float:
    if not 0 < theta_value <= 1:
        raise ParameterDomainError(f"theta must lie in (0, 1], got {theta_value}")
    return 1.0 + 1.0 / theta_value


def theta_from_gamma(gamma: float) -> float:
    if not gamma >= 2:
        raise ParameterDomainError(f"gamma must be at least 2, got {gamma}")
    return 1.0 / (gamma - 1.0)


def a_from_gamma(gamma: float, m: int, delta: float) -> float:
    """The A that would produce tail exponent gamma"""
    _check_model(delta, m)
    return theta_from_gamma(gamma) * (delta + 1.0 + 1.0 / m)


def gamma_bracket(m: int) -> Tuple[float, float]:
    """Range of the approximate exponent: 2 as delta -> inf, 2 + 1/m at delta = 0"""
    if m < 1:
        raise ParameterDomainError(f"m must be at least 1, got {m}")
    return 2.0, 2.0 + 1.0 / m


def predicted_strength(i: float, t: float, theta_value: float) -> float:
    if not 1 <= i <= t:
        raise ParameterDomainError(f"need t >= i >= 1, got i={i}, t={t}")
    return (t / i) ** theta_value


def expected_total_in_strength(t: float, m: int, delta: float) -> float:
    """Large-time total in-strength m (1 + 1/m + delta) t"""
    _check_model(delta, m)
    if t < 0:
        raise ParameterDomainError(f"t must be non-negative, got {t}")
    return m * (1.0 + 1.0 / m + delta) * t


def predict(m: int, delta: float, A: Optional[float] = None) -> Prediction:
    source = "measured" if A is not None else "approx"
    a_value = A if A is not None else a_approx(delta)
    theta_value = theta(delta, m, a_value)
    # theta > 1 (A above delta + 1 + 1/m) leaves the exponent undefined
    gamma = gamma_from_theta(theta_value) if theta_value <= 1 else float("nan")
    return Prediction(
        m=m,
        delta=delta,
        A=a_value,
        theta=theta_value,
        gamma=gamma,
        mean_weight=delta + 1.0,
        a_source=source,
    )


def exponent_sweep(deltas: Iterable[float], ms: Iterable[int]) -> List[Prediction]:
    """Approximate-A exponent as a function of delta, one curve per m"""
    deltas = list(deltas)
    return [predict(m, delta) for m in ms for delta in deltas]
