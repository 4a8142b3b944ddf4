from typing import Optional, Sequence

from trafficweb.core.config import SWEEP_DELTAS, ModelParams
from trafficweb.services import theory
from trafficweb.services.report_service import report_service


def run_predict(params: ModelParams, a: Optional[float] = None, echo: bool = True) -> theory.Prediction:
    """Print A, theta, gamma, <w> and the gamma bracket for the given m and delta"""
    prediction = theory.predict(params.m, params.delta, a)
    if echo:
        print(report_service.render_prediction(prediction, theory.gamma_bracket(params.m)))
    return prediction


def format_sweep(m: int, deltas: Sequence[float] = SWEEP_DELTAS) -> str:
    """Approximate-A exponent for a range of delta at fixed m"""
    lines = [f"gamma(delta) at m={m}, A = delta + 1", "delta\ttheta\tgamma"]
    for p in theory.exponent_sweep(deltas, [m]):
        lines.append(f"{p.delta:g}\t{p.theta:.4f}\t{p.gamma:.4f}")
    return "\n".join(lines)
