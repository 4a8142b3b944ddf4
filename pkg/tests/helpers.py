from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from trafficweb.core.config import build_params
from trafficweb.services.graph_view import GraphView
from trafficweb.services.growth_service import run_growth


def make_view(
    n: int,
    edges: Iterable[Tuple[int, int]],
    weights: Optional[Sequence[float]] = None,
    **meta,
) -> GraphView:
    edges = list(edges)
    src = np.array([a for a, _ in edges], dtype=np.int64)
    dst = np.array([b for _, b in edges], dtype=np.int64)
    weight = np.ones(len(edges)) if weights is None else np.asarray(weights, dtype=np.float64)
    return GraphView(n=n, src=src, dst=dst, weight=weight, birth=np.arange(n, dtype=np.int64), **meta)


def grow_view(m: int = 2, delta: float = 0.5, n: int = 2000, seed: int = 1, **extra) -> GraphView:
    params = build_params(m=m, delta=delta, n_final=n, rng_seed=seed, **extra)
    state, _ = run_growth(params)
    return GraphView.from_state(state)


def pareto_samples(gamma: float, size: int, seed: int, x_min: float = 1.0) -> np.ndarray:
    """Inverse-CDF draws from P(x) ~ x^-gamma, x >= x_min"""
    u = np.random.default_rng(seed).random(size)
    return x_min * (1.0 - u) ** (-1.0 / (gamma - 1.0))
