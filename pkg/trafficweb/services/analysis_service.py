"""
Observables of a completed graph: distributions and their tail exponents,
the strength-degree slope A, the clustering spectrum and the degree
correlation spectra (undirected and directed).

Every spectrum groups nodes into integer classes and averages in fixed
class order, so results do not depend on iteration order.
"""
import logging
import math
from typing import Callable, Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel
from scipy import stats

from trafficweb.core.config import (
    DEFAULT_BIN_RATIO,
    MIN_TAIL_SIZE,
    RELIABLE_CLASS_SIZE,
    STRENGTH_CLASS_SIZE,
)
from trafficweb.core.errors import (
    EmptyInputError,
    ParameterDomainError,
    TrafficWebError,
    UnreliableFitError,
)
from trafficweb.services import theory
from trafficweb.services.graph_view import GraphView

logger = logging.getLogger(__name__)

Quantity = Literal["k_in", "w", "s_in", "s_out"]
QUANTITIES: Tuple[str, ...] = ("k_in", "w", "s_in", "s_out")


class SpectrumRow(BaseModel):
    x: float
    count: int
    value: float
    reliable: bool = True


class SpectrumTable(BaseModel):
    name: str
    x_label: str = "k"
    value_label: str = "mean"
    rows: List[SpectrumRow] = []

    def xs(self) -> np.ndarray:
        return np.array([row.x for row in self.rows], dtype=np.float64)

    def values(self) -> np.ndarray:
        return np.array([row.value for row in self.rows], dtype=np.float64)

    def reliable(self) -> "SpectrumTable":
        return self.model_copy(update={"rows": [row for row in self.rows if row.reliable]})

    def as_dict(self) -> Dict[float, float]:
        return {row.x: row.value for row in self.rows}


class FitResult(BaseModel):
    exponent: float
    stderr: float
    x_min: float
    method: Literal["mle", "logbin-regression"]
    n_tail: int
    reliable: bool = True


class StrengthDegreeFit(BaseModel):
    A: float
    loglog_slope: float
    n_classes: int
    table: SpectrumTable


class TrendResult(BaseModel):
    spearman: float
    loglog_slope: float
    n_rows: int


def _class_table(
    name: str,
    classes: np.ndarray,
    values: np.ndarray,
    x_label: str = "k",
    value_label: str = "mean",
    min_reliable: int = RELIABLE_CLASS_SIZE,
) -> SpectrumTable:
    if classes.size == 0:
        return SpectrumTable(name=name, x_label=x_label, value_label=value_label, rows=[])
    levels, inverse = np.unique(classes, return_inverse=True)
    counts = np.bincount(inverse)
    sums = np.bincount(inverse, weights=values.astype(np.float64))
    rows = [
        SpectrumRow(
            x=float(level),
            count=int(count),
            value=float(total / count),
            reliable=bool(count >= min_reliable),
        )
        for level, count, total in zip(levels, counts, sums)
    ]
    return SpectrumTable(name=name, x_label=x_label, value_label=value_label, rows=rows)


# ---------------------------------------------------------------------------
# Distributions and fits
# ---------------------------------------------------------------------------


def distribution(view: GraphView, which: Quantity) -> np.ndarray:
    """Raw samples of a per-node quantity, or of all edge weights for 'w'"""
    if which not in QUANTITIES:
        raise ParameterDomainError(f"Unknown quantity '{which}'; expected one of {', '.join(QUANTITIES)}")
    if view.n == 0:
        raise EmptyInputError("Graph has no nodes")
    if which == "w":
        if view.n_edges == 0:
            raise EmptyInputError("Graph has no edges")
        return view.weight.copy()
    if which == "k_in":
        return view.k_in.astype(np.float64)
    if which == "s_in":
        return view.s_in.copy()
    return view.s_out.copy()


def log_bin(samples: Sequence[float], ratio: float = DEFAULT_BIN_RATIO) -> SpectrumTable:
    """
    Histogram over geometric bins [x, x * ratio) starting at the smallest
    sample. Rows carry the geometric bin center and the density normalised
    by bin width and sample count; empty bins are dropped.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise EmptyInputError("No samples to bin")
    if not ratio > 1:
        raise ParameterDomainError(f"Bin ratio must exceed 1, got {ratio}")
    if not np.all(x > 0):
        raise ParameterDomainError("Log-binning needs strictly positive samples")

    lo, hi = float(x.min()), float(x.max())
    n_bins = int(math.floor(math.log(hi / lo) / math.log(ratio))) + 1
    edges = lo * ratio ** np.arange(n_bins + 1, dtype=np.float64)
    if edges[-1] <= hi:
        edges = np.append(edges, edges[-1] * ratio)
    counts, _ = np.histogram(x, bins=edges)
    widths = np.diff(edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    density = counts / (x.size * widths)
    rows = [
        SpectrumRow(x=float(c), count=int(k), value=float(d), reliable=bool(k >= RELIABLE_CLASS_SIZE))
        for c, k, d in zip(centers, counts, density)
        if k > 0
    ]
    return SpectrumTable(name="log_bin", x_label="x", value_label="density", rows=rows)


def _tail(samples: Sequence[float], x_min: float) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise EmptyInputError("No samples to fit")
    if not x_min > 0:
        raise ParameterDomainError(f"x_min must be positive, got {x_min}")
    tail = x[x >= x_min]
    if tail.size < MIN_TAIL_SIZE:
        raise UnreliableFitError(f"Only {tail.size} samples >= {x_min:g}; need at least {MIN_TAIL_SIZE}")
    if tail.min() == tail.max():
        raise UnreliableFitError("Tail samples are all identical (zero log-spread)")
    return tail


def fit_power_law_mle(samples: Sequence[float], x_min: float) -> FitResult:
    """Continuous maximum-likelihood exponent of the tail x >= x_min"""
    tail = _tail(samples, x_min)
    n = tail.size
    log_sum = float(np.sum(np.log(tail / x_min)))
    if not log_sum > 0:
        raise UnreliableFitError("Tail has zero log-spread above x_min")
    exponent = 1.0 + n / log_sum
    return FitResult(
        exponent=exponent,
        stderr=(exponent - 1.0) / math.sqrt(n),
        x_min=float(x_min),
        method="mle",
        n_tail=int(n),
    )


def fit_power_law_logbin(samples: Sequence[float], x_min: float, ratio: float = DEFAULT_BIN_RATIO) -> FitResult:
    """Least-squares slope of the log-binned tail density on log-log axes"""
    tail = _tail(samples, x_min)
    # Sparse far-tail bins sit above the true density once empty bins are dropped
    table = log_bin(tail, ratio).reliable()
    if len(table.rows) < 3:
        raise UnreliableFitError(f"Only {len(table.rows)} well-populated bins above x_min={x_min:g}")
    result = stats.linregress(np.log(table.xs()), np.log(table.values()))
    return FitResult(
        exponent=float(-result.slope),
        stderr=float(result.stderr),
        x_min=float(x_min),
        method="logbin-regression",
        n_tail=int(tail.size),
    )


def fit_sensitivity(
    samples: Sequence[float], x_min: float, factors: Iterable[float] = (0.5, 1.0, 2.0, 4.0)
) -> List[FitResult]:
    """MLE exponent at several cutoffs around x_min; cutoffs that cannot be fit are skipped"""
    results = []
    for factor in factors:
        try:
            results.append(fit_power_law_mle(samples, x_min * factor))
        except UnreliableFitError as e:
            logger.warning(f"Skipping x_min={x_min * factor:g} in sensitivity scan: {str(e)}")
    return results


def fit_strength_degree(
    k: Sequence[float], s: Sequence[float], min_class_size: int = STRENGTH_CLASS_SIZE
) -> StrengthDegreeFit:
    """
    A = slope of the least-squares line through the origin of the class
    means s(k) over classes with at least min_class_size nodes. The log-log
    slope of the same points is reported as a linearity check (expected 1).
    """
    k = np.asarray(k)
    s = np.asarray(s, dtype=np.float64)
    mask = k >= 1
    table = _class_table("strength_degree", k[mask].astype(np.int64), s[mask], x_label="k_in", value_label="mean_s_in")
    usable = [row for row in table.rows if row.count >= min_class_size]
    if len(usable) < 3:
        raise UnreliableFitError(f"Only {len(usable)} k_in classes with at least {min_class_size} nodes")
    kx = np.array([row.x for row in usable], dtype=np.float64)
    sy = np.array([row.value for row in usable], dtype=np.float64)
    a_value = float(np.dot(kx, sy) / np.dot(kx, kx))
    loglog = float(np.polyfit(np.log(kx), np.log(sy), 1)[0])
    return StrengthDegreeFit(A=a_value, loglog_slope=loglog, n_classes=len(usable), table=table)


def strength_degree_slope(view: GraphView, min_class_size: int = STRENGTH_CLASS_SIZE) -> StrengthDegreeFit:
    return fit_strength_degree(view.k_in, view.s_in, min_class_size)


# ---------------------------------------------------------------------------
# Clustering and correlation spectra
# ---------------------------------------------------------------------------


def local_clustering(view: GraphView, i: int) -> float:
    """Fraction of linked neighbour pairs of i in the undirected projection; 0 when k < 2"""
    if not 0 <= i < view.n:
        raise ParameterDomainError(f"Node {i} does not exist in a graph of {view.n} nodes")
    return float(nx.clustering(view.undirected, i))


def clustering_values(view: GraphView) -> np.ndarray:
    values = nx.clustering(view.undirected)
    return np.fromiter((values[i] for i in range(view.n)), dtype=np.float64, count=view.n)


def mean_clustering(view: GraphView) -> float:
    if view.n == 0:
        raise EmptyInputError("Graph has no nodes")
    return float(np.mean(clustering_values(view)))


def clustering_spectrum(view: GraphView, min_degree: int = 2) -> SpectrumTable:
    """Mean local clustering per undirected degree class k >= min_degree"""
    degree = view.degree
    mask = degree >= min_degree
    return _class_table("clustering", degree[mask], clustering_values(view)[mask], value_label="C")


def knn_spectrum(view: GraphView) -> SpectrumTable:
    """Mean nearest-neighbour degree per undirected degree class"""
    values = nx.average_neighbor_degree(view.undirected)
    knn = np.fromiter((values[i] for i in range(view.n)), dtype=np.float64, count=view.n)
    degree = view.degree
    mask = degree >= 1
    return _class_table("knn", degree[mask], knn[mask], value_label="knn")


def knn_in_in_values(view: GraphView) -> Tuple[np.ndarray, np.ndarray]:
    """Average in-degree of in-neighbours, for nodes with k_in >= 1 (node ids, values)"""
    k_in = view.k_in
    sums = np.bincount(view.dst, weights=k_in[view.src].astype(np.float64), minlength=view.n)
    nodes = np.flatnonzero(k_in >= 1)
    return nodes, sums[nodes] / k_in[nodes]


def knn_in_out_values(view: GraphView) -> Tuple[np.ndarray, np.ndarray]:
    """Average in-degree of out-neighbours, for nodes with k_out >= 1 (node ids, values)"""
    k_in, k_out = view.k_in, view.k_out
    sums = np.bincount(view.src, weights=k_in[view.dst].astype(np.float64), minlength=view.n)
    nodes = np.flatnonzero(k_out >= 1)
    return nodes, sums[nodes] / k_out[nodes]


def knn_in_in_spectrum(view: GraphView) -> SpectrumTable:
    nodes, values = knn_in_in_values(view)
    return _class_table("knn_in_in", view.k_in[nodes], values, x_label="k_in", value_label="knn_in_in")


def knn_in_out_spectrum(view: GraphView) -> SpectrumTable:
    """Grouped by k_in, including the k_in = 0 class; log-axis trends skip that row"""
    nodes, values = knn_in_out_values(view)
    return _class_table("knn_in_out", view.k_in[nodes], values, x_label="k_in", value_label="knn_in_out")


def spectrum_trend(table: SpectrumTable, reliable_only: bool = True) -> TrendResult:
    """Spearman correlation and regression slope of (log x, log value)"""
    rows = [row for row in table.rows if (row.reliable or not reliable_only) and row.x > 0 and row.value > 0]
    if len(rows) < 3:
        raise UnreliableFitError(f"Spectrum '{table.name}' has only {len(rows)} usable rows")
    log_x = np.log([row.x for row in rows])
    log_v = np.log([row.value for row in rows])
    rho, _ = stats.spearmanr(log_x, log_v)
    slope = stats.linregress(log_x, log_v).slope
    return TrendResult(spearman=float(rho), loglog_slope=float(slope), n_rows=len(rows))


def class_weighted_mean(table: SpectrumTable, reliable_only: bool = False) -> float:
    rows = [row for row in table.rows if row.reliable or not reliable_only]
    total = sum(row.count for row in rows)
    if total == 0:
        raise EmptyInputError(f"Spectrum '{table.name}' has no rows")
    return sum(row.count * row.value for row in rows) / total


def trajectory_slope(points: Sequence[Tuple[int, float, int]], decades: float = 2.0) -> float:
    """Log-log growth slope of s_in(t) over the last `decades` decades of the run"""
    data = np.asarray([(t, s) for t, s, _ in points if t > 0], dtype=np.float64)
    if data.size == 0:
        raise EmptyInputError("Trajectory has no points")
    t, s = data[:, 0], data[:, 1]
    window = t >= t.max() / 10**decades
    if np.count_nonzero(window) < 3:
        raise UnreliableFitError(f"Only {np.count_nonzero(window)} trajectory points in the last {decades:g} decades")
    return float(np.polyfit(np.log(t[window]), np.log(s[window]), 1)[0])


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


def view_invariant_violations(view: GraphView) -> Dict[str, float]:
    """
    Out-strength rule and equal out-weights on a loaded graph. Seed nodes
    received m ring links before growth started; those are not counted.
    """
    if view.m is None or view.delta is None or view.n == 0:
        return {}
    k_growth = view.k_in - view.m * view.is_seed.astype(np.int64)
    expected = view.m + view.delta * k_growth
    s_out = view.s_out
    out_strength = np.abs(s_out - expected) / np.maximum(np.abs(expected), 1.0)
    per_edge = s_out[view.src] / np.maximum(view.k_out[view.src], 1)
    asymmetry = np.abs(view.weight - per_edge) / np.maximum(per_edge, 1.0) if view.n_edges else np.zeros(0)
    return {
        "max_out_strength_violation": float(out_strength.max(initial=0.0)),
        "max_weight_asymmetry": float(asymmetry.max(initial=0.0)),
    }


def tail_thresholds(x_min: float, m: int, delta: float, A: float) -> Dict[str, float]:
    """Images of the k_in cutoff in the other quantities"""
    return {
        "k_in": x_min,
        "s_in": (A if math.isfinite(A) else 1.0) * x_min,
        "s_out": m + delta * x_min,
        "w": 1.0 + delta * x_min / m,
    }


def _attempt(label: str, fn: Callable[[], float]) -> float:
    try:
        return fn()
    except TrafficWebError as e:
        logger.warning(f"{label} unavailable: {str(e)}")
        return float("nan")


def summarize(view: GraphView, x_min: float, ratio: float = DEFAULT_BIN_RATIO) -> Dict[str, float]:
    """Every scalar reported by the analysis, as key -> value"""
    if view.n == 0:
        raise EmptyInputError("Graph has no nodes")
    m = view.m if view.m is not None else int(view.k_out.max(initial=1))
    delta = view.delta if view.delta is not None else float("nan")

    summary: Dict[str, float] = {"n_nodes": float(view.n), "n_edges": float(view.n_edges)}

    strength: Optional[StrengthDegreeFit] = None
    try:
        strength = strength_degree_slope(view)
    except TrafficWebError as e:
        logger.warning(f"A_measured unavailable: {str(e)}")
    a_measured = strength.A if strength else float("nan")
    summary["A_measured"] = a_measured
    summary["A_loglog_slope"] = strength.loglog_slope if strength else float("nan")

    if math.isfinite(a_measured) and math.isfinite(delta):
        prediction = theory.predict(m, delta, a_measured)
        summary["theta_measured"] = prediction.theta
        summary["gamma_from_A"] = prediction.gamma
    else:
        summary["theta_measured"] = float("nan")
        summary["gamma_from_A"] = float("nan")
    summary["gamma_approx"] = theory.predict(m, delta).gamma if math.isfinite(delta) else float("nan")

    thresholds = tail_thresholds(x_min, m, delta if math.isfinite(delta) else 0.0, a_measured)
    keys = {"k_in": "gamma_kin_mle", "s_in": "gamma_sin_mle", "s_out": "gamma_sout_mle", "w": "gamma_w_mle"}
    for which, key in keys.items():
        samples = distribution(view, which) if (which != "w" or view.n_edges) else np.zeros(0)
        fit = None
        try:
            fit = fit_power_law_mle(samples, thresholds[which])
        except TrafficWebError as e:
            logger.warning(f"{key} unavailable: {str(e)}")
        summary[key] = fit.exponent if fit else float("nan")
        summary[f"{key}_stderr"] = fit.stderr if fit else float("nan")

    summary["mean_weight"] = float(view.weight.mean()) if view.n_edges else float("nan")
    summary["mean_clustering"] = _attempt("mean_clustering", lambda: mean_clustering(view))
    return summary
