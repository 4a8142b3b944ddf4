import logging
import math
from pathlib import Path
from typing import Dict, List, Optional

from trafficweb.commands.analyze import load_input
from trafficweb.core.config import RunConfig, ensure_out_dir
from trafficweb.core.errors import ParameterDomainError
from trafficweb.services import analysis_service, io_service, theory
from trafficweb.services.graph_view import GraphView
from trafficweb.services.report_service import report_service

logger = logging.getLogger(__name__)


def _measured_strength_per_step(view: GraphView) -> float:
    """Growth of the total attachment strength (in-edge weights plus one per node) per added node"""
    steps = view.n - view.n0
    if steps <= 0:
        return float("nan")
    seed_total = view.n0 * (1.0 + view.m)
    return (float(view.s_in.sum()) + view.n - seed_total) / steps


def run_compare(config: RunConfig, view: Optional[GraphView] = None, echo: bool = True) -> List[Dict]:
    """Measured observables next to the approximate-A and measured-A predictions"""
    view = view if view is not None else load_input(config)
    if view.m is None or view.delta is None or view.n0 is None:
        raise ParameterDomainError("Comparison needs m, delta and n0 in the edge-list header")
    out_dir = ensure_out_dir(config.out_dir)

    summary = analysis_service.summarize(view, config.x_min, config.bin_ratio)
    approx = theory.predict(view.m, view.delta)
    a_measured = summary["A_measured"]
    measured = theory.predict(view.m, view.delta, a_measured) if math.isfinite(a_measured) else None
    nan = float("nan")

    rows = [
        {"name": "A", "approx": approx.A, "from_a": a_measured, "measured": a_measured},
        {"name": "theta", "approx": approx.theta, "from_a": measured.theta if measured else nan,
         "measured": nan},
        {"name": "gamma (k_in)", "approx": approx.gamma, "from_a": measured.gamma if measured else nan,
         "measured": summary["gamma_kin_mle"]},
        {"name": "gamma (s_in)", "approx": approx.gamma, "from_a": measured.gamma if measured else nan,
         "measured": summary["gamma_sin_mle"]},
        {"name": "gamma (s_out)", "approx": approx.gamma, "from_a": measured.gamma if measured else nan,
         "measured": summary["gamma_sout_mle"]},
        {"name": "gamma (w)", "approx": approx.gamma, "from_a": measured.gamma if measured else nan,
         "measured": summary["gamma_w_mle"]},
        {"name": "<w>", "approx": approx.mean_weight, "from_a": approx.mean_weight,
         "measured": summary["mean_weight"]},
        {"name": "strength per step", "approx": 1.0 + view.m + view.m * view.delta,
         "from_a": 1.0 + view.m + view.m * view.delta, "measured": _measured_strength_per_step(view)},
    ]

    path = io_service.write_rows(
        ("quantity", "approx_A", "measured_A", "measured"),
        ((row["name"], float(row["approx"]), float(row["from_a"]), float(row["measured"])) for row in rows),
        Path(out_dir) / "compare.tsv",
        title="model vs measurement",
    )
    logger.info(f"Comparison written to {path}")
    if echo:
        print(report_service.render_comparison(
            {"rows": rows, "n_nodes": view.n, "m": view.m, "delta": view.delta}
        ))
    return rows
