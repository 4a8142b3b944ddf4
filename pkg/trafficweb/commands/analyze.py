import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from trafficweb.core.config import INVARIANT_TOLERANCE, RunConfig, ensure_out_dir
from trafficweb.core.errors import ParameterDomainError, TrafficWebError
from trafficweb.services import analysis_service, io_service
from trafficweb.services.graph_view import GraphView

logger = logging.getLogger(__name__)


@dataclass
class AnalyzeResult:
    paths: List[Path]
    summary: Dict[str, float]
    violations: Dict[str, float]
    skipped: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Every requested file was written and the input satisfies the model rules"""
        if self.skipped:
            return False
        return all(value <= INVARIANT_TOLERANCE for value in self.violations.values())


def load_input(config: RunConfig) -> GraphView:
    if config.input is None:
        raise ParameterDomainError("This command needs --input pointing to an edge list")
    return io_service.read_edge_list(config.input)


def run_analyze(config: RunConfig, view: Optional[GraphView] = None) -> AnalyzeResult:
    """
    Write log-binned distributions, spectra, the strength-degree class table,
    the fit summary and the x_min sensitivity scan for one graph.
    """
    view = view if view is not None else load_input(config)
    out_dir = ensure_out_dir(config.out_dir)
    paths: List[Path] = []
    skipped: List[str] = []

    for which in analysis_service.QUANTITIES:
        try:
            samples = analysis_service.distribution(view, which)
            positive = samples[samples > 0]
            if positive.size < samples.size:
                logger.info(f"{which}: {samples.size - positive.size} zero samples left out of the log-binned table")
            table = analysis_service.log_bin(positive, config.bin_ratio)
            paths.append(io_service.write_spectrum(table.model_copy(update={"name": f"distribution {which}"}),
                                                   out_dir / f"dist_{which}.tsv"))
        except TrafficWebError as e:
            logger.warning(f"Skipping distribution of {which}: {str(e)}")
            skipped.append(f"dist_{which}.tsv")

    spectra = {
        "clustering": lambda: analysis_service.clustering_spectrum(view),
        "knn": lambda: analysis_service.knn_spectrum(view),
        "knn_in_in": lambda: analysis_service.knn_in_in_spectrum(view),
        "knn_in_out": lambda: analysis_service.knn_in_out_spectrum(view),
    }
    for name, compute in spectra.items():
        paths.append(io_service.write_spectrum(compute(), out_dir / f"{name}.tsv"))

    summary = analysis_service.summarize(view, config.x_min, config.bin_ratio)
    try:
        strength = analysis_service.strength_degree_slope(view)
        paths.append(io_service.write_spectrum(strength.table, out_dir / "strength_degree.tsv"))
    except TrafficWebError as e:
        logger.warning(f"Skipping strength-degree table: {str(e)}")
        skipped.append("strength_degree.tsv")

    paths.append(io_service.write_key_values(summary, out_dir / "fit_summary.tsv", title="fit summary"))

    if view.n:
        sensitivity = analysis_service.fit_sensitivity(view.k_in.astype(float), config.x_min)
        paths.append(
            io_service.write_rows(
                ("x_min", "gamma_kin_mle", "stderr", "n_tail"),
                ((fit.x_min, fit.exponent, fit.stderr, fit.n_tail) for fit in sensitivity),
                out_dir / "fit_sensitivity.tsv",
                title="fit sensitivity",
            )
        )

    violations = analysis_service.view_invariant_violations(view)
    for key, value in violations.items():
        if value > INVARIANT_TOLERANCE:
            logger.error(f"Input graph violates {key}: {value:.3g}")
    if skipped:
        logger.error(f"Analysis could not write: {', '.join(skipped)}")
    logger.info(f"Analysis wrote {len(paths)} files to {out_dir}")
    return AnalyzeResult(paths=paths, summary=summary, violations=violations, skipped=skipped)
