import logging
import math
from concurrent.futures import FIRST_EXCEPTION, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Sequence

import numpy as np
from tqdm import tqdm

from trafficweb.commands.analyze import run_analyze
from trafficweb.commands.generate import run_generate
from trafficweb.core.config import RunConfig, ensure_out_dir
from trafficweb.core.errors import TrafficWebError
from trafficweb.core.rng import SeededRNG
from trafficweb.services import analysis_service, io_service, theory
from trafficweb.services.report_service import report_service

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("delta", "A_measured", "A_approx", "mean_clustering", "gamma_kin_mle", "gamma_approx")


@dataclass
class EnsembleReport:
    runs: List[Dict[str, float]]
    summary: Dict[str, Dict[str, float]]
    paths: List[Path] = field(default_factory=list)


@dataclass
class SweepReport:
    rows: List[Dict[str, float]]
    paths: List[Path] = field(default_factory=list)


def run_member(config: RunConfig, r: int) -> Dict[str, float]:
    """One ensemble member: grow with seed + r, analyse, summarise. Module level so worker processes can pickle it."""
    base = SeededRNG(config.params.rng_seed)
    rng = base.derive(r)
    params = config.params.model_copy(update={"rng_seed": rng.seed})
    member = config.model_copy(update={"params": params, "out_dir": Path(config.out_dir) / f"run_{r:03d}"})

    generated = run_generate(member, rng, echo=False)
    if not generated.passed:
        raise TrafficWebError(f"Run {r} (seed {rng.seed}) failed its invariant check")
    analyzed = run_analyze(member, view=generated.view)

    # run and seed stay ints; seeds go up to 2**64
    values = {"run": r, "seed": rng.seed}
    values.update(analyzed.summary)
    for node, trajectory in sorted(generated.trajectories.items()):
        try:
            values[f"slope_node{node}"] = analysis_service.trajectory_slope(trajectory.points)
        except TrafficWebError as e:
            logger.warning(f"Run {r}: no growth slope for node {node}: {str(e)}")
            values[f"slope_node{node}"] = float("nan")
    return values


def sweep_member(config: RunConfig, delta: float) -> Dict[str, float]:
    """One sweep point: grow with the base seed at this delta, write its strength-degree and clustering tables"""
    params = config.params.model_copy(update={"delta": delta})
    out_dir = Path(config.out_dir) / f"delta_{delta:g}"
    member = config.model_copy(update={"params": params, "out_dir": out_dir})

    generated = run_generate(member, echo=False)
    if not generated.passed:
        raise TrafficWebError(f"Sweep point delta={delta:g} (seed {params.rng_seed}) failed its invariant check")
    view = generated.view

    values = {"delta": delta, "A_measured": math.nan, "gamma_kin_mle": math.nan}
    try:
        strength = analysis_service.strength_degree_slope(view)
        io_service.write_spectrum(strength.table, out_dir / "strength_degree.tsv")
        values["A_measured"] = strength.A
    except TrafficWebError as e:
        logger.warning(f"delta={delta:g}: no strength-degree table: {str(e)}")
    io_service.write_spectrum(analysis_service.clustering_spectrum(view), out_dir / "clustering.tsv")
    try:
        values["gamma_kin_mle"] = analysis_service.fit_power_law_mle(view.k_in.astype(float), config.x_min).exponent
    except TrafficWebError as e:
        logger.warning(f"delta={delta:g}: no k_in exponent: {str(e)}")
    values["A_approx"] = theory.a_approx(delta)
    values["mean_clustering"] = analysis_service.mean_clustering(view)
    values["gamma_approx"] = theory.predict(params.m, delta).gamma
    return values


def aggregate(runs: List[Dict[str, float]]) -> Dict[str, Dict[str, float]]:
    """Mean and standard deviation per key over runs, ignoring NaN entries"""
    keys: List[str] = []
    for values in runs:
        for key in values:
            if key not in keys and key not in ("run", "seed"):
                keys.append(key)
    summary = {}
    for key in keys:
        data = np.array([values.get(key, math.nan) for values in runs], dtype=np.float64)
        data = data[np.isfinite(data)]
        n = int(data.size)
        summary[key] = {
            "mean": float(data.mean()) if n else math.nan,
            "std": float(data.std(ddof=1)) if n > 1 else (0.0 if n == 1 else math.nan),
            "n": n,
        }
    return summary


class EnsembleRunner:
    """Runs independent growths, sequentially or in a process pool: seed ensembles and delta sweeps"""

    def __init__(self):
        self.is_running = False

    def run(self, config: RunConfig) -> EnsembleReport:
        if self.is_running:
            logger.warning("Ensemble runner is already running")
        self.is_running = True
        try:
            return self._run(config)
        finally:
            self.is_running = False

    def sweep(self, config: RunConfig) -> SweepReport:
        if self.is_running:
            logger.warning("Ensemble runner is already running")
        self.is_running = True
        try:
            return self._sweep(config)
        finally:
            self.is_running = False

    def _execute(
        self, label: str, fn: Callable[[object], Dict[str, float]], items: Sequence, workers: int
    ) -> List[Dict[str, float]]:
        """Apply fn to every item and return the results in item order. The first failure stops the rest."""
        results: Dict[int, Dict[str, float]] = {}
        if workers <= 1 or len(items) == 1:
            for i, item in enumerate(tqdm(items, desc=label.lower(), unit="run")):
                try:
                    results[i] = fn(item)
                except Exception as e:
                    logger.error(f"{label} run {i} failed: {str(e)}", exc_info=True)
                    raise
                logger.info(f"{label} run {i} completed")
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {pool.submit(fn, item): i for i, item in enumerate(items)}
                pending = set(futures)
                with tqdm(total=len(items), desc=label.lower(), unit="run") as bar:
                    while pending:
                        done, pending = wait(pending, return_when=FIRST_EXCEPTION)
                        for future in sorted(done, key=futures.get):
                            i = futures[future]
                            error = future.exception()
                            if error is not None:
                                logger.error(f"{label} run {i} failed: {str(error)}")
                                for other in pending:
                                    other.cancel()
                                raise error
                            results[i] = future.result()
                            bar.update(1)
                            logger.info(f"{label} run {i} completed")
        return [results[i] for i in range(len(items))]

    def _run(self, config: RunConfig) -> EnsembleReport:
        out_dir = ensure_out_dir(config.out_dir)
        logger.info(
            f"Starting ensemble of {config.runs} runs "
            f"(base seed {config.params.rng_seed}, {config.workers} worker(s))"
        )
        runs = self._execute("Ensemble", partial(run_member, config), range(config.runs), config.workers)
        summary = aggregate(runs)
        paths = self._write(config, out_dir, runs, summary)
        logger.info(f"Ensemble completed: {len(runs)} runs, summary in {out_dir}")
        return EnsembleReport(runs=runs, summary=summary, paths=paths)

    def _sweep(self, config: RunConfig) -> SweepReport:
        out_dir = ensure_out_dir(config.out_dir)
        deltas = list(config.deltas)
        logger.info(
            f"Starting delta sweep over {len(deltas)} values "
            f"(m={config.params.m}, N={config.params.n_final}, seed {config.params.rng_seed})"
        )
        rows = self._execute("Sweep", partial(sweep_member, config), deltas, config.workers)
        paths = [
            io_service.write_rows(
                SWEEP_COLUMNS,
                ([row[key] for key in SWEEP_COLUMNS] for row in rows),
                out_dir / "sweep_summary.tsv",
                title="delta sweep",
            )
        ]
        report = report_service.render_sweep(
            {
                "m": config.params.m,
                "n_final": config.params.n_final,
                "seed": config.params.rng_seed,
                "x_min": config.x_min,
                "columns": SWEEP_COLUMNS,
                "rows": rows,
            }
        )
        report_path = out_dir / "sweep_report.md"
        report_path.write_text(report, encoding="utf-8")
        paths.append(report_path)
        logger.info(f"Sweep completed: {len(rows)} values of delta, summary in {out_dir}")
        return SweepReport(rows=rows, paths=paths)

    def _write(self, config: RunConfig, out_dir: Path, runs, summary) -> List[Path]:
        columns = ["run", "seed"] + list(summary.keys())
        run_rows = (
            [values["run"], values["seed"]]
            + [values.get(key, math.nan) for key in columns[2:]]
            for values in runs
        )
        paths = [
            io_service.write_rows(columns, run_rows, out_dir / "ensemble_runs.tsv", title="ensemble runs"),
            io_service.write_rows(
                ("key", "mean", "std", "n"),
                ((key, row["mean"], row["std"], row["n"]) for key, row in summary.items()),
                out_dir / "ensemble_summary.tsv",
                title="ensemble summary",
            ),
        ]
        report = report_service.render_ensemble(
            {
                "runs": len(runs),
                "m": config.params.m,
                "delta": config.params.delta,
                "n_final": config.params.n_final,
                "seed": config.params.rng_seed,
                "summary": summary,
            }
        )
        report_path = out_dir / "ensemble_report.md"
        report_path.write_text(report, encoding="utf-8")
        paths.append(report_path)
        return paths


# Singleton instance
ensemble_runner = EnsembleRunner()
