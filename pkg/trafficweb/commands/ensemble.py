from trafficweb.core.config import RunConfig
from trafficweb.scheduler.ensemble_runner import EnsembleReport, ensemble_runner


def run_ensemble(config: RunConfig) -> EnsembleReport:
    """
    Run config.runs independent growths (run r uses seed + r), analyse each
    into out_dir/run_XXX and aggregate the fit summaries as mean +/- std.
    """
    report = ensemble_runner.run(config)
    for key in ("gamma_kin_mle", "A_measured", "gamma_from_A"):
        row = report.summary.get(key)
        if row is not None:
            print(f"{key}\t{row['mean']:.4f} ± {row['std']:.4f} (n={row['n']})")
    return report
