from trafficweb.core.config import RunConfig
from trafficweb.scheduler.ensemble_runner import SweepReport, ensemble_runner


def run_sweep(config: RunConfig, echo: bool = True) -> SweepReport:
    """
    Grow one graph per value in config.deltas, all with the same seed, and
    write out_dir/delta_<value>/ with the strength-degree and clustering
    tables plus sweep_summary.tsv (A and mean clustering against delta).
    """
    report = ensemble_runner.sweep(config)
    if echo:
        for row in report.rows:
            print(
                f"delta={row['delta']:g}\tA={row['A_measured']:.4f} (approx {row['A_approx']:g})"
                f"\tC={row['mean_clustering']:.4f}\tgamma={row['gamma_kin_mle']:.4f}"
            )
    return report
