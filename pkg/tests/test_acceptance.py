"""Desk-scale statistical checks on N = 10^5 graphs. Run with --runslow."""
import numpy as np
import pytest

from tests.helpers import grow_view
from trafficweb.commands.ensemble import run_ensemble
from trafficweb.commands.sweep import run_sweep
from trafficweb.core.config import DEFAULT_WORKERS, build_config, build_params
from trafficweb.services import analysis_service, io_service, theory

pytestmark = pytest.mark.slow

N = 100_000
RUNS = 10
TRACKED = 100
# Cutoff at which the affine offsets in s_out and w no longer bias the exponent
AGREEMENT_XMIN = 100.0


def _ensemble(tmp_path_factory, name, delta):
    out_dir = tmp_path_factory.mktemp(name)
    config = build_config(
        command="ensemble",
        params=build_params(m=2, delta=delta, n_final=N, rng_seed=2024),
        runs=RUNS,
        out_dir=out_dir,
        track=[TRACKED],
        x_min=10.0,
        workers=DEFAULT_WORKERS,
    )
    return out_dir, run_ensemble(config)


@pytest.fixture(scope="module")
def reinforced(tmp_path_factory):
    return _ensemble(tmp_path_factory, "reinforced", 0.5)


@pytest.fixture(scope="module")
def unreinforced(tmp_path_factory):
    return _ensemble(tmp_path_factory, "unreinforced", 0.0)


@pytest.fixture(scope="module")
def single_graph():
    return grow_view(m=2, delta=0.5, n=N, seed=77)


def test_in_degree_exponent(reinforced):
    _, report = reinforced
    assert 2.0 <= report.summary["gamma_kin_mle"]["mean"] <= 2.35


def test_exponent_from_measured_a(reinforced):
    _, report = reinforced
    assert report.summary["gamma_from_A"]["mean"] == pytest.approx(2.17, abs=0.15)


def test_strength_and_weight_exponents_agree(reinforced):
    out_dir, _ = reinforced
    gammas = {key: [] for key in ("gamma_kin_mle", "gamma_sin_mle", "gamma_sout_mle", "gamma_w_mle")}
    for r in range(RUNS):
        view = io_service.read_edge_list(out_dir / f"run_{r:03d}" / "edges.tsv")
        summary = analysis_service.summarize(view, AGREEMENT_XMIN)
        for key in gammas:
            gammas[key].append(summary[key])
    reference = np.nanmean(gammas["gamma_kin_mle"])
    for key in ("gamma_sin_mle", "gamma_sout_mle", "gamma_w_mle"):
        assert np.nanmean(gammas[key]) == pytest.approx(reference, abs=0.1), key


def test_unreinforced_limit(unreinforced):
    _, report = unreinforced
    assert 2.35 <= report.summary["gamma_kin_mle"]["mean"] <= 2.65
    for run in report.runs:
        assert run["A_measured"] == pytest.approx(1.0, abs=1e-9)


def test_strength_is_proportional_to_degree(reinforced):
    _, report = reinforced
    for run in report.runs:
        assert 0.95 <= run["A_loglog_slope"] <= 1.05


def test_tracked_node_grows_with_predicted_slope(reinforced):
    _, report = reinforced
    predicted = report.summary["theta_measured"]["mean"]
    assert report.summary[f"slope_node{TRACKED}"]["mean"] == pytest.approx(predicted, abs=0.1)


def test_clustering_decays_with_degree(single_graph):
    trend = analysis_service.spectrum_trend(analysis_service.clustering_spectrum(single_graph))
    assert trend.spearman <= -0.8


def test_sweep_clustering_and_slope_grow_with_reinforcement(tmp_path):
    config = build_config(
        command="sweep",
        params=build_params(m=2, n_final=N, rng_seed=5),
        out_dir=tmp_path,
        deltas=[0.1, 0.5, 2.0],
        workers=DEFAULT_WORKERS,
    )
    rows = run_sweep(config, echo=False).rows
    assert rows[-1]["mean_clustering"] > rows[0]["mean_clustering"]
    slopes = [row["A_measured"] for row in rows]
    assert slopes == sorted(slopes)


def test_undirected_correlations_are_disassortative(single_graph):
    trend = analysis_service.spectrum_trend(analysis_service.knn_spectrum(single_graph))
    assert trend.spearman <= -0.8


def test_directed_correlations_are_flat(single_graph):
    for table in (
        analysis_service.knn_in_in_spectrum(single_graph),
        analysis_service.knn_in_out_spectrum(single_graph),
    ):
        assert abs(analysis_service.spectrum_trend(table).loglog_slope) <= 0.15, table.name


def test_out_neighbours_are_much_more_popular(single_graph):
    in_in = analysis_service.class_weighted_mean(analysis_service.knn_in_in_spectrum(single_graph))
    in_out = analysis_service.class_weighted_mean(analysis_service.knn_in_out_spectrum(single_graph))
    assert in_out >= 3 * in_in


def test_measured_a_sits_near_mean_weight(reinforced):
    _, report = reinforced
    a_measured = report.summary["A_measured"]["mean"]
    assert a_measured == pytest.approx(theory.a_approx(0.5), rel=0.25)
