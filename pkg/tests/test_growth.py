import numpy as np
import pytest
from scipy import stats

from trafficweb.core.config import build_params
from trafficweb.core.errors import ParameterDomainError
from trafficweb.core.rng import ScriptedVariates, SeededRNG
from trafficweb.services.growth_service import (
    GrowthState,
    check_invariants,
    grow,
    init_state,
    reinforce,
    run_growth,
    select_targets,
    step,
)
from trafficweb.services.sampler import CumulativeWeightIndex, NaiveWeightIndex


def _params(**fields):
    fields.setdefault("n_final", 1000)
    return build_params(**fields)


def test_seed_ring_with_two_links():
    state = init_state(_params(m=2, n0=3))
    assert state.out_targets == [[1, 2], [2, 0], [0, 1]]
    assert state.out_weights == [[1.0, 1.0]] * 3
    assert state.s_in == [3.0, 3.0, 3.0]
    assert state.s_out == [2.0, 2.0, 2.0]
    assert state.k_in == [0, 0, 0]
    assert state.total_in_strength == 9.0
    assert state.sampler.total == 9.0


def test_seed_ring_with_one_link():
    state = init_state(_params(m=1, n0=4))
    assert state.out_targets == [[1], [2], [3], [0]]
    assert state.s_in == [2.0] * 4
    assert state.s_out == [1.0] * 4


def test_seed_too_small_for_m():
    with pytest.raises(ParameterDomainError):
        build_params(m=2, n0=2)


def test_default_seed_size_is_m_plus_one():
    assert build_params(m=4).n0 == 5


def test_negative_delta_rejected():
    with pytest.raises(ParameterDomainError):
        build_params(delta=-0.1)


def test_select_targets_follows_strength():
    state = GrowthState(
        params=_params(m=1, n0=2, n_final=2),
        birth=[0, 0],
        s_in=[1.0, 3.0],
        sampler=CumulativeWeightIndex.build([1.0, 3.0]),
    )
    assert select_targets(state, 1, ScriptedVariates([0.1])) == [0]
    assert select_targets(state, 1, ScriptedVariates([0.3])) == [1]


def test_select_targets_redraws_repeats():
    state = init_state(_params(m=2, n0=3))
    variates = ScriptedVariates([0.1, 0.2, 0.5])
    assert select_targets(state, 2, variates) == [0, 1]
    assert variates.consumed == 3


def test_select_all_nodes_is_a_permutation():
    state = init_state(_params(m=1, n0=4))
    assert sorted(select_targets(state, 4, SeededRNG(5))) == [0, 1, 2, 3]


def test_select_more_targets_than_nodes():
    state = init_state(_params(m=1, n0=4))
    with pytest.raises(ParameterDomainError):
        select_targets(state, 5, SeededRNG(5))


def test_single_draws_are_uniform_on_equal_strengths():
    state = init_state(_params(m=1, n0=10))
    rng = SeededRNG(99)
    draws = [select_targets(state, 1, rng)[0] for _ in range(100_000)]
    counts = np.bincount(draws, minlength=10)
    _, p_value = stats.chisquare(counts)
    assert p_value > 0.01


def test_reinforce_splits_delta_over_out_links():
    state = init_state(_params(m=2, n0=3, delta=0.5))
    changes = reinforce(state, 0)
    assert changes == [((0, 1), 0.25), ((0, 2), 0.25)]
    assert state.out_weights[0] == [1.25, 1.25]
    assert state.s_out[0] == 2.5
    assert state.s_in == [3.0, 3.25, 3.25]
    assert state.sampler.weights() == state.s_in


def test_reinforce_uses_current_weights():
    state = init_state(_params(m=2, n0=3, delta=0.5))
    state.out_weights[0] = [2.0, 2.0]
    state.s_out[0] = 4.0
    changes = reinforce(state, 0)
    assert [dw for _, dw in changes] == [0.25, 0.25]
    assert state.out_weights[0] == [2.25, 2.25]
    assert state.s_out[0] == 4.5


def test_reinforce_without_delta_changes_nothing():
    state = init_state(_params(m=2, n0=3, delta=0.0))
    assert reinforce(state, 1) == []
    assert state.out_weights[1] == [1.0, 1.0]
    assert state.s_out[1] == 2.0


def test_step_adds_fixed_strength():
    state = init_state(_params(m=2, n0=3, delta=0.5))
    before = state.total_in_strength
    report = step(state, SeededRNG(1))
    assert state.total_in_strength - before == 4.0
    assert sum(state.s_in) == pytest.approx(before + 4.0, rel=1e-12)
    assert report.new_node == 3
    assert state.out_targets[3] == report.targets
    assert state.s_out[3] == 2.0
    assert state.k_in[3] == 0
    assert state.s_in[3] == 1.0
    assert state.birth[3] == 1
    assert state.t == 1


def test_hand_traced_steps():
    # n0=3, m=2, delta=0.5; node 0 is a target in both steps
    state = init_state(_params(m=2, n0=3, delta=0.5, n_final=5))
    variates = ScriptedVariates([0.1, 0.5, 0.1, 0.95])

    first = step(state, variates)
    assert first.targets == [0, 1]
    assert state.s_in == [4.25, 4.25, 3.5, 1.0]

    second = step(state, variates)
    assert second.targets == [0, 3]
    assert second.reinforcements == [
        ((0, 1), 0.25),
        ((0, 2), 0.25),
        ((3, 0), 0.25),
        ((3, 1), 0.25),
    ]
    assert variates.consumed == 4

    assert state.k_in[0] == 2
    assert state.s_out[0] == 3.0
    # each successor of node 0 gained 2 * delta / 2 on its link from node 0
    assert state.out_weights[0] == [1.5, 1.5]
    assert state.s_in == [5.5, 4.75, 3.75, 2.0, 1.0]
    assert state.total_in_strength == 17.0
    assert check_invariants(state).passed


def test_without_reinforcement_weights_stay_at_one():
    state, _ = run_growth(_params(m=2, delta=0.0, n_final=2000, rng_seed=4))
    assert all(w == 1.0 for weights in state.out_weights for w in weights)
    assert all(s == 2.0 for s in state.s_out)
    for i in range(state.params.n0, state.size):
        assert state.s_in[i] == 1.0 + state.k_in[i]


def test_growth_to_seed_size_is_a_no_op():
    state, trajectories = run_growth(_params(m=2, n0=3, n_final=3))
    assert state.size == 3
    assert state.t == 0
    assert trajectories == {}


def test_same_seed_same_graph():
    params = _params(m=3, delta=1.0, n_final=1500, rng_seed=123)
    a, _ = run_growth(params)
    b, _ = run_growth(params)
    assert a.out_targets == b.out_targets
    assert a.out_weights == b.out_weights
    assert a.s_in == b.s_in


def test_different_seeds_differ():
    a, _ = run_growth(_params(n_final=500, rng_seed=1))
    b, _ = run_growth(_params(n_final=500, rng_seed=2))
    assert a.out_targets != b.out_targets


def test_step_reports_are_reproducible():
    params = _params(n_final=400, rng_seed=77)
    first, second = [], []
    grow(init_state(params), SeededRNG(77), on_step=first.append)
    grow(init_state(params), SeededRNG(77), on_step=second.append)
    assert first == second
    assert len(first) == 400 - params.n0


def test_linear_scan_sampler_replays_identically():
    params = _params(m=2, delta=0.5, n_final=1000, rng_seed=3)
    fast, naive = [], []
    grow(init_state(params), SeededRNG(3), on_step=lambda report: fast.append(report.targets))
    grow(
        init_state(params, NaiveWeightIndex.build),
        SeededRNG(3),
        on_step=lambda report: naive.append(report.targets),
    )
    assert fast == naive


@pytest.mark.parametrize("m", [1, 2, 4])
@pytest.mark.parametrize("delta", [0.0, 0.5, 2.0])
def test_invariants_hold_after_growth(m, delta):
    state, _ = run_growth(_params(m=m, delta=delta, n_final=10_000, rng_seed=17))
    report = check_invariants(state)
    assert report.passed, report
    assert report.nodes == 10_000
    assert report.steps == 10_000 - (m + 1)


def test_invariants_hold_after_every_step():
    state = init_state(_params(m=3, delta=1.5, n_final=300, rng_seed=9))
    failures = []

    def after_step(_report):
        if not check_invariants(state).passed:
            failures.append(state.t)

    grow(state, SeededRNG(9), on_step=after_step)
    assert failures == []


def test_trajectory_of_tracked_node():
    state, trajectories = run_growth(_params(m=2, delta=0.5, n_final=2000, rng_seed=5), tracked=[10])
    points = trajectories[10].points
    birth = state.birth[10]
    assert points[0] == (birth, 1.0, 0)
    times = [t for t, _, _ in points]
    assert times == sorted(set(times))
    assert times[-1] == state.t
    assert points[-1][1] == state.s_in[10]
    assert points[-1][2] == state.k_in[10]
    strengths = [s for _, s, _ in points]
    assert strengths == sorted(strengths)


def test_tracked_node_beyond_final_size_is_ignored():
    _, trajectories = run_growth(_params(n_final=100), tracked=[5, 500])
    assert list(trajectories) == [5]
