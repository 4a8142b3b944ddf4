"""
Growth dynamics of the traffic-driven model.

At each step a new node arrives and emits m links. Targets are drawn with
probability proportional to in-strength, all against the state frozen at
the start of the step. Every new in-link on a target i reinforces the
existing out-links of i by a total of delta, split proportionally to their
weights.

GrowthState.s_in is the attachment strength: it includes the node's own
initial strength w0 = 1 on top of the in-edge weights.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel

from trafficweb.core.config import INVARIANT_TOLERANCE, ModelParams
from trafficweb.core.errors import ParameterDomainError
from trafficweb.core.rng import SeededRNG, VariateStream
from trafficweb.services.sampler import CumulativeWeightIndex

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

# Ratio between consecutive trajectory sampling times
TRAJECTORY_RATIO = 1.05


@dataclass
class GrowthState:
    params: ModelParams
    birth: List[int] = field(default_factory=list)
    out_targets: List[List[int]] = field(default_factory=list)
    out_weights: List[List[float]] = field(default_factory=list)
    s_in: List[float] = field(default_factory=list)
    k_in: List[int] = field(default_factory=list)
    s_out: List[float] = field(default_factory=list)
    t: int = 0
    total_in_strength: float = 0.0
    initial_total_in_strength: float = 0.0
    sampler: object = None

    @property
    def size(self) -> int:
        return len(self.birth)

    def is_seed(self, node: int) -> bool:
        return node < self.params.n0


@dataclass
class StepReport:
    new_node: int
    targets: List[int]
    reinforcements: List[Tuple[Edge, float]]


@dataclass
class Trajectory:
    node: int
    points: List[Tuple[int, float, int]] = field(default_factory=list)


class InvariantReport(BaseModel):
    nodes: int
    steps: int
    max_out_strength_violation: float
    max_weight_asymmetry: float
    total_strength_violation: float
    max_sampler_mismatch: float
    max_in_strength_violation: float
    out_degree_ok: bool

    @property
    def passed(self) -> bool:
        return (
            self.max_out_strength_violation <= INVARIANT_TOLERANCE
            and self.max_weight_asymmetry <= INVARIANT_TOLERANCE
            and self.total_strength_violation <= INVARIANT_TOLERANCE
            and self.max_in_strength_violation <= INVARIANT_TOLERANCE
            and self.max_sampler_mismatch == 0.0
            and self.out_degree_ok
        )


def init_state(
    params: ModelParams,
    sampler_factory: Callable[..., object] = CumulativeWeightIndex.build,
) -> GrowthState:
    """
    Seed graph: a directed ring where every seed node points to its m
    successors with weight 1. Each seed node starts with its own strength 1
    plus the m ring links it receives.
    """
    m, n0 = params.m, params.n0
    if n0 < m + 1 or params.n_final < n0:
        raise ParameterDomainError(f"Invalid seed: n0={n0}, m={m}, n_final={params.n_final}")

    state = GrowthState(params=params)
    for i in range(n0):
        state.birth.append(0)
        state.out_targets.append([(i + j) % n0 for j in range(1, m + 1)])
        state.out_weights.append([1.0] * m)
        state.s_in.append(1.0 + m)
        state.k_in.append(0)
        state.s_out.append(float(m))

    state.total_in_strength = sum(state.s_in)
    state.initial_total_in_strength = state.total_in_strength
    state.sampler = sampler_factory(state.s_in, capacity=params.n_final)
    return state


def select_targets(state: GrowthState, count: int, rng: VariateStream) -> List[int]:
    """
    Draw `count` distinct nodes proportionally to s_in. A repeated draw is
    rejected and redrawn; every draw consumes one variate.
    """
    if count > state.size:
        raise ParameterDomainError(f"Cannot draw {count} distinct targets from {state.size} nodes")
    sampler = state.sampler
    chosen: List[int] = []
    seen = set()
    while len(chosen) < count:
        node = sampler.sample(rng.uniform())
        if node in seen:
            continue
        seen.add(node)
        chosen.append(node)
    return chosen


def reinforce(state: GrowthState, target: int) -> List[Tuple[Edge, float]]:
    """Spread delta over the out-links of `target` proportionally to their weights"""
    delta = state.params.delta
    targets = state.out_targets[target]
    if delta == 0 or not targets:
        return []

    weights = state.out_weights[target]
    s_out = state.s_out[target]
    s_in = state.s_in
    sampler = state.sampler
    changes = []
    for idx, j in enumerate(targets):
        dw = delta * weights[idx] / s_out
        weights[idx] += dw
        s_in[j] += dw
        sampler.increase(j, dw)
        changes.append(((target, j), dw))
    state.s_out[target] = s_out + delta
    return changes


def step(state: GrowthState, rng: VariateStream) -> StepReport:
    m = state.params.m
    new_node = state.size
    targets = select_targets(state, m, rng)

    state.birth.append(state.t + 1)
    state.out_targets.append(list(targets))
    state.out_weights.append([1.0] * m)
    state.s_in.append(1.0)
    state.k_in.append(0)
    state.s_out.append(float(m))

    added = 1.0 + m
    reinforcements: List[Tuple[Edge, float]] = []
    for target in targets:
        state.k_in[target] += 1
        state.s_in[target] += 1.0
        state.sampler.increase(target, 1.0)
        changes = reinforce(state, target)
        for _, dw in changes:
            added += dw
        reinforcements.extend(changes)

    # New node becomes attachable only after its own links are placed
    state.sampler.append(1.0)
    state.t += 1
    state.total_in_strength += added
    return StepReport(new_node=new_node, targets=targets, reinforcements=reinforcements)


def grow(
    state: GrowthState,
    rng: VariateStream,
    tracked: Iterable[int] = (),
    on_step: Optional[Callable[[StepReport], None]] = None,
) -> Tuple[GrowthState, Dict[int, Trajectory]]:
    """
    Run steps until the graph holds n_final nodes. For each tracked node,
    (t, s_in, k_in) is recorded at geometrically spaced times from its birth
    on, plus once at the end.
    """
    n_final = state.params.n_final
    if n_final < state.size:
        raise ParameterDomainError(f"n_final={n_final} is smaller than the current size {state.size}")

    trajectories: Dict[int, Trajectory] = {}
    next_record: Dict[int, int] = {}
    for node in sorted(set(tracked)):
        if node >= n_final:
            logger.warning(f"Tracked node {node} will never be born (n_final={n_final}); ignoring it")
            continue
        trajectories[node] = Trajectory(node=node)
        next_record[node] = 0

    def record(force: bool = False) -> None:
        for node, trajectory in trajectories.items():
            if node >= state.size:
                continue
            if force or state.t >= next_record[node]:
                if trajectory.points and trajectory.points[-1][0] == state.t:
                    continue
                trajectory.points.append((state.t, state.s_in[node], state.k_in[node]))
                next_record[node] = max(state.t + 1, math.ceil(state.t * TRAJECTORY_RATIO))

    total_steps = n_final - state.size
    report_every = max(total_steps // 10, 1)
    record()
    done = 0
    while state.size < n_final:
        report = step(state, rng)
        if on_step is not None:
            on_step(report)
        if trajectories:
            record()
        done += 1
        if done % report_every == 0:
            logger.info(f"Growth progress: {state.size}/{n_final} nodes")
    if trajectories:
        record(force=True)
    return state, trajectories


def run_growth(
    params: ModelParams,
    rng: Optional[VariateStream] = None,
    tracked: Iterable[int] = (),
    sampler_factory: Callable[..., object] = CumulativeWeightIndex.build,
) -> Tuple[GrowthState, Dict[int, Trajectory]]:
    state = init_state(params, sampler_factory=sampler_factory)
    return grow(state, rng or SeededRNG(params.rng_seed), tracked)


def _relative(actual: float, expected: float) -> float:
    scale = max(abs(expected), abs(actual), 1.0)
    return abs(actual - expected) / scale


def check_invariants(state: GrowthState) -> InvariantReport:
    m = state.params.m
    delta = state.params.delta
    n = state.size

    out_strength = 0.0
    asymmetry = 0.0
    out_degree_ok = True
    in_edge_sum = [0.0] * n
    for i in range(n):
        weights = state.out_weights[i]
        s_out = state.s_out[i]
        out_strength = max(out_strength, _relative(s_out, m + delta * state.k_in[i]))
        for w in weights:
            asymmetry = max(asymmetry, _relative(w, s_out / m))
        if len(weights) != m:
            out_degree_ok = False
        for j, w in zip(state.out_targets[i], weights):
            in_edge_sum[j] += w

    in_strength = max((_relative(state.s_in[i] - 1.0, in_edge_sum[i]) for i in range(n)), default=0.0)
    expected_total = state.initial_total_in_strength + (1 + m + m * delta) * state.t
    sampler_weights = state.sampler.weights()
    mismatch = max((abs(a - b) for a, b in zip(sampler_weights, state.s_in)), default=0.0)
    if len(sampler_weights) != n:
        mismatch = math.inf

    return InvariantReport(
        nodes=n,
        steps=state.t,
        max_out_strength_violation=out_strength,
        max_weight_asymmetry=asymmetry,
        total_strength_violation=_relative(state.total_in_strength, expected_total),
        max_sampler_mismatch=mismatch,
        max_in_strength_violation=in_strength,
        out_degree_ok=out_degree_ok,
    )
