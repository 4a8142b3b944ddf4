import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from trafficweb.core.config import INVARIANT_TOLERANCE, RunConfig, ensure_out_dir
from trafficweb.core.rng import SeededRNG, VariateStream
from trafficweb.services import io_service
from trafficweb.services.graph_view import GraphView
from trafficweb.services.growth_service import InvariantReport, Trajectory, check_invariants, run_growth
from trafficweb.services.report_service import report_service

logger = logging.getLogger(__name__)


@dataclass
class GenerateResult:
    paths: List[Path]
    invariants: InvariantReport
    view: GraphView
    trajectories: Dict[int, Trajectory] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.invariants.passed


def run_generate(config: RunConfig, rng: Optional[VariateStream] = None, echo: bool = True) -> GenerateResult:
    """Grow one graph and write its edge list, node table and tracked trajectories"""
    params = config.params
    out_dir = ensure_out_dir(config.out_dir)
    rng = rng or SeededRNG(params.rng_seed)

    logger.info(
        f"Growing graph: m={params.m}, delta={params.delta}, n0={params.n0}, "
        f"N={params.n_final}, seed={params.rng_seed}"
    )
    state, trajectories = run_growth(params, rng, tracked=config.track)
    invariants = check_invariants(state)
    view = GraphView.from_state(state)

    paths = [
        io_service.write_edge_list(view, out_dir / "edges.tsv"),
        io_service.write_node_table(view, out_dir / "nodes.tsv"),
        io_service.write_key_values(invariants.model_dump(), out_dir / "invariants.tsv", title="invariant check"),
    ]
    paths.extend(io_service.write_trajectories(trajectories, out_dir))

    if echo:
        print(report_service.render_invariants(invariants, INVARIANT_TOLERANCE))
    if invariants.passed:
        logger.info(f"Wrote {len(paths)} files to {out_dir}")
    else:
        logger.error(f"Invariant check failed for seed {params.rng_seed}: {invariants.model_dump()}")
    return GenerateResult(paths=paths, invariants=invariants, view=view, trajectories=trajectories)
