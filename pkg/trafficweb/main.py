"""
trafficweb command line.

    python -m trafficweb.main generate --m 2 --delta 0.5 --n 100000 --seed 7 --track 100
    python -m trafficweb.main analyze --input out/edges.tsv --out-dir out/analysis
    python -m trafficweb.main predict --m 2 --delta 0.5 [--a 1.71]
    python -m trafficweb.main ensemble --runs 10 --n 100000 --out-dir out/ensemble
    python -m trafficweb.main compare --input out/edges.tsv
    python -m trafficweb.main sweep --m 2 --n 100000 --deltas 0,0.5,1,2 --out-dir out/sweep
"""
import argparse
import logging
import sys
from typing import List, Optional

from trafficweb.core.config import (
    DEFAULT_BIN_RATIO,
    DEFAULT_OUT_DIR,
    DEFAULT_WORKERS,
    DEFAULT_XMIN,
    LOG_LEVEL,
    SWEEP_DELTAS,
    build_config,
    build_params,
)
from trafficweb.core.errors import TrafficWebError

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

COMMANDS = ("generate", "analyze", "predict", "ensemble", "compare", "sweep")


def _track_list(value: str) -> List[int]:
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--track expects comma-separated node ids, got '{value}'")


def _delta_list(value: str) -> List[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--deltas expects comma-separated numbers, got '{value}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trafficweb",
        description="Grow and analyse graphs of the traffic-driven WWW model",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--m", type=int, default=2, help="out-links per new node")
    parser.add_argument("--delta", type=float, default=0.5, help="reinforcement per new in-link")
    parser.add_argument("--n0", type=int, default=None, help="seed size (default m + 1)")
    parser.add_argument("--n", type=int, default=1000, help="final number of nodes")
    parser.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    parser.add_argument("--runs", type=int, default=1, help="ensemble size; run r uses seed + r")
    parser.add_argument("--out-dir", default=DEFAULT_OUT_DIR)
    parser.add_argument("--bin-ratio", type=float, default=DEFAULT_BIN_RATIO)
    parser.add_argument("--xmin", type=float, default=DEFAULT_XMIN, help="k_in cutoff for tail fits")
    parser.add_argument("--track", type=_track_list, default=[], help="comma-separated node ids to trace")
    parser.add_argument("--input", default=None, help="edge list for analyze / compare")
    parser.add_argument("--a", type=float, default=None, help="measured A for predict (default delta + 1)")
    parser.add_argument("--workers", type=int, default=DEFAULT_WORKERS, help="processes for ensemble runs")
    parser.add_argument(
        "--deltas", type=_delta_list, default=list(SWEEP_DELTAS), help="comma-separated delta values for sweep"
    )
    return parser


def dispatch(args: argparse.Namespace) -> int:
    params = build_params(m=args.m, delta=args.delta, n0=args.n0, n_final=args.n, rng_seed=args.seed)
    config = build_config(
        command=args.command,
        params=params,
        runs=args.runs,
        out_dir=args.out_dir,
        bin_ratio=args.bin_ratio,
        x_min=args.xmin,
        track=args.track,
        input=args.input,
        a=args.a,
        workers=args.workers,
        deltas=args.deltas,
    )

    if config.command == "generate":
        from trafficweb.commands.generate import run_generate

        return 0 if run_generate(config).passed else 1

    if config.command == "analyze":
        from trafficweb.commands.analyze import run_analyze

        return 0 if run_analyze(config).passed else 1

    if config.command == "predict":
        from trafficweb.commands.predict import format_sweep, run_predict

        run_predict(config.params, config.a)
        print(format_sweep(config.params.m, config.deltas))
        return 0

    if config.command == "ensemble":
        from trafficweb.commands.ensemble import run_ensemble

        run_ensemble(config)
        return 0

    if config.command == "sweep":
        from trafficweb.commands.sweep import run_sweep

        run_sweep(config)
        return 0

    from trafficweb.commands.compare import run_compare

    run_compare(config)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except TrafficWebError as e:
        print(f"❌ Error: {str(e)}", file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"Unexpected failure in '{args.command}': {str(e)}", exc_info=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
