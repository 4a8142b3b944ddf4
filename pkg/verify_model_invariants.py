#!/usr/bin/env python3
"""
Desk check of the growth model.
This script:
1. Shows the active configuration
2. Grows small graphs over a grid of (m, delta) and checks the exact invariants
3. Optionally replays one growth with the linear-scan sampler and compares targets
"""
import os
import sys
import time

from dotenv import load_dotenv

# Load environment variables FIRST
load_dotenv()

# Add the repository root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from trafficweb.core import config
from trafficweb.core.rng import SeededRNG
from trafficweb.services.growth_service import check_invariants, init_state, grow, run_growth
from trafficweb.services.sampler import NaiveWeightIndex

GRID_M = (1, 2, 4)
GRID_DELTA = (0.0, 0.5, 2.0)
GRID_N = 10_000


def show_configuration():
    print("🔍 Configuration")
    print("=" * 60)
    print(f"   TRAFFICWEB_LOG_LEVEL: {config.LOG_LEVEL}")
    print(f"   TRAFFICWEB_OUT_DIR:   {config.DEFAULT_OUT_DIR}")
    print(f"   TRAFFICWEB_WORKERS:   {config.DEFAULT_WORKERS}")
    print(f"   TRAFFICWEB_BIN_RATIO: {config.DEFAULT_BIN_RATIO}")
    print(f"   TRAFFICWEB_XMIN:      {config.DEFAULT_XMIN}")
    print(f"   Invariant tolerance:  {config.INVARIANT_TOLERANCE:g}")


def check_grid() -> bool:
    print("\n" + "=" * 60)
    print(f"🧪 Exact invariants, N={GRID_N}")
    print("=" * 60)
    all_ok = True
    started = time.perf_counter()
    for m in GRID_M:
        for delta in GRID_DELTA:
            params = config.build_params(m=m, delta=delta, n_final=GRID_N, rng_seed=17)
            state, _ = run_growth(params)
            report = check_invariants(state)
            mark = "✅" if report.passed else "❌"
            print(
                f"   {mark} m={m} delta={delta:<4g} "
                f"s_out={report.max_out_strength_violation:.1e} "
                f"weights={report.max_weight_asymmetry:.1e} "
                f"total={report.total_strength_violation:.1e}"
            )
            all_ok = all_ok and report.passed
    print(f"\n   Elapsed: {time.perf_counter() - started:.2f} s")
    return all_ok


def check_replay() -> bool:
    print("\n" + "=" * 60)
    print("🔁 Replay with the linear-scan sampler (N=1000)")
    print("=" * 60)
    params = config.build_params(m=2, delta=0.5, n_final=1000, rng_seed=3)
    fast, naive = [], []
    grow(init_state(params), SeededRNG(3), on_step=lambda report: fast.append(report.targets))
    grow(init_state(params, NaiveWeightIndex.build), SeededRNG(3), on_step=lambda report: naive.append(report.targets))
    if fast == naive:
        print(f"   ✅ {len(fast)} steps produced identical target sequences")
        return True
    first = next(i for i, (a, b) in enumerate(zip(fast, naive)) if a != b)
    print(f"   ❌ target sequences diverge at step {first}: {fast[first]} vs {naive[first]}")
    return False


def main():
    print("\n" + "=" * 60)
    print("🔔 GROWTH MODEL VERIFICATION")
    print("=" * 60)

    show_configuration()
    grid_ok = check_grid()

    response = input("\n🤔 Replay one growth with the linear-scan sampler too? (y/n): ")
    replay_ok = check_replay() if response.lower() == "y" else True

    print("\n" + "=" * 60)
    if grid_ok and replay_ok:
        print("✅ VERIFICATION COMPLETE")
    else:
        print("❌ VERIFICATION FAILED")
    print("=" * 60)
    return grid_ok and replay_ok


if __name__ == "__main__":
    try:
        sys.exit(0 if main() else 1)
    except KeyboardInterrupt:
        print("\n\n⚠️  Interrupted by user")
        sys.exit(1)
    except Exception as e:
        print(f"\n❌ Error: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
