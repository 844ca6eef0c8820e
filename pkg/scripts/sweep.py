#!/usr/bin/env python3
"""Goal sweep over seeded instances, one line per decision instance.

Example:

    python scripts/sweep.py --height 5 --width 5 --colours 3 \
        --seeds 1 2 3 --goals 5 10 15 --backend "external:minisat" --timeout 60

For every (seed, goal) pair the planner probes horizons 1..blocks-goal and
the script prints each horizon's status and wall time, which makes the
satisfiability flip at the minimal horizon easy to eyeball.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from plotting_solver import planner
from plotting_solver.generator import GeneratorSpec, random_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--height", type=int, required=True)
    ap.add_argument("--width", type=int, required=True)
    ap.add_argument("--colours", type=int, required=True)
    ap.add_argument("--seeds", type=int, nargs="+", required=True)
    ap.add_argument("--goals", type=int, nargs="+", required=True)
    ap.add_argument("--backend", default="internal")
    ap.add_argument("--timeout", type=float, help="per-horizon seconds")
    args = ap.parse_args()

    backend = args.backend
    if backend.startswith("external:"):
        backend = backend[len("external:") :]

    print("seed goal horizon status time_s per_horizon")
    for seed in args.seeds:
        spec = GeneratorSpec(args.height, args.width, args.colours, seed=seed)
        base = random_instance(spec)
        for goal in args.goals:
            instance = base.with_goal(goal)
            t0 = time.time()
            result = planner.solve(
                instance,
                backend=backend,
                per_horizon_timeout=args.timeout,
            )
            elapsed = time.time() - t0
            statuses = ",".join(st for _, st in result.horizon_statuses)
            horizon = result.horizon if result.found else "-"
            print(
                f"{seed} {goal} {horizon} {result.status} "
                f"{elapsed:.2f} {statuses}"
            )


if __name__ == "__main__":
    main()
