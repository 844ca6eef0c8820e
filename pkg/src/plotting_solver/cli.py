"""Command-line interface.

Exit codes, fixed for scripting sweeps:

* 0   success (plan found / plan valid)
* 1   I/O failure
* 2   bad arguments, unparsable files, infeasible generator spec
* 3   oracle refused: instance above its capacity bound
* 10  invalid plan
* 20  no plan within the horizon bound (UNSAT)
* 30  undecided (UNKNOWN)

The ``PLOTTING_SOLVER`` environment variable, when set, supplies the default
external solver command for ``solve``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import engine, formats, generator, oracle, planner
from .encoder import PROGRESS_MODES, PROGRESS_WITNESS
from .engine import Grid, Instance

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_INVALID_PLAN = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 30

# Refuse breadth-first search when the potential state space passes this.
ORACLE_CAPACITY_BITS = 48


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _load_instance(path: str, goal_flag) -> Instance:
    instance = formats.parse_instance(_read(path))
    if goal_flag is not None:
        return instance.with_goal(goal_flag)
    if instance.goal is None:
        raise formats.FormatError(
            "no goal: provide --goal or a 'goal' line in the instance file"
        )
    return instance


def cmd_generate(args) -> int:
    mode = "random"
    if args.all:
        mode = "all"
    elif args.canonical:
        mode = "canonical"
    try:
        spec = generator.GeneratorSpec(
            height=args.height,
            width=args.width,
            colours=args.colours,
            mode=mode,
            seed=args.seed if args.seed is not None else 0,
            require_all_colours=not args.allow_missing_colours,
        )
    except generator.InfeasibleSpecError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        count = 0
        if mode == "random":
            instance = generator.random_instance(spec)
            path = out_dir / f"instance_seed{spec.seed}.txt"
            path.write_text(formats.write_instance(instance))
            count = 1
        else:
            for idx, instance in enumerate(generator.enumerate_instances(spec), 1):
                path = out_dir / f"instance_{idx:05d}.txt"
                path.write_text(formats.write_instance(instance))
                count = idx
    except OSError as exc:
        print(f"write failed: {exc}", file=sys.stderr)
        return EXIT_IO
    print(count)
    return EXIT_OK


def cmd_solve(args) -> int:
    try:
        instance = _load_instance(args.instance, args.goal)
    except (OSError, formats.FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    backend: planner.Backend = planner.INTERNAL_BACKEND
    if args.backend is not None:
        if args.backend == "internal":
            backend = planner.INTERNAL_BACKEND
        elif args.backend.startswith("external:"):
            backend = args.backend[len("external:") :]
        else:
            print(f"error: bad --backend {args.backend!r}", file=sys.stderr)
            return EXIT_USAGE
    elif os.environ.get("PLOTTING_SOLVER"):
        backend = os.environ["PLOTTING_SOLVER"]

    if args.emit_cnf is not None:
        try:
            Path(args.emit_cnf).mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            print(f"cannot create {args.emit_cnf}: {exc}", file=sys.stderr)
            return EXIT_IO

    result = planner.solve(
        instance,
        backend=backend,
        max_steps=args.max_steps,
        per_horizon_timeout=args.timeout,
        fixed_hand=args.hand,
        progress_encoding=args.progress,
        emit_cnf_dir=args.emit_cnf,
    )
    if result.found:
        sys.stdout.write(formats.write_plan(result.hand0, result.plan))
        return EXIT_OK
    if result.status == "unsat":
        print("UNSAT")
        return EXIT_UNSAT
    print("UNKNOWN")
    for steps, status in result.horizon_statuses:
        print(f"horizon {steps}: {status}", file=sys.stderr)
    return EXIT_UNKNOWN


def _replay(instance: Instance, hand0: int, plan, on_state=None):
    """Replay, returning (ok, failed_step, reason, final_grid)."""
    grid, hand = instance.grid, hand0
    if on_state is not None:
        on_state(0, grid, hand)
    for idx, shot in enumerate(plan, start=1):
        try:
            out = engine.apply_shot(grid, hand, shot)
        except engine.ShotError as exc:
            return False, idx, f"step {idx}: {type(exc).__name__}: {exc}", grid
        grid, hand = out.next_grid, out.next_hand
        if on_state is not None:
            on_state(idx, grid, hand)
    return True, None, None, grid


def cmd_validate(args) -> int:
    try:
        instance = _load_instance(args.instance, args.goal)
        hand0, plan = formats.parse_plan(_read(args.plan))
    except (OSError, formats.FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = planner.validate_plan(instance, hand0, plan)
    if report.ok:
        print(f"valid: {report.final_blocks} blocks remain, goal {instance.goal}")
        return EXIT_OK
    if report.failed_step is not None:
        print(f"invalid at step {report.failed_step}: {report.reason}", file=sys.stderr)
    else:
        print(f"invalid: {report.reason}", file=sys.stderr)
    return EXIT_INVALID_PLAN


def _colour_char(v: int) -> str:
    if v == 0:
        return "."
    if v <= 9:
        return str(v)
    if v <= 35:
        return chr(ord("a") + v - 10)
    return "?"


def cmd_trace(args) -> int:
    try:
        instance = formats.parse_instance(_read(args.instance))
        hand0, plan = formats.parse_plan(_read(args.plan))
    except (OSError, formats.FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    def show(step: int, grid: Grid, hand: int) -> None:
        print(f"step {step}  hand {_colour_char(hand)}")
        for row in grid.cells:
            print("".join(_colour_char(v) for v in row))

    ok, failed_step, reason, _ = _replay(instance, hand0, plan, on_state=show)
    if not ok:
        print(reason, file=sys.stderr)
        return EXIT_INVALID_PLAN
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        instance = _load_instance(args.instance, args.goal)
    except (OSError, formats.FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cells = instance.grid.height * instance.grid.width
    colours = instance.colour_count
    potential_bits = cells * (colours + 1).bit_length()
    if potential_bits > ORACLE_CAPACITY_BITS:
        print(
            f"capacity: {cells} cells with {colours} colours is above the "
            "breadth-first search bound",
            file=sys.stderr,
        )
        return EXIT_CAPACITY
    max_steps = args.max_steps
    if max_steps is None:
        max_steps = instance.block_total - instance.goal
    try:
        best = oracle.bfs_optimal(instance, max_steps)
    except oracle.CapacityExceededError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    if best is None:
        print("NONE")
        return EXIT_UNSAT
    print(best.length)
    sys.stdout.write(formats.write_plan(best.hand0, best.plan))
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotting-solver",
        description="Solve Plotting puzzles optimally via bounded-horizon SAT",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write instance files")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--colours", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--seed", type=int, help="one random instance")
    group.add_argument("--all", action="store_true", help="every instance")
    group.add_argument(
        "--canonical", action="store_true", help="one instance per colour renaming"
    )
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--allow-missing-colours", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="find a minimal plan")
    p.add_argument("--instance", required=True)
    p.add_argument("--goal", type=int)
    p.add_argument("--backend", help='"internal" or "external:CMD"')
    p.add_argument("--max-steps", type=int)
    p.add_argument("--hand", type=int, help="pin the initial hand colour")
    p.add_argument("--emit-cnf", help="directory for per-horizon DIMACS files")
    p.add_argument("--timeout", type=float, help="per-horizon seconds (external)")
    p.add_argument(
        "--progress",
        choices=PROGRESS_MODES,
        default=PROGRESS_WITNESS,
        help="progress constraint encoding",
    )
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="replay a plan against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--goal", type=int)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("trace", help="print the grid after every shot")
    p.add_argument("--instance", required=True)
    p.add_argument("--plan", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("oracle", help="breadth-first optimal plan (small grids)")
    p.add_argument("--instance", required=True)
    p.add_argument("--goal", type=int)
    p.add_argument("--max-steps", type=int)
    p.set_defaults(func=cmd_oracle)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
