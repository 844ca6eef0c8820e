"""Optimal planning for the Plotting tile-matching puzzle.

The package splits into an exact game engine (:mod:`.engine`), an
independent constraint-case oracle and breadth-first planner
(:mod:`.oracle`), propositional infrastructure (:mod:`.cnf`), the
bounded-horizon CNF encoder (:mod:`.encoder`), the horizon-iterating
planner (:mod:`.planner`), an instance generator (:mod:`.generator`), file
formats (:mod:`.formats`) and a command-line front end (:mod:`.cli`).
"""

from .engine import (
    ColShot,
    Grid,
    Instance,
    NullMoveError,
    OutOfRangeError,
    RowShot,
    Shot,
    ShotError,
    TransitionOutcome,
    apply_shot,
    block_count,
    colour_sum,
    is_goal,
    legal_shots,
    wall_fall,
)
from .oracle import (
    CapacityExceededError,
    OptimalPlan,
    TransitionCandidate,
    bfs_optimal,
    check_transition,
    enumerate_successors,
)
from .planner import PlanResult, ValidationReport, solve, validate_plan

__all__ = [
    "ColShot",
    "Grid",
    "Instance",
    "NullMoveError",
    "OutOfRangeError",
    "RowShot",
    "Shot",
    "ShotError",
    "TransitionOutcome",
    "apply_shot",
    "block_count",
    "colour_sum",
    "is_goal",
    "legal_shots",
    "wall_fall",
    "CapacityExceededError",
    "OptimalPlan",
    "TransitionCandidate",
    "bfs_optimal",
    "check_transition",
    "enumerate_successors",
    "PlanResult",
    "ValidationReport",
    "solve",
    "validate_plan",
]
