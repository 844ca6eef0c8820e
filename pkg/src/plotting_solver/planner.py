"""Bounded-horizon planning driver: iterate horizons, solve, decode, validate.

Horizons are probed in increasing order from 1 up to the sound bound
``blocks - goal`` (every shot consumes at least one block), so the first
satisfiable horizon is the minimal plan length. Decoded plans are replayed
through the engine and cross-checked against the constraint-case oracle
before being reported.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from . import cnf, encoder, engine, oracle
from .engine import Instance, Shot

Backend = Union[str, Sequence[str]]

INTERNAL_BACKEND = "internal"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of replaying a plan from the initial state."""

    ok: bool
    failed_step: Optional[int] = None  # 1-based index of the first bad shot
    reason: Optional[str] = None
    final_blocks: Optional[int] = None
    goal_met: Optional[bool] = None


@dataclass(frozen=True)
class PlanResult:
    """Found plan, proved absence within the bound, or unknown.

    ``horizon_statuses`` records one entry per probed horizon:
    ("sat" | "unsat" | "unknown: <reason>").
    """

    status: str  # "found" | "unsat" | "unknown"
    horizon: Optional[int] = None
    hand0: Optional[int] = None
    plan: tuple[Shot, ...] = ()
    max_steps: Optional[int] = None
    horizon_statuses: tuple[tuple[int, str], ...] = ()

    @property
    def found(self) -> bool:
        return self.status == "found"


def validate_plan(
    instance: Instance, hand0: int, plan: Sequence[Shot]
) -> ValidationReport:
    """Replay ``plan`` through the engine, oracle-checking every step."""
    if instance.goal is None:
        raise ValueError("instance has no goal")
    grid, hand = instance.grid, hand0
    for idx, shot in enumerate(plan, start=1):
        try:
            out = engine.apply_shot(grid, hand, shot)
        except engine.ShotError as exc:
            return ValidationReport(
                ok=False,
                failed_step=idx,
                reason=f"{type(exc).__name__}: {exc}",
            )
        cand = oracle.TransitionCandidate(
            prev_grid=grid,
            prev_hand=hand,
            shot=shot,
            next_grid=out.next_grid,
            next_hand=out.next_hand,
            wall_fall=out.wall_fall,
        )
        if not oracle.check_transition(cand):
            return ValidationReport(
                ok=False,
                failed_step=idx,
                reason="transition rejected by the constraint-case checker",
            )
        grid, hand = out.next_grid, out.next_hand
    blocks = engine.block_count(grid)
    met = engine.is_goal(grid, instance.goal)
    return ValidationReport(
        ok=met,
        failed_step=None,
        reason=None if met else f"{blocks} blocks remain, goal {instance.goal}",
        final_blocks=blocks,
        goal_met=met,
    )


def _solve_formula(
    formula: cnf.CnfFormula,
    backend: Backend,
    timeout: Optional[float],
    dpll_budget: Optional[int],
) -> cnf.SatOutcome:
    if backend == INTERNAL_BACKEND:
        return cnf.dpll_solve(formula, budget=dpll_budget)
    return cnf.external_solve(formula, backend, timeout=timeout)


def solve(
    instance: Instance,
    backend: Backend = INTERNAL_BACKEND,
    max_steps: Optional[int] = None,
    per_horizon_timeout: Optional[float] = None,
    *,
    fixed_hand: Optional[int] = None,
    progress_encoding: str = encoder.PROGRESS_WITNESS,
    dpll_budget: Optional[int] = None,
    emit_cnf_dir: Optional[Union[str, os.PathLike]] = None,
) -> PlanResult:
    """Find a minimal-length plan for ``instance``.

    Probes horizons 1.. in order; the result is Found at the first
    satisfiable horizon, NoPlanWithinBound when every horizon up to the
    bound is unsatisfiable, and Unknown when some horizon below the first
    satisfiable one was undecided (minimality would be unproven).
    """
    if instance.goal is None:
        raise ValueError("instance has no goal")
    if engine.is_goal(instance.grid, instance.goal):
        return PlanResult(
            status="found", horizon=0, hand0=fixed_hand or 1, plan=(), max_steps=0
        )

    bound = instance.block_total - instance.goal
    if max_steps is not None:
        bound = min(bound, max_steps)

    statuses: list[tuple[int, str]] = []
    saw_unknown = False
    for steps in range(1, bound + 1):
        options = encoder.EncodeOptions(
            steps=steps,
            fixed_initial_hand=fixed_hand,
            progress_encoding=progress_encoding,
        )
        formula, varmap = encoder.encode(instance, options)
        if emit_cnf_dir is not None:
            path = Path(emit_cnf_dir) / f"phi_{steps}.cnf"
            with open(path, "w") as fh:
                cnf.write_dimacs(formula, fh)
        outcome = _solve_formula(formula, backend, per_horizon_timeout, dpll_budget)
        if outcome.is_sat:
            statuses.append((steps, "sat"))
            trace = encoder.decode(outcome.model, varmap)
            report = validate_plan(instance, trace.initial_hand, trace.shots)
            if not report.ok:
                raise RuntimeError(
                    f"decoded plan failed validation at horizon {steps}: "
                    f"{report.reason}"
                )
            if saw_unknown:
                return PlanResult(
                    status="unknown",
                    max_steps=bound,
                    horizon_statuses=tuple(statuses),
                )
            return PlanResult(
                status="found",
                horizon=steps,
                hand0=trace.initial_hand,
                plan=trace.shots,
                max_steps=bound,
                horizon_statuses=tuple(statuses),
            )
        if outcome.is_unsat:
            statuses.append((steps, "unsat"))
        else:
            statuses.append((steps, f"unknown: {outcome.reason}"))
            saw_unknown = True
    if saw_unknown:
        return PlanResult(
            status="unknown", max_steps=bound, horizon_statuses=tuple(statuses)
        )
    return PlanResult(
        status="unsat", max_steps=bound, horizon_statuses=tuple(statuses)
    )
