"""Independent ground truth for transitions and optimal plans.

:func:`check_transition` evaluates the full state-and-action constraint case
analysis directly on a candidate transition, one predicate per rule case.
:func:`enumerate_successors` exhaustively searches the candidate space per
shot, and :func:`bfs_optimal` is a breadth-first optimal planner. All three
are written independently of :mod:`plotting_solver.engine` so the two can be
played against each other.

Convention used throughout: any atom that refers to a cell outside the grid
evaluates to False, for both equality and inequality atoms. Quantifications
over empty index ranges are vacuously true (for-all) or false (exists).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .engine import (
    ColShot,
    Grid,
    Instance,
    RowShot,
    Shot,
    colour_sum,
    is_goal,
    shot_axes,
)

EMPTY = 0


class CapacityExceededError(Exception):
    """The requested exhaustive search is larger than the configured bound."""


@dataclass(frozen=True)
class TransitionCandidate:
    """One time-slice pair of states plus the action and wall-fall value."""

    prev_grid: Grid
    prev_hand: int
    shot: Shot
    next_grid: Grid
    next_hand: int
    wall_fall: int

    def __post_init__(self) -> None:
        if (self.prev_grid.height, self.prev_grid.width) != (
            self.next_grid.height,
            self.next_grid.width,
        ):
            raise ValueError("candidate grids must share dimensions")


class _Ctx:
    """Atom evaluators over one candidate, with out-of-range atoms false."""

    def __init__(self, cand: TransitionCandidate):
        self.prev = cand.prev_grid.cells
        self.next = cand.next_grid.cells
        self.hand = cand.prev_hand
        self.next_hand = cand.next_hand
        self.fp_row, self.fp_col = shot_axes(cand.shot)
        self.wall_fall = cand.wall_fall
        self.H = cand.prev_grid.height
        self.W = cand.prev_grid.width

    def in_range(self, r: int, c: int) -> bool:
        return 1 <= r <= self.H and 1 <= c <= self.W

    def prev_at(self, r: int, c: int) -> Optional[int]:
        if not self.in_range(r, c):
            return None
        return self.prev[r - 1][c - 1]

    def prev_empty(self, r: int, c: int) -> bool:
        return self.prev_at(r, c) == EMPTY

    def prev_nonempty(self, r: int, c: int) -> bool:
        v = self.prev_at(r, c)
        return v is not None and v != EMPTY

    def prev_is_hand(self, r: int, c: int) -> bool:
        return self.prev_at(r, c) == self.hand

    def prev_empty_or_hand(self, r: int, c: int) -> bool:
        v = self.prev_at(r, c)
        return v == EMPTY or v == self.hand

    def blocker(self, r: int, c: int) -> bool:
        """Occupied and not the hand's colour."""
        v = self.prev_at(r, c)
        return v is not None and v != EMPTY and v != self.hand

    def prev_eq(self, r1: int, c1: int, r2: int, c2: int) -> bool:
        a, b = self.prev_at(r1, c1), self.prev_at(r2, c2)
        return a is not None and b is not None and a == b

    def prev_neq(self, r1: int, c1: int, r2: int, c2: int) -> bool:
        a, b = self.prev_at(r1, c1), self.prev_at(r2, c2)
        return a is not None and b is not None and a != b


def _hand_unchanged_rhs(x: _Ctx) -> bool:
    """The two situations in which the hand keeps its colour."""
    # A column shot that passes every block and rebounds off the floor.
    if all(x.prev_empty_or_hand(rr, x.fp_col) for rr in range(1, x.H + 1)):
        return True
    # A row shot that clears its row, then drops through the last column.
    if all(x.prev_empty_or_hand(x.fp_row, cc) for cc in range(1, x.W + 1)) and all(
        x.prev_empty_or_hand(rr, x.W) for rr in range(x.fp_row + 1, x.H + 1)
    ):
        return True
    return False


def _empty_rhs(x: _Ctx, r: int, c: int) -> bool:
    """The six ways a cell ends up empty."""
    # Empty cells stay empty.
    if x.prev_empty(r, c):
        return True
    # Consumed by a column shot with a clear path above.
    if (
        x.fp_col == c
        and x.prev_is_hand(r, c)
        and all(x.prev_empty_or_hand(rr, x.fp_col) for rr in range(1, r))
    ):
        return True
    # Consumed by a row shot with nothing above to fall in.
    if (
        x.fp_row == r
        and x.prev_is_hand(r, c)
        and (r == 1 or x.prev_empty(r - 1, c))
        and all(x.prev_empty_or_hand(r, cc) for cc in range(1, c))
    ):
        return True
    # Consumed by the drop of a wall shot, nothing above on the last column.
    if (
        c == x.W
        and x.fp_row < r
        and x.prev_is_hand(r, x.W)
        and all(x.prev_empty_or_hand(x.fp_row, cc) for cc in range(1, x.W + 1))
        and all(x.prev_empty_or_hand(rr, x.W) for rr in range(x.fp_row + 1, r))
        and all(x.prev_empty(rr, x.W) for rr in range(1, x.fp_row))
    ):
        return True
    # Vacated: the block here fell into a consumption on a lower row.
    if (
        (r == 1 or x.prev_empty(r - 1, c))
        and x.fp_row > r
        and all(x.prev_empty_or_hand(x.fp_row, cc) for cc in range(1, c + 1))
    ):
        return True
    # Last column after a wall fall: whatever would land here is empty or
    # above the grid. Applies to cells strictly above where the fallen
    # stack ends (row < fired row + fall distance).
    if (
        c == x.W
        and x.wall_fall > 0
        and r < x.fp_row + x.wall_fall
        and (r - x.wall_fall < 1 or x.prev_empty(r - x.wall_fall, x.W))
    ):
        return True
    return False


def _same_rhs(x: _Ctx, r: int, c: int) -> bool:
    """The nine ways a cell keeps its value."""
    if x.prev_empty(r, c):
        return True
    # Fired below this row, but the shot stopped before reaching this column.
    if x.fp_row > r and any(x.blocker(x.fp_row, cc) for cc in range(1, c + 1)):
        return True
    # Fired along this row, but something is in the way to the left.
    if x.fp_row == r and any(x.blocker(r, cc) for cc in range(1, c)):
        return True
    # Fired along a row above; columns before the last are untouched.
    if c < x.W and x.fp_row != 0 and x.fp_row < r:
        return True
    # Fired along a row above, last column, but the travel stopped on the
    # row or in the column above this cell.
    if (
        c == x.W
        and x.fp_row != 0
        and x.fp_row < r
        and (
            any(x.blocker(x.fp_row, cc) for cc in range(1, x.W + 1))
            or any(
                rr >= x.fp_row and x.blocker(rr, x.W) for rr in range(1, r)
            )
        )
    ):
        return True
    # Fired down this column, but something above is in the way.
    if x.fp_col == c and any(x.blocker(rr, c) for rr in range(1, r)):
        return True
    # Fired down a different column.
    if x.fp_col != 0 and x.fp_col != c:
        return True
    # A same-coloured block falls here (single-cell fall, not last column).
    if (
        c < x.W
        and x.fp_row >= r
        and all(x.prev_empty_or_hand(x.fp_row, cc) for cc in range(1, c + 1))
        and x.prev_eq(r - 1, c, r, c)
    ):
        return True
    # A same-coloured block falls here after a wall fall (last column).
    # Applies to cells within the landing span (row < fired row + fall).
    if (
        c == x.W
        and x.wall_fall > 0
        and r < x.fp_row + x.wall_fall
        and x.prev_eq(r - x.wall_fall, c, r, c)
    ):
        return True
    return False


def _change_rhs(x: _Ctx, r: int, c: int, v: int) -> bool:
    """The five ways a cell changes to a different, non-empty colour ``v``."""
    # A different-coloured block falls one cell (not the last column).
    if (
        c < x.W
        and x.prev_nonempty(r - 1, c)
        and x.fp_row >= r
        and all(x.prev_empty_or_hand(x.fp_row, cc) for cc in range(1, c + 1))
        and v == x.prev_at(r - 1, c)
        and x.prev_neq(r, c, r - 1, c)
    ):
        return True
    # A different-coloured block lands here after a wall fall (last column,
    # within the landing span; the source cell must hold a block).
    if (
        c == x.W
        and x.wall_fall > 0
        and r < x.fp_row + x.wall_fall
        and x.prev_nonempty(r - x.wall_fall, x.W)
        and v == x.prev_at(r - x.wall_fall, x.W)
        and x.prev_neq(r, x.W, r - x.wall_fall, x.W)
    ):
        return True
    # Swap with the hand where a row shot stopped.
    if (
        r == x.fp_row
        and all(x.prev_empty_or_hand(x.fp_row, cc) for cc in range(1, c))
        and any(x.prev_is_hand(x.fp_row, cc) for cc in range(1, c))
        and x.next_hand == x.prev_at(r, c)
        and x.hand == v
        and x.hand != x.prev_at(r, c)
    ):
        return True
    # Swap with the hand where a column shot stopped.
    if (
        c == x.fp_col
        and all(x.prev_empty_or_hand(rr, x.fp_col) for rr in range(1, r))
        and any(x.prev_is_hand(rr, x.fp_col) for rr in range(1, r))
        and x.next_hand == x.prev_at(r, c)
        and x.hand == v
        and x.hand != x.prev_at(r, c)
    ):
        return True
    # Swap with the hand where the drop of a wall shot stopped.
    if (
        c == x.W
        and x.fp_row < r
        and all(x.prev_empty_or_hand(x.fp_row, cc) for cc in range(1, x.W))
        and all(
            x.prev_empty_or_hand(rr, x.W)
            for rr in range(1, r)
            if rr >= x.fp_row
        )
        and (
            any(x.prev_is_hand(x.fp_row, cc) for cc in range(1, x.W))
            or any(
                x.prev_is_hand(rr, x.W)
                for rr in range(1, r)
                if rr >= x.fp_row
            )
        )
        and x.next_hand == x.prev_at(r, x.W)
        and x.hand == v
        and x.hand != x.prev_at(r, x.W)
    ):
        return True
    return False


def _wall_fall_case(x: _Ctx, i: int) -> bool:
    """Whether a wall-fall distance of exactly ``i`` is justified."""
    for row in range(2, x.H + 1):
        if (
            x.fp_row == row
            and all(x.prev_empty_or_hand(row, cc) for cc in range(1, x.W + 1))
            and x.prev_nonempty(row - 1, x.W)
            and all(x.prev_is_hand(rr, x.W) for rr in range(row, row + i))
            and (
                row + i > x.H
                or (
                    x.prev_at(row + i, x.W) is not None
                    and x.prev_at(row + i, x.W) != x.hand
                )
            )
        ):
            return True
    return False


def check_transition(cand: TransitionCandidate) -> bool:
    """True iff the candidate satisfies every constraint case.

    Includes the progress requirement (the colour sum must strictly
    decrease) and the one-axis-per-shot requirement.
    """
    x = _Ctx(cand)
    if not (x.fp_row * x.fp_col == 0 and x.fp_row + x.fp_col > 0):
        return False
    if colour_sum(cand.prev_grid) <= colour_sum(cand.next_grid):
        return False
    if (x.hand == x.next_hand) != _hand_unchanged_rhs(x):
        return False
    for i in range(1, x.H + 1):
        if (x.wall_fall == i) != _wall_fall_case(x, i):
            return False
    for r in range(1, x.H + 1):
        for c in range(1, x.W + 1):
            nv = x.next[r - 1][c - 1]
            pv = x.prev[r - 1][c - 1]
            if (nv == EMPTY) != _empty_rhs(x, r, c):
                return False
            if (nv == pv) != _same_rhs(x, r, c):
                return False
            if ((nv != pv) and (nv != EMPTY)) != _change_rhs(x, r, c, nv):
                return False
    return True


def _all_shots(grid: Grid) -> list[Shot]:
    shots: list[Shot] = [RowShot(r) for r in range(1, grid.height + 1)]
    shots += [ColShot(c) for c in range(1, grid.width + 1)]
    return shots


def enumerate_successors(
    prev_grid: Grid,
    prev_hand: int,
    colour_count: Optional[int] = None,
    capacity: int = 10_000_000,
) -> list[tuple[Shot, TransitionCandidate]]:
    """Every accepted (next grid, next hand, wall fall) triple, per shot.

    The search space per shot is all grids over 0..K, all hands 1..K and all
    wall-fall values 0..height. Candidate cell values are first filtered by
    the per-cell constraint cases (each a necessary condition), then every
    surviving combination is confirmed with :func:`check_transition`.

    Raises :class:`CapacityExceededError` when the nominal space exceeds
    ``capacity``.
    """
    height, width = prev_grid.height, prev_grid.width
    K = colour_count
    if K is None:
        K = max(prev_hand, max(max(row) for row in prev_grid.cells))
    shots = _all_shots(prev_grid)
    nominal = len(shots) * (K + 1) ** (height * width) * K * (height + 1)
    if nominal > capacity:
        raise CapacityExceededError(
            f"enumeration space {nominal} exceeds capacity {capacity}"
        )

    results: list[tuple[Shot, TransitionCandidate]] = []
    prev_sum = colour_sum(prev_grid)
    for shot in shots:
        for wf in range(0, height + 1):
            for nh in range(1, K + 1):
                probe = TransitionCandidate(
                    prev_grid, prev_hand, shot, prev_grid, nh, wf
                )
                x = _Ctx(probe)
                if any(
                    (wf == i) != _wall_fall_case(x, i)
                    for i in range(1, height + 1)
                ):
                    continue
                if (prev_hand == nh) != _hand_unchanged_rhs(x):
                    continue
                allowed: list[list[int]] = []
                feasible = True
                for r in range(1, height + 1):
                    for c in range(1, width + 1):
                        pv = prev_grid.cells[r - 1][c - 1]
                        e = _empty_rhs(x, r, c)
                        s = _same_rhs(x, r, c)
                        vals = [
                            v
                            for v in range(0, K + 1)
                            if (v == EMPTY) == e
                            and (v == pv) == s
                            and ((v != pv and v != EMPTY))
                            == _change_rhs(x, r, c, v)
                        ]
                        if not vals:
                            feasible = False
                            break
                        allowed.append(vals)
                    if not feasible:
                        break
                if not feasible:
                    continue
                for combo in itertools.product(*allowed):
                    rows = tuple(
                        tuple(combo[r * width : (r + 1) * width])
                        for r in range(height)
                    )
                    if colour_sum(Grid(rows)) >= prev_sum:
                        continue
                    cand = TransitionCandidate(
                        prev_grid, prev_hand, shot, Grid(rows), nh, wf
                    )
                    if check_transition(cand):
                        results.append((shot, cand))
    return results


@dataclass(frozen=True)
class OptimalPlan:
    length: int
    hand0: int
    plan: tuple[Shot, ...]


def bfs_optimal(
    instance: Instance,
    max_steps: int,
    state_cap: int = 2_000_000,
) -> Optional[OptimalPlan]:
    """Minimal-length plan over all initial hand colours, or None.

    The initial hand is free (the wildcard block the avatar starts with),
    so every colour 1..colour_count is tried; ties between equal-length
    plans go to the smaller initial hand, and within one search to
    breadth-first visit order with rows expanded before columns.

    Raises :class:`CapacityExceededError` past ``state_cap`` visited states.
    """
    from . import engine

    if instance.goal is None:
        raise ValueError("instance has no goal")
    goal = instance.goal
    if is_goal(instance.grid, goal):
        return OptimalPlan(0, 1, ())
    best: Optional[OptimalPlan] = None
    for hand0 in range(1, instance.colour_count + 1):
        found = _bfs_from(instance.grid, hand0, goal, max_steps, state_cap)
        if found is not None and (best is None or found[0] < best.length):
            best = OptimalPlan(found[0], hand0, found[1])
    return best


def _bfs_from(
    grid: Grid,
    hand0: int,
    goal: int,
    max_steps: int,
    state_cap: int,
) -> Optional[tuple[int, tuple[Shot, ...]]]:
    from . import engine

    start = (grid.cells, hand0)
    parents: dict = {start: None}
    frontier = [start]
    depth = 0
    while frontier and depth < max_steps:
        depth += 1
        next_frontier = []
        for state in frontier:
            g = Grid(state[0])
            hand = state[1]
            for shot in engine.legal_shots(g, hand):
                out = engine.apply_shot(g, hand, shot)
                nxt = (out.next_grid.cells, out.next_hand)
                if nxt in parents:
                    continue
                parents[nxt] = (state, shot)
                if len(parents) > state_cap:
                    raise CapacityExceededError(
                        f"breadth-first search exceeded {state_cap} states"
                    )
                if is_goal(out.next_grid, goal):
                    plan = []
                    cur = nxt
                    while parents[cur] is not None:
                        cur, used = parents[cur]
                        plan.append(used)
                    plan.reverse()
                    return depth, tuple(plan)
                next_frontier.append(nxt)
        frontier = next_frontier
    return None
