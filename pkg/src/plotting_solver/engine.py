"""Exact transition semantics for the Plotting tile-matching puzzle.

Geometry: row 1 is the top row, column 1 is the leftmost column, and the
highest-numbered column sits against the wall. The avatar fires the block it
holds either rightward along a row or downward along a column. Cell value 0
means empty; colours are the contiguous integers 1..colour_count.

Rules realised by :func:`apply_shot`:

* The travelling block passes over empty cells.
* A block of the hand's colour is consumed and travel continues.
* The first block of a different colour swaps with the hand and travel stops,
  but only if at least one block was consumed first; otherwise the shot is a
  null move and is rejected.
* A row shot that clears the whole row hits the wall and drops down the last
  column, continuing to consume, until it swaps, or falls past the bottom and
  rebounds with the hand unchanged.
* After travel resolves, blocks above each consumed cell fall: one cell in
  consumed columns, and ``wall_fall`` cells in the last column after a wall
  drop.

Every rule condition is evaluated against the step-input grid; gravity is
applied once, after travel resolves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

EMPTY = 0


class ShotError(Exception):
    """A shot that cannot be applied to the given state."""


class NullMoveError(ShotError):
    """The shot would leave the grid unchanged; null moves are forbidden."""


class OutOfRangeError(ShotError):
    """Shot index outside the grid."""


@dataclass(frozen=True)
class RowShot:
    """Fire rightward along ``row`` (1-based, 1 = top)."""

    row: int


@dataclass(frozen=True)
class ColShot:
    """Fire downward along ``col`` (1-based, 1 = leftmost)."""

    col: int


Shot = Union[RowShot, ColShot]


def shot_axes(shot: Shot) -> tuple[int, int]:
    """Return the (fired_row, fired_col) pair, using 0 for the unused axis."""
    if isinstance(shot, RowShot):
        return shot.row, 0
    return 0, shot.col


@dataclass(frozen=True)
class Grid:
    """An immutable rows-by-columns matrix of cells (0 = empty)."""

    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.cells or not self.cells[0]:
            raise ValueError("grid must have at least one row and one column")
        width = len(self.cells[0])
        for row in self.cells:
            if len(row) != width:
                raise ValueError("grid rows must all have the same width")
            for value in row:
                if value < 0:
                    raise ValueError("cell values must be >= 0")

    @classmethod
    def from_rows(cls, rows) -> "Grid":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @property
    def height(self) -> int:
        return len(self.cells)

    @property
    def width(self) -> int:
        return len(self.cells[0])

    def at(self, row: int, col: int) -> int:
        """Cell value at 1-based (row, col)."""
        return self.cells[row - 1][col - 1]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.cells]


@dataclass(frozen=True)
class Instance:
    """A puzzle instance: a completely full starting grid plus a goal.

    ``goal`` is the maximum number of blocks that may remain; ``None`` means
    the goal will be supplied later (e.g. from a command-line flag). The
    declared colour count is the maximum colour actually present.
    """

    grid: Grid
    goal: Optional[int] = None

    def __post_init__(self) -> None:
        for row in self.grid.cells:
            for value in row:
                if value == EMPTY:
                    raise ValueError("instance grids must be completely full")
        if self.goal is not None:
            if not 0 <= self.goal <= self.grid.height * self.grid.width:
                raise ValueError("goal must be within 0..height*width")

    @property
    def colour_count(self) -> int:
        return max(max(row) for row in self.grid.cells)

    @property
    def block_total(self) -> int:
        return self.grid.height * self.grid.width

    def with_goal(self, goal: int) -> "Instance":
        return Instance(self.grid, goal)


@dataclass(frozen=True)
class TransitionOutcome:
    """Result of a successful shot.

    ``wall_fall`` is the distance blocks above the fired row fall in the last
    column (0 unless a row shot cleared its row and something fell).
    ``consumed`` counts cells that went from occupied to empty, always >= 1.
    """

    next_grid: Grid
    next_hand: int
    wall_fall: int
    consumed: int
    hand_swapped: bool


def block_count(grid: Grid) -> int:
    """Number of occupied cells."""
    return sum(1 for row in grid.cells for v in row if v != EMPTY)


def colour_sum(grid: Grid) -> int:
    """Sum of all cell values (empty counts 0)."""
    return sum(v for row in grid.cells for v in row)


def is_goal(grid: Grid, goal: int) -> bool:
    """True iff at most ``goal`` blocks remain."""
    return block_count(grid) <= goal


def wall_fall(grid: Grid, hand: int, row: int) -> int:
    """Distance blocks above ``row`` fall in the last column for a row shot.

    Nonzero only when ``row`` >= 2, the whole fired row is empty or
    hand-coloured, the last-column cell just above the fired row is occupied,
    and the last column holds a run of hand-coloured cells starting at the
    fired row. The returned value is the length of that run.
    """
    if row < 2:
        return 0
    height, width = grid.height, grid.width
    fired = grid.cells[row - 1]
    if any(v != EMPTY and v != hand for v in fired):
        return 0
    if grid.cells[row - 2][width - 1] == EMPTY:
        return 0
    run = 0
    r0 = row - 1
    while r0 + run < height and grid.cells[r0 + run][width - 1] == hand:
        run += 1
    return run


def apply_shot(grid: Grid, hand: int, shot: Shot) -> TransitionOutcome:
    """Apply one shot, returning the successor state.

    Raises :class:`NullMoveError` if the shot would consume nothing and
    :class:`OutOfRangeError` if the shot index is outside the grid.
    """
    if isinstance(shot, RowShot):
        if not 1 <= shot.row <= grid.height:
            raise OutOfRangeError(f"row {shot.row} outside 1..{grid.height}")
        return _apply_row_shot(grid, hand, shot.row)
    if isinstance(shot, ColShot):
        if not 1 <= shot.col <= grid.width:
            raise OutOfRangeError(f"col {shot.col} outside 1..{grid.width}")
        return _apply_col_shot(grid, hand, shot.col)
    raise TypeError(f"not a shot: {shot!r}")


def _apply_row_shot(grid: Grid, hand: int, row: int) -> TransitionOutcome:
    height, width = grid.height, grid.width
    r0 = row - 1
    cells = grid.cells

    consumed_cols: list[int] = []  # 0-based columns consumed along the row
    stop_col: Optional[int] = None
    for c0 in range(width):
        v = cells[r0][c0]
        if v == EMPTY:
            continue
        if v == hand:
            consumed_cols.append(c0)
        else:
            stop_col = c0
            break

    drop_rows: list[int] = []  # 0-based rows consumed while dropping
    drop_stop: Optional[int] = None
    hit_wall = stop_col is None
    if hit_wall:
        for rr0 in range(r0 + 1, height):
            v = cells[rr0][width - 1]
            if v == EMPTY:
                continue
            if v == hand:
                drop_rows.append(rr0)
            else:
                drop_stop = rr0
                break

    consumed = len(consumed_cols) + len(drop_rows)
    if consumed == 0:
        raise NullMoveError(f"row shot {row} consumes nothing")

    fall = wall_fall(grid, hand, row) if hit_wall else 0

    rows = [list(r) for r in cells]
    next_hand = hand
    swapped = False
    if stop_col is not None:
        next_hand = cells[r0][stop_col]
        rows[r0][stop_col] = hand
        swapped = True
    elif drop_stop is not None:
        next_hand = cells[drop_stop][width - 1]
        rows[drop_stop][width - 1] = hand
        swapped = True

    for c0 in consumed_cols:
        rows[r0][c0] = EMPTY
    for rr0 in drop_rows:
        rows[rr0][width - 1] = EMPTY

    # Gravity: one cell above each consumed column, ``fall`` cells in the
    # last column after a wall drop. The last column's shift overwrites the
    # blanks left by the drop.
    for c0 in consumed_cols:
        if c0 == width - 1 and hit_wall:
            continue
        for i in range(r0, 0, -1):
            rows[i][c0] = rows[i - 1][c0]
        rows[0][c0] = EMPTY
    if fall > 0:
        last = width - 1
        for i in range(r0 + fall - 1, fall - 1, -1):
            rows[i][last] = rows[i - fall][last]
        for i in range(fall):
            rows[i][last] = EMPTY

    return TransitionOutcome(
        next_grid=Grid(tuple(tuple(r) for r in rows)),
        next_hand=next_hand,
        wall_fall=fall,
        consumed=consumed,
        hand_swapped=swapped,
    )


def _apply_col_shot(grid: Grid, hand: int, col: int) -> TransitionOutcome:
    height = grid.height
    c0 = col - 1
    cells = grid.cells

    consumed_rows: list[int] = []
    stop_row: Optional[int] = None
    for r0 in range(height):
        v = cells[r0][c0]
        if v == EMPTY:
            continue
        if v == hand:
            consumed_rows.append(r0)
        else:
            stop_row = r0
            break

    if not consumed_rows:
        raise NullMoveError(f"col shot {col} consumes nothing")

    rows = [list(r) for r in cells]
    next_hand = hand
    swapped = False
    if stop_row is not None:
        next_hand = cells[stop_row][c0]
        rows[stop_row][c0] = hand
        swapped = True
    for r0 in consumed_rows:
        rows[r0][c0] = EMPTY

    # No gravity: only empty cells can sit above the consumed run.
    return TransitionOutcome(
        next_grid=Grid(tuple(tuple(r) for r in rows)),
        next_hand=next_hand,
        wall_fall=0,
        consumed=len(consumed_rows),
        hand_swapped=swapped,
    )


def legal_shots(grid: Grid, hand: int) -> list[Shot]:
    """All shots apply_shot accepts, rows 1..height then columns 1..width."""
    shots: list[Shot] = []
    for r in range(1, grid.height + 1):
        try:
            apply_shot(grid, hand, RowShot(r))
        except ShotError:
            pass
        else:
            shots.append(RowShot(r))
    for c in range(1, grid.width + 1):
        try:
            apply_shot(grid, hand, ColShot(c))
        except ShotError:
            pass
        else:
            shots.append(ColShot(c))
    return shots
