"""On-disk formats for instances and plans.

Instance files::

    plotting-instance v1
    size <height> <width>
    goal <g>            (optional)
    grid
    <height lines of width space-separated colours, all >= 1>

Plan files::

    plotting-plan v1
    hand <colour>
    row <r> | col <c>   (one line per shot, in order)
"""

from __future__ import annotations

from typing import Optional, Sequence

from .engine import ColShot, Grid, Instance, RowShot, Shot

INSTANCE_HEADER = "plotting-instance v1"
PLAN_HEADER = "plotting-plan v1"


class FormatError(ValueError):
    """Malformed instance or plan file."""


def _lines(text: str) -> list[str]:
    return [line.strip() for line in text.splitlines() if line.strip()]


def parse_instance(text: str) -> Instance:
    lines = _lines(text)
    if not lines or lines[0] != INSTANCE_HEADER:
        raise FormatError(f"expected header {INSTANCE_HEADER!r}")
    pos = 1
    if pos >= len(lines) or not lines[pos].startswith("size "):
        raise FormatError("expected a 'size <height> <width>' line")
    try:
        height, width = (int(tok) for tok in lines[pos].split()[1:])
    except ValueError as exc:
        raise FormatError(f"bad size line {lines[pos]!r}") from exc
    if height < 1 or width < 1:
        raise FormatError("size must be at least 1x1")
    pos += 1
    goal: Optional[int] = None
    if pos < len(lines) and lines[pos].startswith("goal "):
        try:
            goal = int(lines[pos].split()[1])
        except (IndexError, ValueError) as exc:
            raise FormatError(f"bad goal line {lines[pos]!r}") from exc
        if not 0 <= goal <= height * width:
            raise FormatError(f"goal {goal} outside 0..{height * width}")
        pos += 1
    if pos >= len(lines) or lines[pos] != "grid":
        raise FormatError("expected a 'grid' line")
    pos += 1
    if len(lines) - pos != height:
        raise FormatError(f"expected {height} grid rows, got {len(lines) - pos}")
    rows = []
    for line in lines[pos:]:
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise FormatError(f"bad grid row {line!r}") from exc
        if len(row) != width:
            raise FormatError(f"grid row {line!r} is not {width} cells wide")
        if any(v < 1 for v in row):
            raise FormatError("instance grids must be full (all cells >= 1)")
        rows.append(row)
    return Instance(Grid.from_rows(rows), goal)


def write_instance(instance: Instance) -> str:
    out = [INSTANCE_HEADER]
    out.append(f"size {instance.grid.height} {instance.grid.width}")
    if instance.goal is not None:
        out.append(f"goal {instance.goal}")
    out.append("grid")
    for row in instance.grid.cells:
        out.append(" ".join(str(v) for v in row))
    return "\n".join(out) + "\n"


def parse_plan(text: str) -> tuple[int, list[Shot]]:
    lines = _lines(text)
    if not lines or lines[0] != PLAN_HEADER:
        raise FormatError(f"expected header {PLAN_HEADER!r}")
    if len(lines) < 2 or not lines[1].startswith("hand "):
        raise FormatError("expected a 'hand <colour>' line")
    try:
        hand = int(lines[1].split()[1])
    except (IndexError, ValueError) as exc:
        raise FormatError(f"bad hand line {lines[1]!r}") from exc
    if hand < 1:
        raise FormatError("hand colour must be >= 1")
    shots: list[Shot] = []
    for line in lines[2:]:
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("row", "col"):
            raise FormatError(f"bad shot line {line!r}")
        try:
            index = int(parts[1])
        except ValueError as exc:
            raise FormatError(f"bad shot line {line!r}") from exc
        if index < 1:
            raise FormatError(f"shot index must be >= 1 in {line!r}")
        shots.append(RowShot(index) if parts[0] == "row" else ColShot(index))
    return hand, shots


def write_plan(hand0: int, plan: Sequence[Shot]) -> str:
    out = [PLAN_HEADER, f"hand {hand0}"]
    for shot in plan:
        if isinstance(shot, RowShot):
            out.append(f"row {shot.row}")
        else:
            out.append(f"col {shot.col}")
    return "\n".join(out) + "\n"
