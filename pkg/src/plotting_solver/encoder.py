"""Bounded-horizon CNF encoding of Plotting instances, and model decoding.

Every multi-valued quantity (grid cell, hand, fired row, fired column, wall
fall) becomes a one-hot group of propositional variables per time step. The
transition rules are emitted per step as if-and-only-if constraints between
the step's state variables, reified case by case, so unconstrained values
cannot leak: cells keep their values unless a rule case says otherwise.

Variable allocation is deterministic: step 0 grid cells (row major, value
0..K per cell) then the step-0 hand, then for each step the fired-row group,
fired-column group, wall-fall group, grid and hand. Auxiliary (gate)
variables all come after the primary groups, so DIMACS output is byte-stable
for a given instance and options.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from .cnf import CnfFormula, Gate, at_least_k, exactly_one, reify
from .engine import ColShot, Grid, Instance, RowShot, Shot

PROGRESS_WITNESS = "consumptionWitness"
PROGRESS_CARDINALITY = "cardinalityCompare"
PROGRESS_MODES = (PROGRESS_WITNESS, PROGRESS_CARDINALITY)

EMPTY = 0


class InvalidHorizonError(ValueError):
    """Horizons below one step cannot be encoded."""


class MalformedModelError(RuntimeError):
    """A satisfying model violated a one-hot group; encoder bug."""


@dataclass(frozen=True)
class EncodeOptions:
    """Horizon length, optional pinned initial hand, progress style.

    The initial hand is left free by default, which is how the wildcard
    block the avatar starts with is modelled. ``progress_encoding`` selects
    between a per-step consumed-cell witness (default) and a unary
    comparison of the grids' colour sums.
    """

    steps: int
    fixed_initial_hand: Optional[int] = None
    progress_encoding: str = PROGRESS_WITNESS


@dataclass(frozen=True)
class VarMap:
    """Deterministic mapping from (step, state variable, value) to var ids."""

    height: int
    width: int
    colours: int
    steps: int

    @property
    def _grid_block(self) -> int:
        return self.height * self.width * (self.colours + 1)

    @property
    def _step0_block(self) -> int:
        return self._grid_block + self.colours

    @property
    def _step_block(self) -> int:
        return (
            (self.height + 1)
            + (self.width + 1)
            + (self.height + 1)
            + self._grid_block
            + self.colours
        )

    @property
    def primary_count(self) -> int:
        return self._step0_block + self.steps * self._step_block

    def _step_base(self, step: int) -> int:
        return 1 + self._step0_block + (step - 1) * self._step_block

    def grid_var(self, step: int, row: int, col: int, value: int) -> int:
        offset = ((row - 1) * self.width + (col - 1)) * (self.colours + 1) + value
        if step == 0:
            return 1 + offset
        return (
            self._step_base(step)
            + (self.height + 1)
            + (self.width + 1)
            + (self.height + 1)
            + offset
        )

    def hand_var(self, step: int, colour: int) -> int:
        if step == 0:
            return 1 + self._grid_block + (colour - 1)
        return self._step_base(step) + self._step_block - self.colours + (colour - 1)

    def row_shot_var(self, step: int, value: int) -> int:
        return self._step_base(step) + value

    def col_shot_var(self, step: int, value: int) -> int:
        return self._step_base(step) + (self.height + 1) + value

    def wall_fall_var(self, step: int, value: int) -> int:
        return self._step_base(step) + (self.height + 1) + (self.width + 1) + value


@dataclass(frozen=True)
class DecodedTrace:
    """A plan plus the full state trajectory read out of a model."""

    initial_hand: int
    shots: tuple[Shot, ...]
    wall_falls: tuple[int, ...]
    grids: tuple[Grid, ...]
    hands: tuple[int, ...]


class _Const:
    __slots__ = ("name",)

    def __init__(self, name: str) -> None:
        self.name = name

    def __repr__(self) -> str:
        return self.name


TRUE = _Const("TRUE")
FALSE = _Const("FALSE")

Expr = Union[int, _Const]


class _Builder:
    """Constraint builder with constant folding and gate memoisation."""

    def __init__(self, formula: CnfFormula, varmap: VarMap) -> None:
        self.f = formula
        self.vm = varmap
        self.memo: dict = {}

    # -- boolean structure -------------------------------------------------

    def neg(self, t: Expr) -> Expr:
        if t is TRUE:
            return FALSE
        if t is FALSE:
            return TRUE
        return -t

    def conj(self, terms: Sequence[Expr]) -> Expr:
        lits = []
        for t in terms:
            if t is FALSE:
                return FALSE
            if t is TRUE:
                continue
            lits.append(t)
        lits = sorted(set(lits))
        for lit in lits:
            if -lit in lits:
                return FALSE
        if not lits:
            return TRUE
        if len(lits) == 1:
            return lits[0]
        key = ("and", tuple(lits))
        if key not in self.memo:
            self.memo[key] = reify(self.f, Gate.AND, lits)
        return self.memo[key]

    def disj(self, terms: Sequence[Expr]) -> Expr:
        lits = []
        for t in terms:
            if t is TRUE:
                return TRUE
            if t is FALSE:
                continue
            lits.append(t)
        lits = sorted(set(lits))
        for lit in lits:
            if -lit in lits:
                return TRUE
        if not lits:
            return FALSE
        if len(lits) == 1:
            return lits[0]
        key = ("or", tuple(lits))
        if key not in self.memo:
            self.memo[key] = reify(self.f, Gate.OR, lits)
        return self.memo[key]

    def require(self, t: Expr) -> None:
        if t is TRUE:
            return
        if t is FALSE:
            self.f.add_false()
            return
        self.f.add_clause((t,))

    def require_iff(self, a: Expr, b: Expr) -> None:
        if a is TRUE:
            self.require(b)
        elif a is FALSE:
            self.require(self.neg(b))
        elif b is TRUE:
            self.require(a)
        elif b is FALSE:
            self.require(self.neg(a))
        else:
            self.f.add_clause((-a, b))
            self.f.add_clause((a, -b))

    # -- atoms -------------------------------------------------------------

    def in_range(self, r: int, c: int) -> bool:
        return 1 <= r <= self.vm.height and 1 <= c <= self.vm.width

    def cell(self, t: int, r: int, c: int, v: int) -> Expr:
        if not self.in_range(r, c):
            return FALSE
        return self.vm.grid_var(t, r, c, v)

    def cell_empty(self, t: int, r: int, c: int) -> Expr:
        return self.cell(t, r, c, EMPTY)

    def hand_cell_eq(self, hand_step: int, cell_step: int, r: int, c: int) -> Expr:
        """The hand at one step matches the cell's colour at another step."""
        if not self.in_range(r, c):
            return FALSE
        key = ("hce", hand_step, cell_step, r, c)
        if key not in self.memo:
            self.memo[key] = self.disj(
                [
                    self.conj(
                        [
                            self.vm.hand_var(hand_step, v),
                            self.vm.grid_var(cell_step, r, c, v),
                        ]
                    )
                    for v in range(1, self.vm.colours + 1)
                ]
            )
        return self.memo[key]

    def prev_is_hand(self, s: int, r: int, c: int) -> Expr:
        return self.hand_cell_eq(s - 1, s - 1, r, c)

    def clear(self, s: int, r: int, c: int) -> Expr:
        """Cell is empty or matches the hand, at the step before ``s``."""
        if not self.in_range(r, c):
            return FALSE
        key = ("clear", s, r, c)
        if key not in self.memo:
            self.memo[key] = self.disj(
                [self.cell_empty(s - 1, r, c), self.prev_is_hand(s, r, c)]
            )
        return self.memo[key]

    def blocker(self, s: int, r: int, c: int) -> Expr:
        """Cell is occupied and differs from the hand, before step ``s``."""
        if not self.in_range(r, c):
            return FALSE
        key = ("blocker", s, r, c)
        if key not in self.memo:
            self.memo[key] = self.conj(
                [
                    self.neg(self.cell_empty(s - 1, r, c)),
                    self.neg(self.prev_is_hand(s, r, c)),
                ]
            )
        return self.memo[key]

    def cells_eq(
        self, t1: int, r1: int, c1: int, t2: int, r2: int, c2: int
    ) -> Expr:
        if not (self.in_range(r1, c1) and self.in_range(r2, c2)):
            return FALSE
        a, b = sorted([(t1, r1, c1), (t2, r2, c2)])
        key = ("cellseq", a, b)
        if key not in self.memo:
            self.memo[key] = self.disj(
                [
                    self.conj(
                        [self.vm.grid_var(*a, v), self.vm.grid_var(*b, v)]
                    )
                    for v in range(0, self.vm.colours + 1)
                ]
            )
        return self.memo[key]

    def cells_neq(
        self, t1: int, r1: int, c1: int, t2: int, r2: int, c2: int
    ) -> Expr:
        if not (self.in_range(r1, c1) and self.in_range(r2, c2)):
            return FALSE
        return self.neg(self.cells_eq(t1, r1, c1, t2, r2, c2))

    def hand_eq(self, t1: int, t2: int) -> Expr:
        key = ("handeq", t1, t2)
        if key not in self.memo:
            self.memo[key] = self.disj(
                [
                    self.conj(
                        [self.vm.hand_var(t1, v), self.vm.hand_var(t2, v)]
                    )
                    for v in range(1, self.vm.colours + 1)
                ]
            )
        return self.memo[key]

    def fired_row_above(self, s: int, threshold: int) -> Expr:
        """fired row value strictly greater than ``threshold``."""
        values = [v for v in range(0, self.vm.height + 1) if v > threshold]
        if len(values) == self.vm.height + 1:
            return TRUE
        if not values:
            return FALSE
        key = ("rowgt", s, threshold)
        if key not in self.memo:
            self.memo[key] = self.disj(
                [self.vm.row_shot_var(s, v) for v in values]
            )
        return self.memo[key]


@dataclass(frozen=True)
class _Template:
    var_count: int
    clauses: tuple[tuple[int, ...], ...]
    varmap: VarMap


def encode(
    instance: Instance, options: EncodeOptions
) -> tuple[CnfFormula, VarMap]:
    """CNF formula satisfiable iff a plan of exactly ``options.steps``
    progressing shots reaches the instance goal, for some initial hand
    colour (or the pinned one)."""
    if options.steps < 1:
        raise InvalidHorizonError(f"horizon {options.steps} is below 1")
    if instance.goal is None:
        raise ValueError("instance has no goal")
    if options.progress_encoding not in PROGRESS_MODES:
        raise ValueError(f"unknown progress encoding {options.progress_encoding!r}")
    colours = instance.colour_count
    fixed = options.fixed_initial_hand
    if fixed is not None and not 1 <= fixed <= colours:
        raise ValueError(f"initial hand {fixed} outside 1..{colours}")

    goal_empties = instance.block_total - instance.goal
    template = _build_template(
        instance.grid.height,
        instance.grid.width,
        colours,
        options.steps,
        goal_empties,
        options.progress_encoding,
    )
    formula = CnfFormula()
    formula.var_count = template.var_count
    formula.clauses = list(template.clauses)
    varmap = template.varmap
    for r in range(1, instance.grid.height + 1):
        for c in range(1, instance.grid.width + 1):
            formula.add_clause((varmap.grid_var(0, r, c, instance.grid.at(r, c)),))
    if fixed is not None:
        formula.add_clause((varmap.hand_var(0, fixed),))
    return formula, varmap


@lru_cache(maxsize=None)
def _build_template(
    height: int,
    width: int,
    colours: int,
    steps: int,
    goal_empties: int,
    progress: str,
) -> _Template:
    varmap = VarMap(height, width, colours, steps)
    f = CnfFormula()
    f.alloc_block(varmap.primary_count)
    b = _Builder(f, varmap)

    for t in range(0, steps + 1):
        for r in range(1, height + 1):
            for c in range(1, width + 1):
                exactly_one(
                    f, [varmap.grid_var(t, r, c, v) for v in range(colours + 1)]
                )
        exactly_one(f, [varmap.hand_var(t, v) for v in range(1, colours + 1)])
    for s in range(1, steps + 1):
        exactly_one(f, [varmap.row_shot_var(s, v) for v in range(height + 1)])
        exactly_one(f, [varmap.col_shot_var(s, v) for v in range(width + 1)])
        exactly_one(f, [varmap.wall_fall_var(s, v) for v in range(height + 1)])

    if goal_empties > 0:
        at_least_k(
            f,
            [
                varmap.grid_var(steps, r, c, EMPTY)
                for r in range(1, height + 1)
                for c in range(1, width + 1)
            ],
            goal_empties,
        )

    for s in range(1, steps + 1):
        _emit_step(b, s, progress)

    return _Template(f.var_count, tuple(f.clauses), varmap)


def _emit_step(b: _Builder, s: int, progress: str) -> None:
    vm = b.vm
    H, W = vm.height, vm.width

    # one axis fired per step
    b.f.add_clause((vm.row_shot_var(s, 0), vm.col_shot_var(s, 0)))
    b.f.add_clause((-vm.row_shot_var(s, 0), -vm.col_shot_var(s, 0)))

    _emit_hand_rule(b, s)
    _emit_wall_fall_rule(b, s)
    for r in range(1, H + 1):
        for c in range(1, W + 1):
            _emit_cell_rules(b, s, r, c)

    if progress == PROGRESS_WITNESS:
        witnesses = []
        for r in range(1, H + 1):
            for c in range(1, W + 1):
                witnesses.append(
                    b.conj(
                        [b.neg(b.cell_empty(s - 1, r, c)), b.cell_empty(s, r, c)]
                    )
                )
        b.f.add_clause(witnesses)
    else:
        _emit_sum_decrease(b, s)


def _emit_hand_rule(b: _Builder, s: int) -> None:
    """The hand keeps its colour exactly when the shot rebounds."""
    vm = b.vm
    H, W = vm.height, vm.width
    down_column = b.disj(
        [
            b.conj(
                [vm.col_shot_var(s, c)]
                + [b.clear(s, rr, c) for rr in range(1, H + 1)]
            )
            for c in range(1, W + 1)
        ]
    )
    through_row = b.disj(
        [
            b.conj(
                [vm.row_shot_var(s, rv)]
                + [b.clear(s, rv, cc) for cc in range(1, W + 1)]
                + [b.clear(s, rr, W) for rr in range(rv + 1, H + 1)]
            )
            for rv in range(0, H + 1)
        ]
    )
    b.require_iff(b.hand_eq(s - 1, s), b.disj([down_column, through_row]))


def _emit_wall_fall_rule(b: _Builder, s: int) -> None:
    """Pin the wall-fall distance to the run of hand blocks it vacates."""
    vm = b.vm
    H, W = vm.height, vm.width
    for i in range(1, H + 1):
        cases = []
        for row in range(2, H + 1):
            cases.append(
                b.conj(
                    [vm.row_shot_var(s, row)]
                    + [b.clear(s, row, cc) for cc in range(1, W + 1)]
                    + [b.neg(b.cell_empty(s - 1, row - 1, W))]
                    + [b.prev_is_hand(s, rr, W) for rr in range(row, row + i)]
                    + [
                        TRUE
                        if row + i > H
                        else b.neg(b.prev_is_hand(s, row + i, W))
                    ]
                )
            )
        b.require_iff(vm.wall_fall_var(s, i), b.disj(cases))


def _emit_cell_rules(b: _Builder, s: int, r: int, c: int) -> None:
    vm = b.vm
    H, W = vm.height, vm.width

    # -- the six ways the cell ends up empty --------------------------------
    empty_cases: list[Expr] = [b.cell_empty(s - 1, r, c)]
    # consumed by a column shot with a clear path above
    empty_cases.append(
        b.conj(
            [vm.col_shot_var(s, c), b.prev_is_hand(s, r, c)]
            + [b.clear(s, rr, c) for rr in range(1, r)]
        )
    )
    # consumed by a row shot with nothing above to fall in
    empty_cases.append(
        b.conj(
            [
                vm.row_shot_var(s, r),
                b.prev_is_hand(s, r, c),
                TRUE if r == 1 else b.cell_empty(s - 1, r - 1, c),
            ]
            + [b.clear(s, r, cc) for cc in range(1, c)]
        )
    )
    if c == W:
        # consumed by the drop of a wall shot, nothing above on the column
        for rv in range(0, r):
            empty_cases.append(
                b.conj(
                    [vm.row_shot_var(s, rv), b.prev_is_hand(s, r, W)]
                    + [b.clear(s, rv, cc) for cc in range(1, W + 1)]
                    + [b.clear(s, rr, W) for rr in range(rv + 1, r)]
                    + [b.cell_empty(s - 1, rr, W) for rr in range(1, rv)]
                )
            )
    # vacated: the block here fell into a consumption on a lower row
    for rv in range(r + 1, H + 1):
        empty_cases.append(
            b.conj(
                [
                    vm.row_shot_var(s, rv),
                    TRUE if r == 1 else b.cell_empty(s - 1, r - 1, c),
                ]
                + [b.clear(s, rv, cc) for cc in range(1, c + 1)]
            )
        )
    if c == W:
        # wall fall: whatever would land here is empty or above the grid;
        # applies within the landing span (row < fired row + fall distance)
        for w in range(1, H + 1):
            empty_cases.append(
                b.conj(
                    [
                        vm.wall_fall_var(s, w),
                        b.fired_row_above(s, r - w),
                        TRUE if r - w < 1 else b.cell_empty(s - 1, r - w, W),
                    ]
                )
            )
    b.require_iff(b.cell_empty(s, r, c), b.disj(empty_cases))

    # -- the nine ways the cell keeps its value -----------------------------
    same_cases: list[Expr] = [b.cell_empty(s - 1, r, c)]
    # fired below, but the shot stopped before reaching this column
    for rv in range(r + 1, H + 1):
        same_cases.append(
            b.conj(
                [
                    vm.row_shot_var(s, rv),
                    b.disj([b.blocker(s, rv, cc) for cc in range(1, c + 1)]),
                ]
            )
        )
    # fired along this row, but something is in the way to the left
    same_cases.append(
        b.conj(
            [
                vm.row_shot_var(s, r),
                b.disj([b.blocker(s, r, cc) for cc in range(1, c)]),
            ]
        )
    )
    if c < W:
        # fired along a row above; columns before the last are untouched
        same_cases.append(
            b.conj(
                [
                    b.neg(vm.row_shot_var(s, 0)),
                    b.disj([vm.row_shot_var(s, v) for v in range(0, r)]),
                ]
            )
        )
    if c == W:
        # fired along a row above, last column, but the travel stopped
        for rv in range(1, r):
            same_cases.append(
                b.conj(
                    [
                        vm.row_shot_var(s, rv),
                        b.disj(
                            [b.blocker(s, rv, cc) for cc in range(1, W + 1)]
                            + [b.blocker(s, rr, W) for rr in range(rv, r)]
                        ),
                    ]
                )
            )
    # fired down this column, but something above is in the way
    same_cases.append(
        b.conj(
            [
                vm.col_shot_var(s, c),
                b.disj([b.blocker(s, rr, c) for rr in range(1, r)]),
            ]
        )
    )
    # fired down a different column
    same_cases.append(
        b.conj([b.neg(vm.col_shot_var(s, 0)), b.neg(vm.col_shot_var(s, c))])
    )
    if c < W:
        # a same-coloured block falls here (single-cell fall)
        for rv in range(r, H + 1):
            same_cases.append(
                b.conj(
                    [vm.row_shot_var(s, rv)]
                    + [b.clear(s, rv, cc) for cc in range(1, c + 1)]
                    + [b.cells_eq(s - 1, r - 1, c, s - 1, r, c)]
                )
            )
    if c == W:
        # a same-coloured block lands here after a wall fall
        for w in range(1, H + 1):
            same_cases.append(
                b.conj(
                    [
                        vm.wall_fall_var(s, w),
                        b.fired_row_above(s, r - w),
                        b.cells_eq(s - 1, r - w, W, s - 1, r, W),
                    ]
                )
            )
    same_now = b.cells_eq(s, r, c, s - 1, r, c)
    b.require_iff(same_now, b.disj(same_cases))

    # -- the five ways the cell changes to another colour --------------------
    change_cases: list[Expr] = []
    if c < W:
        # a different-coloured block falls one cell
        for rv in range(r, H + 1):
            change_cases.append(
                b.conj(
                    [
                        vm.row_shot_var(s, rv),
                        FALSE if r == 1 else b.neg(b.cell_empty(s - 1, r - 1, c)),
                    ]
                    + [b.clear(s, rv, cc) for cc in range(1, c + 1)]
                    + [
                        b.cells_eq(s, r, c, s - 1, r - 1, c),
                        b.cells_neq(s - 1, r - 1, c, s - 1, r, c),
                    ]
                )
            )
    if c == W:
        # a different-coloured block lands here after a wall fall; the
        # source cell wall_fall rows above must hold a block
        for w in range(1, H + 1):
            change_cases.append(
                b.conj(
                    [
                        vm.wall_fall_var(s, w),
                        b.fired_row_above(s, r - w),
                        FALSE if r - w < 1 else b.neg(b.cell_empty(s - 1, r - w, W)),
                        b.cells_eq(s, r, W, s - 1, r - w, W),
                        b.cells_neq(s - 1, r - w, W, s - 1, r, W),
                    ]
                )
            )
    # swap with the hand where a row shot stopped
    change_cases.append(
        b.conj(
            [vm.row_shot_var(s, r)]
            + [b.clear(s, r, cc) for cc in range(1, c)]
            + [
                b.disj([b.prev_is_hand(s, r, cc) for cc in range(1, c)]),
                b.hand_cell_eq(s, s - 1, r, c),
                b.hand_cell_eq(s - 1, s, r, c),
                b.neg(b.prev_is_hand(s, r, c)),
            ]
        )
    )
    # swap with the hand where a column shot stopped
    change_cases.append(
        b.conj(
            [vm.col_shot_var(s, c)]
            + [b.clear(s, rr, c) for rr in range(1, r)]
            + [
                b.disj([b.prev_is_hand(s, rr, c) for rr in range(1, r)]),
                b.hand_cell_eq(s, s - 1, r, c),
                b.hand_cell_eq(s - 1, s, r, c),
                b.neg(b.prev_is_hand(s, r, c)),
            ]
        )
    )
    if c == W:
        # swap with the hand where the drop of a wall shot stopped
        for rv in range(0, r):
            change_cases.append(
                b.conj(
                    [vm.row_shot_var(s, rv)]
                    + [b.clear(s, rv, cc) for cc in range(1, W)]
                    + [b.clear(s, rr, W) for rr in range(max(rv, 1), r)]
                    + [
                        b.disj(
                            [b.prev_is_hand(s, rv, cc) for cc in range(1, W)]
                            + [
                                b.prev_is_hand(s, rr, W)
                                for rr in range(max(rv, 1), r)
                            ]
                        ),
                        b.hand_cell_eq(s, s - 1, r, W),
                        b.hand_cell_eq(s - 1, s, r, W),
                        b.neg(b.prev_is_hand(s, r, W)),
                    ]
                )
            )
    changed_now = b.conj([b.neg(same_now), b.neg(b.cell_empty(s, r, c))])
    b.require_iff(changed_now, b.disj(change_cases))


def _emit_sum_decrease(b: _Builder, s: int) -> None:
    """Unary colour-sum comparison: sum at s-1 strictly above sum at s."""
    vm = b.vm
    cells = [
        (r, c)
        for r in range(1, vm.height + 1)
        for c in range(1, vm.width + 1)
    ]
    K = vm.colours
    max_sum = K * len(cells)

    def sum_geq(t: int, i: int, bound: int) -> Expr:
        if bound <= 0:
            return TRUE
        if i == 0 or bound > i * K:
            return FALSE
        key = ("sumgeq", t, i, bound)
        if key not in b.memo:
            r, c = cells[i - 1]
            b.memo[key] = b.disj(
                [
                    b.conj(
                        [vm.grid_var(t, r, c, v), sum_geq(t, i - 1, bound - v)]
                    )
                    for v in range(0, K + 1)
                ]
            )
        return b.memo[key]

    terms = []
    for bound in range(1, max_sum + 1):
        terms.append(
            b.conj(
                [
                    sum_geq(s - 1, len(cells), bound),
                    b.neg(sum_geq(s, len(cells), bound)),
                ]
            )
        )
    b.require(b.disj(terms))


def _one_hot_value(model, var_of, values, what: str) -> int:
    hits = [v for v in values if model[var_of(v)]]
    if len(hits) != 1:
        raise MalformedModelError(f"{what}: {len(hits)} values true")
    return hits[0]


def decode(model: Sequence[bool], varmap: VarMap) -> DecodedTrace:
    """Read the plan and trajectory out of a satisfying model.

    Re-validates that every one-hot group has exactly one value set and that
    exactly one shot axis is fired per step; a violation means the model did
    not come from a formula this encoder produced.
    """
    grids = []
    hands = []
    for t in range(0, varmap.steps + 1):
        rows = []
        for r in range(1, varmap.height + 1):
            row = []
            for c in range(1, varmap.width + 1):
                row.append(
                    _one_hot_value(
                        model,
                        lambda v, t=t, r=r, c=c: varmap.grid_var(t, r, c, v),
                        range(0, varmap.colours + 1),
                        f"grid({t},{r},{c})",
                    )
                )
            rows.append(tuple(row))
        grids.append(Grid(tuple(rows)))
        hands.append(
            _one_hot_value(
                model,
                lambda v, t=t: varmap.hand_var(t, v),
                range(1, varmap.colours + 1),
                f"hand({t})",
            )
        )
    shots: list[Shot] = []
    wall_falls = []
    for s in range(1, varmap.steps + 1):
        rv = _one_hot_value(
            model,
            lambda v, s=s: varmap.row_shot_var(s, v),
            range(0, varmap.height + 1),
            f"fired row({s})",
        )
        cv = _one_hot_value(
            model,
            lambda v, s=s: varmap.col_shot_var(s, v),
            range(0, varmap.width + 1),
            f"fired col({s})",
        )
        if (rv > 0) == (cv > 0):
            raise MalformedModelError(f"step {s}: fired rows and columns: {rv}, {cv}")
        shots.append(RowShot(rv) if rv > 0 else ColShot(cv))
        wall_falls.append(
            _one_hot_value(
                model,
                lambda v, s=s: varmap.wall_fall_var(s, v),
                range(0, varmap.height + 1),
                f"wall fall({s})",
            )
        )
    return DecodedTrace(
        initial_hand=hands[0],
        shots=tuple(shots),
        wall_falls=tuple(wall_falls),
        grids=tuple(grids),
        hands=tuple(hands),
    )
