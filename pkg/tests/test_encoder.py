import itertools
import random

import pytest

from plotting_solver.cnf import dimacs_text, dpll_solve
from plotting_solver.encoder import (
    PROGRESS_CARDINALITY,
    PROGRESS_WITNESS,
    EncodeOptions,
    InvalidHorizonError,
    MalformedModelError,
    decode,
    encode,
)
from plotting_solver.engine import (
    Grid,
    Instance,
    apply_shot,
    is_goal,
    legal_shots,
)
from plotting_solver.oracle import TransitionCandidate, check_transition

from conftest import random_full_grid


def g(rows):
    return Grid.from_rows(rows)


def exists_plan_of_exact_length(instance, length):
    """Depth-layered search: some plan of exactly ``length`` shots works."""
    frontier = {
        (instance.grid.cells, h0)
        for h0 in range(1, instance.colour_count + 1)
    }
    for _ in range(length):
        nxt = set()
        for cells, hand in frontier:
            grid = Grid(cells)
            for shot in legal_shots(grid, hand):
                out = apply_shot(grid, hand, shot)
                nxt.add((out.next_grid.cells, out.next_hand))
        frontier = nxt
    return any(is_goal(Grid(cells), instance.goal) for cells, _ in frontier)


class TestVarMap:
    def test_primary_allocation_two_colour_2x2(self):
        # (steps+1) grid/hand groups plus one fired-row, fired-column and
        # wall-fall group: 2*(4*3+2) + (3+3+3) = 37
        _, vm = encode(Instance(g([[1, 2], [2, 1]]), 1), EncodeOptions(steps=1))
        assert vm.primary_count == 37
        # primaries occupy ids 1..37, auxiliaries come after
        seen = set()
        for t in (0, 1):
            for r in (1, 2):
                for c in (1, 2):
                    for v in (0, 1, 2):
                        seen.add(vm.grid_var(t, r, c, v))
            for colour in (1, 2):
                seen.add(vm.hand_var(t, colour))
        for v in (0, 1, 2):
            seen.add(vm.row_shot_var(1, v))
            seen.add(vm.col_shot_var(1, v))
            seen.add(vm.wall_fall_var(1, v))
        assert seen == set(range(1, 38))

    def test_single_colour_grid_has_smaller_domain(self):
        # the colour count is the maximum value present, so the all-ones
        # grid gets one-colour domains: 2*(4*2+1) + (3+3+3) = 27
        f, vm = encode(Instance(g([[1, 1], [1, 1]]), 1), EncodeOptions(steps=1))
        assert vm.primary_count == 27
        assert f.var_count >= 27


class TestEncodeExamples:
    def test_goal_one_in_one_step_is_sat(self):
        f, _ = encode(Instance(g([[1, 1], [1, 1]]), 1), EncodeOptions(steps=1))
        assert dpll_solve(f).is_sat

    def test_goal_zero_in_one_step_is_unsat(self):
        f, _ = encode(Instance(g([[1, 1], [1, 1]]), 0), EncodeOptions(steps=1))
        assert dpll_solve(f).is_unsat

    def test_fixed_useless_hand_is_unsat(self):
        f, _ = encode(
            Instance(g([[2]]), 0), EncodeOptions(steps=1, fixed_initial_hand=1)
        )
        assert dpll_solve(f).is_unsat

    def test_free_hand_finds_the_wildcard_colour(self):
        f, vm = encode(Instance(g([[2]]), 0), EncodeOptions(steps=1))
        out = dpll_solve(f)
        assert out.is_sat
        assert decode(out.model, vm).initial_hand == 2

    def test_invalid_horizon(self):
        with pytest.raises(InvalidHorizonError):
            encode(Instance(g([[1]]), 0), EncodeOptions(steps=0))

    def test_missing_goal(self):
        with pytest.raises(ValueError):
            encode(Instance(g([[1]])), EncodeOptions(steps=1))

    def test_deterministic_dimacs(self):
        inst = Instance(g([[1, 2], [2, 1]]), 1)
        opts = EncodeOptions(steps=2)
        assert dimacs_text(encode(inst, opts)[0]) == dimacs_text(
            encode(inst, opts)[0]
        )


class TestDecode:
    def _solve(self, inst, steps):
        f, vm = encode(inst, EncodeOptions(steps=steps))
        out = dpll_solve(f)
        assert out.is_sat
        return decode(out.model, vm), vm

    def test_trace_replays_through_engine(self):
        inst = Instance(g([[1, 1], [1, 1]]), 1)
        trace, _ = self._solve(inst, 1)
        grid, hand = inst.grid, trace.initial_hand
        assert trace.grids[0] == grid and trace.hands[0] == hand
        for i, shot in enumerate(trace.shots):
            out = apply_shot(grid, hand, shot)
            grid, hand = out.next_grid, out.next_hand
            assert trace.grids[i + 1] == grid
            assert trace.hands[i + 1] == hand
            assert trace.wall_falls[i] == out.wall_fall
        assert is_goal(grid, inst.goal)

    def test_consecutive_states_satisfy_the_constraint_checker(self):
        inst = Instance(g([[1, 1, 1], [1, 2, 1]]), 1)
        trace, _ = self._solve(inst, 2)
        for i, shot in enumerate(trace.shots):
            cand = TransitionCandidate(
                trace.grids[i],
                trace.hands[i],
                shot,
                trace.grids[i + 1],
                trace.hands[i + 1],
                trace.wall_falls[i],
            )
            assert check_transition(cand)

    def test_malformed_model_detected(self):
        inst = Instance(g([[1, 1], [1, 1]]), 1)
        f, vm = encode(inst, EncodeOptions(steps=1))
        out = dpll_solve(f)
        model = list(out.model)
        model[vm.hand_var(0, 1)] = False  # break the hand one-hot group
        with pytest.raises(MalformedModelError):
            decode(model, vm)


class TestExactLengthEquivalence:
    def test_all_2x2_grids_every_horizon(self):
        for colours in (1, 2):
            for flat in itertools.product(range(1, colours + 1), repeat=4):
                if len(set(flat)) != colours:
                    continue
                grid = Grid((tuple(flat[:2]), tuple(flat[2:])))
                for goal in range(0, 4):
                    inst = Instance(grid, goal)
                    for steps in range(1, 4 - goal + 1):
                        want = exists_plan_of_exact_length(inst, steps)
                        for mode in (PROGRESS_WITNESS, PROGRESS_CARDINALITY):
                            f, _ = encode(
                                inst,
                                EncodeOptions(steps=steps, progress_encoding=mode),
                            )
                            assert dpll_solve(f).is_sat == want, (
                                grid.cells,
                                goal,
                                steps,
                                mode,
                            )

    def test_sampled_3x3_three_colours(self):
        rng = random.Random(23)
        for _ in range(2):
            grid = random_full_grid(rng, 3, 3, 3)
            for goal in (3, 6):
                inst = Instance(grid, goal)
                for steps in range(1, 9 - goal + 1):
                    want = exists_plan_of_exact_length(inst, steps)
                    f, _ = encode(inst, EncodeOptions(steps=steps))
                    assert dpll_solve(f).is_sat == want, (grid.cells, goal, steps)

    def test_progress_modes_equisatisfiable_on_random_triples(self):
        rng = random.Random(5)
        for _ in range(25):
            h, w = rng.randint(1, 3), rng.randint(1, 3)
            colours = rng.randint(1, min(3, h * w))
            grid = random_full_grid(rng, h, w, colours)
            goal = rng.randint(0, h * w - 1)
            steps = rng.randint(1, h * w - goal)
            inst = Instance(grid, goal)
            outcomes = []
            for mode in (PROGRESS_WITNESS, PROGRESS_CARDINALITY):
                f, _ = encode(inst, EncodeOptions(steps=steps, progress_encoding=mode))
                outcomes.append(dpll_solve(f).status)
            assert outcomes[0] == outcomes[1]
