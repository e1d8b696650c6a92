import math
from collections import deque

import numpy as np
import pytest

from cptables import (
    CPInfeasibleError,
    TableState,
    cp_log_pmf,
    descending_order,
    line_weights,
    sample_layer,
    semimagic_margins,
)
from cptables.layers import SampleRejected, draw_line


def test_descending_order_breaks_ties_by_index():
    assert descending_order([3, 5, 5, 1]) == [1, 2, 0, 3]
    assert descending_order([]) == []


def test_line_weights_odds_formula():
    # 3x3x3 cube, every margin 2: first depth line has crossing residuals
    # r = 2 over 3 free cells both ways, so w = (2*2) / ((3-2)*(3-2)) = 4
    state = TableState.from_marginals(semimagic_margins(3, 2))
    lid = state.line_id(2, (0, 0))
    free_cids, weights, certain = line_weights(state, lid)
    assert free_cids == [0, 1, 2]
    assert weights == [4.0, 4.0, 4.0]
    assert certain == []


def test_line_weights_zero_residual_crossing_gives_zero_weight():
    # at propagation fixpoints every free cell has positive crossing
    # residuals, so exercise the defensive zero-odds branch on a state
    # that has not been re-propagated
    state = TableState.from_marginals(semimagic_margins(3, 1))
    state.set_cell(0, 1, deque())  # (0,0,0) = 1, propagation withheld
    lid = state.line_id(1, (0, 1))  # cells (0,0,1), (0,1,1), (0,2,1)
    free_cids, weights, certain = line_weights(state, lid)
    assert certain == []
    assert free_cids == [1, 4, 7]
    assert weights[0] == 0.0  # crosses the exhausted depth line (0,0,.)
    assert weights[1] > 0 and weights[2] > 0


def test_line_weights_saturated_crossing_is_certain():
    # mask the saturation rule and leave the depth line (0,0,.) saturated
    # (residual 2 over 2 free cells); the cell crossing it is a certain
    # inclusion, and the CP runs over the other two cells only
    state = TableState.from_marginals(semimagic_margins(3, 2))
    pending = deque()
    state.set_cell(2, 0, pending)  # (0,0,2) = 0
    assert state.propagate(pending, nosat_axes=(0, 1, 2)) < 0
    lid = state.line_id(0, (0, 0))  # cells (i, 0, 0)
    free_cids, weights, certain = line_weights(state, lid)
    assert certain == [0]
    assert free_cids == [9, 18]
    assert weights == [4.0, 4.0]


class ScriptedChoose:
    """Deterministic stand-in for the CP draw: returns scripted free-cell
    positions and the exact pmf value a real draw would report."""

    def __init__(self, picks):
        self.picks = list(picks)
        self.calls = []

    def __call__(self, weights, size):
        pick = self.picks.pop(0)
        assert len(pick) == size
        self.calls.append((tuple(weights), size))
        return pick, cp_log_pmf(weights, size, pick)


def test_draw_line_sets_cells_and_returns_log_prob():
    state = TableState.from_marginals(semimagic_margins(3, 2))
    lid = state.line_id(2, (0, 0))
    choose = ScriptedChoose([(0, 2)])
    log_prob = draw_line(state, lid, choose, "layer=0")
    assert state.cells[0] == 1 and state.cells[1] == 0 and state.cells[2] == 1
    # symmetric weights: every pair equally likely, three pairs
    assert math.isclose(log_prob, math.log(1.0 / 3.0))
    assert choose.calls == [((4.0, 4.0, 4.0), 2)]


def test_draw_line_includes_certain_cells_at_no_cost():
    state = TableState.from_marginals(semimagic_margins(3, 2))
    pending = deque()
    state.set_cell(2, 0, pending)  # (0,0,2) = 0; line (0,0,.) saturated
    assert state.propagate(pending, nosat_axes=(0, 1, 2)) < 0
    lid = state.line_id(0, (0, 0))
    choose = ScriptedChoose([(0,)])
    log_prob = draw_line(state, lid, choose, "layer=0", nosat_axes=(0, 1, 2))
    # the certain cell went in with probability one; only the remaining
    # two cells took part in the residual size-1 draw
    assert state.cells[0] == 1
    assert state.cells[9] == 1 and state.cells[18] == 0
    assert choose.calls == [((4.0, 4.0), 1)]
    assert math.isclose(log_prob, math.log(0.5))


def test_draw_line_overcommit_rejects():
    # both cells of a residual-1 line forced certain by saturated
    # crossings (state deliberately left stale): the draw size goes
    # negative and the line is overcommitted
    state = TableState.from_marginals(semimagic_margins(2, 1))
    for cid in (2, 3, 4):
        state.set_cell(cid, 0, deque())
    lid = state.line_id(2, (1, 1))
    free_cids, weights, certain = line_weights(state, lid)
    assert certain == [6, 7]
    with pytest.raises(SampleRejected) as e:
        draw_line(state, lid, ScriptedChoose([()]), "layer=1 column=1")
    assert "overcommitted" in str(e.value)


def test_draw_line_cp_infeasible_rejects():
    state = TableState.from_marginals(semimagic_margins(3, 1))

    def broken_choose(weights, size):
        raise CPInfeasibleError("forced for the test")

    lid = state.line_id(2, (0, 0))
    with pytest.raises(SampleRejected) as e:
        draw_line(state, lid, broken_choose, "layer=0 column=0")
    assert "cp-infeasible" in str(e.value)


def test_draw_line_propagation_failure_rejects():
    # a poisoned state (one cell planted without propagation) makes the
    # draw's own propagation pass surface the contradiction
    state = TableState.from_marginals(semimagic_margins(2, 1))
    state.set_cell(2, 1, deque())  # (0,1,0) = 1, lines left stale
    lid = state.line_id(2, (0, 0))
    with pytest.raises(SampleRejected) as e:
        draw_line(state, lid, ScriptedChoose([(0,)]), "layer=0 column=0")
    assert "layer=0 column=0" in str(e.value)


def test_sample_layer_accumulates_log_q_and_fills_layer():
    state = TableState.from_marginals(semimagic_margins(3, 1))
    assert state.initial_reduce() < 0
    # layer 0 lines all start at residual 1 over 3 cells; after two draws
    # at probabilities 1/3 and 1/2 the last line is forced for free
    choose = ScriptedChoose([(0,), (1,)])
    log_q = sample_layer(state, 0, choose)
    assert math.isclose(log_q, math.log(1.0 / 3.0) + math.log(1.0 / 2.0))
    assert len(choose.calls) == 2
    layer = state.cells_array()[0]
    assert np.all(layer >= 0)
    assert np.array_equal(layer.sum(axis=1), [1, 1, 1])
    assert np.array_equal(layer.sum(axis=0), [1, 1, 1])
