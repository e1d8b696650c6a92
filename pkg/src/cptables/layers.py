"""Layer sampling: filling one slice of a three-way table line by line.

A layer is the slice at one fixed first-axis index.  Its lines along the
last axis are drawn in decreasing order of residual line sum (ties broken by
ascending index), each as one conditional Poisson draw whose weights come
from the residual cross margins:

    w = (rs_a * rs_b) / ((free_a - rs_a) * (free_b - rs_b))

with rs/free the residual sum and free-cell count of the two lines through
the cell that cross the drawn line.  A crossing line that is saturated
(free_a == rs_a) makes the cell a certain inclusion: it is set to one with
probability one before the conditional Poisson draw over the remaining
cells, adding nothing to log q.  After every draw the structure rules re-run
on the residual problem (the saturation rule optionally masked per axis,
see sis.py); cells they force are probability-1 events and also add nothing
to log q.  The final line of a layer (and the final layer of a table) is
therefore filled deterministically by propagation, and any residual
mismatch surfaces as infeasibility, i.e. a rejection.
"""

from __future__ import annotations

from collections import deque

from .cpdist import CPInfeasibleError
from .reduction import TableState


class SampleRejected(Exception):
    """Internal control flow: the current proposal ran into a dead end."""

    def __init__(self, stage: str):
        super().__init__(stage)
        self.stage = stage


def descending_order(sums) -> list[int]:
    """Indices ordered by descending sum; ties broken by ascending index."""
    vals = list(sums)
    return sorted(range(len(vals)), key=lambda i: (-vals[i], i))


def line_weights(
    state: TableState, lid: int
) -> tuple[list[int], list[float], list[int]]:
    """Free cells of a line, their CP odds from the residual cross margins,
    and the certain cells.

    A cell whose crossing line is saturated (residual equals free count)
    must be a one; its inclusion probability is one, which the odds form
    cannot express (division by zero), so such cells are returned in the
    third slot instead: the draw includes them with certainty, at no cost
    to log q, and runs the CP over the remaining cells only.  This is the
    limit of the CP law as those odds grow without bound, so the proposal
    stays a proper distribution.  A crossing line with residual zero yields
    odds zero, which the CP handles natively (never chosen).  A cell pinned
    both ways (zero residual on one crossing line, saturation on the other)
    is a dead end that the bound check after the draw surfaces."""
    geo = state.geo
    axis = geo.line_axis[lid]
    rs = state.rs
    free = state.free
    cells = state.cells
    free_cids: list[int] = []
    weights: list[float] = []
    certain: list[int] = []
    for cid in geo.line_cells[lid]:
        if cells[cid] >= 0:
            continue
        num = 1.0
        den = 1.0
        for b, cross in enumerate(geo.cell_lines[cid]):
            if b == axis:
                continue
            r = rs[cross]
            num *= r
            den *= free[cross] - r
        if den == 0.0 and num > 0.0:
            certain.append(cid)
        else:
            free_cids.append(cid)
            weights.append(num / den if den > 0.0 else 0.0)
    return free_cids, weights, certain


def draw_line(
    state: TableState, lid: int, choose, stage: str, nosat_axes=()
) -> float:
    """Fill one line with a CP draw over its free cells; propagate; return
    the draw's log probability.  Raises SampleRejected on a dead end."""
    free_cids, weights, certain = line_weights(state, lid)
    size = state.rs[lid] - len(certain)
    if size < 0 or size > len(free_cids):
        raise SampleRejected(f"{stage} overcommitted")
    try:
        positions, log_prob = choose(weights, size)
    except CPInfeasibleError:
        raise SampleRejected(f"{stage} cp-infeasible") from None
    picked = set(positions)
    pending: deque = deque()
    for cid in certain:
        state.set_cell(cid, 1, pending)
    for pos, cid in enumerate(free_cids):
        state.set_cell(cid, 1 if pos in picked else 0, pending)
    if state.propagate(pending, nosat_axes) >= 0:
        raise SampleRejected(stage)
    return log_prob


def sample_layer(
    state: TableState, layer: int, choose, nosat_axes=()
) -> float:
    """Sample every still-free line of one layer; return the layer's log q.

    The state must be three-way, at a fixpoint, with layers along axis 0 and
    drawn lines along axis 2.  Mutates the state in place; raises
    SampleRejected when a draw leads to an infeasible residual problem.
    """
    geo = state.geo
    n = geo.sizes[1]
    base = geo.offset[2] + layer * n
    log_q = 0.0
    while True:
        best_j = -1
        best_rs = -1
        for j in range(n):
            lid = base + j
            if state.free[lid] > 0 and state.rs[lid] > best_rs:
                best_rs = state.rs[lid]
                best_j = j
        if best_j < 0:
            return log_q
        lid = base + best_j
        log_q += draw_line(
            state, lid, choose, f"layer={layer} column={best_j}", nosat_axes
        )
