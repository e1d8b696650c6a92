"""Exact counting and enumeration of zero-one tables with fixed margins.

Depth-first search over the cells in lexicographic order, branching 0/1 and
running the structure-propagation rules after every assignment; a branch
whose residuals turn infeasible is cut immediately.  Counts are plain
Python integers, so they stay exact at any magnitude.  Desk scale only: the
node budget guards against accidentally launching an astronomically large
enumeration.
"""

from __future__ import annotations

from collections import deque

from .reduction import TableState
from .tables import BinaryTable, CPTablesError, MarginalSet, validate_marginals


class EnumerationBudgetError(CPTablesError):
    """The search passed its node budget before finishing."""

    def __init__(self, nodes: int, partial_count: int):
        super().__init__(
            f"enumeration budget exceeded after {nodes} nodes "
            f"({partial_count} tables found so far)"
        )
        self.nodes = nodes
        self.partial_count = partial_count


def exact_count(m: MarginalSet, budget: int | None = None) -> int:
    """The exact number of zero-one tables with margins m."""
    count, _ = _search(m, budget=budget, want_tables=False, limit=None)
    return count


def exact_enumerate(
    m: MarginalSet,
    limit: int | None = None,
    budget: int | None = None,
) -> list[BinaryTable]:
    """Up to `limit` distinct tables with margins m, in the deterministic
    order the search visits them."""
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    _, tables = _search(m, budget=budget, want_tables=True, limit=limit)
    return tables


def _search(m, budget, want_tables, limit):
    validate_marginals(m)
    state = TableState.from_marginals(m)
    if state.initial_reduce() >= 0:
        return 0, []
    ncells = state.geo.ncells
    cells = state.cells
    count = 0
    tables: list[BinaryTable] = []
    nodes = 0

    # explicit stack of (cursor, next_value, trail_mark); cursor is the
    # first-free scan position, monotone along any root-to-leaf path
    def first_free(start: int) -> int:
        i = start
        while i < ncells and cells[i] >= 0:
            i += 1
        return i

    cursor = first_free(0)
    if cursor >= ncells:
        count = 1
        if want_tables:
            tables.append(BinaryTable(m.dims, state.cells_array()))
        return count, tables

    stack = [(cursor, 0, state.mark())]
    while stack:
        cursor, value, mark = stack.pop()
        if value > 1:
            state.undo_to(mark)
            continue
        stack.append((cursor, value + 1, mark))
        nodes += 1
        if budget is not None and nodes > budget:
            raise EnumerationBudgetError(nodes, count)
        branch_mark = state.mark()
        pending: deque = deque()
        state.set_cell(cursor, value, pending)
        if state.propagate(pending) >= 0:
            state.undo_to(branch_mark)
            continue
        nxt = first_free(cursor + 1)
        if nxt >= ncells:
            count += 1
            if want_tables:
                tables.append(BinaryTable(m.dims, state.cells_array()))
                if limit is not None and len(tables) >= limit:
                    return count, tables
            state.undo_to(branch_mark)
        else:
            stack.append((nxt, 0, branch_mark))
    return count, tables
