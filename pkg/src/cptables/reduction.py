"""Structure detection: cells pinned by the margins alone.

A line is a 1-D fiber of the table (fix all indices but one).  Forcing rules
run to fixpoint over all lines of all axes:

  * residual margin 0  -> every free cell in the line is a structural zero,
  * a line down to one free cell -> that cell equals the residual,
  * (saturation rule) residual margin equal to the free-cell count -> every
    free cell is a forced one.

A residual outside [0, free] is infeasible: no completion exists.  The
saturation rule can be masked per axis mid-sampling (`nosat_axes`): a
still-unfilled saturated line then stays open, and the sampler resolves its
cells at draw time as certain inclusions (see sis.py for the proposal
presets built on this).  The same propagation engine drives the SIS
samplers (re-reduction after every sampled column), the exact enumerator,
and the path expander (both via an undo trail), so it is written as a
worklist over flat line ids rather than array scans.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .tables import (
    CPTablesError,
    Dims,
    MarginalSet,
    StructureMasks,
    validate_marginals,
)


class StructurallyInfeasibleError(CPTablesError):
    """Propagation proved that no table satisfies the margins."""

    def __init__(self, axis: int, index: tuple[int, ...]):
        super().__init__(
            f"no table fits the margins: line over axis {axis} at {index} "
            "cannot meet its residual sum"
        )
        self.axis = axis
        self.index = index


class _Geometry:
    """Static line tables for one table shape.

    Lines get flat ids: axis a's block starts at offset[a], ordered like the
    C-order flattening of the margin array over axis a (so the worklist seed
    scans axes 0,1,2,... deterministically).  Shared across states of the
    same shape.
    """

    __slots__ = ("sizes", "d", "ncells", "nlines", "offset", "line_cells",
                 "cell_lines", "line_axis", "line_index")

    def __init__(self, sizes: tuple[int, ...]):
        self.sizes = sizes
        self.d = len(sizes)
        ncells = 1
        for s in sizes:
            ncells *= s
        self.ncells = ncells
        self.offset = []
        nlines = 0
        for a in range(self.d):
            self.offset.append(nlines)
            nlines += ncells // sizes[a]
        self.nlines = nlines
        self.line_cells: list[list[int]] = [[] for _ in range(nlines)]
        self.cell_lines: list[tuple[int, ...]] = []
        self.line_axis: list[int] = [0] * nlines
        self.line_index: list[tuple[int, ...]] = [()] * nlines
        strides = [0] * self.d
        acc = 1
        for a in range(self.d - 1, -1, -1):
            strides[a] = acc
            acc *= sizes[a]
        for cid in range(ncells):
            idx = []
            rest = cid
            for a in range(self.d):
                idx.append(rest // strides[a])
                rest %= strides[a]
            lids = []
            for a in range(self.d):
                comp = tuple(idx[b] for b in range(self.d) if b != a)
                flat = 0
                for b, v in zip((b for b in range(self.d) if b != a), comp):
                    flat = flat * sizes[b] + v
                lid = self.offset[a] + flat
                lids.append(lid)
                self.line_cells[lid].append(cid)
                self.line_axis[lid] = a
                self.line_index[lid] = comp
            self.cell_lines.append(tuple(lids))


_GEOMETRY_CACHE: dict[tuple[int, ...], _Geometry] = {}


def _geometry(sizes: tuple[int, ...]) -> _Geometry:
    geo = _GEOMETRY_CACHE.get(sizes)
    if geo is None:
        geo = _GEOMETRY_CACHE[sizes] = _Geometry(sizes)
    return geo


class TableState:
    """Mutable partial assignment: cell values (-1 free, 0, 1), per-line
    residual margins rs, and per-line free-cell counts.

    set_cell and propagate record every placement on an undo trail so the
    exact enumerator can backtrack; the samplers simply never rewind.
    """

    __slots__ = ("geo", "cells", "rs", "free", "trail")

    def __init__(self, geo: _Geometry, rs: list[int]):
        self.geo = geo
        self.cells = [-1] * geo.ncells
        self.rs = rs
        self.free = [len(geo.line_cells[l]) for l in range(geo.nlines)]
        self.trail: list[int] = []

    @classmethod
    def from_marginals(cls, m: MarginalSet) -> "TableState":
        geo = _geometry(m.dims.sizes)
        rs: list[int] = []
        for a in range(geo.d):
            rs.extend(int(v) for v in m.margins[a].ravel())
        return cls(geo, rs)

    def set_cell(self, cid: int, value: int, pending: deque) -> None:
        """Place a value in a free cell and queue its lines for re-check."""
        self.cells[cid] = value
        self.trail.append(cid)
        rs = self.rs
        free = self.free
        for lid in self.geo.cell_lines[cid]:
            free[lid] -= 1
            rs[lid] -= value
            pending.append(lid)

    def propagate(self, pending: deque, nosat_axes=()) -> int:
        """Run the forcing rules until the worklist drains.  Returns -1 on
        success or the flat id of the first line proved unsatisfiable.

        nosat_axes exempts axes from the saturation rule: their lines are
        still bound-checked and filled once down to a single free cell, but a
        line whose residual equals its free-cell count (>= 2) stays unfilled
        and is left for the caller to handle."""
        cells = self.cells
        rs = self.rs
        free = self.free
        line_cells = self.geo.line_cells
        line_axis = self.geo.line_axis
        while pending:
            lid = pending.popleft()
            r = rs[lid]
            f = free[lid]
            if r < 0 or r > f:
                return lid
            if f == 0:
                continue
            if r == 0 or (r == f and (f == 1 or line_axis[lid] not in nosat_axes)):
                v = 0 if r == 0 else 1
                for cid in line_cells[lid]:
                    if cells[cid] < 0:
                        self.set_cell(cid, v, pending)
        return -1

    def initial_reduce(self, nosat_axes=()) -> int:
        """Seed the worklist with every line (axes in order) and propagate."""
        return self.propagate(deque(range(self.geo.nlines)), nosat_axes)

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int) -> None:
        cells = self.cells
        rs = self.rs
        free = self.free
        trail = self.trail
        while len(trail) > mark:
            cid = trail.pop()
            v = cells[cid]
            cells[cid] = -1
            for lid in self.geo.cell_lines[cid]:
                free[lid] += 1
                rs[lid] += v

    def line_id(self, axis: int, index: tuple[int, ...]) -> int:
        geo = self.geo
        flat = 0
        for b, v in zip((b for b in range(geo.d) if b != axis), index):
            flat = flat * geo.sizes[b] + v
        return geo.offset[axis] + flat

    def cells_array(self) -> np.ndarray:
        return np.asarray(self.cells, dtype=np.int8).reshape(self.geo.sizes)

    def rs_array(self, axis: int) -> np.ndarray:
        geo = self.geo
        lo = geo.offset[axis]
        hi = lo + geo.ncells // geo.sizes[axis]
        shape = tuple(s for b, s in enumerate(geo.sizes) if b != axis)
        return np.asarray(self.rs[lo:hi], dtype=np.int64).reshape(shape)

    def free_array(self, axis: int) -> np.ndarray:
        geo = self.geo
        lo = geo.offset[axis]
        hi = lo + geo.ncells // geo.sizes[axis]
        shape = tuple(s for b, s in enumerate(geo.sizes) if b != axis)
        return np.asarray(self.free[lo:hi], dtype=np.int64).reshape(shape)


@dataclass(frozen=True)
class ReducedProblem:
    """Output of detect_structures: the pinned cells, the margins of the
    remaining free-cell subproblem, and per-line free-cell counts."""

    dims: Dims
    masks: StructureMasks
    reduced: MarginalSet
    free_cells: tuple[np.ndarray, ...]

    def __post_init__(self):
        for a, (mg, fc) in enumerate(zip(self.reduced.margins, self.free_cells)):
            if np.any(mg < 0) or np.any(mg > fc):
                raise ValueError(f"reduced margin over axis {a} out of range")


def detect_structures(m: MarginalSet) -> ReducedProblem:
    """Find every cell whose value is already pinned by the margins.

    Raises StructurallyInfeasibleError when propagation proves that no
    zero-one table has these margins.
    """
    validate_marginals(m)
    state = TableState.from_marginals(m)
    bad = state.initial_reduce()
    if bad >= 0:
        raise StructurallyInfeasibleError(
            state.geo.line_axis[bad], state.geo.line_index[bad]
        )
    cells = state.cells_array()
    determined = (cells >= 0).astype(np.int8)
    ones = (cells == 1).astype(np.int8)
    reduced = MarginalSet(
        m.dims, tuple(state.rs_array(a) for a in range(m.dims.d))
    )
    free_cells = tuple(state.free_array(a) for a in range(m.dims.d))
    return ReducedProblem(m.dims, StructureMasks(determined, ones), reduced, free_cells)


def structural_zero_count(masks: StructureMasks, axis: int, index) -> int:
    """Number of structural zeros (pinned, not forced ones) in one line.

    index gives the coordinates of the line over the remaining axes, in
    order.  Forced ones are excluded: they reduce the margin instead.
    """
    index = tuple(int(i) for i in index)
    sl = list(index)
    sl.insert(axis, slice(None))
    sl = tuple(sl)
    det = masks.determined[sl]
    ones = masks.ones[sl]
    return int(((det == 1) & (ones == 0)).sum())
