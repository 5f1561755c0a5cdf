"""Equitable partitions seeded by a marked vertex and the quotient Hamiltonian."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np
from scipy import sparse

from .errors import DisconnectedGraphError, InequitablePartitionError, PartitionError
from .graph import Graph


@dataclass(frozen=True, eq=False)
class EquitablePartition:
    """Cells of an equitable partition, the marked vertex alone in cell 0.

    ``dtable[j, k]`` is the number of neighbours every vertex of cell ``j``
    has in cell ``k``. Cells are sorted vertex sequences; large analytic
    partitions may use ``range`` objects.
    """

    cells: tuple[Sequence[int], ...]
    dtable: np.ndarray
    sizes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        cells = tuple(c if isinstance(c, range) else tuple(int(v) for v in c) for c in self.cells)
        if not cells or len(cells[0]) != 1:
            raise PartitionError("cell 0 must hold exactly the marked vertex")
        d = np.array(self.dtable, dtype=np.int64)
        J = len(cells)
        if d.shape != (J, J):
            raise PartitionError(f"d-table shape {d.shape} does not match {J} cells")
        if np.any(d < 0):
            raise PartitionError("d-table entries must be non-negative")
        sizes = tuple(len(c) for c in cells)
        if min(sizes) < 1:
            raise PartitionError("empty cell")
        n = np.array(sizes, dtype=np.int64)
        flow = n[:, None] * d
        if not np.array_equal(flow, flow.T):
            j, k = np.argwhere(flow != flow.T)[0]
            raise PartitionError(
                f"n_j d_jk != n_k d_kj for cells ({j}, {k}): {flow[j, k]} vs {flow[k, j]}"
            )
        d.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "dtable", d)
        object.__setattr__(self, "sizes", sizes)

    @property
    def marked(self) -> int:
        return self.cells[0][0]

    @property
    def num_cells(self) -> int:
        return len(self.cells)

    @property
    def num_vertices(self) -> int:
        return sum(self.sizes)

    @cached_property
    def cell_of(self) -> np.ndarray:
        """Cell index of every vertex."""
        out = np.full(self.num_vertices, -1, dtype=np.int64)
        for c, cell in enumerate(self.cells):
            out[_as_index(cell)] = c
        return out

    def to_document(self, gamma: float | None = None) -> dict:
        doc = {
            "cells": [list(c) for c in self.cells],
            "sizes": list(self.sizes),
            "dtable": self.dtable.tolist(),
        }
        if gamma is not None:
            doc["gamma"] = float(gamma)
        return doc

    @classmethod
    def from_document(cls, doc: dict) -> "EquitablePartition":
        try:
            return cls(tuple(doc["cells"]), np.array(doc["dtable"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PartitionError):
                raise
            raise PartitionError(f"malformed partition document: {exc}") from None


def _as_index(cell: Sequence[int]):
    if isinstance(cell, range) and cell.step == 1:
        return slice(cell.start, cell.stop)
    return np.asarray(cell, dtype=np.int64)


def _cell_counts(g: Graph, colors: np.ndarray, ncolors: int) -> sparse.csr_matrix:
    """Row v holds the number of neighbours of v in each color class."""
    onehot = sparse.csr_matrix(
        (np.ones(g.n), (np.arange(g.n), colors)), shape=(g.n, ncolors)
    )
    counts = (g.sparse_adjacency @ onehot).tocsr()
    counts.sort_indices()
    return counts


def _check_cover(n: int, cells: Sequence[Sequence[int]]) -> np.ndarray:
    colors = np.full(n, -1, dtype=np.int64)
    for c, cell in enumerate(cells):
        if len(cell) == 0:
            raise PartitionError(f"cell {c} is empty")
        for v in cell:
            if not 0 <= v < n:
                raise PartitionError(f"vertex {v} in cell {c} is outside [0, {n})")
            if colors[v] != -1:
                raise PartitionError(f"vertex {v} appears in cells {colors[v]} and {c}")
            colors[v] = c
    missing = np.flatnonzero(colors < 0)
    if missing.size:
        raise PartitionError(f"vertex {missing[0]} is in no cell")
    return colors


def validate_partition(g: Graph, cells: Sequence[Sequence[int]]) -> np.ndarray:
    """Return the d-table of ``cells`` or raise naming a violating (vertex, cell) pair."""
    colors = _check_cover(g.n, cells)
    J = len(cells)
    counts = _cell_counts(g, colors, J).toarray().astype(np.int64)
    dtable = np.zeros((J, J), dtype=np.int64)
    for c, cell in enumerate(cells):
        members = np.asarray(list(cell), dtype=np.int64)
        rows = counts[members]
        ref = rows[0]
        bad = np.argwhere(rows != ref)
        if bad.size:
            i, k = bad[0]
            raise InequitablePartitionError(int(members[i]), int(k), int(rows[i, k]), int(ref[k]))
        dtable[c] = ref
    return dtable


def coarsest_equitable_partition(g: Graph, marked: int = 0) -> EquitablePartition:
    """Coarsest equitable partition refining ``{marked} | rest``.

    Color refinement: recolor every vertex by its own color and the number
    of neighbours in each color class until the class count stops growing.
    Cells after the marked one are ordered by BFS distance from ``marked``,
    ties broken by smallest member.
    """
    if not 0 <= marked < g.n:
        raise IndexError(f"marked vertex {marked} outside [0, {g.n})")
    if not g.is_connected():
        raise DisconnectedGraphError("graph is not connected")
    colors = np.zeros(g.n, dtype=np.int64)
    colors[marked] = 1
    ncolors = 1 if g.n == 1 else 2
    if g.n == 1:
        colors[:] = 0
    while True:
        counts = _cell_counts(g, colors, ncolors)
        table: dict[tuple, int] = {}
        new = np.empty(g.n, dtype=np.int64)
        for v in range(g.n):
            lo, hi = counts.indptr[v], counts.indptr[v + 1]
            key = (int(colors[v]), counts.indices[lo:hi].tobytes(), counts.data[lo:hi].tobytes())
            new[v] = table.setdefault(key, len(table))
        if len(table) == ncolors:
            break
        colors, ncolors = new, len(table)

    dist = g.distances_from(marked)
    members = [np.flatnonzero(colors == c) for c in range(ncolors)]
    order = sorted(range(ncolors), key=lambda c: (int(dist[members[c][0]]), int(members[c][0])))
    cells = tuple(tuple(members[c].tolist()) for c in order)
    # sanity: refinement output must be equitable
    return EquitablePartition(cells, validate_partition(g, cells))


@dataclass(frozen=True, eq=False)
class QuotientHamiltonian:
    """``hbar = diag(1, 0, ..., 0) + gamma * abar`` on the cell basis."""

    abar: np.ndarray
    gamma: float
    hbar: np.ndarray
    sizes: tuple[int, ...]

    @property
    def N(self) -> int:
        return sum(self.sizes)

    @property
    def num_cells(self) -> int:
        return len(self.sizes)

    @cached_property
    def spectrum(self):
        from .spectral import decompose

        return decompose(self.hbar)

    @cached_property
    def initial_state(self) -> np.ndarray:
        return uniform_projection(self.sizes)


def quotient_adjacency(dtable: np.ndarray) -> np.ndarray:
    d = np.asarray(dtable, dtype=float)
    return np.sqrt(d * d.T)


def quotient_hamiltonian(p: EquitablePartition, gamma: float) -> QuotientHamiltonian:
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite, got {gamma}")
    abar = quotient_adjacency(p.dtable)
    hbar = gamma * abar
    hbar[0, 0] += 1.0
    abar.setflags(write=False)
    hbar.setflags(write=False)
    return QuotientHamiltonian(abar, gamma, hbar, p.sizes)


def uniform_projection(sizes: Sequence[int]) -> np.ndarray:
    n = np.asarray(sizes, dtype=float)
    return np.sqrt(n / n.sum())


def project_uniform(p: EquitablePartition) -> np.ndarray:
    """Cell-basis coordinates of the uniform state: ``sqrt(n_j / N)``."""
    return uniform_projection(p.sizes)


def project(p: EquitablePartition, state: np.ndarray) -> np.ndarray:
    """Coordinates of ``state`` along the normalized cell indicator vectors."""
    state = np.asarray(state)
    if state.shape != (p.num_vertices,):
        raise ValueError(f"state has shape {state.shape}, expected ({p.num_vertices},)")
    sums = np.array([state[_as_index(cell)].sum() for cell in p.cells])
    return sums / np.sqrt(np.asarray(p.sizes, dtype=float))


def lift(p: EquitablePartition, qv: np.ndarray) -> np.ndarray:
    """Full-space vector with amplitude ``qv[j] / sqrt(n_j)`` on every vertex of cell j."""
    qv = np.asarray(qv)
    if qv.shape != (p.num_cells,):
        raise ValueError(f"quotient vector has shape {qv.shape}, expected ({p.num_cells},)")
    out = np.empty(p.num_vertices, dtype=np.result_type(qv.dtype, float))
    for c, cell in enumerate(p.cells):
        out[_as_index(cell)] = qv[c] / math.sqrt(p.sizes[c])
    return out
