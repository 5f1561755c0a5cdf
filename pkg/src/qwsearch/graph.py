"""Simple undirected graphs, example families and edge-list I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import GraphFormatError, InvalidGraphError
from .hermitian import HermitianMatrix


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are stored canonically as a sorted tuple of ``(u, v)`` with ``u < v``.
    ``(u, v)`` and ``(v, u)`` given together count as a duplicate.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise InvalidGraphError(f"vertex count must be a non-negative integer, got {self.n!r}")
        n = int(self.n)
        canon = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InvalidGraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            canon.append((u, v) if u < v else (v, u))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise InvalidGraphError(f"duplicate edge {a}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canon))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def sparse_adjacency(self) -> sparse.csr_matrix:
        if not self.edges:
            return sparse.csr_matrix((self.n, self.n))
        e = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows))
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.sparse_adjacency.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        a = self.sparse_adjacency
        return a.indices[a.indptr[v]:a.indptr[v + 1]]

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        ncomp, _ = csgraph.connected_components(self.sparse_adjacency, directed=False)
        return ncomp == 1

    def distances_from(self, source: int) -> np.ndarray:
        """BFS distances; unreachable vertices get -1."""
        if self.n == 1:
            return np.zeros(1, dtype=np.int64)
        d = csgraph.shortest_path(self.sparse_adjacency, unweighted=True, indices=source)
        out = np.where(np.isinf(d), -1, d)
        return out.astype(np.int64)


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle graph needs n >= 3, got {n}")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def cyclepair_size(k: int) -> int:
    """Size ``m = 2(2k+1)^2`` of the inner cycle of :func:`example2_graph`."""
    return 2 * (2 * k + 1) ** 2


def example2_graph(k: int) -> Graph:
    """Marked vertex 0, an inner cycle C_m and an outer cycle C_{m^2}, m = 2(2k+1)^2.

    Vertex 0 is joined to every inner vertex ``1..m``. Inner vertex ``1+i``
    is joined to the block ``i*m .. (i+1)*m - 1`` of the outer cycle, whose
    vertices occupy labels ``m+1 .. m+m^2``, so every outer vertex has exactly
    one inner neighbour.
    """
    if k < 1:
        raise ValueError(f"cyclepair family needs k >= 1, got {k}")
    m = cyclepair_size(k)
    inner = np.arange(1, m + 1)
    outer0 = m + 1
    mm = m * m
    star = np.column_stack([np.zeros(m, dtype=np.int64), inner])
    inner_cycle = np.column_stack([inner, 1 + (inner % m)])
    cross = np.column_stack([np.repeat(inner, m), outer0 + np.arange(mm)])
    outer = np.arange(mm)
    outer_cycle = np.column_stack([outer0 + outer, outer0 + (outer + 1) % mm])
    edges = np.concatenate([star, inner_cycle, cross, outer_cycle])
    return Graph(1 + m + mm, tuple(map(tuple, edges.tolist())))


def adjacency_matrix(g: Graph) -> HermitianMatrix:
    return HermitianMatrix(g.sparse_adjacency.toarray())


# -- I/O ---------------------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse ``n`` on the first line, then one ``u v`` pair per line.

    Blank lines and ``#`` comments are ignored.
    """
    n = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"expected integers, got {line!r}", lineno) from None
        if n is None:
            if len(values) != 1 or values[0] < 0:
                raise GraphFormatError("first line must hold the vertex count", lineno)
            n = values[0]
            continue
        if len(values) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", lineno)
        u, v = values
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range [0, {n})", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append(key)
    if n is None:
        raise GraphFormatError("empty graph file: missing vertex count")
    return Graph(n, tuple(edges))


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def graph_to_document(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def graph_from_document(doc: dict) -> Graph:
    try:
        n = doc["n"]
        edges = doc.get("edges", [])
    except (KeyError, TypeError, AttributeError):
        raise GraphFormatError("graph document needs fields 'n' and 'edges'") from None
    if not isinstance(n, int) or not isinstance(edges, list):
        raise GraphFormatError("graph document fields have wrong types")
    for e in edges:
        if not (isinstance(e, (list, tuple)) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise GraphFormatError(f"bad edge entry {e!r}")
    return Graph(n, tuple(tuple(e) for e in edges))


def load_graph(source: str) -> Graph:
    """Parse a graph from edge-list text or a JSON ``{n, edges}`` document."""
    stripped = source.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        return graph_from_document(doc)
    return parse_edge_list(source)


def store_graph(g: Graph, fmt: str = "text") -> str:
    if fmt == "text":
        return format_edge_list(g)
    if fmt == "json":
        return json.dumps(graph_to_document(g), separators=(",", ":")) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}")

