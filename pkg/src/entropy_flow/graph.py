"""Undirected weighted graphs with dense vertex indices.

Vertices carry arbitrary string ids externally and dense integer indices
internally, assigned in order of first appearance. Edges are stored once,
canonicalised to ``u < v``, and addressed by their position in
``Graph.edges``. Weights live outside the graph in a plain float array
indexed by edge position, so one topology can carry many weight vectors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

__all__ = [
    "GraphError",
    "Graph",
    "Partition",
    "ShellDecomposition",
    "build_graph",
    "check_weights",
    "shells",
    "connected_components",
]


class GraphError(ValueError):
    """Malformed graph input: self-loops, duplicate edges, bad weights."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    Attributes
    ----------
    names : tuple of str
        External id of each vertex, by dense index.
    edges : (m, 2) int array
        Endpoint indices with ``edges[e, 0] < edges[e, 1]``.
    adjacency : tuple of tuple of (int, int)
        ``adjacency[u]`` lists ``(neighbor, edge_index)`` pairs.
    """

    names: tuple[str, ...]
    edges: np.ndarray
    adjacency: tuple[tuple[tuple[int, int], ...], ...]
    index: dict[str, int] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> list[int]:
        return [v for v, _ in self.adjacency[u]]

    def edge_index(self, u: int, v: int) -> int:
        for w, e in self.adjacency[u]:
            if w == v:
                return e
        raise KeyError((self.names[u], self.names[v]))

    def edge_names(self, e: int) -> tuple[str, str]:
        u, v = self.edges[e]
        return self.names[u], self.names[v]

    def directed_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Both orientations of every edge as (tail, head, edge_index) arrays."""
        u, v = self.edges[:, 0], self.edges[:, 1]
        eid = np.arange(self.m)
        return np.concatenate([u, v]), np.concatenate([v, u]), np.concatenate([eid, eid])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @classmethod
    def from_pairs(cls, names: Sequence[str], pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Build from dense-index pairs; ``names`` fixes the vertex order."""
        names = tuple(names)
        n = len(names)
        if n == 0:
            raise GraphError("graph needs at least one vertex")
        seen: dict[tuple[int, int], int] = {}
        edges = []
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) refers to a vertex outside 0..{n - 1}")
            if a == b:
                raise GraphError(f"self-loop at vertex {names[a]!r}")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise GraphError(f"duplicate edge ({names[a]!r}, {names[b]!r})")
            e = len(edges)
            seen[key] = e
            edges.append(key)
            adjacency[a].append((b, e))
            adjacency[b].append((a, e))
        arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
        return cls(
            names=names,
            edges=arr,
            adjacency=tuple(tuple(lst) for lst in adjacency),
            index={name: i for i, name in enumerate(names)},
        )


def check_weights(graph: Graph, weights) -> np.ndarray:
    """Return ``weights`` as a float array after validating it against ``graph``."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (graph.m,):
        raise GraphError(f"expected {graph.m} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise GraphError("weights must be finite and strictly positive")
    return w


def build_graph(records: Iterable[Sequence], vertices: Iterable[str] = ()) -> tuple[Graph, np.ndarray]:
    """Build a graph and weight vector from ``(u, v)`` or ``(u, v, w)`` records.

    Vertex ids are converted to ``str`` and indexed by first appearance;
    ``vertices`` (if given) are indexed first, which is how isolated
    vertices enter. Missing weights default to 1.0.

    Raises
    ------
    GraphError
        On a self-loop, a duplicate edge (either orientation) or a
        non-positive weight.
    """
    index: dict[str, int] = {}
    names: list[str] = []

    def idx(x) -> int:
        x = str(x)
        if x not in index:
            index[x] = len(names)
            names.append(x)
        return index[x]

    for x in vertices:
        idx(x)
    pairs = []
    weights = []
    for rec in records:
        if len(rec) not in (2, 3):
            raise GraphError(f"edge record must be (u, v) or (u, v, w): {rec!r}")
        w = float(rec[2]) if len(rec) == 3 else 1.0
        if not (w > 0) or not np.isfinite(w):
            raise GraphError(f"non-positive weight {w!r} on edge ({rec[0]!r}, {rec[1]!r})")
        pairs.append((idx(rec[0]), idx(rec[1])))
        weights.append(w)
    graph = Graph.from_pairs(names, pairs)
    return graph, np.array(weights, dtype=float)


@dataclass(frozen=True)
class ShellDecomposition:
    """BFS layers ``shells[j]`` at distance exactly ``j`` from ``source``."""

    source: int
    shell_of: tuple[int | None, ...]
    shells: tuple[tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.shells) - 1


def shells(graph: Graph, source: int) -> ShellDecomposition:
    if not 0 <= source < graph.n:
        raise IndexError(f"vertex index {source} out of range")
    dist: list[int | None] = [None] * graph.n
    dist[source] = 0
    layers = [[source]]
    queue = deque([source])
    while queue:
        u = queue.popleft()
        j = dist[u] + 1
        for v, _ in graph.adjacency[u]:
            if dist[v] is None:
                dist[v] = j
                if j == len(layers):
                    layers.append([])
                layers[j].append(v)
                queue.append(v)
    return ShellDecomposition(source, tuple(dist), tuple(tuple(layer) for layer in layers))


@dataclass(frozen=True, eq=False)
class Partition:
    """Community labels, dense in ``[0, num_communities)``."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if labels.size and (labels.min() < 0 or set(np.unique(labels)) != set(range(labels.max() + 1))):
            raise ValueError("labels must be dense non-negative integers")
        object.__setattr__(self, "labels", labels)

    @property
    def num_communities(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and np.array_equal(self.labels, other.labels)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_communities)]
        for v, c in enumerate(self.labels):
            out[c].append(v)
        return out

    @classmethod
    def from_labels(cls, raw: Sequence) -> "Partition":
        """Relabel arbitrary hashable labels densely, by first appearance."""
        ids: dict = {}
        return cls(np.array([ids.setdefault(x, len(ids)) for x in raw], dtype=np.int64))


def connected_components(graph: Graph, mask=None) -> Partition:
    """Components of the subgraph keeping edges where ``mask`` is true.

    Component ids are assigned in order of each component's smallest vertex.
    """
    keep = np.ones(graph.m, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    if keep.shape != (graph.m,):
        raise ValueError(f"edge mask needs {graph.m} entries, got {keep.shape}")
    kept = graph.edges[keep]
    adj = coo_matrix(
        (np.ones(len(kept)), (kept[:, 0], kept[:, 1])), shape=(graph.n, graph.n)
    ).tocsr()
    _, raw = _cc(adj, directed=False)
    return Partition.from_labels(raw)
