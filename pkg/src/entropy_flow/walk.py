"""Alpha-lazy outward random walks.

The walk from ``x`` keeps mass ``alpha`` at ``x`` and sends the rest
strictly outward across BFS shells. At every vertex ``u`` of shell
``j - 1`` the mass continuing outward is split among ``u``'s neighbors in
shell ``j`` in proportion to edge weight. A vertex in shell ``j`` retains
``(1 - alpha)**j`` times its outward-path probability, times a further
``alpha`` when it still has a neighbor in shell ``j + 1``.

Two evaluators are provided. :func:`walk_distribution` handles one source
with plain loops over the adjacency lists. :class:`WalkEngine` computes every
source at once with numpy. It caches the topology-only parts (distances and
forward edges grouped by layer) so the flow can re-evaluate cheaply as weights
change.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .graph import Graph, ShellDecomposition, check_weights, shells

__all__ = [
    "ParameterError",
    "WalkDistribution",
    "check_alpha",
    "outward_mass",
    "walk_distribution",
    "WalkEngine",
]


class ParameterError(ValueError):
    pass


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0,1)")
    return alpha


@dataclass(frozen=True, eq=False)
class WalkDistribution:
    source: int
    alpha: float
    mass: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.mass > 0)


def _forward_sums(graph: Graph, weights: np.ndarray, sh: ShellDecomposition) -> list[float]:
    # total weight from each vertex into the next shell; 0 when it has no outward edge
    out = [0.0] * graph.n
    for u, j in enumerate(sh.shell_of):
        if j is None:
            continue
        for v, e in graph.adjacency[u]:
            if sh.shell_of[v] == j + 1:
                out[u] += weights[e]
    return out


def outward_mass(graph: Graph, weights, sh: ShellDecomposition) -> np.ndarray:
    """Outward-path probability from ``sh.source`` to every vertex.

    Forward dynamic programme over the shells: the source starts with 1 and
    each vertex of shell ``j - 1`` pushes its mass to its shell-``j``
    neighbors in proportion to edge weight. Vertices outside the source's
    component get 0.
    """
    w = check_weights(graph, weights)
    fwd = _forward_sums(graph, w, sh)
    mass = np.zeros(graph.n)
    mass[sh.source] = 1.0
    for j, layer in enumerate(sh.shells[:-1]):
        for u in layer:
            if fwd[u] == 0.0:
                continue
            share = mass[u] / fwd[u]
            for v, e in graph.adjacency[u]:
                if sh.shell_of[v] == j + 1:
                    mass[v] += share * w[e]
    return mass


def walk_distribution(graph: Graph, weights, source: int, alpha: float) -> WalkDistribution:
    """Alpha-lazy outward walk distribution centred at ``source``.

    Vertices with no neighbor in the next shell keep their full share (no
    ``alpha`` factor). That covers the deepest shell, and it also covers the
    source itself when it is isolated, in which case all mass stays put.
    """
    alpha = check_alpha(alpha)
    w = check_weights(graph, weights)
    sh = shells(graph, source)
    p = outward_mass(graph, w, sh)
    fwd = _forward_sums(graph, w, sh)
    mass = np.zeros(graph.n)
    for v, j in enumerate(sh.shell_of):
        if j is None:
            continue
        mass[v] = (1.0 - alpha) ** j * p[v] * (alpha if fwd[v] > 0 else 1.0)
    return WalkDistribution(source, alpha, mass)


@dataclass
class _Block:
    # topology of one block of sources; flat indices address a (rows, n) array
    sources: np.ndarray
    dist: np.ndarray  # (rows, n) BFS distance, -1 when unreachable
    tail: np.ndarray  # flat (row, tail vertex) of each forward (source, edge) pair
    head: np.ndarray
    edge: np.ndarray
    layer_bounds: np.ndarray  # pairs sorted by layer; layer k is [bounds[k], bounds[k+1])


class WalkEngine:
    """Walk distributions for all sources of a fixed topology.

    Parameters
    ----------
    graph : Graph
    block_size : int, optional
        Sources per block. Memory per block is about ``block_size * 2m``
        machine words.
    threads : int, optional
        Worker threads for evaluating blocks. Defaults to the CPU count.
    cache_pairs : int
        Keep per-block topology in memory if the total number of forward
        (source, edge) pairs does not exceed this; otherwise rebuild each call.
    """

    def __init__(self, graph: Graph, block_size: int | None = None, threads: int | None = None,
                 cache_pairs: int = 20_000_000):
        self.graph = graph
        n, m = graph.n, graph.m
        if block_size is None:
            block_size = max(1, min(n, 4_000_000 // max(1, 2 * m)))
        self.block_size = block_size
        self.threads = threads or os.cpu_count() or 1
        self._tail, self._head, self._edge = graph.directed_arrays()
        self._csr = csr_matrix(
            (np.ones(2 * m), (self._tail, self._head)), shape=(n, n)
        )
        starts = range(0, n, block_size)
        self._ranges = [np.arange(s, min(n, s + block_size)) for s in starts]
        self._blocks: list[_Block] | None = None
        # forward pairs never exceed n * m: each edge is outward for at most one orientation
        if n * m <= cache_pairs:
            self._blocks = [self._build(r) for r in self._ranges]

    def _build(self, sources: np.ndarray) -> _Block:
        n = self.graph.n
        d = shortest_path(self._csr, unweighted=True, directed=False, indices=sources)
        d = np.where(np.isinf(d), -1, d).astype(np.int64)
        ds = d[:, self._tail]
        fwd = (ds >= 0) & (d[:, self._head] == ds + 1)
        rows, k = np.nonzero(fwd)
        layer = ds[rows, k]
        order = np.argsort(layer, kind="stable")
        rows, k, layer = rows[order], k[order], layer[order]
        depth = int(d.max()) if d.size else 0
        bounds = np.searchsorted(layer, np.arange(depth + 1))
        return _Block(
            sources=sources,
            dist=d,
            tail=rows * n + self._tail[k],
            head=rows * n + self._head[k],
            edge=self._edge[k],
            layer_bounds=bounds,
        )

    def _evaluate(self, blk: _Block, w: np.ndarray, alpha: float) -> np.ndarray:
        rows, n = blk.dist.shape
        size = rows * n
        wk = w[blk.edge]
        out = np.bincount(blk.tail, weights=wk, minlength=size)
        ratio = wk / out[blk.tail]
        p = np.zeros(size)
        p[np.arange(rows) * n + blk.sources] = 1.0
        b = blk.layer_bounds
        for j in range(len(b) - 1):
            lo, hi = b[j], b[j + 1]
            if lo == hi:
                continue
            p += np.bincount(blk.head[lo:hi], weights=p[blk.tail[lo:hi]] * ratio[lo:hi], minlength=size)
        reach = blk.dist >= 0
        damp = np.where(reach, (1.0 - alpha) ** np.where(reach, blk.dist, 0), 0.0)
        lazy = np.where(out.reshape(rows, n) > 0, alpha, 1.0)
        return p.reshape(rows, n) * damp * lazy

    def distributions(self, weights, alpha: float) -> np.ndarray:
        """``(n, n)`` array whose row ``x`` is the walk distribution from ``x``."""
        alpha = check_alpha(alpha)
        w = check_weights(self.graph, weights)
        n = self.graph.n
        result = np.zeros((n, n))

        def run(i: int) -> None:
            blk = self._blocks[i] if self._blocks is not None else self._build(self._ranges[i])
            result[self._ranges[i]] = self._evaluate(blk, w, alpha)

        jobs = range(len(self._ranges))
        if self.threads > 1 and len(self._ranges) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                list(pool.map(run, jobs))
        else:
            for i in jobs:
                run(i)
        return result
