"""Surgery, threshold sweeps and partition-quality metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition, check_weights, connected_components

__all__ = [
    "Partition",
    "MetricsReport",
    "SweepReport",
    "surgery",
    "sweep",
    "ari",
    "nmi",
    "modularity",
]


@dataclass(frozen=True)
class MetricsReport:
    cutoff: float
    num_communities: int
    modularity: float
    ari: float | None = None
    nmi: float | None = None

    def to_dict(self) -> dict:
        out = {"cutoff": self.cutoff, "num_communities": self.num_communities, "modularity": self.modularity}
        if self.ari is not None:
            out["ari"] = self.ari
            out["nmi"] = self.nmi
        return out


@dataclass(frozen=True)
class SweepReport:
    reports: tuple[MetricsReport, ...]
    best_by_modularity: int
    best_by_ari: int | None = None
    best_by_nmi: int | None = None

    @property
    def has_truth(self) -> bool:
        return self.best_by_ari is not None

    def best(self, metric: str) -> MetricsReport:
        return self.reports[getattr(self, f"best_by_{metric}")]

    def to_dict(self) -> dict:
        out: dict = {"cutoffs": [r.to_dict() for r in self.reports]}
        if self.has_truth:
            out["best_by_ari"] = self.best_by_ari
            out["best_by_nmi"] = self.best_by_nmi
        out["best_by_modularity"] = self.best_by_modularity
        return out


def surgery(graph: Graph, weights, cutoff: float) -> Partition:
    """Communities left after deleting every edge heavier than ``cutoff``."""
    w = check_weights(graph, weights)
    return connected_components(graph, w <= cutoff)


def _contingency(a: Partition, b: Partition) -> np.ndarray:
    if len(a) != len(b):
        raise ValueError(f"partitions cover different vertex counts ({len(a)} vs {len(b)})")
    table = np.zeros((a.num_communities, b.num_communities), dtype=np.int64)
    np.add.at(table, (a.labels, b.labels), 1)
    return table


def _same_blocks(table: np.ndarray) -> bool:
    return np.count_nonzero(table) == table.shape[0] == table.shape[1]


def ari(a: Partition, b: Partition) -> float:
    """Hubert-Arabie adjusted Rand index; 1.0 for identical partitions."""
    table = _contingency(a, b)
    if _same_blocks(table):
        return 1.0
    n = int(table.sum())

    def pairs(x):
        x = np.asarray(x, dtype=np.int64)
        return int(np.sum(x * (x - 1) // 2))

    index = pairs(table)
    rows, cols = pairs(table.sum(axis=1)), pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    expected = rows * cols / total
    top = (rows + cols) / 2
    return float((index - expected) / (top - expected))


def nmi(a: Partition, b: Partition) -> float:
    """Mutual information normalised by the arithmetic mean of the two entropies."""
    table = _contingency(a, b)
    if _same_blocks(table):
        return 1.0
    n = table.sum()
    pa = table.sum(axis=1) / n
    pb = table.sum(axis=0) / n
    ha = -np.sum(pa * np.log(pa))
    hb = -np.sum(pb * np.log(pb))
    if ha + hb == 0:
        return 1.0
    i, j = np.nonzero(table)
    pij = table[i, j] / n
    mi = np.sum(pij * np.log(pij / (pa[i] * pb[j])))
    return float(max(0.0, 2 * mi / (ha + hb)))


def modularity(graph: Graph, partition: Partition, mask=None) -> float:
    """Newman modularity with unit edge weights.

    ``mask`` restricts the graph to a subset of its edges (used to score
    the post-surgery graph). Returns 0.0 when no edge is kept.
    """
    if len(partition) != graph.n:
        raise ValueError("partition must label every vertex")
    edges = graph.edges if mask is None else graph.edges[np.asarray(mask, dtype=bool)]
    m = len(edges)
    if m == 0:
        return 0.0
    lab = partition.labels
    k = partition.num_communities
    cu, cv = lab[edges[:, 0]], lab[edges[:, 1]]
    inside = int(np.count_nonzero(cu == cv))
    degree_sum = np.bincount(cu, minlength=k) + np.bincount(cv, minlength=k)
    # integer numerator and denominator so the result is a single rounding
    num = 4 * m * inside - int(np.sum(degree_sum.astype(np.int64) ** 2))
    return num / (4 * m * m)


def sweep(graph: Graph, weights, ground_truth: Partition | None = None,
          modularity_on: str = "surgery") -> SweepReport:
    """Evaluate surgery at every distinct weight, from heaviest to lightest.

    ``modularity_on`` picks the graph modularity is scored on: ``"surgery"``
    (the graph left after removing edges heavier than the cutoff) or
    ``"original"`` (the full input topology). Ties for the best score go
    to the larger cutoff.

    Edges are added back lightest first with a union-find. The partition can
    only change on a merge, so partition metrics are recomputed at most
    ``n - 1`` times. Post-surgery modularity is tracked incrementally:
    every kept edge lies inside a component, so only the kept edge count
    and the per-component kept degree sums matter.
    """
    w = check_weights(graph, weights)
    if ground_truth is not None and len(ground_truth) != graph.n:
        raise ValueError(
            f"ground truth labels {len(ground_truth)} vertices but the graph has {graph.n}"
        )
    if modularity_on not in ("surgery", "original"):
        raise ValueError("modularity_on must be 'surgery' or 'original'")
    if graph.m == 0:
        part = connected_components(graph)
        truth = (ari(part, ground_truth), nmi(part, ground_truth)) if ground_truth is not None else ()
        reports = [MetricsReport(0.0, part.num_communities, 0.0, *truth)]
        return _pick(reports, ground_truth is not None)

    cutoffs, group = np.unique(w, return_inverse=True)
    order = np.argsort(group, kind="stable")
    bounds = np.searchsorted(group[order], np.arange(len(cutoffs) + 1))
    root = np.arange(graph.n)
    members = [[v] for v in range(graph.n)]
    kept_degree = np.zeros(graph.n, dtype=np.int64)  # indexed by root
    square_sum = 0  # sum over components of kept_degree**2
    kept = 0
    components = graph.n
    cached = None  # metrics of the current partition: (ari, nmi, original Q)
    rows = []
    for k in range(len(cutoffs)):
        for e in order[bounds[k]:bounds[k + 1]]:
            a, b = root[graph.edges[e]]
            kept += 1
            if a == b:
                square_sum += 4 * int(kept_degree[a]) + 4
                kept_degree[a] += 2
                continue
            if len(members[a]) < len(members[b]):
                a, b = b, a
            da, db = int(kept_degree[a]), int(kept_degree[b])
            square_sum += (da + db + 2) ** 2 - da * da - db * db
            kept_degree[a] = da + db + 2
            root[members[b]] = a
            members[a].extend(members[b])
            members[b] = []
            components -= 1
            cached = None
        if cached is None:
            part = _canonical(root)
            cached = (
                (ari(part, ground_truth), nmi(part, ground_truth)) if ground_truth is not None else (),
                modularity(graph, part) if modularity_on == "original" else None,
            )
        if modularity_on == "surgery":
            q = (4 * kept * kept - square_sum) / (4 * kept * kept)
        else:
            q = cached[1]
        rows.append(MetricsReport(float(cutoffs[k]), components, q, *cached[0]))
    return _pick(rows[::-1], ground_truth is not None)


def _canonical(root: np.ndarray) -> Partition:
    # community ids ordered by smallest member, as connected_components does
    _, first, inverse = np.unique(root, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return Partition(rank[inverse])


def _pick(reports: list[MetricsReport], has_truth: bool) -> SweepReport:
    def argmax(attr: str) -> int:
        return int(np.argmax([getattr(r, attr) for r in reports]))

    if not has_truth:
        return SweepReport(tuple(reports), argmax("modularity"))
    return SweepReport(tuple(reports), argmax("modularity"), argmax("ari"), argmax("nmi"))
