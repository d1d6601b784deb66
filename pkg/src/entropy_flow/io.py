"""Edge-list and label files, bundled datasets, and trace/report output.

Edge list: one edge per line, ``u v [w]`` separated by whitespace. Label
file: one ``vertex label`` pair per line. In both, blank lines and lines
starting with ``#`` are skipped. Floats are written with 17 significant
digits so a write/read round trip reproduces them exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .community import SweepReport
from .flow import FlowTrace
from .graph import Graph, GraphError, Partition, build_graph

__all__ = [
    "FIXTURES",
    "Dataset",
    "read_edge_list",
    "read_label_map",
    "read_labels",
    "load_dataset",
    "load_fixture",
    "fixture_path",
    "write_edge_list",
    "write_trace",
    "write_report",
    "write_json",
    "histogram",
    "histogram_export",
]

FIXTURES = ("karate", "football", "example2")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _records(path: Path):
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if line and not line.startswith("#"):
                    yield lineno, line.split()
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


@dataclass(frozen=True)
class Dataset:
    name: str
    graph: Graph
    initial_weights: np.ndarray
    ground_truth: Partition | None = None
    truth_names: tuple[str, ...] | None = None


def read_edge_list(path) -> tuple[Graph, np.ndarray]:
    path = Path(path)
    rows = []
    for lineno, tok in _records(path):
        if len(tok) not in (2, 3):
            raise GraphError(f"{path}:{lineno}: expected 'u v [w]', got {len(tok)} fields")
        if len(tok) == 3:
            try:
                tok[2] = float(tok[2])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: bad weight {tok[2]!r}") from None
        rows.append(tok)
    if not rows:
        raise GraphError(f"{path}: no edges")
    try:
        return build_graph(rows)
    except GraphError as exc:
        raise GraphError(f"{path}: {exc}") from None


def read_label_map(path) -> dict[str, str]:
    path = Path(path)
    labels: dict[str, str] = {}
    for lineno, tok in _records(path):
        if len(tok) != 2:
            raise GraphError(f"{path}:{lineno}: expected 'vertex label'")
        if tok[0] in labels:
            raise GraphError(f"{path}:{lineno}: vertex {tok[0]!r} labelled twice")
        labels[tok[0]] = tok[1]
    return labels


def read_labels(path, graph: Graph) -> tuple[Partition, tuple[str, ...]]:
    """Ground-truth partition aligned to ``graph``'s vertex order.

    Returns the partition and the label name of each community id.
    """
    raw = read_label_map(path)
    unknown = sorted(set(raw) - set(graph.index))
    if unknown:
        raise GraphError(f"{path}: vertices not in graph: {', '.join(unknown)}")
    missing = [v for v in graph.names if v not in raw]
    if missing:
        raise GraphError(f"{path}: unlabelled vertices: {', '.join(missing)}")
    ordered = [raw[v] for v in graph.names]
    part = Partition.from_labels(ordered)
    names = tuple(dict.fromkeys(ordered))
    return part, names


def load_dataset(edge_path, label_path=None, name: str | None = None) -> Dataset:
    graph, w = read_edge_list(edge_path)
    truth = names = None
    if label_path is not None:
        truth, names = read_labels(label_path, graph)
    return Dataset(name or Path(edge_path).stem, graph, w, truth, names)


def fixture_path(name: str, kind: str = "edges") -> Path:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    return Path(str(resources.files("entropy_flow") / "data" / f"{name}.{kind}"))


def load_fixture(name: str) -> Dataset:
    return load_dataset(fixture_path(name), fixture_path(name, "labels"), name)


def write_edge_list(graph: Graph, weights, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in range(graph.m):
            u, v = graph.edge_names(e)
            fh.write(f"{u} {v} {fmt(weights[e])}\n")


def write_trace(graph: Graph, trace: FlowTrace, path) -> None:
    """CSV with one row per (step, edge); the last step has no entropy."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["step", "edge_u", "edge_v", "weight", "entropy"])
        names = [graph.edge_names(e) for e in range(graph.m)]
        for j, w in enumerate(trace.weights):
            d = trace.entropies[j] if j < len(trace.entropies) else None
            for e, (u, v) in enumerate(names):
                out.writerow([j, u, v, fmt(w[e]), "" if d is None else fmt(d[e])])


def write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, allow_nan=False)
        fh.write("\n")


def write_report(report: SweepReport, path, extra: dict | None = None) -> None:
    obj = dict(extra or {})
    obj.update(report.to_dict())
    write_json(obj, path)


def histogram(values, bins: int) -> list[tuple[float, float, int]]:
    """Equal-width bins spanning ``[min, max]``; the last bin is closed."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("cannot histogram an empty list of values")
    if int(bins) != bins or bins < 1:
        raise ValueError("bin count must be a positive integer")
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        # zero-width range: every value lands in the first bin
        counts = [v.size] + [0] * (bins - 1)
        return [(lo, hi, c) for c in counts]
    counts, edges = np.histogram(v, bins=int(bins), range=(lo, hi))
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(int(bins))]


def histogram_export(values, bins: int, path) -> None:
    rows = histogram(values, bins)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["bin_left", "bin_right", "count"])
        for left, right, count in rows:
            out.writerow([fmt(left), fmt(right), count])
