"""Edge entropies and the explicit Euler entropy flow.

Each edge ``xy`` carries the KL divergence between the alpha-lazy outward
walks centred at its endpoints. In the symmetric variant the two
directions are added. The flow raises every weight at the rate of its
entropy, so bridges between dense groups grow fastest.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, check_weights
from .walk import ParameterError, WalkDistribution, WalkEngine, check_alpha, walk_distribution

__all__ = [
    "VARIANTS",
    "NumericalAbort",
    "FlowConfig",
    "FlowTrace",
    "TrajectoryVerdict",
    "kl_divergence",
    "edge_entropy",
    "edge_entropies",
    "flow_step",
    "run_flow",
    "closed_form_segment",
    "closed_form_equal_triangle",
    "classify_trajectory",
]

VARIANTS = ("symmetric", "forward", "backward")


class NumericalAbort(ArithmeticError):
    """A weight or entropy became non-finite during the flow."""

    def __init__(self, step: int, what: str = "weight"):
        super().__init__(f"non-finite {what} at step {step}")
        self.step = step


@dataclass(frozen=True)
class FlowConfig:
    alpha: float = 0.5
    step_size: float = 0.01
    num_steps: int = 20
    variant: str = "symmetric"

    def __post_init__(self):
        check_alpha(self.alpha)
        if not (self.step_size > 0) or not math.isfinite(self.step_size):
            raise ParameterError("step size must be positive")
        if int(self.num_steps) != self.num_steps or self.num_steps < 0:
            raise ParameterError("number of steps must be a non-negative integer")
        if self.variant not in VARIANTS:
            raise ParameterError(f"variant must be one of {VARIANTS}")


@dataclass
class FlowTrace:
    """Weights at steps ``0..N`` and the entropies that drove steps ``1..N``.

    ``weights[j]`` is the weight vector at step ``j``; ``entropies[j]`` was
    evaluated on ``weights[j]``, so there is one fewer row of entropies.
    """

    config: FlowConfig
    weights: np.ndarray
    entropies: np.ndarray
    elapsed: float = field(default=0.0, compare=False)

    @property
    def num_steps(self) -> int:
        return len(self.weights) - 1

    @property
    def final(self) -> np.ndarray:
        return self.weights[-1]


@dataclass(frozen=True)
class TrajectoryVerdict:
    kind: str
    final_entropy_max: float
    window_growth_min: float


def kl_divergence(p, q) -> float:
    """``sum P log(P/Q)`` in nats over the support of ``P``.

    Accepts :class:`WalkDistribution` objects or plain arrays.
    """
    p = p.mass if isinstance(p, WalkDistribution) else np.asarray(p, dtype=float)
    q = q.mass if isinstance(q, WalkDistribution) else np.asarray(q, dtype=float)
    if p.shape != q.shape or not np.array_equal(p > 0, q > 0):
        raise ValueError("distributions must share the same support")
    s = p > 0
    return float(np.sum(p[s] * np.log(p[s] / q[s])))


def _combine(kl_xy: float, kl_yx: float, variant: str) -> float:
    if variant == "symmetric":
        return kl_xy + kl_yx
    return kl_xy if variant == "forward" else kl_yx


def edge_entropy(graph: Graph, weights, edge: int, alpha: float, variant: str = "symmetric") -> float:
    """Entropy of one edge, oriented from ``edges[edge, 0]`` to ``edges[edge, 1]``."""
    if variant not in VARIANTS:
        raise ParameterError(f"variant must be one of {VARIANTS}")
    x, y = graph.edges[edge]
    rx = walk_distribution(graph, weights, int(x), alpha)
    ry = walk_distribution(graph, weights, int(y), alpha)
    return _combine(kl_divergence(rx, ry), kl_divergence(ry, rx), variant)


def edge_entropies(graph: Graph, weights, alpha: float, variant: str = "symmetric",
                   engine: WalkEngine | None = None, chunk: int = 4096) -> np.ndarray:
    """Entropy of every edge from one weight snapshot."""
    if variant not in VARIANTS:
        raise ParameterError(f"variant must be one of {VARIANTS}")
    engine = engine or WalkEngine(graph)
    r = engine.distributions(weights, alpha)
    with np.errstate(divide="ignore"):
        logr = np.where(r > 0, np.log(r), 0.0)
    out = np.empty(graph.m)
    for lo in range(0, graph.m, chunk):
        x = graph.edges[lo:lo + chunk, 0]
        y = graph.edges[lo:lo + chunk, 1]
        dlog = logr[x] - logr[y]
        if variant == "symmetric":
            out[lo:lo + chunk] = np.sum((r[x] - r[y]) * dlog, axis=1)
        elif variant == "forward":
            out[lo:lo + chunk] = np.sum(r[x] * dlog, axis=1)
        else:
            out[lo:lo + chunk] = -np.sum(r[y] * dlog, axis=1)
    return out


def flow_step(graph: Graph, weights, config: FlowConfig,
              engine: WalkEngine | None = None) -> tuple[np.ndarray, np.ndarray]:
    """One synchronous Euler step: ``w + s * D(w)`` with every ``D`` read from ``w``."""
    w = check_weights(graph, weights)
    d = edge_entropies(graph, w, config.alpha, config.variant, engine)
    return w + config.step_size * d, d


def run_flow(graph: Graph, w0, config: FlowConfig, threads: int | None = None) -> FlowTrace:
    """Run ``config.num_steps`` Euler steps from ``w0``.

    ``elapsed`` on the returned trace covers the update loop only.

    Raises
    ------
    NumericalAbort
        If an entropy or weight stops being finite (or a weight drops to
        zero or below), with the offending step index.
    """
    w = check_weights(graph, w0).copy()
    n_steps = int(config.num_steps)
    weights = np.empty((n_steps + 1, graph.m))
    entropies = np.empty((n_steps, graph.m))
    weights[0] = w
    engine = WalkEngine(graph, threads=threads)
    start = time.perf_counter()
    for j in range(1, n_steps + 1):
        d = edge_entropies(graph, w, config.alpha, config.variant, engine)
        if not np.all(np.isfinite(d)):
            raise NumericalAbort(j - 1, "entropy")
        with np.errstate(over="ignore", invalid="ignore"):
            w = w + config.step_size * d
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise NumericalAbort(j)
        entropies[j - 1] = d
        weights[j] = w
    elapsed = time.perf_counter() - start
    return FlowTrace(config, weights, entropies, elapsed)


def closed_form_segment(alpha: float, w0: float, t: float) -> float:
    alpha = check_alpha(alpha)
    return w0 + t * (2 - 4 * alpha) * math.log((1 - alpha) / alpha)


def closed_form_equal_triangle(alpha: float, w0: float, t: float) -> float:
    alpha = check_alpha(alpha)
    return w0 + t * (3 * alpha - 1) * math.log(2 * alpha / (1 - alpha))


def classify_trajectory(trace: FlowTrace, entropy_tolerance: float = 1e-6,
                        growth_floor: float = 1e-3, window: int = 10) -> TrajectoryVerdict:
    """Heuristic finite-horizon call on whether the flow settles or runs away.

    ``converged`` when every entropy of the last evaluated step is below
    ``entropy_tolerance``; ``diverging`` when every edge grew faster than
    ``growth_floor`` per unit time over the last ``window`` steps.
    """
    if window < 1 or trace.num_steps < window:
        raise ValueError(f"trace needs at least {window + 1} recorded weight vectors")
    final_max = float(trace.entropies[-1].max()) if trace.entropies.size else 0.0
    span = window * trace.config.step_size
    growth = (trace.weights[-1] - trace.weights[-1 - window]) / span
    growth_min = float(growth.min()) if growth.size else 0.0
    if final_max < entropy_tolerance:
        kind = "converged"
    elif growth_min > growth_floor:
        kind = "diverging"
    else:
        kind = "undetermined"
    return TrajectoryVerdict(kind, final_max, growth_min)
