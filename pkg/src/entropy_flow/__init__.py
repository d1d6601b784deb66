"""Entropy flow on weighted graphs and community detection by surgery."""

from .community import MetricsReport, SweepReport, ari, modularity, nmi, surgery, sweep
from .flow import (
    FlowConfig,
    FlowTrace,
    NumericalAbort,
    TrajectoryVerdict,
    classify_trajectory,
    closed_form_equal_triangle,
    closed_form_segment,
    edge_entropies,
    edge_entropy,
    flow_step,
    kl_divergence,
    run_flow,
)
from .graph import Graph, GraphError, Partition, ShellDecomposition, build_graph, connected_components, shells
from .io import Dataset, load_dataset, load_fixture
from .walk import ParameterError, WalkDistribution, WalkEngine, outward_mass, walk_distribution

__version__ = "0.1.0"
