"""Expectation thresholds for subgraph containment in G(n, p), with exact checks of their finite lemmas."""

__version__ = "0.1.0"

from .graphs import Graph, RootedGraph  # noqa: E402
from .numeric import Real  # noqa: E402
from .thresholds import (is_q_sparse, p_expectation_threshold,  # noqa: E402
                         p_fractional_expectation_threshold, threshold_report)

__all__ = ["Graph", "RootedGraph", "Real", "is_q_sparse", "p_expectation_threshold",
           "p_fractional_expectation_threshold", "threshold_report", "__version__"]
