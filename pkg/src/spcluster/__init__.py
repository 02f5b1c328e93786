"""Attractor-network clustering for binary student-problem charts."""

from .clustering import Clustering, TrialReport, rnn_cluster, run_trials, score_baseline
from .datagen import GenSpec, generate_chart
from .spchart import ChartType, SPChart, parse_chart, rearrange

__version__ = "0.1.0"

__all__ = [
    "ChartType",
    "Clustering",
    "GenSpec",
    "SPChart",
    "TrialReport",
    "__version__",
    "generate_chart",
    "parse_chart",
    "rearrange",
    "rnn_cluster",
    "run_trials",
    "score_baseline",
]
