"""Monte Carlo experiments, rate estimation, CSV output and the CLI."""

from .config import CodeSpec, ErrorEstimate, ExperimentConfig, RateEstimate, wilson_interval
from .labels import match_labels
from .montecarlo import run_assignment_mc, run_centroid_mc, run_kmeans_mc
from .rate import estimate_rate_mc
from .report import ResultRow, result_rows, write_csv, write_rate_csv

__all__ = [
    "CodeSpec",
    "ErrorEstimate",
    "ExperimentConfig",
    "RateEstimate",
    "ResultRow",
    "estimate_rate_mc",
    "match_labels",
    "result_rows",
    "run_assignment_mc",
    "run_centroid_mc",
    "run_kmeans_mc",
    "wilson_interval",
    "write_csv",
    "write_rate_csv",
]
