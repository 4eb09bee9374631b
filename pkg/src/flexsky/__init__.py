"""Non-k-dominated flexible skyline over ranked lists, sorted access only."""

from flexsky.fdominance import (
    FdomCounter,
    WeightPolytope,
    f_dominates,
    pareto_dominates,
    polytope_from_constraints,
    polytope_from_epsilon,
)
from flexsky.model import Dataset, PartialTuple, ThresholdPoint, Tuple, make_dataset, vertical_partition
from flexsky.nra import RunConfig, RunMetrics, RunResult, run
from flexsky.sources import SortedSource, open_csv_source

__all__ = [
    "Dataset", "FdomCounter", "PartialTuple", "RunConfig", "RunMetrics", "RunResult", "SortedSource",
    "ThresholdPoint", "Tuple", "WeightPolytope", "f_dominates", "make_dataset", "open_csv_source",
    "pareto_dominates", "polytope_from_constraints", "polytope_from_epsilon", "run", "vertical_partition",
]
