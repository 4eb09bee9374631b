"""Brute-force reference answers computed on a materialized dataset.

These read the whole relation directly and are deliberately naive; they exist
to check the sorted-access engine.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from flexsky.fdominance import WeightPolytope, dominance_matrix, dominates_point
from flexsky.model import Dataset


def _pareto_dominator_counts(values: np.ndarray, block: int = 256) -> np.ndarray:
    """Number of tuples Pareto-dominating each tuple."""
    counts = np.zeros(len(values), dtype=np.int64)
    for lo in range(0, len(values), block):
        v = values[lo:lo + block]
        le = (v[:, None, :] <= values[None, :, :]).all(axis=-1)
        lt = (v[:, None, :] < values[None, :, :]).any(axis=-1)
        counts += (le & lt).sum(axis=0)
    return counts


def skyband(dataset: Dataset, k: int) -> set[str]:
    """Tuples Pareto-dominated by fewer than ``k`` others."""
    counts = _pareto_dominator_counts(dataset.values)
    return {tid for tid, c in zip(dataset.ids, counts) if c < k}


def skyline(dataset: Dataset) -> set[str]:
    return skyband(dataset, 1)


def top_k(dataset: Dataset, weights: Sequence[float], k: int) -> set[str]:
    """Tuples of rank <= k, where rank is 1 + number of strictly better scores.

    Ties at the boundary are all kept, so the set can exceed ``k``.
    """
    w = np.asarray(weights, dtype=float)
    scores = dataset.values @ w
    order = np.sort(scores)
    # rank(t) = 1 + #{s : f(s) < f(t)}
    better = np.searchsorted(order, scores, side="left")
    return {tid for tid, b in zip(dataset.ids, better) if b + 1 <= k}


def nd_k_bruteforce(dataset: Dataset, W: WeightPolytope, k: int) -> set[str]:
    """Tuples F-dominated by fewer than ``k`` tuples of the relation."""
    counts = np.zeros(dataset.n, dtype=np.int64)
    for lo in range(0, dataset.n, 256):
        counts += dominance_matrix(dataset.values[lo:lo + 256], dataset.values, W).sum(axis=0)
    return {tid for tid, c in zip(dataset.ids, counts) if c < k}


def stop_condition_holds(
    dataset: Dataset,
    W: WeightPolytope,
    k: int,
    depth: int,
    attr_max: Sequence[float] | None = None,
) -> bool:
    """Whether, after ``depth`` accesses on every list, ``k`` seen tuples have
    worst bounds that F-dominate the threshold point."""
    n, d = dataset.values.shape
    if depth < 1:
        return False
    depth = min(depth, n)
    amax = np.asarray(dataset.attr_max if attr_max is None else attr_max, dtype=float)
    ids = np.asarray(dataset.ids, dtype=object)
    seen = np.zeros((n, d), dtype=bool)
    tau = np.empty(d)
    for i in range(d):
        order = np.lexsort((ids, dataset.values[:, i]))
        seen[order[:depth], i] = True
        tau[i] = dataset.values[order[depth - 1], i]
    rows = seen.any(axis=1)
    wb = np.where(seen[rows], dataset.values[rows], amax)
    return int(dominates_point(wb, tau, W).sum()) >= k


def min_stop_depth(
    dataset: Dataset,
    W: WeightPolytope,
    k: int,
    attr_max: Sequence[float] | None = None,
) -> int:
    """Smallest uniform depth at which the growing-phase stop holds; ``N`` if never."""
    for depth in range(1, dataset.n + 1):
        if stop_condition_holds(dataset, W, k, depth, attr_max):
            return depth
    return dataset.n
