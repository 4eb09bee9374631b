"""Parameter sweeps over generated datasets, with CSV reports."""

from __future__ import annotations

import csv
import itertools
import json
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

from flexsky.datagen import MAX_DIM, GenSpec, generate
from flexsky.fdominance import polytope_from_epsilon
from flexsky.model import vertical_partition
from flexsky.nra import RunConfig, run
from flexsky.oracles import nd_k_bruteforce

COLUMNS = [
    "dist", "n", "d", "k", "eps", "mu", "seed",
    "depth_grow_total", "depth_shrink_total", "sum_depths", "fdom_tests",
    "buffer_peak", "output_size", "elapsed_ms",
    # per-list depth (all lists advance together) and extras
    "max_depth", "buffer_grow_end", "oracle_size",
]
METRIC_COLUMNS = COLUMNS[7:]

# default operating point: N=100K, d=2, k=10, eps=1%, mu=100
DEFAULTS = {"dist": "UNI", "n": 100_000, "d": 2, "k": 10, "eps": 0.01, "mu": 100}

Eps = Union[str, float]


@dataclass(frozen=True)
class Cell:
    dist: str
    n: int
    d: int
    k: int
    eps: Eps
    mu: int
    seed: int
    with_oracle: bool = False


@dataclass
class SweepSpec:
    dist: list[str] = field(default_factory=lambda: [DEFAULTS["dist"]])
    n: list[int] = field(default_factory=lambda: [DEFAULTS["n"]])
    d: list[int] = field(default_factory=lambda: [DEFAULTS["d"]])
    k: list[int] = field(default_factory=lambda: [DEFAULTS["k"]])
    eps: list[Eps] = field(default_factory=lambda: [DEFAULTS["eps"]])
    mu: list[int] = field(default_factory=lambda: [DEFAULTS["mu"]])
    seeds: list[int] = field(default_factory=lambda: [1])
    with_oracle: bool = False

    def __post_init__(self) -> None:
        self.eps = [normalize_eps(e) for e in self.eps]
        for name in ("dist", "n", "d", "k", "eps", "mu", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"sweep grid axis {name!r} is empty")
        for d in self.d:
            if not 1 <= d <= MAX_DIM:
                raise ValueError(f"d={d} outside [1, {MAX_DIM}]")
        if min(self.n) < 1 or min(self.k) < 1 or min(self.mu) < 1:
            raise ValueError("n, k and mu must be positive")

    def cells(self) -> list[Cell]:
        return [
            Cell(dist.upper(), n, d, k, eps, mu, seed, self.with_oracle)
            for dist, n, d, k, eps, mu, seed in itertools.product(
                self.dist, self.n, self.d, self.k, self.eps, self.mu, self.seeds
            )
        ]

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepSpec":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown sweep keys: {sorted(unknown)}")
        return cls(**{k: (v if isinstance(v, (list, bool)) else [v]) for k, v in raw.items()})

    @classmethod
    def from_file(cls, path: str | Path) -> "SweepSpec":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def normalize_eps(eps: Eps) -> Eps:
    if isinstance(eps, str):
        low = eps.strip().lower()
        if low in ("none", "full"):
            return low
        return float(low)
    return float(eps)


def eps_order(eps: Eps) -> float:
    """Sort key placing 'none' first and 'full' last."""
    if eps == "none":
        return 0.0
    if eps == "full":
        return float("inf")
    return float(eps)


# Desk-scale versions of the experiment axes; ANT is capped at 10K.
PRESETS: dict[str, dict] = {
    "n": {"n": [10_000, 50_000, 100_000]},
    "d": {"n": [10_000], "d": [2, 3, 4]},
    "k": {"n": [10_000], "k": [1, 2, 5, 10, 20, 50, 100]},
    "eps": {"n": [10_000], "eps": ["none", 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, "full"]},
    "mu": {"n": [10_000], "mu": [1, 10, 100, 1000]},
    "ant": {"dist": ["ANT"], "n": [10_000], "k": [1], "eps": ["none"], "mu": [1000]},
}


def preset(name: str, seeds: Sequence[int] = (1,)) -> SweepSpec:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return SweepSpec.from_dict(dict(PRESETS[name], seeds=list(seeds)))


def run_cell(cell: Cell) -> dict:
    ds = generate(GenSpec(cell.dist, cell.n, cell.d, cell.seed))
    W = polytope_from_epsilon(cell.d, cell.eps)
    result = run(vertical_partition(ds), RunConfig(cell.k, W, ds.attr_max, cell.mu))
    m = result.metrics
    row = {
        "dist": cell.dist, "n": cell.n, "d": cell.d, "k": cell.k, "eps": cell.eps,
        "mu": cell.mu, "seed": cell.seed,
        "depth_grow_total": sum(m.depth_growing),
        "depth_shrink_total": sum(m.depth_shrinking),
        "sum_depths": m.sum_depths,
        "fdom_tests": m.fdom_tests,
        "buffer_peak": m.buffer_peak,
        "output_size": m.output_size,
        "elapsed_ms": round(m.elapsed_ms, 3),
        "max_depth": m.max_depth,
        "buffer_grow_end": m.buffer_at_growing_end,
        "oracle_size": len(nd_k_bruteforce(ds, W, cell.k)) if cell.with_oracle else "",
    }
    return row


def pool_size() -> int:
    env = os.environ.get("FLEXSKY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> list[dict]:
    """One report row per (cell, seed), in grid order."""
    cells = spec.cells()
    workers = pool_size() if workers is None else workers
    if workers <= 1 or len(cells) == 1:
        return [run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, cells))


def aggregate(rows: Iterable[dict]) -> list[dict]:
    """Mean of each metric over seeds, one row per parameter cell."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = tuple(row[c] for c in ("dist", "n", "d", "k", "eps", "mu"))
        groups.setdefault(key, []).append(row)
    out = []
    for key, members in groups.items():
        agg = dict(zip(("dist", "n", "d", "k", "eps", "mu"), key))
        agg["seed"] = "mean"
        agg["reps"] = len(members)
        for col in METRIC_COLUMNS:
            vals = [r[col] for r in members if r[col] != ""]
            agg[col] = statistics.fmean(vals) if vals else ""
        out.append(agg)
    return out


def write_report(rows: Sequence[dict], out: str | Path | TextIO) -> None:
    """Write rows with the fixed column order (plus ``reps`` for aggregates)."""
    cols = COLUMNS + (["reps"] if rows and "reps" in rows[0] else [])
    if isinstance(out, (str, Path)):
        with Path(out).open("w", newline="", encoding="utf-8") as fh:
            write_report(rows, fh)
        return
    w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow(row)
