"""Synthetic UNI/ANT datasets, CSV ingestion and vertical-partition export.

Random numbers come from numpy's PCG64 bit generator seeded with the 64-bit
spec seed, so a ``(distribution, n, d, seed)`` tuple reproduces the same bytes
on every platform.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from flexsky.model import Dataset, DatasetError, make_dataset, sorted_pairs
from flexsky.sources import write_csv_source

MAX_DIM = 6
DISTRIBUTIONS = ("UNI", "ANT")


@dataclass(frozen=True)
class GenSpec:
    distribution: str
    n: int
    d: int
    seed: int

    def __post_init__(self) -> None:
        dist = self.distribution.upper()
        if dist not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}; expected one of {DISTRIBUTIONS}")
        object.__setattr__(self, "distribution", dist)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.d <= MAX_DIM:
            raise ValueError(f"d must be in [1, {MAX_DIM}], got {self.d}")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & 0xFFFF_FFFF_FFFF_FFFF))


def _ids(n: int) -> tuple[str, ...]:
    width = max(6, len(str(n)))
    return tuple(f"t{i:0{width}d}" for i in range(1, n + 1))


def _from_array(values: np.ndarray, attr_max: Sequence[float]) -> Dataset:
    values = np.ascontiguousarray(values, dtype=float)
    values.setflags(write=False)
    n, d = values.shape
    return Dataset(dim=d, ids=_ids(n), values=values, attr_max=tuple(float(x) for x in attr_max))


def gen_uniform(spec: GenSpec) -> Dataset:
    """``n`` points i.i.d. uniform in ``[0, 1)^d``."""
    rng = _rng(spec.seed)
    return _from_array(rng.random((spec.n, spec.d)), [1.0] * spec.d)


def _peak(rng: np.random.Generator, lo: float, hi: float, size: int, terms: int = 12) -> np.ndarray:
    """Mean of ``terms`` uniforms, rescaled to ``[lo, hi]`` (a bell on a bounded range)."""
    return rng.random((size, terms)).mean(axis=1) * (hi - lo) + lo


def gen_anticorrelated(spec: GenSpec) -> Dataset:
    """Anticorrelated points around the hyperplane ``sum(x) = c * d``.

    This is the classic skyline-benchmark construction. Each point draws a plane
    position ``c`` from the bell ``normal(0.5, 0.25)``, i.e. the mean of 12
    uniforms on ``[0.25, 0.75]``. It starts at ``(c, ..., c)`` and then moves
    value between neighbouring attributes by ``h ~ U(-l, l)`` with
    ``l = min(c, 1 - c)``, which keeps the sum fixed. Points leaving the unit
    box are redrawn.
    """
    rng = _rng(spec.seed)
    n, d = spec.n, spec.d
    out = np.empty((0, d))
    while len(out) < n:
        m = max(64, 2 * (n - len(out)))
        c = np.clip(_peak(rng, 0.25, 0.75, m), 0.0, 1.0)
        spread = np.minimum(c, 1.0 - c)
        x = np.repeat(c[:, None], d, axis=1)
        for i in range(d):
            h = (rng.random(m) * 2.0 - 1.0) * spread
            x[:, i] += h
            x[:, (i + 1) % d] -= h
        ok = ((x >= 0.0) & (x <= 1.0)).all(axis=1)
        out = np.vstack([out, x[ok]])
    return _from_array(out[:n], [1.0] * d)


def generate(spec: GenSpec) -> Dataset:
    return gen_uniform(spec) if spec.distribution == "UNI" else gen_anticorrelated(spec)


def write_dataset_csv(dataset: Dataset, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id"] + [f"a{i + 1}" for i in range(dataset.dim)])
        for tid, row in zip(dataset.ids, dataset.values):
            w.writerow([tid] + [repr(float(v)) for v in row])


def load_dataset_csv(
    path: str | Path,
    attr_max: Sequence[float] | None = None,
    normalize: bool = False,
) -> Dataset:
    """Read a dataset CSV with header ``id,a1,...,ad``.

    With ``normalize`` each attribute is divided by its maximum (attributes
    that are all zero are left alone), giving values in ``[0, 1]``.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip() != "id" or len(header) < 2:
            raise DatasetError(f"{path}: expected header 'id,a1,...,ad', got {header!r}")
        d = len(header) - 1
        ids: list[str] = []
        rows: list[list[float]] = []
        for rowno, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != d + 1:
                raise DatasetError(f"{path}: row {rowno}: expected {d + 1} fields, got {len(row)}")
            try:
                vals = [float(x) for x in row[1:]]
            except ValueError as exc:
                raise DatasetError(f"{path}: row {rowno}: {exc}") from None
            for v in vals:
                if not math.isfinite(v) or v < 0:
                    raise DatasetError(f"{path}: row {rowno}: value {v!r} must be finite and >= 0")
            ids.append(row[0])
            rows.append(vals)
    if normalize and rows:
        arr = np.asarray(rows)
        top = arr.max(axis=0)
        top[top == 0] = 1.0
        rows = (arr / top).tolist()
        attr_max = None
    return make_dataset(d, zip(ids, rows), attr_max)


def export_partition(dataset: Dataset, directory: str | Path, meta: dict | None = None) -> None:
    """Write ``list_1.csv .. list_d.csv`` and ``meta.json`` into an empty directory."""
    directory = Path(directory)
    if directory.exists() and any(directory.iterdir()):
        raise FileExistsError(f"{directory}: directory is not empty")
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(dataset.dim):
        write_csv_source(sorted_pairs(dataset, i), directory / f"list_{i + 1}.csv")
    info = {"distribution": None, "n": dataset.n, "d": dataset.dim, "seed": None}
    info.update(meta or {})
    info["attr_max"] = list(dataset.attr_max)
    (directory / "meta.json").write_text(json.dumps(info, indent=2) + "\n", encoding="utf-8")
