"""Tuples, datasets, partially seen tuples and their bounds.

Attribute values follow the cost convention: non-negative, lower is better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from flexsky.sources import SortedSource


class DatasetError(ValueError):
    """Raised when tuples cannot form a valid dataset."""


@dataclass(frozen=True)
class Tuple:
    id: str
    values: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class Dataset:
    """A materialized relation of identified tuples.

    Values are held as an ``(n, d)`` float array aligned with ``ids``; use
    :meth:`tuples` or :meth:`tuple` for per-tuple views.
    """

    dim: int
    ids: tuple[str, ...]
    values: np.ndarray
    attr_max: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def n(self) -> int:
        return len(self.ids)

    def tuples(self) -> list[Tuple]:
        return [Tuple(i, tuple(float(x) for x in row)) for i, row in zip(self.ids, self.values)]

    def tuple(self, tid: str) -> Tuple:
        row = self.ids.index(tid)
        return Tuple(tid, tuple(float(x) for x in self.values[row]))

    def value_map(self) -> dict[str, tuple[float, ...]]:
        return {t.id: t.values for t in self.tuples()}


def make_dataset(
    dim: int,
    tuples: Iterable[Tuple | tuple[str, Sequence[float]]],
    attr_max: Sequence[float] | None = None,
) -> Dataset:
    """Validate ``tuples`` and build a :class:`Dataset`.

    ``attr_max`` defaults to the per-attribute maximum over the tuples.
    """
    if dim < 1:
        raise DatasetError(f"dimensionality must be >= 1, got {dim}")
    ids: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    for item in tuples:
        tid, vals = (item.id, item.values) if isinstance(item, Tuple) else item
        tid = str(tid)
        if tid in seen:
            raise DatasetError(f"duplicate tuple id {tid!r}")
        if len(vals) != dim:
            raise DatasetError(f"tuple {tid!r} has {len(vals)} values, expected {dim}")
        row = [float(v) for v in vals]
        for v in row:
            if not math.isfinite(v) or v < 0:
                raise DatasetError(f"tuple {tid!r} has invalid value {v!r} (need finite and >= 0)")
        seen.add(tid)
        ids.append(tid)
        rows.append(row)
    if not ids:
        raise DatasetError("dataset must contain at least one tuple")

    values = np.asarray(rows, dtype=float).reshape(len(ids), dim)
    values.setflags(write=False)
    observed = values.max(axis=0)
    if attr_max is None:
        amax = tuple(float(x) for x in observed)
    else:
        if len(attr_max) != dim:
            raise DatasetError(f"attr_max has {len(attr_max)} entries, expected {dim}")
        amax = tuple(float(x) for x in attr_max)
        if not all(math.isfinite(x) for x in amax):
            raise DatasetError(f"attr_max must be finite, got {amax}")
        bad = np.nonzero(values > np.asarray(amax))
        if bad[0].size:
            r, c = int(bad[0][0]), int(bad[1][0])
            raise DatasetError(
                f"tuple {ids[r]!r} value {values[r, c]!r} on attribute {c + 1} exceeds attr_max {amax[c]!r}"
            )
    return Dataset(dim=dim, ids=tuple(ids), values=values, attr_max=amax)


def sorted_pairs(dataset: Dataset, attr: int) -> list[tuple[str, float]]:
    """All ``(id, value)`` pairs of one attribute, by value then id."""
    col = dataset.values[:, attr]
    return sorted(((tid, float(v)) for tid, v in zip(dataset.ids, col)), key=lambda p: (p[1], p[0]))


def vertical_partition(dataset: Dataset) -> list[SortedSource]:
    """Split ``dataset`` into one ranked list per attribute."""
    return [SortedSource(sorted_pairs(dataset, i), name=f"list_{i + 1}") for i in range(dataset.dim)]


@dataclass
class PartialTuple:
    """A tuple known only on the lists where it has been met so far.

    ``slots[i]`` is the value on list ``i`` or ``None`` if not yet seen.
    """

    id: str
    slots: list[float | None]
    first_seen_depth: int = 1

    def __post_init__(self) -> None:
        if all(s is None for s in self.slots):
            raise ValueError(f"partial tuple {self.id!r} has no seen attribute")

    @property
    def complete(self) -> bool:
        return all(s is not None for s in self.slots)


@dataclass
class ThresholdPoint:
    """Last value extracted on each list."""

    ell: list[float] = field(default_factory=list)

    def update(self, attr: int, value: float) -> None:
        if value < self.ell[attr]:
            raise ValueError(f"threshold on list {attr + 1} would decrease: {value} < {self.ell[attr]}")
        self.ell[attr] = value


def best_bound(partial: PartialTuple, threshold: ThresholdPoint | Sequence[float]) -> tuple[float, ...]:
    ell = threshold.ell if isinstance(threshold, ThresholdPoint) else threshold
    return tuple(float(ell[i]) if s is None else s for i, s in enumerate(partial.slots))


def worst_bound(partial: PartialTuple, attr_max: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(attr_max[i]) if s is None else s for i, s in enumerate(partial.slots))
