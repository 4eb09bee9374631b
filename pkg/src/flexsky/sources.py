"""Ranked lists readable only by sorted access.

A :class:`SortedSource` exposes a single read operation, :meth:`SortedSource.pull`,
which returns the next ``(id, value)`` pair in ascending value order. There is
no way to look a value up by id.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

Pair = tuple[str, float]


class SourceError(ValueError):
    """Raised for malformed or unsorted ranked lists."""


class SortedSource:
    """Pull-based cursor over a ranked list.

    In-memory pairs are sorted by (value, id) on construction.
    """

    __slots__ = ("name", "_pairs", "_pos")

    def __init__(self, pairs: Iterable[Pair], name: str = "list"):
        self.name = name
        self._pairs: tuple[Pair, ...] = tuple(sorted(((str(i), float(v)) for i, v in pairs), key=lambda p: (p[1], p[0])))
        self._pos = 0

    @classmethod
    def _presorted(cls, pairs: list[Pair], name: str) -> "SortedSource":
        src = cls.__new__(cls)
        src.name = name
        src._pairs = tuple(pairs)
        src._pos = 0
        return src

    def pull(self) -> Optional[Pair]:
        """Next pair, or ``None`` once the list is exhausted."""
        if self._pos >= len(self._pairs):
            return None
        pair = self._pairs[self._pos]
        self._pos += 1
        return pair

    @property
    def depth(self) -> int:
        return self._pos

    @property
    def exhausted(self) -> bool:
        return self._pos >= len(self._pairs)

    def __repr__(self) -> str:
        return f"SortedSource({self.name!r}, depth={self._pos})"


def open_csv_source(path: str | Path, name: str | None = None) -> SortedSource:
    """Load a ranked-list CSV (header ``id,value``) and check its order."""
    path = Path(path)
    pairs: list[Pair] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["id", "value"]:
            raise SourceError(f"{path}: expected header 'id,value', got {header!r}")
        prev: float | None = None
        for rowno, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != 2:
                raise SourceError(f"{path}: row {rowno}: expected 2 fields, got {len(row)}")
            tid, raw = row[0], row[1]
            try:
                value = float(raw)
            except ValueError:
                raise SourceError(f"{path}: row {rowno}: cannot parse value {raw!r}") from None
            if not math.isfinite(value) or value < 0:
                raise SourceError(f"{path}: row {rowno}: value {value!r} must be finite and >= 0")
            if prev is not None and value < prev:
                raise SourceError(f"{path}: row {rowno}: sort-order violation ({value!r} after {prev!r})")
            prev = value
            pairs.append((tid, value))
    return SortedSource._presorted(pairs, name or path.stem)


def write_csv_source(pairs: Iterable[Pair], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "value"])
        for tid, value in pairs:
            w.writerow([tid, repr(float(value))])


def open_partition_dir(directory: str | Path) -> tuple[list[SortedSource], dict]:
    """Open ``list_1.csv .. list_d.csv`` and ``meta.json`` from a directory.

    When ``meta.json`` is missing, ``d`` is the number of list files found.
    A missing ``attr_max`` is filled in with each list's largest value.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise SourceError(f"{directory}: not a directory")
    meta_path = directory / "meta.json"
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
    if "d" in meta:
        d = int(meta["d"])
    else:
        d = 0
        while (directory / f"list_{d + 1}.csv").exists():
            d += 1
    if d < 1:
        raise SourceError(f"{directory}: no ranked lists found")
    sources = []
    for i in range(1, d + 1):
        p = directory / f"list_{i}.csv"
        if not p.exists():
            raise SourceError(f"{directory}: missing {p.name}")
        sources.append(open_csv_source(p, name=f"list_{i}"))
    if "attr_max" not in meta:
        # the last row of an ascending list holds its maximum
        meta = dict(meta, attr_max=[src._pairs[-1][1] if src._pairs else 0.0 for src in sources])
    return sources, meta


GROWING = "growing"
SHRINKING = "shrinking"


@dataclass
class AccessLog:
    """Per-list sorted-access counts, split by algorithm phase."""

    d: int
    growing: list[int] = field(default_factory=list)
    shrinking: list[int] = field(default_factory=list)
    phase: str = GROWING

    def __post_init__(self) -> None:
        if not self.growing:
            self.growing = [0] * self.d
        if not self.shrinking:
            self.shrinking = [0] * self.d

    def record(self, attr: int) -> None:
        if self.phase == GROWING:
            self.growing[attr] += 1
        else:
            self.shrinking[attr] += 1

    def depths(self) -> list[int]:
        return [g + s for g, s in zip(self.growing, self.shrinking)]


def sum_depths(log: AccessLog | Iterable[int]) -> int:
    if isinstance(log, AccessLog):
        return sum(log.depths())
    return sum(log)
