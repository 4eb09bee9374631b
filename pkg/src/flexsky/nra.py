"""Non-k-dominated flexible skyline over ranked lists, using sorted access only.

The engine runs in two phases.

Growing: pull batches of ``mu`` rounds (one pull per list per round) until
``k`` buffered tuples have a worst bound that F-dominates the threshold point.
No unseen tuple can then enter the result.

Shrinking: repeatedly drop every tuple that ``k`` others certainly F-dominate
(``wb(t)`` F-dominates ``bb(s)``) and keep pulling while some survivor could
still be F-dominated by ``k`` others (``bb(t)`` F-dominates ``wb(s)``).

Dominance tests are evaluated in blocks with numpy. ``fdom_tests`` counts the
tests a one-at-a-time implementation of the same loops would perform, stopping
a dominator scan as soon as ``k`` dominators are found and stopping the
candidate scan at the first tuple that forces more digging.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from flexsky.fdominance import FdomCounter, WeightPolytope, dominance_matrix, dominates_point
from flexsky.model import PartialTuple, ThresholdPoint
from flexsky.sources import GROWING, SHRINKING, AccessLog, SortedSource, SourceError

_COLUMN_BLOCK = 512


@dataclass
class RunConfig:
    k: int
    polytope: WeightPolytope
    attr_max: Sequence[float]
    mu: int = 1
    # Fault injection for harness tests: prune at k + offset confirmed dominators.
    prune_offset: int = 0

    def __post_init__(self) -> None:
        if int(self.k) < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if int(self.mu) < 1:
            raise ValueError(f"mu must be >= 1, got {self.mu}")
        if len(self.attr_max) != self.polytope.dim:
            raise ValueError(f"attr_max has {len(self.attr_max)} entries, polytope has dimension {self.polytope.dim}")
        self.k = int(self.k)
        self.mu = int(self.mu)


@dataclass
class RunMetrics:
    depth_growing: list[int]
    depth_shrinking: list[int]
    fdom_tests: int = 0
    buffer_at_growing_end: int = 0
    buffer_peak: int = 0
    output_size: int = 0
    elapsed_ms: float = 0.0
    growing_stop: str = ""
    batches: int = 0

    @property
    def depths(self) -> list[int]:
        return [g + s for g, s in zip(self.depth_growing, self.depth_shrinking)]

    @property
    def sum_depths(self) -> int:
        return sum(self.depths)

    @property
    def max_depth(self) -> int:
        return max(self.depths)


@dataclass
class RunResult:
    ids: list[str]
    values: dict[str, tuple[Optional[float], ...]]
    metrics: RunMetrics

    @property
    def id_set(self) -> set[str]:
        return set(self.ids)

    def to_dict(self) -> dict:
        m = self.metrics
        return {
            "result": [{"id": tid, "values": list(self.values[tid])} for tid in self.ids],
            "depth": {"growing": list(m.depth_growing), "shrinking": list(m.depth_shrinking)},
            "fdom_tests": m.fdom_tests,
            "buffer_peak": m.buffer_peak,
            "buffer_at_growing_end": m.buffer_at_growing_end,
            "output_size": m.output_size,
            "elapsed_ms": m.elapsed_ms,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


class Buffer:
    """Seen, not yet discarded tuples, kept in first-seen order."""

    def __init__(self, d: int, capacity: int = 256):
        self.d = d
        self.ids: list[str] = []
        self._index: dict[str, int] = {}
        self._vals = np.zeros((capacity, d))
        self._seen = np.zeros((capacity, d), dtype=bool)
        self._first = np.zeros(capacity, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, tid: str) -> bool:
        return tid in self._index

    @property
    def values(self) -> np.ndarray:
        return self._vals[: len(self.ids)]

    @property
    def seen(self) -> np.ndarray:
        return self._seen[: len(self.ids)]

    def _grow(self) -> None:
        cap = 2 * len(self._vals)
        for name in ("_vals", "_seen", "_first"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=old.dtype)
            new[: len(old)] = old
            setattr(self, name, new)

    def upsert(self, tid: str, attr: int, value: float, depth: int) -> None:
        row = self._index.get(tid)
        if row is None:
            row = len(self.ids)
            if row == len(self._vals):
                self._grow()
            self.ids.append(tid)
            self._index[tid] = row
            self._seen[row] = False
            self._first[row] = depth
        elif self._seen[row, attr]:
            raise SourceError(f"tuple {tid!r} appears twice on list {attr + 1}")
        self._vals[row, attr] = value
        self._seen[row, attr] = True

    def keep(self, mask: np.ndarray) -> list[str]:
        """Retain rows where ``mask`` is true; return the dropped ids."""
        n = len(self.ids)
        rows = np.flatnonzero(mask)
        dropped = [self.ids[i] for i in np.flatnonzero(~mask)]
        m = len(rows)
        self._vals[:m] = self._vals[:n][rows]
        self._seen[:m] = self._seen[:n][rows]
        self._first[:m] = self._first[:n][rows]
        self.ids = [self.ids[i] for i in rows]
        self._index = {tid: i for i, tid in enumerate(self.ids)}
        return dropped

    def worst_bounds(self, attr_max: Sequence[float]) -> np.ndarray:
        return np.where(self.seen, self.values, np.asarray(attr_max, dtype=float))

    def best_bounds(self, ell: Sequence[float]) -> np.ndarray:
        return np.where(self.seen, self.values, np.asarray(ell, dtype=float))

    def partial(self, tid: str) -> PartialTuple:
        row = self._index[tid]
        slots = [float(v) if s else None for v, s in zip(self._vals[row], self._seen[row])]
        return PartialTuple(tid, slots, int(self._first[row]))

    def partials(self) -> list[PartialTuple]:
        return [self.partial(tid) for tid in self.ids]


@dataclass
class RunState:
    """Everything one run owns: sources, buffer, threshold, log and counters."""

    sources: list[SortedSource]
    config: RunConfig
    buffer: Optional[Buffer] = None
    log: Optional[AccessLog] = None
    threshold: Optional[ThresholdPoint] = None
    counter: FdomCounter = field(default_factory=FdomCounter)
    discarded: set[str] = field(default_factory=set)
    batches: int = 0
    buffer_peak: int = 0
    growing_stop: str = ""
    observer: Optional[Callable[["RunState"], None]] = None

    def __post_init__(self) -> None:
        d = len(self.sources)
        if d != self.config.polytope.dim:
            raise ValueError(f"{d} sources but polytope has dimension {self.config.polytope.dim}")
        if self.buffer is None:
            self.buffer = Buffer(d)
        if self.log is None:
            self.log = AccessLog(d)
        if self.threshold is None:
            self.threshold = ThresholdPoint([0.0] * d)

    @property
    def d(self) -> int:
        return len(self.sources)

    @property
    def exhausted(self) -> bool:
        return all(s.exhausted for s in self.sources)

    @property
    def tau(self) -> np.ndarray:
        return np.asarray(self.threshold.ell, dtype=float)

    def worst_bounds(self) -> np.ndarray:
        return self.buffer.worst_bounds(self.config.attr_max)

    def best_bounds(self) -> np.ndarray:
        return self.buffer.best_bounds(self.threshold.ell)

    def pull_batch(self) -> None:
        """``mu`` rounds of one sorted access per list; short at exhaustion."""
        buf = self.buffer
        for _ in range(self.config.mu):
            if self.exhausted:
                break
            for i, src in enumerate(self.sources):
                pair = src.pull()
                if pair is None:
                    continue
                tid, value = pair
                self.log.record(i)
                self.threshold.update(i, value)
                if tid not in self.discarded:
                    buf.upsert(tid, i, value, src.depth)
        self.batches += 1
        self.buffer_peak = max(self.buffer_peak, len(buf))
        if self.exhausted:
            self._check_complete()
        if self.observer is not None:
            self.observer(self)

    def _check_complete(self) -> None:
        seen = self.buffer.seen
        if len(seen) and not seen.all():
            row = int(np.flatnonzero(~seen.all(axis=1))[0])
            missing = [i + 1 for i in np.flatnonzero(~seen[row])]
            raise SourceError(
                f"inconsistent sources: tuple {self.buffer.ids[row]!r} missing from list(s) {missing} after exhaustion"
            )


def _kth_true_position(block: np.ndarray, k: int) -> np.ndarray:
    """Row index of the k-th true entry in each column, or -1."""
    csum = np.cumsum(block, axis=0, dtype=np.int32)
    hit = csum[-1] >= k if len(block) else np.zeros(block.shape[1], dtype=bool)
    pos = np.where(hit, np.argmax(csum >= k, axis=0), -1)
    return pos


def growing_phase(state: RunState) -> ThresholdPoint:
    """Pull until ``k`` buffered worst bounds F-dominate the threshold point, or exhaustion."""
    cfg = state.config
    state.log.phase = GROWING
    while not state.exhausted:
        state.pull_batch()
        wb = state.worst_bounds()
        hits = dominates_point(wb, state.tau, cfg.polytope)
        if hits.sum() >= cfg.k:
            kth = int(np.flatnonzero(hits)[cfg.k - 1])
            state.counter.add(kth + 1)
            state.growing_stop = "dominated"
            return state.threshold
        state.counter.add(len(hits))
    state.growing_stop = "exhausted"
    return state.threshold


def _confirmed_counts(state: RunState) -> tuple[np.ndarray, int]:
    """Certain dominator counts per buffered tuple (capped scan), and tests spent."""
    cfg = state.config
    n = len(state.buffer)
    need = cfg.k + cfg.prune_offset
    wb, bb = state.worst_bounds(), state.best_bounds()
    counts = np.zeros(n, dtype=np.int64)
    tests = 0
    for lo in range(0, n, _COLUMN_BLOCK):
        hi = min(n, lo + _COLUMN_BLOCK)
        block = dominance_matrix(wb, bb[lo:hi], cfg.polytope)
        cols = np.arange(lo, hi)
        block[cols, cols - lo] = False
        counts[lo:hi] = block.sum(axis=0)
        pos = _kth_true_position(block, need)
        found = pos >= 0
        # tests up to and including the k-th dominator, not counting s itself
        tests += int(np.sum(np.where(found, pos + 1 - (cols < pos), n - 1)))
    return counts, tests


def prune(state: RunState) -> list[str]:
    """Drop every buffered tuple certainly F-dominated by ``k`` others (snapshot semantics)."""
    n = len(state.buffer)
    if n == 0:
        return []
    counts, tests = _confirmed_counts(state)
    state.counter.add(tests)
    need = state.config.k + state.config.prune_offset
    dropped = state.buffer.keep(counts < need)
    state.discarded.update(dropped)
    return dropped


def needs_digging(state: RunState) -> bool:
    """True if some buffered tuple may still be F-dominated by ``k`` others."""
    cfg = state.config
    n = len(state.buffer)
    if n <= cfg.k:
        # fewer than k other tuples exist; the one-at-a-time scan still runs
        state.counter.add(n * (n - 1))
        return False
    wb, bb = state.worst_bounds(), state.best_bounds()
    for lo in range(0, n, _COLUMN_BLOCK):
        hi = min(n, lo + _COLUMN_BLOCK)
        block = dominance_matrix(bb, wb[lo:hi], cfg.polytope)
        cols = np.arange(lo, hi)
        block[cols, cols - lo] = False
        may = block.sum(axis=0) >= cfg.k
        if may.any():
            first = lo + int(np.argmax(may))
            state.counter.add((first + 1) * (n - 1))
            return True
    state.counter.add(n * (n - 1))
    return False


def shrinking_phase(state: RunState) -> Buffer:
    state.log.phase = SHRINKING
    while True:
        prune(state)
        if state.exhausted or not needs_digging(state):
            break
        state.pull_batch()
    return state.buffer


def confirmed_dominators(s: str, state: RunState) -> int:
    """Buffered tuples whose worst bound F-dominates the best bound of ``s``."""
    buf = state.buffer
    row = buf.ids.index(s)
    hits = dominates_point(state.worst_bounds(), state.best_bounds()[row], state.config.polytope)
    hits[row] = False
    return int(hits.sum())


def may_dominate_count(s: str, state: RunState) -> int:
    """Buffered tuples whose best bound F-dominates the worst bound of ``s``."""
    buf = state.buffer
    row = buf.ids.index(s)
    hits = dominates_point(state.best_bounds(), state.worst_bounds()[row], state.config.polytope)
    hits[row] = False
    return int(hits.sum())


def run(
    sources: Sequence[SortedSource],
    config: RunConfig,
    observer: Optional[Callable[[RunState], None]] = None,
) -> RunResult:
    """Compute the non-k-dominated flexible skyline from sorted access alone."""
    start = time.perf_counter()
    state = RunState(list(sources), config, observer=observer)
    growing_phase(state)
    grow_end = len(state.buffer)
    shrinking_phase(state)
    elapsed = (time.perf_counter() - start) * 1000.0

    buf = state.buffer
    values = {p.id: tuple(p.slots) for p in buf.partials()}
    metrics = RunMetrics(
        depth_growing=list(state.log.growing),
        depth_shrinking=list(state.log.shrinking),
        fdom_tests=state.counter.count,
        buffer_at_growing_end=grow_end,
        buffer_peak=state.buffer_peak,
        output_size=len(buf),
        elapsed_ms=elapsed,
        growing_stop=state.growing_stop,
        batches=state.batches,
    )
    return RunResult(list(buf.ids), values, metrics)
