import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexsky.datagen import GenSpec, generate
from flexsky.fdominance import polytope_from_epsilon
from flexsky.model import (
    DatasetError,
    PartialTuple,
    ThresholdPoint,
    Tuple,
    best_bound,
    make_dataset,
    vertical_partition,
    worst_bound,
)
from flexsky.nra import RunConfig, RunState


def drain(src):
    out = []
    while (pair := src.pull()) is not None:
        out.append(pair)
    return out


def test_ex9_attr_max(ex9_dataset):
    assert ex9_dataset.attr_max == (9.0, 9.0)
    assert ex9_dataset.n == 9


def test_single_tuple_attr_max():
    ds = make_dataset(2, [("z", (0.0, 0.0))])
    assert ds.attr_max == (0.0, 0.0)


def test_supplied_attr_max():
    rows = [("p", (1, 2)), ("q", (3, 1))]
    assert make_dataset(2, rows, attr_max=(3, 2)).attr_max == (3.0, 2.0)
    with pytest.raises(DatasetError, match="'q'"):
        make_dataset(2, rows, attr_max=(2, 2))


@pytest.mark.parametrize(
    "rows, msg",
    [
        ([("a", (1, 2)), ("a", (2, 1))], "duplicate"),
        ([("a", (1, -2))], "invalid value"),
        ([("a", (1, float("nan")))], "invalid value"),
        ([("a", (1, float("inf")))], "invalid value"),
        ([("a", (1, 2, 3))], "expected 2"),
        ([], "at least one"),
    ],
)
def test_make_dataset_rejects(rows, msg):
    with pytest.raises(DatasetError, match=msg):
        make_dataset(2, rows)


def test_accepts_tuple_objects():
    ds = make_dataset(1, [Tuple("x", (1.5,))])
    assert ds.tuple("x") == Tuple("x", (1.5,))


def test_vertical_partition_ex9(ex9_dataset):
    r1, r2 = vertical_partition(ex9_dataset)
    assert [r1.pull() for _ in range(3)] == [("a", 3.0), ("d", 4.0), ("h", 5.0)]
    assert [r2.pull() for _ in range(3)] == [("i", 1.0), ("g", 1.5), ("e", 2.0)]


def test_vertical_partition_ties_by_id(ex9_dataset):
    # f and e both have 6.0 on the first list; b and i both have 8.0
    pairs = drain(vertical_partition(ex9_dataset)[0])
    assert pairs[3:5] == [("e", 6.0), ("f", 6.0)]
    assert pairs[6:8] == [("b", 8.0), ("i", 8.0)]


def test_vertical_partition_single_tuple():
    ds = make_dataset(3, [("only", (1, 2, 3))])
    for i, src in enumerate(vertical_partition(ds)):
        assert drain(src) == [("only", float(i + 1))]


def test_vertical_partition_random_50():
    ds = generate(GenSpec("UNI", 50, 3, 11))
    for src in vertical_partition(ds):
        pairs = drain(src)
        vals = [v for _, v in pairs]
        assert vals == sorted(vals)
        assert sorted(i for i, _ in pairs) == sorted(ds.ids)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(1, 4), st.integers(0, 2**32))
def test_partition_join_reconstructs(n, d, seed):
    ds = generate(GenSpec("UNI", n, d, seed))
    joined: dict[str, list] = {tid: [None] * d for tid in ds.ids}
    for i, src in enumerate(vertical_partition(ds)):
        for tid, v in drain(src):
            joined[tid][i] = v
    assert {tid: tuple(v) for tid, v in joined.items()} == ds.value_map()


def _ex9_state_at_depth3(ds):
    state = RunState(vertical_partition(ds), RunConfig(1, polytope_from_epsilon(2, "none"), ds.attr_max, mu=3))
    state.pull_batch()
    return state


def test_bounds_ex9_depth3(ex9_dataset):
    state = _ex9_state_at_depth3(ex9_dataset)
    assert state.threshold.ell == [5.0, 2.0]
    e = state.buffer.partial("e")
    assert e.slots == [None, 2.0]
    assert best_bound(e, state.threshold) == (5.0, 2.0)
    assert worst_bound(e, ex9_dataset.attr_max) == (9.0, 2.0)


def test_bounds_fully_seen():
    p = PartialTuple("x", [1.0, 2.0])
    assert best_bound(p, [5, 5]) == worst_bound(p, [9, 9]) == (1.0, 2.0)


def test_bounds_minimal_partial():
    p = PartialTuple("x", [0.7, None])
    assert best_bound(p, ThresholdPoint([0.7, 0.3])) == (0.7, 0.3)


def test_partial_needs_a_seen_slot():
    with pytest.raises(ValueError):
        PartialTuple("x", [None, None])


def test_threshold_cannot_decrease():
    tp = ThresholdPoint([1.0, 1.0])
    tp.update(0, 2.0)
    with pytest.raises(ValueError):
        tp.update(0, 1.5)


def test_bound_sandwich_over_runs():
    # bb <= truth <= wb for every buffered tuple after every batch; bb rises, wb falls
    for seed in range(8):
        ds = generate(GenSpec("UNI" if seed % 2 else "ANT", 80, 3, seed))
        truth = ds.value_map()
        prev_bb: dict[str, np.ndarray] = {}
        prev_wb: dict[str, np.ndarray] = {}

        def check(state):
            bb, wb = state.best_bounds(), state.worst_bounds()
            for row, tid in enumerate(state.buffer.ids):
                t = np.asarray(truth[tid])
                assert np.all(bb[row] <= t) and np.all(t <= wb[row])
                if tid in prev_bb:
                    assert np.all(bb[row] >= prev_bb[tid]) and np.all(wb[row] <= prev_wb[tid])
                prev_bb[tid], prev_wb[tid] = bb[row], wb[row]

        from flexsky.nra import run

        run(vertical_partition(ds), RunConfig(2, polytope_from_epsilon(3, 0.2), ds.attr_max, mu=2), observer=check)
