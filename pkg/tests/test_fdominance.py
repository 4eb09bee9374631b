import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexsky.fdominance import (
    FdomCounter,
    PolytopeError,
    WeightPolytope,
    dominance_matrix,
    dominates_point,
    f_dominates,
    load_constraints,
    pareto_dominates,
    polytope_from_constraints,
    polytope_from_epsilon,
    singleton,
)

EX = {"a": (3, 8), "c": (7, 3), "e": (6, 2), "g": (9, 1.5), "h": (5, 7), "i": (8, 1), "d": (4, 9)}


def vertex_set(W):
    return {tuple(round(x, 12) for x in v) for v in W.vertices}


def test_epsilon_box_d2():
    W = polytope_from_epsilon(2, 0.01)
    assert vertex_set(W) == {(0.495, 0.495), (0.495, 0.505), (0.505, 0.495), (0.505, 0.505)}


def test_epsilon_none_is_centroid():
    W = polytope_from_epsilon(2, "none")
    assert W.singleton and vertex_set(W) == {(0.5, 0.5)}


def test_epsilon_full_d3():
    W = polytope_from_epsilon(3, "full")
    corners = {tuple(round(x, 12) for x in c) for c in itertools.product((0.0, 2 / 3), repeat=3)}
    # the all-zero corner cannot affect any test and is dropped
    assert vertex_set(W) == corners - {(0.0, 0.0, 0.0)}


@pytest.mark.parametrize("bad", [-0.1, 1.5, "wide", float("nan")])
def test_epsilon_rejects(bad):
    with pytest.raises(PolytopeError):
        polytope_from_epsilon(2, bad)


def test_constraints_w1_ge_w2():
    W = polytope_from_constraints(2, [([-1, 1], 0)], normalize=True)
    assert vertex_set(W) == {(0.5, 0.5), (1.0, 0.0)}


def test_constraints_simplex():
    W = polytope_from_constraints(2, [], normalize=True)
    assert vertex_set(W) == {(1.0, 0.0), (0.0, 1.0)}


def test_constraints_empty():
    with pytest.raises(PolytopeError, match="empty"):
        polytope_from_constraints(2, [([1, 0], 0.3), ([-1, 0], -0.6)], normalize=True)


def test_constraints_unbounded():
    with pytest.raises(PolytopeError, match="unbounded"):
        polytope_from_constraints(2, [([-1, 1], 0)], normalize=False)


def test_constraints_bounded_without_normalization():
    W = polytope_from_constraints(2, [([1, 0], 1), ([0, 1], 2)], normalize=False)
    assert vertex_set(W) == {(1.0, 0.0), (0.0, 2.0), (1.0, 2.0)}


def test_constraints_dimension_guard():
    with pytest.raises(PolytopeError, match="d <= 6"):
        polytope_from_constraints(7, [], normalize=True)


def test_constraints_d3_box_in_simplex():
    # w_i <= 0.5 on the simplex leaves the triangle of edge midpoints
    W = polytope_from_constraints(3, [([1, 0, 0], 0.5), ([0, 1, 0], 0.5), ([0, 0, 1], 0.5)])
    assert vertex_set(W) == {(0.5, 0.5, 0.0), (0.5, 0.0, 0.5), (0.0, 0.5, 0.5)}


def test_load_constraints(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"dim": 2, "inequalities": [{"a": [-1, 1], "b": 0}], "normalize": True}))
    assert vertex_set(load_constraints(p)) == {(0.5, 0.5), (1.0, 0.0)}
    p.write_text(json.dumps({"inequalities": []}))
    with pytest.raises(PolytopeError, match="malformed"):
        load_constraints(p)


@pytest.mark.parametrize("u, v", [("e", "i"), ("a", "h"), ("c", "g")])
def test_example_f_dominance(w_ge, u, v):
    assert f_dominates(EX[u], EX[v], w_ge)
    assert not f_dominates(EX[v], EX[u], w_ge)


def test_f_dominance_reflexive_false(w_ge):
    assert not f_dominates((3, 8), (3, 8), w_ge)


def test_counter_counts_calls(w_ge):
    c = FdomCounter()
    for _ in range(5):
        f_dominates((1, 1), (2, 2), w_ge, c)
    assert c.count == 5


def test_f_dominates_dimension_mismatch(w_ge):
    with pytest.raises(ValueError):
        f_dominates((1, 2, 3), (1, 2, 3), w_ge)
    with pytest.raises(ValueError):
        f_dominates((1, 2), (1, 2, 3), w_ge)


def test_pareto_examples():
    assert pareto_dominates(EX["a"], EX["d"])
    assert not pareto_dominates((1, 2), (2, 1))
    assert not pareto_dominates((1, 2), (1, 2))
    with pytest.raises(ValueError):
        pareto_dominates((1,), (1, 2))


def test_polytope_rejects_negative_and_zero():
    with pytest.raises(PolytopeError):
        WeightPolytope(2, np.array([[-0.5, 1.0]]))
    with pytest.raises(PolytopeError):
        WeightPolytope(2, np.zeros((1, 2)))


def test_batched_matches_scalar():
    rng = np.random.default_rng(3)
    W = polytope_from_epsilon(3, 0.3)
    U = rng.integers(0, 4, size=(30, 3)).astype(float)  # many exact ties
    V = rng.integers(0, 4, size=(25, 3)).astype(float)
    M = dominance_matrix(U, V, W)
    for a, b in itertools.product(range(len(U)), range(len(V))):
        assert M[a, b] == f_dominates(U[a], V[b], W)
    assert list(dominates_point(U, V[0], W)) == list(M[:, 0])


vec = st.lists(st.floats(0, 10, allow_nan=False), min_size=3, max_size=3)
spread = st.sampled_from(["none", 0.01, 0.2, 0.5, "full"])


@settings(max_examples=300, deadline=None)
@given(vec, vec, spread)
def test_irreflexive_and_asymmetric(u, v, eps):
    W = polytope_from_epsilon(3, eps)
    assert not f_dominates(u, u, W)
    assert not (f_dominates(u, v, W) and f_dominates(v, u, W))


@settings(max_examples=300, deadline=None)
@given(vec, vec, st.integers(-20, 20).map(lambda e: 2.0**e))
def test_scale_invariance(u, v, factor):
    W = polytope_from_epsilon(3, 0.3)
    assert f_dominates(u, v, W) == f_dominates(u, v, W.scaled(factor))


@settings(max_examples=300, deadline=None)
@given(vec, vec)
def test_full_collapses_to_pareto(u, v):
    assert f_dominates(u, v, polytope_from_epsilon(3, "full")) == pareto_dominates(u, v)


ivec = st.lists(st.integers(0, 50).map(float), min_size=3, max_size=3)


@settings(max_examples=300, deadline=None)
@given(ivec, ivec, st.lists(st.integers(1, 9), min_size=3, max_size=3))
def test_singleton_collapses_to_score(u, v, w):
    # integer data keeps both sides exact
    assert f_dominates(u, v, singleton(w)) == (np.dot(w, u) < np.dot(w, v))


@settings(max_examples=300, deadline=None)
@given(vec, vec, st.sampled_from([(0.0, 0.05), (0.05, 0.2), (0.2, 1.0), (0.0, 1.0)]))
def test_nested_boxes(u, v, pair):
    small, big = pair
    if f_dominates(u, v, polytope_from_epsilon(3, big)):
        assert f_dominates(u, v, polytope_from_epsilon(3, small))
