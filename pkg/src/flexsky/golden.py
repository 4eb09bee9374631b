"""The nine-location example relation and its known answers."""

from __future__ import annotations

from flexsky.fdominance import WeightPolytope, polytope_from_constraints, polytope_from_epsilon, singleton
from flexsky.model import Dataset, make_dataset

EX9_ROWS = [
    ("a", (3.0, 8.0)),
    ("b", (8.0, 6.0)),
    ("c", (7.0, 3.0)),
    ("d", (4.0, 9.0)),
    ("e", (6.0, 2.0)),
    ("f", (6.0, 9.0)),
    ("g", (9.0, 1.5)),
    ("h", (5.0, 7.0)),
    ("i", (8.0, 1.0)),
]

# w1 >= w2, sum(w) = 1: closure of "the first distance matters more"
W1_GE_W2 = {"dim": 2, "inequalities": [{"a": [-1.0, 1.0], "b": 0.0}], "normalize": True}


def ex9() -> Dataset:
    return make_dataset(2, EX9_ROWS)


def w1_ge_w2() -> WeightPolytope:
    return polytope_from_constraints(2, [(c["a"], c["b"]) for c in W1_GE_W2["inequalities"]], normalize=True)


def golden_cases() -> list[tuple[str, WeightPolytope, int, set[str]]]:
    """``(label, polytope, k, expected ND_k)`` for the example relation."""
    return [
        ("ND_1(w1>=w2)", w1_ge_w2(), 1, {"a", "e"}),
        ("ND_2(w1>=w2)", w1_ge_w2(), 2, {"a", "h", "e", "i", "d", "c"}),
        ("ND_2(full)", polytope_from_epsilon(2, "full"), 2, {"a", "h", "e", "i", "d", "c", "g"}),
        ("ND_2(0.5,0.5)", singleton((0.5, 0.5)), 2, {"e", "i"}),
    ]
