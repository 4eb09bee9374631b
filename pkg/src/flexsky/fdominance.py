"""Weight polytopes and F-dominance between complete points.

The family F is the set of linear scoring functions ``f(t) = w . t`` with ``w``
ranging over a closed bounded polytope. A linear function of ``w`` reaches its
extrema at the polytope's vertices, so ``u`` F-dominates ``v`` exactly when
``w . (u - v) <= 0`` at every vertex and ``< 0`` at some vertex.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

TOL = 1e-9
MAX_ENUM_DIM = 6

Spread = Union[str, float]


class PolytopeError(ValueError):
    """Raised for empty, unbounded or otherwise unusable weight regions."""


@dataclass(frozen=True, eq=False)
class WeightPolytope:
    dim: int
    vertices: np.ndarray
    description: str = "h-rep"

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] != self.dim:
            raise PolytopeError(f"vertices must be a non-empty (m, {self.dim}) array, got shape {v.shape}")
        if (v < -TOL).any():
            raise PolytopeError("weight vertices must be non-negative")
        v = np.where(v < 0, 0.0, v) + 0.0
        v = _dedupe(v)
        nonzero = (v > 0).any(axis=1)
        if not nonzero.any():
            raise PolytopeError("the all-zero weight vector alone defines no ordering")
        # The zero vector scores every difference as 0, which never changes the
        # outcome of a dominance test, so it is dropped.
        v = v[nonzero]
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def singleton(self) -> bool:
        return len(self.vertices) == 1

    def scaled(self, factor: float) -> "WeightPolytope":
        return WeightPolytope(self.dim, self.vertices * factor, self.description)


@dataclass
class FdomCounter:
    count: int = 0

    def add(self, n: int = 1) -> None:
        self.count += n


def _dedupe(v: np.ndarray) -> np.ndarray:
    kept: list[np.ndarray] = []
    for row in v:
        if not any(np.all(np.abs(row - k) <= TOL) for k in kept):
            kept.append(row)
    return np.array(kept, dtype=float).reshape(len(kept), v.shape[1])


def _parse_spread(spread: Spread) -> float:
    if isinstance(spread, str):
        s = spread.strip().lower()
        if s == "none":
            return 0.0
        if s == "full":
            return 1.0
        try:
            spread = float(s)
        except ValueError:
            raise PolytopeError(f"spread must be 'none', 'full' or a number in (0, 1], got {spread!r}") from None
    eps = float(spread)
    if not (0.0 <= eps <= 1.0) or math.isnan(eps):
        raise PolytopeError(f"spread must lie in [0, 1], got {eps}")
    return eps


def polytope_from_epsilon(d: int, spread: Spread) -> WeightPolytope:
    """Ratio-bounds box ``w_i in [(1 - eps)/d, (1 + eps)/d]``.

    ``"none"`` means eps = 0 (one weight vector, top-k semantics); ``"full"``
    means eps = 1, whose box ``[0, 2/d]^d`` yields Pareto dominance.
    """
    if d < 1:
        raise PolytopeError(f"d must be >= 1, got {d}")
    eps = _parse_spread(spread)
    centre = 1.0 / d
    lo, hi = centre * (1.0 - eps), centre * (1.0 + eps)
    corners = np.array(list(itertools.product((lo, hi), repeat=d)), dtype=float)
    label = "singleton" if eps == 0 else f"epsilon-box({eps:g})"
    return WeightPolytope(d, corners, label)


def singleton(weights: Sequence[float]) -> WeightPolytope:
    w = np.asarray(weights, dtype=float).reshape(1, -1)
    return WeightPolytope(w.shape[1], w, "singleton")


def _enumerate_vertices(A: np.ndarray, b: np.ndarray, normalize: bool) -> np.ndarray:
    """Vertices of ``{w : A w <= b}`` (optionally intersected with sum(w) = 1)."""
    d = A.shape[1]
    need = d - 1 if normalize else d
    found: list[np.ndarray] = []
    for rows in itertools.combinations(range(A.shape[0]), need):
        M = A[list(rows)]
        rhs = b[list(rows)]
        if normalize:
            M = np.vstack([M, np.ones(d)])
            rhs = np.append(rhs, 1.0)
        if abs(np.linalg.det(M)) < TOL:
            continue
        w = np.linalg.solve(M, rhs)
        if np.all(A @ w <= b + TOL):
            found.append(w)
    if not found:
        return np.empty((0, d))
    return _dedupe(np.array(found))


def polytope_from_constraints(
    d: int,
    inequalities: Sequence[tuple[Sequence[float], float]],
    normalize: bool = True,
) -> WeightPolytope:
    """Polytope ``{w >= 0 : a . w <= b for each (a, b)}``, by exact vertex enumeration.

    With ``normalize`` the hyperplane ``sum(w) = 1`` is added. Without it the
    region must still be bounded, otherwise :class:`PolytopeError` is raised.
    """
    if d < 1:
        raise PolytopeError(f"d must be >= 1, got {d}")
    if d > MAX_ENUM_DIM:
        raise PolytopeError(f"vertex enumeration limited to d <= {MAX_ENUM_DIM}, got {d}")
    rows, rhs = [], []
    for a, bval in inequalities:
        a = [float(x) for x in a]
        if len(a) != d:
            raise PolytopeError(f"inequality {a} has {len(a)} coefficients, expected {d}")
        rows.append(a)
        rhs.append(float(bval))
    A = np.array(rows + (-np.eye(d)).tolist(), dtype=float).reshape(-1, d)
    b = np.array(rhs + [0.0] * d, dtype=float)

    if not normalize:
        # Bounded iff the recession cone {y >= 0 : A y <= 0} is trivial, i.e.
        # its normalized slice is empty.
        if _enumerate_vertices(A, np.zeros_like(b), normalize=True).size:
            raise PolytopeError("weight region is unbounded; add normalize=true or upper bounds")
    verts = _enumerate_vertices(A, b, normalize)
    if verts.size == 0:
        raise PolytopeError("weight region is empty")
    return WeightPolytope(d, verts, "h-rep")


def load_constraints(path: str | Path) -> WeightPolytope:
    """Read a constraint file ``{dim, inequalities: [{a, b}], normalize}``."""
    spec = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        d = int(spec["dim"])
        ineqs = [(item["a"], item["b"]) for item in spec.get("inequalities", [])]
    except (KeyError, TypeError) as exc:
        raise PolytopeError(f"{path}: malformed constraint file ({exc})") from None
    return polytope_from_constraints(d, ineqs, bool(spec.get("normalize", True)))


def directional_scores(delta: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """``delta . w`` for every vertex ``w``, shape ``delta.shape[:-1] + (m,)``.

    Summation runs attribute by attribute in a fixed order so that scalar and
    batched callers round identically.
    """
    acc = delta[..., 0, None] * vertices[:, 0]
    for i in range(1, vertices.shape[1]):
        acc = acc + delta[..., i, None] * vertices[:, i]
    return acc


def _check_dim(n: int, W: WeightPolytope) -> None:
    if n != W.dim:
        raise ValueError(f"dimension mismatch: vectors have {n} components, polytope has {W.dim}")


def f_dominates(u: Sequence[float], v: Sequence[float], W: WeightPolytope, counter: FdomCounter | None = None) -> bool:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    _check_dim(u.shape[-1], W)
    if counter is not None:
        counter.add()
    s = directional_scores(u - v, W.vertices)
    return bool(s.max() <= 0 and s.min() < 0)


def pareto_dominates(u: Sequence[float], v: Sequence[float]) -> bool:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    strict = False
    for a, b in zip(u, v):
        if a > b:
            return False
        if a < b:
            strict = True
    return strict


def dominates_point(U: np.ndarray, v: np.ndarray, W: WeightPolytope) -> np.ndarray:
    """Boolean vector: row ``i`` of ``U`` F-dominates ``v``."""
    s = directional_scores(np.asarray(U, dtype=float) - np.asarray(v, dtype=float), W.vertices)
    return (s.max(axis=-1) <= 0) & (s.min(axis=-1) < 0)


_BLOCK = 1 << 21


def dominance_matrix(U: np.ndarray, V: np.ndarray, W: WeightPolytope) -> np.ndarray:
    """Boolean ``(len(U), len(V))`` matrix: ``U[a]`` F-dominates ``V[b]``."""
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    out = np.zeros((len(U), len(V)), dtype=bool)
    if len(U) == 0 or len(V) == 0:
        return out
    _check_dim(U.shape[1], W)
    step = max(1, _BLOCK // (len(V) * max(W.dim, len(W.vertices))))
    for lo in range(0, len(U), step):
        delta = U[lo:lo + step, None, :] - V[None, :, :]
        s = directional_scores(delta, W.vertices)
        out[lo:lo + step] = (s.max(axis=-1) <= 0) & (s.min(axis=-1) < 0)
    return out
