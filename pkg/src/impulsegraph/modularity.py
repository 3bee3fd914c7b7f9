"""Newman modularity on dense reduced weight matrices.

A :class:`ModularityMatrix` stores the reduced matrix ``e = E / m`` of an
unoriented weighted graph together with the raw total ``m`` and the vertex
strengths ``a`` (full row sums of ``e``). Every vertex is treated as its own
community, so merging communities is expressed by :func:`screed`, which
collapses a vertex subset into one vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateGraphError

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ModularityMatrix:
    e: np.ndarray
    m_raw: float
    a: np.ndarray

    @property
    def n(self) -> int:
        return self.e.shape[0]

    @property
    def raw(self) -> np.ndarray:
        """The unreduced weight matrix ``E``."""
        return self.e * self.m_raw

    def __repr__(self):
        return f"ModularityMatrix(n={self.n}, m_raw={self.m_raw:g})"


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def normalize(raw_weights, self_weights=None) -> ModularityMatrix:
    """Reduce a symmetric non-negative weight matrix by its grand total.

    ``self_weights`` (vertex weights) replace the diagonal of ``raw_weights``;
    when omitted the given diagonal is kept.

    Raises:
        DegenerateGraphError: if the total weight is zero.
    """
    E = np.array(raw_weights, dtype=np.float64)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {E.shape}")
    if self_weights is not None:
        np.fill_diagonal(E, np.asarray(self_weights, dtype=np.float64))
    if np.any(E < 0):
        raise ValueError("weights must be non-negative")
    if not np.allclose(E, E.T, rtol=0.0, atol=SYMMETRY_TOL * max(1.0, float(np.abs(E).max(initial=0.0)))):
        raise ValueError("weight matrix must be symmetric")
    m = float(E.sum())
    if m <= 0.0:
        raise DegenerateGraphError("graph has zero total weight (no edges)")
    e = E / m
    return ModularityMatrix(e=_frozen(e), m_raw=m, a=_frozen(e.sum(axis=1)))


def modularity(M: ModularityMatrix) -> float:
    return float(np.trace(M.e) - np.dot(M.a, M.a))


def _check_vertex(M: ModularityMatrix, v: int) -> None:
    if not 0 <= v < M.n:
        raise IndexError(f"vertex {v} out of range for {M.n}-vertex graph")


def screed(M: ModularityMatrix, subset: Iterable[int]) -> ModularityMatrix:
    """Collapse ``subset`` into a single vertex.

    The merged vertex is placed last; the remaining vertices keep their
    relative order. Its self-weight absorbs every internal vertex and edge
    weight and its edge to an outside vertex is the sum of the edges that
    vertex had into the subset.
    """
    members = sorted(set(int(v) for v in subset))
    if not members:
        raise ValueError("screed needs a non-empty subset")
    for v in members:
        _check_vertex(M, v)
    rest = [v for v in range(M.n) if v not in set(members)]
    k = len(rest)
    e = np.zeros((k + 1, k + 1))
    e[:k, :k] = M.e[np.ix_(rest, rest)]
    cross = M.e[np.ix_(rest, members)].sum(axis=1)
    e[:k, k] = cross
    e[k, :k] = cross
    e[k, k] = M.e[np.ix_(members, members)].sum()
    return ModularityMatrix(e=_frozen(e), m_raw=M.m_raw, a=_frozen(e.sum(axis=1)))


def delta_q(M: ModularityMatrix, i: int, j: int) -> float:
    """Modularity gain of merging singleton communities ``i`` and ``j``."""
    if i == j:
        raise ValueError("cannot merge a vertex with itself")
    _check_vertex(M, i)
    _check_vertex(M, j)
    return 2.0 * (float(M.e[i, j]) - float(M.a[i]) * float(M.a[j]))


def delta_q_direct(M: ModularityMatrix, i: int, j: int) -> float:
    """Merge gain evaluated by actually merging and re-scoring (reference path)."""
    if i == j:
        raise ValueError("cannot merge a vertex with itself")
    return modularity(screed(M, {i, j})) - modularity(M)
