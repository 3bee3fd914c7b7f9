import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from impulsegraph.errors import DegenerateGraphError
from impulsegraph.image import Image
from impulsegraph.lattice import GraphConfig, window_graph
from impulsegraph.modularity import delta_q, delta_q_direct, modularity, normalize, screed


def two_vertex(w=0.3):
    return normalize(np.array([[0.0, w], [w, 0.0]]))


@pytest.fixture
def king():
    return window_graph(Image.filled(3, 3, 0), (1, 1), GraphConfig())[0]


@st.composite
def weight_matrices(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    w = rng.random((n, n)) * (rng.random((n, n)) < 0.7)
    w = np.triu(w, 1)
    w = w + w.T
    if w.sum() == 0:
        w[0, 1] = w[1, 0] = 1.0
    return w


def test_two_vertex_normalisation():
    M = two_vertex()
    assert M.e[0, 1] == M.e[1, 0] == 0.5
    assert M.a.tolist() == [0.5, 0.5]


def test_king_graph_strengths(king):
    off = king.e[~np.eye(9, dtype=bool)]
    assert set(np.unique(off)) == {0.0, 1 / 40}
    assert king.a[4] == pytest.approx(0.2, abs=1e-15)
    assert king.a[0] == pytest.approx(0.075, abs=1e-15)
    assert king.a[1] == pytest.approx(0.125, abs=1e-15)


def test_all_zero_is_degenerate():
    with pytest.raises(DegenerateGraphError):
        normalize(np.zeros((3, 3)))


def test_asymmetric_rejected():
    with pytest.raises(ValueError):
        normalize(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_negative_rejected():
    with pytest.raises(ValueError):
        normalize(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_singleton_q_two_vertex():
    assert modularity(two_vertex()) == -0.5


def test_merged_two_vertex():
    merged = screed(two_vertex(), {0, 1})
    assert merged.n == 1
    assert merged.e[0, 0] == pytest.approx(1.0)
    assert merged.a[0] == pytest.approx(1.0)
    assert modularity(merged) == pytest.approx(0.0, abs=1e-15)


def test_king_singleton_q(king):
    assert modularity(king) == pytest.approx(-0.125, abs=1e-15)


def test_screed_singleton_is_reindexing(king):
    merged = screed(king, {3})
    order = [0, 1, 2, 4, 5, 6, 7, 8, 3]
    assert np.allclose(merged.e, king.e[np.ix_(order, order)])


def test_screed_adjacent_pair(king):
    merged = screed(king, {4, 5})
    assert merged.e[-1, -1] == pytest.approx(2 / 40, abs=1e-15)
    assert merged.a[-1] == pytest.approx(king.a[4] + king.a[5], abs=1e-15)


def test_delta_q_two_vertex():
    assert delta_q(two_vertex(), 0, 1) == pytest.approx(0.5, abs=1e-15)


def test_king_centre_deltas(king):
    assert delta_q(king, 4, 0) == pytest.approx(0.02, abs=1e-15)
    assert delta_q_direct(king, 4, 0) == pytest.approx(0.02, abs=1e-15)
    assert abs(delta_q(king, 4, 1)) <= 1e-15
    assert abs(delta_q_direct(king, 4, 1)) <= 1e-15


def test_non_adjacent_merge(king):
    # corners 0 and 8 share no edge
    d = delta_q(king, 0, 8)
    assert d == pytest.approx(-2 * king.a[0] * king.a[8], abs=1e-15)
    assert d == pytest.approx(delta_q_direct(king, 0, 8), abs=1e-12)


def test_delta_q_index_errors(king):
    with pytest.raises(ValueError):
        delta_q(king, 2, 2)
    with pytest.raises(IndexError):
        delta_q(king, 0, 9)


@given(weight_matrices())
def test_delta_q_matches_direct(w):
    M = normalize(w)
    for i, j in itertools.combinations(range(M.n), 2):
        assert abs(delta_q(M, i, j) - delta_q_direct(M, i, j)) <= 1e-9


@given(weight_matrices(), st.data())
def test_modularity_matches_networkx(w, data):
    """Q of an arbitrary partition: screed each block, compare with networkx."""
    n = len(w)
    labels = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    G = nx.Graph()
    G.add_nodes_from(range(n))
    for i, j in zip(*np.nonzero(np.triu(w, 1))):
        G.add_edge(int(i), int(j), weight=float(w[i, j]))
    blocks = [{i for i in range(n) if labels[i] == b} for b in set(labels)]
    want = nx.community.modularity(G, blocks, weight="weight")
    M = normalize(w)
    # unmerged vertices stay at the front in order, merged blocks go last
    front = list(range(n))
    for block in blocks:
        M = screed(M, {front.index(v) for v in block})
        front = [v for v in front if v not in block]
    assert modularity(M) == pytest.approx(want, abs=1e-12)


@given(weight_matrices(), st.data())
def test_screed_conserves_mass(w, data):
    M = normalize(w)
    subset = data.draw(st.sets(st.integers(0, M.n - 1), min_size=1))
    merged = screed(M, subset)
    assert abs(merged.e.sum() - 1.0) <= 1e-12
    assert abs(merged.a.sum() - M.a.sum()) <= 1e-12
    assert merged.n == M.n - len(subset) + 1
