import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netrobust import Graph, GraphKindError, apply_attack
from netrobust.functional import (
    adjacency_rank,
    cnp,
    driver_nodes_ect,
    driver_nodes_mit,
    lcc,
    sample,
)
from netrobust.linalg import matrix_rank
from netrobust.exceptions import ContractViolation

from oracles import brute_matching, fraction_rank
from test_graph import K4, STAR, graphs

CHAIN = Graph(4, [(0, 1), (1, 2), (2, 3)], directed=True)
SSO = Graph(4, [(0, 1), (0, 2), (0, 3)], directed=True)
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def test_lcc_examples():
    assert lcc(K4, apply_attack(K4.mask(), 0)) == 3
    assert lcc(STAR, apply_attack(STAR.mask(), 0)) == 1
    assert lcc(Graph(4)) == 1
    m = Graph(2).mask()
    m.remove_node(0)
    m.remove_node(1)
    assert lcc(Graph(2), m) == 0


def test_mit_examples():
    assert driver_nodes_mit(CHAIN) == 1
    assert driver_nodes_mit(Graph(4, directed=True)) == 4
    assert driver_nodes_mit(SSO) == 3
    with pytest.raises(GraphKindError):
        driver_nodes_mit(K4)


def test_ect_examples():
    assert adjacency_rank(K4) == 4 and driver_nodes_ect(K4) == 1
    assert adjacency_rank(Graph(4)) == 0 and driver_nodes_ect(Graph(4)) == 4
    assert adjacency_rank(C4) == 2 and driver_nodes_ect(C4) == 2


def test_cnp_examples():
    assert cnp(K4)[0] == 6
    assert cnp(K4, apply_attack(K4.mask(), 0))[0] == 3
    assert cnp(Graph(4, [(0, 1), (2, 3)])) == (2, 8)


def test_sample_composition():
    s = sample(CHAIN, which=("lcc", "mit", "ect"))
    assert (s.n_l, s.n_ncc, s.cnp_exact, s.cnp_sq) == (4, 1, 6, 16)
    assert s.n_d_mit == 1 and s.n_d_ect == 1 and s.n_d == 1
    with pytest.raises(GraphKindError):
        sample(K4, which=("mit",))
    with pytest.raises(ContractViolation):
        sample(K4, which=())


def test_ect_warns_on_large_graphs():
    g = Graph(600, [(i, i + 1) for i in range(599)])
    with pytest.warns(RuntimeWarning):
        adjacency_rank(g)


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=6, directed=True), st.data())
def test_mit_matches_brute_force(g, data):
    removed = data.draw(st.lists(st.integers(0, g.n_nodes - 1), unique=True, max_size=g.n_nodes - 1))
    m = g.mask()
    for v in removed:
        m.remove_node(v)
    alive = sorted(set(range(g.n_nodes)) - set(removed))
    relabel = {v: i for i, v in enumerate(alive)}
    arcs = [(relabel[u], relabel[v]) for u, v in g.edge_list() if u in relabel and v in relabel]
    assert driver_nodes_mit(g, m) == max(1, len(alive) - brute_matching(len(alive), arcs))


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=8, directed=True), st.data())
def test_mit_monotone_under_edge_removal(g, data):
    if g.n_edges == 0:
        return
    e = data.draw(st.integers(0, g.n_edges - 1))
    assert driver_nodes_mit(g, apply_attack(g.mask(), e, kind="edge")) >= driver_nodes_mit(g)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=8), st.data(), st.sampled_from(["node", "edge"]))
def test_cnp_monotone_and_bounded(g, data, kind):
    total = g.n_nodes if kind == "node" else g.n_edges
    if total == 0:
        return
    t = data.draw(st.integers(0, total - 1))
    n = g.n_nodes
    ex, sq = cnp(g)
    assert ex <= n * (n - 1) // 2 and sq <= n * n
    ex2, sq2 = cnp(g, apply_attack(g.mask(), t, kind=kind))
    assert ex2 <= ex and sq2 <= sq


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 50), st.integers(0, 2**32 - 1))
def test_rank_matches_rational_elimination(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-1, 2, size=(n, n)) * (rng.random((n, n)) < rng.random())
    assert matrix_rank(a.astype(float)) == fraction_rank(a.tolist())


def test_driver_bounds_hold():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(1, 12))
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3]
        g = Graph(n, arcs, directed=True)
        for nd in (driver_nodes_mit(g), driver_nodes_ect(g)):
            assert 1 <= nd <= max(1, n)
