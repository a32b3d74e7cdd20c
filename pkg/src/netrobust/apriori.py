"""One-shot (simulation-free) robustness indicators.

Topological: efficiency, mean node/edge betweenness, mean clustering.
Spectral (undirected only): spectral radius, spectral gap, natural
connectivity, algebraic connectivity, spanning-tree count and effective
resistance. Values that do not exist for a graph are ``None`` ("NA").
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass
import math

import numpy as np

from .exceptions import ContractViolation
from .graph import _resolve_mask
from .linalg import symmetric_eigvals

__all__ = [
    "AprioriReport",
    "APRIORI_FIELDS",
    "bfs_distances",
    "efficiency",
    "betweenness",
    "clustering",
    "spectral",
    "spanning_tree_count",
    "apriori",
]

# field name -> label used in rank tables
APRIORI_FIELDS = {
    "eff": "EFF",
    "nb": "NB",
    "eb": "EB",
    "cc": "CC",
    "as_sr": "AS-SR",
    "as_sg": "AS-SG",
    "as_nc": "AS-NC",
    "ls_ac": "LS-AC",
    "ls_ns": "LS-NS",
    "ls_er": "LS-ER",
}

EXACT_TREE_MAX_N = 16
_ZERO_EIG = 1e-9


def _out_lists(graph, mask):
    er = mask.edge_removed
    nr = mask.node_removed
    return [
        [] if nr[u] else [(w, e) for w, e in graph.out_edges(u) if not er[e]]
        for u in range(graph.n_nodes)
    ]


def bfs_distances(graph, source, mask=None):
    """Hop distances from ``source`` following edge direction; -1 if unreachable."""
    mask = _resolve_mask(graph, mask)
    dist = np.full(graph.n_nodes, -1, dtype=np.int64)
    dist[source] = 0
    q = deque([source])
    er = mask.edge_removed
    while q:
        v = q.popleft()
        for w, e in graph.out_edges(v):
            if not er[e] and dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def efficiency(graph, mask=None):
    """Mean of ``1/d_ij`` over ordered pairs of surviving nodes (0 if unreachable)."""
    mask = _resolve_mask(graph, mask)
    alive = mask.alive_nodes()
    n = alive.size
    if n < 2:
        raise ContractViolation("efficiency needs at least two nodes")
    total = 0.0
    for s in alive:
        d = bfs_distances(graph, int(s), mask)
        reach = d[alive]
        reach = reach[reach > 0]
        total += float(np.sum(1.0 / reach))
    return total / (n * (n - 1))


def betweenness(graph, mask=None):
    """Exact shortest-path betweenness of surviving nodes and edges (Brandes).

    Undirected graphs count each unordered pair once. Removed nodes and
    edges get 0.

    Returns
    -------
    node_bc : np.ndarray, shape (N,)
    edge_bc : np.ndarray, shape (M,)
    """
    mask = _resolve_mask(graph, mask)
    n = graph.n_nodes
    adj = _out_lists(graph, mask)
    node_bc = [0.0] * n
    edge_bc = [0.0] * graph.n_edges
    for s in mask.alive_nodes().tolist():
        order = []
        preds = {s: []}
        sigma = {s: 1}
        dist = {s: 0}
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            dv = dist[v] + 1
            sv = sigma[v]
            for w, e in adj[v]:
                dw = dist.get(w)
                if dw is None:
                    dist[w] = dv
                    sigma[w] = 0
                    preds[w] = []
                    q.append(w)
                    dw = dv
                if dw == dv:
                    sigma[w] += sv
                    preds[w].append((v, e))
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v, e in preds[w]:
                c = sigma[v] * coeff
                edge_bc[e] += c
                delta[v] += c
            if w != s:
                node_bc[w] += delta[w]
    node_bc = np.array(node_bc)
    edge_bc = np.array(edge_bc)
    if not graph.directed:
        node_bc /= 2.0
        edge_bc /= 2.0
    return node_bc, edge_bc


def clustering(graph, mask=None):
    """Mean local clustering of the underlying undirected graph.

    Nodes with fewer than two neighbours contribute 0.
    """
    mask = _resolve_mask(graph, mask)
    alive = mask.alive_nodes().tolist()
    if not alive:
        raise ContractViolation("clustering needs at least one node")
    er = mask.edge_removed
    nbrs = {v: set() for v in alive}
    for eid in np.flatnonzero(~er):
        u, v = (int(x) for x in graph.edges[eid])
        nbrs[u].add(v)
        nbrs[v].add(u)
    total = 0.0
    for v in alive:
        nv = nbrs[v]
        k = len(nv)
        if k < 2:
            continue
        links = sum(len(nbrs[w] & nv) for w in nv) / 2
        total += links / (k * (k - 1) / 2)
    return total / len(alive)


def _bareiss_det(m):
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    m = [list(map(int, row)) for row in m]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def spanning_tree_count(graph):
    """Exact number of spanning trees via a Laplacian cofactor (undirected)."""
    if graph.directed:
        raise ContractViolation("spanning trees are defined here for undirected graphs")
    n = graph.n_nodes
    if n == 0:
        return 0
    lap = np.diag(graph.degrees()) - graph.adjacency_matrix(dtype=np.int64)
    return _bareiss_det(lap[1:, 1:].tolist())


def spectral(graph, method="auto"):
    """Adjacency and Laplacian spectral indicators of an undirected graph.

    Returns a dict with keys ``as_sr, as_sg, as_nc, ls_ac, ls_ns, ls_ns_log,
    ls_ns_exact, ls_er``; all ``None`` for directed input.
    """
    keys = ("as_sr", "as_sg", "as_nc", "ls_ac", "ls_ns", "ls_ns_log", "ls_ns_exact", "ls_er")
    n = graph.n_nodes
    if graph.directed or n == 0:
        return dict.fromkeys(keys)
    a = graph.adjacency_matrix()
    lam = symmetric_eigvals(a, method)
    lap = np.diag(a.sum(axis=1)) - a
    mu = np.sort(symmetric_eigvals(lap, method))
    mu = np.where(np.abs(mu) < _ZERO_EIG * max(1, n), 0.0, mu)
    out = dict.fromkeys(keys)
    out["as_sr"] = float(lam[0])
    out["as_sg"] = float(lam[0] - lam[1]) if n > 1 else None
    top = float(lam[0])
    out["as_nc"] = top + math.log(float(np.sum(np.exp(lam - top))) / n)
    out["ls_ac"] = float(max(mu[1], 0.0)) if n > 1 else None
    connected = n == 1 or mu[1] > 0
    if connected:
        log_count = float(np.sum(np.log(mu[1:]))) - math.log(n)
        out["ls_ns_log"] = log_count
        out["ls_ns"] = math.exp(log_count) if log_count < 700 else math.inf
        out["ls_er"] = float(n * np.sum(1.0 / mu[1:]))
    else:
        out["ls_ns"] = 0.0
    if n <= EXACT_TREE_MAX_N:
        out["ls_ns_exact"] = spanning_tree_count(graph)
        out["ls_ns"] = float(out["ls_ns_exact"])
    return out


@dataclass
class AprioriReport:
    eff: float | None = None
    nb: float | None = None
    eb: float | None = None
    cc: float | None = None
    as_sr: float | None = None
    as_sg: float | None = None
    as_nc: float | None = None
    ls_ac: float | None = None
    ls_ns: float | None = None
    ls_ns_log: float | None = None
    ls_ns_exact: int | None = None
    ls_er: float | None = None

    def to_dict(self, na="na"):
        return {k: (na if v is None else v) for k, v in asdict(self).items()}


def apriori(graph, method="auto"):
    """All a-priori indicators of ``graph`` as an :class:`AprioriReport`."""
    rep = AprioriReport()
    if graph.n_nodes >= 2:
        rep.eff = efficiency(graph)
    if graph.n_nodes >= 1:
        rep.cc = clustering(graph)
    if graph.n_edges > 0:
        nb, eb = betweenness(graph)
        rep.nb = float(nb.mean())
        rep.eb = float(eb.mean())
    for k, v in spectral(graph, method).items():
        setattr(rep, k, v)
    return rep
