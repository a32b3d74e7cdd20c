"""Hopcroft-Karp maximum bipartite matching.

Used for driver-node counts: a directed graph is split into an
out-copy (left) and in-copy (right) of every node, each arc ``u -> v``
becomes a left-right edge, and unmatched in-copies need external input.
"""

from collections import deque

import numpy as np

from .exceptions import GraphKindError
from .graph import RemovalMask

__all__ = ["hopcroft_karp", "bipartite_split", "maximum_matching"]

_FREE = -1


def hopcroft_karp(adj, n_right, match_left=None, match_right=None):
    """Maximum-cardinality matching in O(E sqrt(V)).

    Parameters
    ----------
    adj : list of list of int
        ``adj[u]`` are the right vertices adjacent to left vertex ``u``.
    n_right : int
    match_left, match_right : list of int, optional
        A valid partial matching to start from (``-1`` = free). Both lists
        are updated in place when given.

    Returns
    -------
    size, match_left, match_right
    """
    n_left = len(adj)
    if match_left is None:
        match_left = [_FREE] * n_left
    if match_right is None:
        match_right = [_FREE] * n_right
    inf = n_left + 1
    dist = [0] * n_left

    def bfs():
        q = deque()
        for u in range(n_left):
            if match_left[u] == _FREE:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = inf
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_right[v]
                if w == _FREE:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(root):
        # iterative layered DFS; returns True if an augmenting path was applied
        stack = [(root, iter(adj[root]))]
        path = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                w = match_right[v]
                if w == _FREE:
                    path.append((u, v))
                    for pu, pv in path:
                        match_left[pu] = pv
                        match_right[pv] = pu
                    return True
                if dist[w] == dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[u] = inf
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if match_left[u] == _FREE:
                dfs(u)
    size = sum(1 for m in match_left if m != _FREE)
    return size, match_left, match_right


def bipartite_split(graph, mask=None):
    """Left adjacency of the out/in split over surviving nodes and arcs."""
    if not graph.directed:
        raise GraphKindError("bipartite out/in split needs a directed graph")
    n = graph.n_nodes
    if mask is None:
        return [[v for v, _ in graph.out_edges(u)] for u in range(n)]
    er = mask.edge_removed
    nr = mask.node_removed
    return [
        [] if nr[u] else [v for v, e in graph.out_edges(u) if not er[e]]
        for u in range(n)
    ]


def maximum_matching(graph, mask=None):
    """Size of a maximum matching of the surviving directed graph, plus the matching.

    Returns
    -------
    size : int
    match : np.ndarray
        ``match[u] = v`` when arc ``u -> v`` is matched, else ``-1``.
    """
    if mask is not None and not isinstance(mask, RemovalMask):
        raise TypeError("mask must be a RemovalMask")
    adj = bipartite_split(graph, mask)
    size, ml, _ = hopcroft_karp(adj, graph.n_nodes)
    return size, np.array(ml, dtype=np.int64)
