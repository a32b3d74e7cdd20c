"""Static simple graphs, removal masks and connected components.

Node ids are dense integers ``0 .. n-1``. A :class:`Graph` is immutable once
built and can be shared between simulations; every simulation owns its own
:class:`RemovalMask`.

Directed graphs use *weak* connectivity for component queries.
"""

from __future__ import annotations

from dataclasses import dataclass
import hashlib
import io
import os
import re

import numpy as np

from .exceptions import (
    ContractViolation,
    EdgeListFormatError,
    RemovedTargetError,
)

__all__ = [
    "Graph",
    "RemovalMask",
    "ComponentDecomposition",
    "components",
    "degree",
    "apply_attack",
    "removal_profile",
    "read_edgelist",
    "write_edgelist",
    "parse_edgelist",
    "format_edgelist",
]


class Graph:
    """Simple directed or undirected graph on nodes ``0 .. n_nodes-1``.

    Parameters
    ----------
    n_nodes : int
        Number of nodes, ``N >= 0``.
    edges : iterable of (int, int)
        Edge list. Undirected edges are stored as ``(min, max)``; edge ids
        follow the input order.
    directed : bool
        Whether ``(u, v)`` is an arc from ``u`` to ``v``.

    Raises
    ------
    ContractViolation
        On self-loops, duplicate edges or out-of-range endpoints.
    """

    __slots__ = ("n_nodes", "directed", "edges", "_out", "_in", "_index", "__weakref__")

    def __init__(self, n_nodes, edges=(), directed=False):
        n_nodes = int(n_nodes)
        if n_nodes < 0:
            raise ContractViolation("n_nodes must be >= 0")
        self.n_nodes = n_nodes
        self.directed = bool(directed)
        index = {}
        clean = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n_nodes and 0 <= v < n_nodes):
                raise ContractViolation(f"edge ({u}, {v}) out of range for N={n_nodes}")
            if u == v:
                raise ContractViolation(f"self-loop on node {u}")
            if not self.directed and u > v:
                u, v = v, u
            if (u, v) in index:
                raise ContractViolation(f"duplicate edge ({u}, {v})")
            index[(u, v)] = len(clean)
            clean.append((u, v))
        self._index = index
        self.edges = np.array(clean, dtype=np.int64).reshape(-1, 2)
        self.edges.setflags(write=False)
        out = [[] for _ in range(n_nodes)]
        if self.directed:
            inn = [[] for _ in range(n_nodes)]
            for eid, (u, v) in enumerate(clean):
                out[u].append((v, eid))
                inn[v].append((u, eid))
        else:
            inn = out
            for eid, (u, v) in enumerate(clean):
                out[u].append((v, eid))
                out[v].append((u, eid))
        self._out = out
        self._in = inn

    # -- basic queries -------------------------------------------------
    @property
    def n_edges(self):
        return len(self._index)

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, N={self.n_nodes}, M={self.n_edges})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and self.directed == other.directed
            and set(self._index) == set(other._index)
        )

    def __hash__(self):
        return hash((self.n_nodes, self.directed, frozenset(self._index)))

    def edge_list(self):
        return [tuple(map(int, e)) for e in self.edges]

    def has_edge(self, u, v):
        if not self.directed and u > v:
            u, v = v, u
        return (u, v) in self._index

    def edge_id(self, u, v):
        if not self.directed and u > v:
            u, v = v, u
        try:
            return self._index[(u, v)]
        except KeyError:
            raise ContractViolation(f"no edge ({u}, {v})") from None

    def out_edges(self, v):
        """``[(neighbor, edge_id), ...]`` leaving ``v`` (all incident edges if undirected)."""
        return self._out[v]

    def in_edges(self, v):
        return self._in[v]

    def incident(self, v):
        """Incident ``(neighbor, edge_id)`` pairs ignoring direction."""
        if self.directed:
            return self._out[v] + self._in[v]
        return self._out[v]

    def degrees(self):
        """Total degree per node (in + out for directed graphs)."""
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        if self.n_edges:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def out_degrees(self):
        return np.array([len(a) for a in self._out], dtype=np.int64)

    def in_degrees(self):
        return np.array([len(a) for a in self._in], dtype=np.int64)

    def adjacency_matrix(self, dtype=float):
        a = np.zeros((self.n_nodes, self.n_nodes), dtype=dtype)
        if self.n_edges:
            a[self.edges[:, 0], self.edges[:, 1]] = 1
            if not self.directed:
                a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def to_undirected(self):
        """Underlying simple undirected graph (reciprocal arcs merge)."""
        if not self.directed:
            return self
        seen = {}
        for u, v in self.edges:
            key = (min(u, v), max(u, v))
            seen.setdefault(key, None)
        return Graph(self.n_nodes, list(seen), directed=False)

    def relabel(self, perm):
        """Graph with node ``v`` renamed to ``perm[v]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n_nodes)):
            raise ContractViolation("perm must be a permutation of range(N)")
        return Graph(self.n_nodes, [(perm[u], perm[v]) for u, v in self.edges], self.directed)

    def mask(self):
        """A fresh empty :class:`RemovalMask` for this graph."""
        return RemovalMask.empty(self)

    def digest(self):
        h = hashlib.sha256()
        h.update(format_edgelist(self).encode())
        return h.hexdigest()


class RemovalMask:
    """Non-destructive removal overlay on a :class:`Graph`.

    ``edge_removed`` marks every dead edge, whether attacked directly or
    killed by the removal of an endpoint. ``n_removed_edges`` counts only
    direct edge attacks.
    """

    __slots__ = ("graph", "node_removed", "edge_removed", "n_removed_nodes", "n_removed_edges")

    def __init__(self, graph, node_removed, edge_removed, n_removed_nodes=None, n_removed_edges=0):
        node_removed = np.asarray(node_removed, dtype=bool)
        edge_removed = np.asarray(edge_removed, dtype=bool)
        if node_removed.shape != (graph.n_nodes,) or edge_removed.shape != (graph.n_edges,):
            raise ContractViolation(
                f"mask shape ({node_removed.shape}, {edge_removed.shape}) does not match "
                f"graph N={graph.n_nodes}, M={graph.n_edges}"
            )
        self.graph = graph
        self.node_removed = node_removed
        self.edge_removed = edge_removed
        self.n_removed_nodes = int(node_removed.sum()) if n_removed_nodes is None else n_removed_nodes
        self.n_removed_edges = n_removed_edges

    @classmethod
    def empty(cls, graph):
        return cls(graph, np.zeros(graph.n_nodes, bool), np.zeros(graph.n_edges, bool), 0, 0)

    def copy(self):
        return RemovalMask(
            self.graph,
            self.node_removed.copy(),
            self.edge_removed.copy(),
            self.n_removed_nodes,
            self.n_removed_edges,
        )

    @property
    def n_alive(self):
        return self.graph.n_nodes - self.n_removed_nodes

    def alive_nodes(self):
        return np.flatnonzero(~self.node_removed)

    def alive_edges(self):
        return np.flatnonzero(~self.edge_removed)

    def is_node_alive(self, v):
        return not self.node_removed[v]

    def is_edge_alive(self, eid):
        return not self.edge_removed[eid]

    # in-place updates used by simulation loops
    def remove_node(self, v):
        if self.node_removed[v]:
            raise RemovedTargetError(f"node {v} already removed")
        self.node_removed[v] = True
        self.n_removed_nodes += 1
        g = self.graph
        for _, eid in g.out_edges(v):
            self.edge_removed[eid] = True
        if g.directed:
            for _, eid in g.in_edges(v):
                self.edge_removed[eid] = True

    def remove_edge(self, eid):
        if self.edge_removed[eid]:
            raise RemovedTargetError(f"edge {eid} already removed")
        self.edge_removed[eid] = True
        self.n_removed_edges += 1

    def check(self, graph):
        if self.graph is not graph and (
            self.node_removed.shape != (graph.n_nodes,)
            or self.edge_removed.shape != (graph.n_edges,)
        ):
            raise ContractViolation("mask dimensions do not match graph")


def _resolve_mask(graph, mask):
    if mask is None:
        return RemovalMask.empty(graph)
    mask.check(graph)
    return mask


def apply_attack(mask, target, kind="node"):
    """Return a new mask with ``target`` (a node or edge id) removed."""
    new = mask.copy()
    if kind == "node":
        new.remove_node(target)
    elif kind == "edge":
        new.remove_edge(target)
    else:
        raise ContractViolation(f"unknown target kind {kind!r}")
    return new


def degree(graph, mask, node, mode="total"):
    """Alive degree of ``node``; ``mode`` is ``total``, ``out`` or ``in``."""
    mask = _resolve_mask(graph, mask)
    if mask.node_removed[node]:
        raise RemovedTargetError(f"node {node} is removed")
    er = mask.edge_removed
    if mode == "out" or (mode == "total" and not graph.directed):
        return sum(1 for _, e in graph.out_edges(node) if not er[e])
    if mode == "in":
        return sum(1 for _, e in graph.in_edges(node) if not er[e])
    if mode == "total":
        return sum(1 for _, e in graph.out_edges(node) if not er[e]) + sum(
            1 for _, e in graph.in_edges(node) if not er[e]
        )
    raise ContractViolation(f"unknown degree mode {mode!r}")


@dataclass(frozen=True)
class ComponentDecomposition:
    labels: np.ndarray  # component id per node, -1 for removed nodes
    count: int
    sizes: tuple
    largest: int

    @property
    def cnp_exact(self):
        return sum(s * (s - 1) // 2 for s in self.sizes)

    @property
    def cnp_sq(self):
        return sum(s * s for s in self.sizes)


def components(graph, mask=None):
    """Weakly connected components of the surviving subgraph."""
    mask = _resolve_mask(graph, mask)
    n = graph.n_nodes
    labels = np.full(n, -1, dtype=np.int64)
    nr = mask.node_removed
    er = mask.edge_removed
    sizes = []
    directed = graph.directed
    for s in range(n):
        if nr[s] or labels[s] >= 0:
            continue
        cid = len(sizes)
        labels[s] = cid
        stack = [s]
        size = 0
        while stack:
            v = stack.pop()
            size += 1
            nbrs = graph.out_edges(v) + graph.in_edges(v) if directed else graph.out_edges(v)
            for w, e in nbrs:
                if not er[e] and labels[w] < 0:
                    labels[w] = cid
                    stack.append(w)
        sizes.append(size)
    return ComponentDecomposition(labels, len(sizes), tuple(sizes), max(sizes, default=0))


def removal_profile(graph, sequence, kind="node"):
    """Component statistics after every prefix of a removal sequence.

    Runs union-find in reverse (re-inserting removed objects), so a whole
    trace costs near-linear time instead of one traversal per step.

    Returns
    -------
    dict of np.ndarray, each of length ``len(sequence) + 1``:
        ``n_l``, ``n_ncc``, ``cnp_exact``, ``cnp_sq``, ``n_alive``. Index
        ``i`` describes the graph after the first ``i`` removals.
    """
    seq = [int(t) for t in sequence]
    n = graph.n_nodes
    node_alive = np.ones(n, bool)
    edge_attacked = np.zeros(graph.n_edges, bool)
    if kind == "node":
        node_alive[seq] = False
        if int((~node_alive).sum()) != len(seq):
            raise RemovedTargetError("removal sequence repeats a node")
    elif kind == "edge":
        edge_attacked[seq] = True
        if int(edge_attacked.sum()) != len(seq):
            raise RemovedTargetError("removal sequence repeats an edge")
    else:
        raise ContractViolation(f"unknown target kind {kind!r}")
    k = len(seq)
    parent = list(range(n))
    size = [1] * n
    out = {key: np.zeros(k + 1, np.int64) for key in ("n_l", "n_ncc", "cnp_exact", "cnp_sq", "n_alive")}
    count = largest = cnp = sq = alive = 0

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        nonlocal count, largest, cnp, sq
        ra, rb = find(a), find(b)
        if ra == rb:
            return
        sa, sb = size[ra], size[rb]
        if sa < sb:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] = sa + sb
        count -= 1
        cnp += sa * sb
        sq += 2 * sa * sb
        if sa + sb > largest:
            largest = sa + sb

    def record(i):
        out["n_l"][i] = largest
        out["n_ncc"][i] = count
        out["cnp_exact"][i] = cnp
        out["cnp_sq"][i] = sq
        out["n_alive"][i] = alive

    edges = graph.edges.tolist()
    for v in range(n):
        if node_alive[v]:
            count += 1
            alive += 1
            sq += 1
            largest = 1
    for eid, (u, v) in enumerate(edges):
        if not edge_attacked[eid] and node_alive[u] and node_alive[v]:
            union(u, v)
    record(k)
    for i in range(k - 1, -1, -1):
        t = seq[i]
        if kind == "node":
            node_alive[t] = True
            count += 1
            alive += 1
            sq += 1
            largest = max(largest, 1)
            for w, eid in graph.incident(t):
                if node_alive[w] and not edge_attacked[eid]:
                    union(t, w)
        else:
            edge_attacked[t] = False
            u, v = edges[t]
            if node_alive[u] and node_alive[v]:
                union(u, v)
        record(i)
    return out


# -- edge-list I/O -------------------------------------------------------

_HEADER = re.compile(r"^#\s*(directed|undirected)\s+(\d+)\s+(\d+)\s*$")


def parse_edgelist(text, source=None, directed=None):
    """Parse edge-list text into a :class:`Graph`.

    An optional first line ``# {directed|undirected} N M`` fixes kind and
    size; otherwise N is ``max id + 1`` and the graph is undirected unless
    ``directed`` says otherwise.
    """
    header = None
    pairs = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if m and header is None and not pairs:
                header = (m.group(1) == "directed", int(m.group(2)), int(m.group(3)), lineno)
            continue
        line = line.split("#", 1)[0]
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(f"expected 'u v', got {raw.rstrip()!r}", lineno, source)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(f"non-integer node id in {raw.rstrip()!r}", lineno, source) from None
        if u < 0 or v < 0:
            raise EdgeListFormatError("negative node id", lineno, source)
        pairs.append((u, v, lineno))
    if header is not None:
        is_directed, n, m, hline = header
        if directed is not None and directed != is_directed:
            raise EdgeListFormatError("header kind conflicts with requested kind", hline, source)
    else:
        is_directed = bool(directed)
        n = max((max(u, v) for u, v, _ in pairs), default=-1) + 1
        m = None
    seen = set()
    edges = []
    for u, v, lineno in pairs:
        if u >= n or v >= n:
            raise EdgeListFormatError(f"node id out of range for N={n}", lineno, source)
        if u == v:
            raise EdgeListFormatError(f"self-loop on node {u}", lineno, source)
        key = (u, v) if is_directed else (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListFormatError(f"duplicate edge ({u}, {v})", lineno, source)
        seen.add(key)
        edges.append((u, v))
    if m is not None and m != len(edges):
        raise EdgeListFormatError(f"header declares M={m} but {len(edges)} edges found", header[3], source)
    return Graph(n, edges, directed=is_directed)


def format_edgelist(graph):
    kind = "directed" if graph.directed else "undirected"
    lines = [f"# {kind} {graph.n_nodes} {graph.n_edges}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def read_edgelist(path, directed=None):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_edgelist(text, source=os.fspath(path), directed=directed)


def write_edgelist(graph, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edgelist(graph))
