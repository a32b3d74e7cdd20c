"""Seeded synthetic network models and fixed 4-node test topologies.

Every model targets ``M = floor(N * k / 2)`` edges, where ``k`` is the mean
total degree. Directed instances are built undirected and each edge is then
oriented by a fair coin, except QS which is natively directed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParameterError
from .graph import Graph

__all__ = ["GeneratorConfig", "MODELS", "CANONICAL_UNDIRECTED", "CANONICAL_DIRECTED", "generate", "canonical4"]

MODELS = ("ER", "SW-NW", "SW-WS", "RT", "RH", "EH", "BA", "SF", "OS", "QS")

_RESTART_LIMIT = 100


@dataclass(frozen=True)
class GeneratorConfig:
    """Model id, size, mean degree, orientation, extra parameters and seed."""

    model: str
    n: int
    k: float
    directed: bool = False
    params: dict = field(default_factory=dict)
    seed: int = 42

    def target_edges(self):
        return int(self.n * self.k // 2)


def _check(config):
    model = config.model.upper()
    if model not in MODELS:
        raise ParameterError(f"unknown model {config.model!r}; expected one of {', '.join(MODELS)}")
    if config.n < 1:
        raise ParameterError("n must be >= 1")
    if config.k < 0:
        raise ParameterError("mean degree must be >= 0")
    if config.n > 1 and config.k >= config.n:
        raise ParameterError(f"mean degree {config.k} must be below n={config.n}")
    m = config.target_edges()
    if m > config.n * (config.n - 1) // 2:
        raise ParameterError("requested edge count exceeds a simple graph")
    return model, m


class _EdgeSet:
    """Insertion-ordered undirected simple edge set."""

    def __init__(self, n):
        self.n = n
        self.seen = set()
        self.order = []

    def __len__(self):
        return len(self.order)

    def __contains__(self, uv):
        u, v = uv
        return (min(u, v), max(u, v)) in self.seen

    def add(self, u, v):
        if u == v:
            return False
        key = (min(u, v), max(u, v))
        if key in self.seen:
            return False
        self.seen.add(key)
        self.order.append(key)
        return True

    def fill_uniform(self, m, rng):
        """Add uniformly random absent pairs until ``m`` edges are present."""
        while len(self) < m:
            need = m - len(self)
            batch = rng.integers(0, self.n, size=(2 * need + 16, 2))
            for u, v in batch.tolist():
                if self.add(u, v) and len(self) == m:
                    break


def _er(n, m, rng, params):
    es = _EdgeSet(n)
    es.fill_uniform(m, rng)
    return es.order


def _ring(n, half):
    es = _EdgeSet(n)
    for d in range(1, half + 1):
        for u in range(n):
            es.add(u, (u + d) % n)
    return es


def _sw_nw(n, m, rng, params):
    ring_k = int(params.get("ring_k", max(2, int(2 * m / max(n, 1)) - 2)))
    es = _ring(n, max(1, ring_k // 2))
    if len(es) > m:
        raise ParameterError(f"ring lattice of degree {ring_k} already exceeds {m} edges")
    es.fill_uniform(m, rng)
    return es.order


def _sw_ws(n, m, rng, params):
    beta = float(params.get("beta", 0.1))
    if not 0.0 <= beta <= 1.0:
        raise ParameterError("rewiring probability must lie in [0, 1]")
    half = int(2 * m // max(n, 1)) // 2
    ring = _ring(n, half).order
    es = _EdgeSet(n)
    for u, v in ring:
        es.add(u, v)
    if len(es) > m:
        es = _EdgeSet(n)
        for u, v in ring[:m]:
            es.add(u, v)
    for idx in range(len(es.order)):
        if rng.random() >= beta:
            continue
        u, v = es.order[idx]
        for _ in range(_RESTART_LIMIT):
            w = int(rng.integers(n))
            if w != u and (u, w) not in es:
                es.seen.discard((u, v))
                key = (min(u, w), max(u, w))
                es.seen.add(key)
                es.order[idx] = key
                break
    es.fill_uniform(m, rng)
    return es.order


def _motifs(n, m, rng, size):
    if n < size and m > 0:
        raise ParameterError(f"motif of {size} nodes needs n >= {size}")
    es = _EdgeSet(n)
    stall = 0
    while len(es) < m:
        nodes = rng.choice(n, size=size, replace=False).tolist()
        before = len(es)
        for j in range(size):
            es.add(nodes[j], nodes[(j + 1) % size])
            if len(es) == m:
                break
        stall = stall + 1 if len(es) == before else 0
        if stall > 1000 * size:
            es.fill_uniform(m, rng)
    return es.order


def _rt(n, m, rng, params):
    return _motifs(n, m, rng, 3)


def _rh(n, m, rng, params):
    return _motifs(n, m, rng, 6)


def _eh(n, m, rng, params):
    k = int(params.get("degree", 2 * m // max(n, 1)))
    if (n * k) % 2 or k >= n or n * k // 2 != m:
        raise ParameterError(f"no simple {k}-regular graph on {n} nodes with {m} edges")
    # pair stubs one at a time, rejecting loops and duplicates; restart when stuck
    for _ in range(_RESTART_LIMIT):
        stubs = np.repeat(np.arange(n), k).tolist()
        es = _EdgeSet(n)
        stuck = False
        while stubs and not stuck:
            for _tries in range(200):
                i = int(rng.integers(len(stubs)))
                j = int(rng.integers(len(stubs)))
                if i != j and es.add(stubs[i], stubs[j]):
                    for idx in sorted((i, j), reverse=True):
                        stubs[idx] = stubs[-1]
                        stubs.pop()
                    break
            else:
                stuck = True
        if not stuck:
            return es.order
    raise ParameterError("regular pairing failed to converge")


def _ba(n, m_edges, rng, params):
    m = int(params.get("m", max(1, 2 * m_edges // max(n, 1) // 2)))
    m0 = m + 1
    if n < m0:
        raise ParameterError(f"BA with m={m} needs n >= {m0}")
    es = _EdgeSet(n)
    targets = []
    for u in range(m0):
        for v in range(u + 1, m0):
            es.add(u, v)
            targets += [u, v]
    for new in range(m0, n):
        chosen = set()
        while len(chosen) < m:
            chosen.add(targets[int(rng.integers(len(targets)))])
        for v in sorted(chosen):
            es.add(new, v)
            targets += [new, v]
    return es.order


def _sf(n, m, rng, params):
    alpha = float(params.get("alpha", 0.5))
    w = np.arange(1, n + 1, dtype=float) ** (-alpha)
    cdf = np.cumsum(w / w.sum())
    es = _EdgeSet(n)
    while len(es) < m:
        need = m - len(es)
        draws = np.searchsorted(cdf, rng.random((2 * need + 16, 2)), side="right")
        draws = np.minimum(draws, n - 1)
        for u, v in draws.tolist():
            if es.add(u, v) and len(es) == m:
                break
    return es.order


def _os(n, m, rng, params):
    edges = [list(e) for e in _sf(n, m, rng, params)]
    attempts = int(params.get("swaps", 1000 * n))
    deg = np.zeros(n, dtype=np.int64)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    deg = deg.tolist()
    present = {(min(u, v), max(u, v)) for u, v in edges}
    if len(edges) < 2:
        return [tuple(e) for e in edges]
    picks = rng.integers(len(edges), size=(attempts, 2)).tolist()
    flips = rng.random(attempts).tolist()
    for (x, y), flip in zip(picks, flips):
        if x == y:
            continue
        a, b = edges[x]
        c, d = edges[y]
        if flip < 0.5:
            c, d = d, c
        # (a,b),(c,d) -> (a,d),(c,b); keep only if sum of k_u k_v grows
        if len({a, b, c, d}) < 4:
            continue
        gain = deg[a] * deg[d] + deg[c] * deg[b] - deg[a] * deg[b] - deg[c] * deg[d]
        if gain <= 0:
            continue
        e1 = (min(a, d), max(a, d))
        e2 = (min(c, b), max(c, b))
        if e1 in present or e2 in present:
            continue
        present.discard((min(a, b), max(a, b)))
        present.discard((min(c, d), max(c, d)))
        present.add(e1)
        present.add(e2)
        edges[x] = [a, d]
        edges[y] = [c, b]
    return [(min(u, v), max(u, v)) for u, v in edges]


def _qs(n, m, rng, params, directed):
    chain = [(u, u + 1) for u in range(n - 1)]
    if m < len(chain):
        raise ParameterError(f"QS needs at least n-1={n - 1} edges, got {m}")
    seen = set(chain)
    out = list(chain)
    if "q" in params:
        q = float(params["q"])
        for v in range(1, n):
            # undirected snapbacks skip the chain predecessor
            hi = v if directed else v - 1
            hits = np.flatnonzero(rng.random(hi) < q)
            for u in hits.tolist():
                out.append((v, u) if directed else (u, v))
        return out
    # uniform choice among backward pairs so the edge count hits the target
    extra = m - len(chain)
    while extra > 0:
        v = int(rng.integers(1, n))
        u = int(rng.integers(v))
        if not directed and u == v - 1:
            continue
        arc = (v, u) if directed else (u, v)
        if arc in seen:
            continue
        seen.add(arc)
        out.append(arc)
        extra -= 1
    return out


_BUILDERS = {
    "ER": _er,
    "SW-NW": _sw_nw,
    "SW-WS": _sw_ws,
    "RT": _rt,
    "RH": _rh,
    "EH": _eh,
    "BA": _ba,
    "SF": _sf,
    "OS": _os,
}


def generate(config):
    """Build the graph described by ``config``; identical output per (config, seed)."""
    model, m = _check(config)
    rng = np.random.default_rng(np.random.SeedSequence(int(config.seed)))
    n = config.n
    if model == "QS":
        return Graph(n, _qs(n, m, rng, config.params, config.directed), directed=config.directed)
    edges = _BUILDERS[model](n, m, rng, config.params)
    if config.directed:
        flip = rng.random(len(edges)) < 0.5
        edges = [(v, u) if f else (u, v) for (u, v), f in zip(edges, flip.tolist())]
    return Graph(n, edges, directed=config.directed)


# -- 4-node topologies -----------------------------------------------------

CANONICAL_UNDIRECTED = {
    "FUL": [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    "LOP": [(0, 1), (1, 2), (2, 3), (0, 3)],
    "STR": [(0, 1), (0, 2), (0, 3)],
    # triangle 1-2-3 with pendant 0 hanging off 3
    "CTS": [(1, 2), (1, 3), (2, 3), (0, 3)],
    # path 2-0-1-3
    "CHA": [(0, 2), (0, 1), (1, 3)],
    "ISO": [],
}

CANONICAL_DIRECTED = {
    "FUL": [(u, v) for u in range(4) for v in range(4) if u != v],
    "WKF": [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    "LOP": [(0, 1), (1, 2), (2, 3), (3, 0)],
    "RIN": [(0, 1), (0, 2), (1, 3), (3, 2)],
    "CTS": [(0, 1), (0, 2), (1, 2), (3, 2)],
    "SSO": [(0, 1), (0, 2), (0, 3)],
    "SSI": [(1, 0), (2, 0), (3, 0)],
    "SSR": None,
    "DCH": [(0, 1), (1, 2), (2, 3)],
    "UCH": [(0, 1), (0, 2), (1, 3)],
    "DIS": [(0, 1), (0, 2), (1, 2)],
    "ISO": [],
}

# drawn only in a figure; edge lists above are reconstructions
RECONSTRUCTED_DIRECTED = ("WKF", "RIN", "CTS", "SSR", "UCH", "DIS")


def canonical4(name, directed=False, seed=42):
    """One of the fixed 4-node test networks.

    ``seed`` matters only for the directed random-orientation star (SSR).
    """
    key = name.upper()
    table = CANONICAL_DIRECTED if directed else CANONICAL_UNDIRECTED
    if key not in table:
        kind = "directed" if directed else "undirected"
        raise ParameterError(f"unknown {kind} 4-node network {name!r}; expected one of {', '.join(table)}")
    edges = table[key]
    if edges is None:
        rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
        flip = rng.random(3) < 0.5
        edges = [(leaf, 0) if f else (0, leaf) for leaf, f in zip((1, 2, 3), flip.tolist())]
    return Graph(4, edges, directed=directed)
