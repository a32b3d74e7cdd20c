"""Attack strategies: which node or edge to remove next.

Selectors return the alive object with the highest score. Ties go to the
smallest id unless the plan asks for seeded random tie-breaking.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
import math

import numpy as np

from .apriori import betweenness
from .exceptions import ContractViolation, GraphKindError, NoTargetError, ParameterError
from .graph import _resolve_mask, components
from .matching import hopcroft_karp, bipartite_split

__all__ = [
    "STRATEGIES",
    "STRATEGY_ALIASES",
    "AttackPlan",
    "make_rng",
    "node_scores",
    "edge_scores",
    "next_target",
    "damage_greedy_target",
    "critical_ctrl_target",
    "weighted_prob_probabilities",
    "weighted_prob_target",
    "enumerate_exa",
    "attack_sequence",
    "EXA_EXACT_MAX",
]

STRATEGIES = ("RANDOM", "MDTA", "MBTA", "EXA", "DAMAGE_LCC", "CRITICAL_CTRL", "WEIGHTED_PROB")

# CLI spellings
STRATEGY_ALIASES = {
    "random": "RANDOM",
    "mdta": "MDTA",
    "mbta": "MBTA",
    "exa": "EXA",
    "damage": "DAMAGE_LCC",
    "critical": "CRITICAL_CTRL",
    "wprob": "WEIGHTED_PROB",
}

EXA_EXACT_MAX = 8

# relative slack when comparing floating scores (betweenness) for ties
_TIE_EPS = 1e-9


def make_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


@dataclass(frozen=True)
class AttackPlan:
    """Strategy, target kind and knobs for one attack run.

    Parameters
    ----------
    strategy : str
        One of :data:`STRATEGIES` (CLI aliases accepted).
    target : {"node", "edge"}
    adaptive : bool
        Recompute MDTA/MBTA scores after each removal; otherwise rank by the
        scores of the intact graph.
    seed : int
    alpha : tuple of float
        Weights of (degree, betweenness) for WEIGHTED_PROB.
    samples : int, optional
        Monte Carlo permutation count for EXA beyond exact enumeration.
    tie : {"smallest", "random"}
    degree_mode : {"total", "out", "in"}
        Which degree MDTA ranks by on directed graphs.
    """

    strategy: str = "MDTA"
    target: str = "node"
    adaptive: bool = True
    seed: int = 42
    alpha: tuple = (0.5, 0.5)
    samples: int | None = None
    tie: str = "smallest"
    degree_mode: str = "total"

    def __post_init__(self):
        s = STRATEGY_ALIASES.get(str(self.strategy).lower(), str(self.strategy).upper())
        if s not in STRATEGIES:
            raise ParameterError(f"unknown strategy {self.strategy!r}")
        object.__setattr__(self, "strategy", s)
        if self.target not in ("node", "edge"):
            raise ParameterError(f"target must be 'node' or 'edge', got {self.target!r}")
        if self.tie not in ("smallest", "random"):
            raise ParameterError(f"tie must be 'smallest' or 'random', got {self.tie!r}")
        if self.degree_mode not in ("total", "out", "in"):
            raise ParameterError(f"degree_mode must be 'total', 'out' or 'in', got {self.degree_mode!r}")
        alpha = tuple(float(a) for a in self.alpha)
        if len(alpha) != 2 or min(alpha) < 0 or not math.isclose(sum(alpha), 1.0, abs_tol=1e-9):
            raise ParameterError("alpha must be two non-negative weights summing to 1")
        object.__setattr__(self, "alpha", alpha)
        if self.samples is not None and self.samples < 1:
            raise ParameterError("samples must be >= 1")
        if s == "DAMAGE_LCC" and self.target != "node":
            raise ParameterError("damage-greedy attack removes nodes")
        if s == "CRITICAL_CTRL" and self.target != "edge":
            raise ParameterError("controllability-critical attack removes edges")


def node_scores(graph, mask, kind="degree", mode="total"):
    """Current degree or betweenness of each node; removed nodes score -1."""
    mask = _resolve_mask(graph, mask)
    if kind == "degree":
        s = _alive_degrees(graph, mask, mode).astype(float)
    elif kind == "betweenness":
        s = betweenness(graph, mask)[0]
    else:
        raise ContractViolation(f"unknown score {kind!r}")
    s[mask.node_removed] = -1.0
    return s


def edge_scores(graph, mask, kind="degree", mode="total"):
    """Edge scores: endpoint-degree product or edge betweenness; dead edges -1."""
    mask = _resolve_mask(graph, mask)
    if kind == "degree":
        deg = _alive_degrees(graph, mask, mode).astype(float)
        e = graph.edges
        s = deg[e[:, 0]] * deg[e[:, 1]] if len(e) else np.zeros(0)
    elif kind == "betweenness":
        s = betweenness(graph, mask)[1]
    else:
        raise ContractViolation(f"unknown score {kind!r}")
    s = np.asarray(s, dtype=float)
    s[mask.edge_removed] = -1.0
    return s


def _alive_degrees(graph, mask, mode="total"):
    deg = np.zeros(graph.n_nodes, dtype=np.int64)
    live = mask.alive_edges()
    if live.size:
        e = graph.edges[live]
        if mode != "in" or not graph.directed:
            np.add.at(deg, e[:, 0], 1)
        if mode != "out" or not graph.directed:
            np.add.at(deg, e[:, 1], 1)
    return deg


def _pick_max(scores, alive, tie, rng):
    if not alive.any():
        raise NoTargetError("no alive targets left")
    s = np.where(alive, scores, -np.inf)
    best = float(s.max())
    cut = best - _TIE_EPS * max(1.0, abs(best))
    ties = np.flatnonzero(s >= cut)
    if tie == "random" and ties.size > 1:
        return int(rng.choice(ties))
    return int(ties[0])


def _alive(plan, mask):
    return ~mask.node_removed if plan.target == "node" else ~mask.edge_removed


def next_target(plan, graph, mask=None, rng=None, initial_scores=None):
    """Next object to remove under ``plan``.

    ``initial_scores`` lets static MDTA/MBTA reuse scores computed once on
    the intact graph.
    """
    mask = _resolve_mask(graph, mask)
    rng = make_rng(plan.seed) if rng is None else rng
    alive = _alive(plan, mask)
    if not alive.any():
        raise NoTargetError("no alive targets left")
    s = plan.strategy
    if s == "RANDOM":
        return int(rng.choice(np.flatnonzero(alive)))
    if s in ("MDTA", "MBTA"):
        kind = "degree" if s == "MDTA" else "betweenness"
        score = node_scores if plan.target == "node" else edge_scores
        if plan.adaptive:
            scores = score(graph, mask, kind, plan.degree_mode)
        elif initial_scores is not None:
            scores = initial_scores
        else:
            scores = score(graph, None, kind, plan.degree_mode)
        return _pick_max(scores, alive, plan.tie, rng)
    if s == "DAMAGE_LCC":
        return damage_greedy_target(graph, mask)
    if s == "CRITICAL_CTRL":
        return critical_ctrl_target(graph, mask)
    if s == "WEIGHTED_PROB":
        return weighted_prob_target(plan, graph, mask, rng)
    raise ContractViolation("EXA has no single next target; use enumerate_exa")


def damage_greedy_target(graph, mask=None):
    """Alive node whose removal shrinks the largest component the most."""
    mask = _resolve_mask(graph, mask)
    alive = mask.alive_nodes()
    if alive.size == 0:
        raise NoTargetError("no alive nodes left")
    before = components(graph, mask).largest
    best, best_v = -1, -1
    for v in alive.tolist():
        trial = mask.copy()
        trial.remove_node(v)
        dmg = before - components(graph, trial).largest
        if dmg > best:
            best, best_v = dmg, v
    return best_v


def critical_ctrl_target(graph, mask=None):
    """Lowest-id alive arc whose removal raises the matching-based driver count.

    Falls back to the lowest-id alive arc when no arc is critical. Only arcs
    in the current maximum matching can be critical, so only those are
    re-tested.
    """
    if not graph.directed:
        raise GraphKindError("controllability-critical attack needs a directed graph")
    mask = _resolve_mask(graph, mask)
    live = mask.alive_edges()
    if live.size == 0:
        raise NoTargetError("no alive edges left")
    adj = bipartite_split(graph, mask)
    base, ml, _ = hopcroft_karp(adj, graph.n_nodes)
    for eid in live.tolist():
        u, v = (int(x) for x in graph.edges[eid])
        if ml[u] != v:
            continue
        trial = [list(a) for a in adj]
        trial[u].remove(v)
        if hopcroft_karp(trial, graph.n_nodes)[0] < base:
            return eid
    return int(live[0])


def weighted_prob_probabilities(plan, graph, mask=None):
    """Target probabilities ``p_j = sum_i alpha_i g_ij / sum_j g_ij``.

    Features are (degree, betweenness) of nodes, or (endpoint-degree
    product, edge betweenness) of edges. A feature that is zero on every
    alive target contributes a uniform share instead.
    """
    mask = _resolve_mask(graph, mask)
    alive = _alive(plan, mask)
    if not alive.any():
        raise NoTargetError("no alive targets left")
    score = node_scores if plan.target == "node" else edge_scores
    p = np.zeros(alive.size)
    for weight, kind in zip(plan.alpha, ("degree", "betweenness")):
        if weight == 0:
            continue
        g = np.where(alive, np.maximum(score(graph, mask, kind), 0.0), 0.0)
        total = g.sum()
        if total > 0:
            p += weight * g / total
        else:
            p += weight * alive / alive.sum()
    return p / p.sum()


def weighted_prob_target(plan, graph, mask=None, rng=None):
    """Sample one target from :func:`weighted_prob_probabilities`."""
    rng = make_rng(plan.seed) if rng is None else rng
    p = weighted_prob_probabilities(plan, graph, mask)
    return int(rng.choice(p.size, p=p))


def enumerate_exa(k, samples=None, seed=42):
    """All ``k!`` removal orders of ``range(k)`` in lexicographic order.

    With ``samples`` set and ``k`` beyond exact range, yields that many
    uniformly random permutations instead.
    """
    if k < 0:
        raise ParameterError("sequence length must be >= 0")
    if k <= EXA_EXACT_MAX:
        yield from itertools.permutations(range(k))
        return
    if samples is None:
        raise ParameterError(f"exhaustive attack on {k} objects needs a sample cap (exact only up to {EXA_EXACT_MAX})")
    rng = make_rng(seed)
    for _ in range(samples):
        yield tuple(int(x) for x in rng.permutation(k))


def _mdta_node_fast(graph, mask, limit, static):
    deg = _alive_degrees(graph, mask)
    deg[mask.node_removed] = -1
    out = []
    if static:
        order = np.lexsort((np.arange(graph.n_nodes), -deg))
        out = [int(v) for v in order if deg[v] >= 0]
        return out[:limit]
    er = mask.edge_removed.copy()
    for _ in range(limit):
        v = int(np.argmax(deg))
        if deg[v] < 0:
            break
        out.append(v)
        deg[v] = -1
        for w, e in graph.incident(v):
            if not er[e]:
                er[e] = True
                deg[w] -= 1
    return out


def attack_sequence(plan, graph, mask=None, limit=None):
    """Full removal order produced by ``plan`` (at most ``limit`` removals).

    Returns
    -------
    np.ndarray of int64
        Target ids, no repeats.
    """
    if plan.strategy == "EXA":
        raise ContractViolation("EXA is evaluated over all orders; use enumerate_exa")
    mask = _resolve_mask(graph, mask).copy()
    alive = _alive(plan, mask)
    total = int(alive.sum())
    limit = total if limit is None else min(int(limit), total)
    rng = make_rng(plan.seed)
    if plan.strategy == "RANDOM":
        seq = rng.permutation(np.flatnonzero(alive))[:limit]
        return seq.astype(np.int64)
    fast = plan.tie == "smallest" and (plan.degree_mode == "total" or not graph.directed)
    if plan.strategy == "MDTA" and plan.target == "node" and fast:
        return np.array(_mdta_node_fast(graph, mask, limit, not plan.adaptive), dtype=np.int64)
    initial = None
    if plan.strategy in ("MDTA", "MBTA") and not plan.adaptive:
        kind = "degree" if plan.strategy == "MDTA" else "betweenness"
        initial = (node_scores if plan.target == "node" else edge_scores)(graph, mask, kind, plan.degree_mode)
    seq = []
    for _ in range(limit):
        t = next_target(plan, graph, mask, rng, initial_scores=initial)
        seq.append(t)
        if plan.target == "node":
            mask.remove_node(t)
        else:
            mask.remove_edge(t)
    return np.array(seq, dtype=np.int64)
