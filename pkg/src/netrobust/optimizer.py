"""Rewiring search for more robust topologies.

Moves are two-edge swaps ``(a,b),(c,d) -> (a,d),(c,b)`` that keep every
node's degree (in and out degree on directed graphs). Hill climbing keeps
strictly improving moves; simulated annealing also takes worse moves with
probability ``exp(-|delta| / temperature)`` under geometric cooling.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .attacks import AttackPlan, attack_sequence, make_rng
from .engine import HIGHER_IS_BETTER, MEASURES, cell_seed, detect_threshold, measure, run_trace
from .exceptions import ParameterError
from .graph import Graph, components, removal_profile

__all__ = ["OptimizeConfig", "LogEntry", "degree_preserving_swap", "objective", "optimize"]


@dataclass(frozen=True)
class OptimizeConfig:
    """Objective, search algorithm, constraint and budget.

    ``maximize=None`` takes the natural direction of the measure.
    """

    measure: str = "r1"
    strategy: str = "MDTA"
    scheme: str = "cd"
    maximize: bool | None = None
    algorithm: str = "hc"
    preserve: str = "degrees"
    iterations: int = 1000
    sa_temp: float = 0.01
    sa_cool: float = 0.995
    repeats: int = 5
    keep_connected: bool = False
    seed: int = 42
    max_tries: int = 100

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ParameterError(f"unknown measure {self.measure!r}")
        if self.algorithm not in ("hc", "sa"):
            raise ParameterError("algorithm must be 'hc' or 'sa'")
        if self.preserve not in ("degrees", "avg", "none"):
            raise ParameterError("preserve must be 'degrees', 'avg' or 'none'")
        if self.iterations < 1:
            raise ParameterError("iteration budget must be >= 1")
        if not 0.0 < self.sa_cool < 1.0:
            raise ParameterError("cooling rate must lie in (0, 1)")
        if self.sa_temp <= 0:
            raise ParameterError("initial temperature must be positive")
        if self.repeats < 1:
            raise ParameterError("repeats must be >= 1")
        if self.scheme not in ("cd", "td"):
            raise ParameterError("scheme must be 'cd' or 'td'")

    def direction(self):
        return HIGHER_IS_BETTER[self.measure] if self.maximize is None else self.maximize


@dataclass
class LogEntry:
    iteration: int
    value: float | None
    accepted: bool
    best: float
    swap: tuple | None


def _key(u, v, directed):
    return (u, v) if directed else (min(u, v), max(u, v))


def degree_preserving_swap(edges, present, directed, rng, max_tries=100):
    """Propose a feasible degree-preserving swap.

    Parameters
    ----------
    edges : list of (int, int)
    present : set
        Edge keys currently in the graph.

    Returns
    -------
    (i, j, new_i, new_j) or None
        Replace ``edges[i]`` and ``edges[j]`` by the new pairs; ``None`` when
        no feasible swap turned up within ``max_tries`` draws.
    """
    m = len(edges)
    if m < 2:
        return None
    for _ in range(max_tries):
        i, j = (int(x) for x in rng.integers(m, size=2))
        if i == j:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if not directed and rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4:
            continue
        if _key(a, d, directed) in present or _key(c, b, directed) in present:
            continue
        return i, j, (a, d), (c, b)
    return None


def _move_edge(edges, present, n, directed, rng, max_tries):
    """Move one edge to an absent pair (keeps the edge count)."""
    if not edges:
        return None
    for _ in range(max_tries):
        i = int(rng.integers(len(edges)))
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u != v and _key(u, v, directed) not in present:
            return i, (u, v)
    return None


def objective(graph, config, seeds=None):
    """Value of the configured robustness measure on ``graph``."""
    name = config.measure
    plan = AttackPlan(config.strategy, MEASURES[name][0][0], seed=config.seed)
    if name == "r1" and plan.strategy == "MDTA" and config.scheme == "cd":
        seq = attack_sequence(plan, graph)
        n_l = removal_profile(graph, seq, "node")["n_l"]
        return float(np.mean(n_l[: graph.n_nodes])) / max(graph.n_nodes, 1)
    _, needs_nd, needs_rank = MEASURES[name]
    drivers = "auto" if needs_nd else None
    if plan.strategy in ("RANDOM", "WEIGHTED_PROB"):
        seeds = seeds or [config.seed]
    else:
        seeds = [config.seed]
    vals = []
    for s in seeds:
        cell = AttackPlan(plan.strategy, plan.target, seed=s)
        tr = run_trace(graph, cell, drivers, needs_rank)
        T = detect_threshold(tr).T if config.scheme == "td" else None
        vals.append(measure(tr, name, config.scheme, T))
    return float(np.mean(vals))


def optimize(graph, config, on_step=None):
    """Search rewired variants of ``graph`` for a better objective.

    Returns
    -------
    best : Graph
        Best graph seen (the input itself if nothing improved).
    log : list of LogEntry
    """
    rng = make_rng(config.seed)
    maximize = config.direction()
    sign = 1.0 if maximize else -1.0
    seeds = [cell_seed(config.seed, r, 0) for r in range(config.repeats)]
    n, directed = graph.n_nodes, graph.directed
    edges = [tuple(int(x) for x in e) for e in graph.edges.tolist()]
    present = {_key(u, v, directed) for u, v in edges}
    cur_val = objective(graph, config, seeds)
    best_val, best_edges = cur_val, list(edges)
    temp = config.sa_temp
    log = []
    for it in range(1, config.iterations + 1):
        if config.preserve == "degrees":
            prop = degree_preserving_swap(edges, present, directed, rng, config.max_tries)
        else:
            prop = _move_edge(edges, present, n, directed, rng, config.max_tries)
        if prop is None:
            log.append(LogEntry(it, None, False, best_val, None))
            if config.preserve == "degrees":
                break
            continue
        cand = list(edges)
        if config.preserve == "degrees":
            i, j, ei, ej = prop
            cand[i], cand[j] = ei, ej
            swap = (edges[i], edges[j], ei, ej)
        else:
            i, e_new = prop
            if config.preserve == "none" and rng.random() < 0.5 and len(cand) > 1:
                del cand[i]
                swap = (edges[i], None)
            else:
                cand[i] = e_new
                swap = (edges[i], e_new)
        g = Graph(n, cand, directed=directed)
        if config.keep_connected and components(g).count > 1:
            log.append(LogEntry(it, None, False, best_val, swap))
            continue
        val = objective(g, config, seeds)
        delta = sign * (val - cur_val)
        if delta > 0:
            accept = True
        elif config.algorithm == "sa":
            accept = rng.random() < math.exp(-abs(delta) / temp)
        else:
            accept = False
        if accept:
            edges = cand
            present = {_key(u, v, directed) for u, v in edges}
            cur_val = val
            if sign * (val - best_val) > 0:
                best_val, best_edges = val, list(edges)
        if config.algorithm == "sa":
            temp *= config.sa_cool
        entry = LogEntry(it, val, accept, best_val, swap)
        log.append(entry)
        if on_step is not None:
            on_step(entry)
    return Graph(n, best_edges, directed=directed), log
