"""Attack simulation and the a-posteriori robustness measures built on it.

A trace records the functionals after every removal (index 0 is the intact
graph). Each measure is the mean of a per-step term over a range of steps:
the complete-disconnection (CD) range ``0..N-1`` for node attacks or
``0..M`` for edge attacks, or the threshold-truncated (TD) range ``0..T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import io
import math

import numpy as np

from .attacks import AttackPlan, attack_sequence, enumerate_exa
from .exceptions import ContractViolation, GraphKindError, ParameterError
from .graph import removal_profile
from .linalg import matrix_rank
from .matching import bipartite_split, hopcroft_karp

__all__ = [
    "AttackTrace",
    "ThresholdResult",
    "RobustnessReport",
    "AveragedReport",
    "ExaResult",
    "MEASURES",
    "HIGHER_IS_BETTER",
    "run_trace",
    "measure_terms",
    "measure",
    "r1",
    "r2",
    "r1e",
    "r3",
    "r3e",
    "r6",
    "r7",
    "r8",
    "r9",
    "r10",
    "r12",
    "r15",
    "detect_threshold",
    "r14",
    "evaluate",
    "averaged",
    "exa_measure",
    "average_ranks",
    "rank_table",
    "format_trace_csv",
    "parse_trace_csv",
    "write_trace_csv",
    "read_trace_csv",
]

DEFAULT_P = 0.05

# measure id -> (target kinds it applies to, needs driver counts, needs adjacency rank)
MEASURES = {
    "r1": (("node",), False, False),
    "r2": (("node",), False, False),
    "r1e": (("edge",), False, False),
    "r3": (("node",), True, False),
    "r3e": (("edge",), True, False),
    "r6": (("node", "edge"), False, False),
    "r7": (("node", "edge"), False, False),
    "r8": (("node", "edge"), False, True),
    "r9": (("node", "edge"), True, False),
    "r10": (("node", "edge"), True, False),
    "r15": (("node", "edge"), False, False),
    "r15n": (("node", "edge"), False, False),
}

HIGHER_IS_BETTER = {
    "r1": True,
    "r2": True,
    "r1e": True,
    "r3": False,
    "r3e": False,
    "r6": True,
    "r7": True,
    "r8": True,
    "r9": True,
    "r10": True,
    "r12": True,
    "r15": False,
    "r15n": False,
}


@dataclass
class AttackTrace:
    """Removal order plus per-step functionals (arrays of length ``K + 1``)."""

    sequence: np.ndarray
    kind: str
    n: int
    m: int
    n_l: np.ndarray
    n_ncc: np.ndarray
    cnp_exact: np.ndarray
    cnp_sq: np.ndarray
    n_alive: np.ndarray
    n_d: np.ndarray | None = None
    rank_a: np.ndarray | None = None
    driver: str | None = None
    strategy: str | None = None
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_steps(self):
        """Number of removals ``K``."""
        return len(self.n_l) - 1

    @property
    def delta(self):
        """Removed fraction after each step."""
        total = self.n if self.kind == "node" else self.m
        return np.arange(self.n_steps + 1) / max(total, 1)

    def cd_last(self):
        """Last step index in the complete-disconnection sum."""
        return self.n - 1 if self.kind == "node" else self.m

    def is_complete(self):
        return self.n_steps >= self.cd_last()


def _mit_counts(graph, seq, kind, n_alive):
    """Matching-based driver counts after each prefix, warm-starting the matching."""
    adj = [list(a) for a in bipartite_split(graph)]
    size, ml, mr = hopcroft_karp(adj, graph.n_nodes)
    out = np.empty(len(seq) + 1, dtype=np.int64)
    out[0] = max(1, int(n_alive[0]) - size)
    edges = graph.edges.tolist()
    gone = np.zeros(graph.n_edges, bool)
    for i, t in enumerate(seq, start=1):
        arcs = [e for _, e in graph.incident(t)] if kind == "node" else [t]
        for e in arcs:
            if gone[e]:
                continue
            gone[e] = True
            u, v = edges[e]
            adj[u].remove(v)
            if ml[u] == v:
                ml[u] = -1
                mr[v] = -1
        size, ml, mr = hopcroft_karp(adj, graph.n_nodes, ml, mr)
        out[i] = max(1, int(n_alive[i]) - size)
    return out


def _rank_counts(graph, seq, kind):
    a = graph.adjacency_matrix()
    alive = np.ones(graph.n_nodes, bool)
    out = np.empty(len(seq) + 1, dtype=np.int64)
    out[0] = matrix_rank(a)
    edges = graph.edges
    for i, t in enumerate(seq, start=1):
        if kind == "node":
            alive[t] = False
        else:
            u, v = edges[t]
            a[u, v] = 0.0
            if not graph.directed:
                a[v, u] = 0.0
        out[i] = matrix_rank(a[np.ix_(alive, alive)])
    return out


def _resolve_driver(graph, driver):
    if driver == "auto":
        return "mit" if graph.directed else "ect"
    if driver not in ("mit", "ect"):
        raise ParameterError(f"driver engine must be 'mit', 'ect' or 'auto', got {driver!r}")
    if driver == "mit" and not graph.directed:
        raise GraphKindError("matching-based driver nodes need a directed graph")
    return driver


def trace_from_sequence(graph, sequence, kind="node", drivers=None, rank=False, strategy=None, seed=None):
    """Build a trace by replaying a fixed removal order.

    Parameters
    ----------
    drivers : {"mit", "ect", "auto"} or None
        Driver-count engine; ``None`` skips controllability.
    rank : bool
        Record the surviving adjacency rank (needed for R8).
    """
    seq = [int(t) for t in sequence]
    prof = removal_profile(graph, seq, kind)
    trace = AttackTrace(
        sequence=np.asarray(seq, dtype=np.int64),
        kind=kind,
        n=graph.n_nodes,
        m=graph.n_edges,
        n_l=prof["n_l"],
        n_ncc=prof["n_ncc"],
        cnp_exact=prof["cnp_exact"],
        cnp_sq=prof["cnp_sq"],
        n_alive=prof["n_alive"],
        strategy=strategy,
        seed=seed,
    )
    ranks = None
    if drivers is not None:
        engine = _resolve_driver(graph, drivers)
        trace.driver = engine
        if engine == "mit":
            trace.n_d = _mit_counts(graph, seq, kind, trace.n_alive)
        else:
            ranks = _rank_counts(graph, seq, kind)
            trace.n_d = np.maximum(1, trace.n_alive - ranks)
    if rank:
        trace.rank_a = ranks if ranks is not None else _rank_counts(graph, seq, kind)
    return trace


def run_trace(graph, plan, drivers=None, rank=False, stop_h=None, stop_td=False, p=DEFAULT_P):
    """Simulate ``plan`` on ``graph`` and record every step.

    Parameters
    ----------
    stop_h : int, optional
        Stop after ``H`` removals (truncated attack).
    stop_td : bool
        Cut the trace at the detected destruction threshold.
    """
    if stop_h is not None and stop_h < 0:
        raise ParameterError("stop_h must be >= 0")
    seq = attack_sequence(plan, graph, limit=stop_h)
    trace = trace_from_sequence(graph, seq, plan.target, drivers, rank, plan.strategy, plan.seed)
    trace.meta["stop_h"] = stop_h
    if stop_td:
        res = detect_threshold(trace, p)
        trace = _truncate(trace, res.T)
        trace.meta["stop_td"] = res.T
    return trace


def _truncate(trace, last):
    def cut(a):
        return None if a is None else a[: last + 1].copy()

    return AttackTrace(
        sequence=trace.sequence[:last].copy(),
        kind=trace.kind,
        n=trace.n,
        m=trace.m,
        n_l=cut(trace.n_l),
        n_ncc=cut(trace.n_ncc),
        cnp_exact=cut(trace.cnp_exact),
        cnp_sq=cut(trace.cnp_sq),
        n_alive=cut(trace.n_alive),
        n_d=cut(trace.n_d),
        rank_a=cut(trace.rank_a),
        driver=trace.driver,
        strategy=trace.strategy,
        seed=trace.seed,
        meta=dict(trace.meta),
    )


# -- per-step terms -------------------------------------------------------


def measure_terms(trace, name, denominator="alive"):
    """Per-step term ``f(i)`` whose mean over a step range gives measure ``name``.

    ``denominator`` picks ``N'`` in the controllability terms: the
    surviving node count (``"alive"``) or the original size (``"total"``).
    """
    if name not in MEASURES:
        raise ParameterError(f"unknown measure {name!r}")
    kinds, needs_nd, needs_rank = MEASURES[name]
    if trace.kind not in kinds:
        raise ContractViolation(f"{name} is defined for {'/'.join(kinds)} attacks, not {trace.kind}")
    if needs_nd and trace.n_d is None:
        raise ContractViolation(f"{name} needs driver counts in the trace")
    if needs_rank and trace.rank_a is None:
        raise ContractViolation(f"{name} needs adjacency ranks in the trace")
    n = trace.n
    if denominator == "alive":
        n_prime = np.maximum(trace.n_alive, 1).astype(float)
    elif denominator == "total":
        n_prime = np.full(len(trace.n_alive), float(max(n, 1)))
    else:
        raise ParameterError("denominator must be 'alive' or 'total'")
    nf = float(max(n, 1))
    if name in ("r1", "r1e"):
        return trace.n_l / nf
    if name == "r2":
        return trace.n_l / np.maximum(trace.n_alive, 1)
    if name in ("r3", "r3e"):
        return trace.n_d / n_prime
    if name == "r6":
        pairs = n * (n - 1) / 2
        if pairs == 0:
            return np.zeros(len(trace.n_l))
        return trace.cnp_exact / pairs
    if name == "r7":
        return trace.cnp_sq / nf**2
    if name == "r8":
        return trace.rank_a / n_prime
    if name == "r9":
        return 1.0 - trace.n_d / n_prime
    if name == "r10":
        return (trace.n_l / nf) / (trace.n_d / n_prime)
    if name == "r15":
        return trace.n_ncc.astype(float)
    return trace.n_ncc / nf


def measure(trace, name, scheme="cd", T=None, denominator="alive", allow_truncated=False):
    """Value of measure ``name`` on ``trace``.

    ``scheme="cd"`` averages over the complete-disconnection range;
    ``scheme="td"`` averages over ``0..T``. A CD value on a trace that
    stops early needs ``allow_truncated``, which keeps the full-range
    normalization and sums only the recorded steps.
    """
    terms = measure_terms(trace, name, denominator)
    if scheme == "cd":
        last = trace.cd_last()
        if trace.n_steps < last:
            if not allow_truncated:
                raise ContractViolation(
                    f"trace has {trace.n_steps} steps but the full range needs {last}; pass allow_truncated"
                )
            return float(np.sum(terms)) / (last + 1)
        return float(np.mean(terms[: last + 1]))
    if scheme == "td":
        if T is None:
            T = detect_threshold(trace).T
        if not 0 <= T <= trace.n_steps:
            raise ContractViolation(f"threshold {T} outside 0..{trace.n_steps}")
        return float(np.mean(terms[: T + 1]))
    raise ParameterError(f"scheme must be 'cd' or 'td', got {scheme!r}")


def r1(trace, **kw):
    return measure(trace, "r1", **kw)


def r2(trace, **kw):
    return measure(trace, "r2", **kw)


def r1e(trace, **kw):
    return measure(trace, "r1e", **kw)


def r3(trace, **kw):
    return measure(trace, "r3", **kw)


def r3e(trace, **kw):
    return measure(trace, "r3e", **kw)


def r6(trace, **kw):
    return measure(trace, "r6", **kw)


def r7(trace, **kw):
    return measure(trace, "r7", **kw)


def r8(trace, **kw):
    return measure(trace, "r8", **kw)


def r9(trace, **kw):
    return measure(trace, "r9", **kw)


def r10(trace, **kw):
    return measure(trace, "r10", **kw)


def r15(trace, normalized=False, **kw):
    return measure(trace, "r15n" if normalized else "r15", **kw)


def r12(trace, H=None, functional="lcc"):
    """Truncated attack sum ``(1/N) sum_{h=1..H} f(h)`` with ``f = N_L/N``."""
    if functional != "lcc":
        raise ParameterError("only the largest-component functional is supported")
    H = trace.n_steps if H is None else H
    if not 0 <= H <= trace.n_steps:
        raise ContractViolation(f"H={H} outside 0..{trace.n_steps}")
    return float(np.sum(trace.n_l[1 : H + 1] / trace.n)) / trace.n


# -- destruction threshold ------------------------------------------------


@dataclass
class ThresholdResult:
    T: int
    p: float
    c: int
    mode: str
    D: np.ndarray
    detected: bool
    fallback_T: int

    def to_dict(self):
        return {"T": self.T, "p": self.p, "c": self.c, "mode": self.mode, "detected": self.detected}


def detect_threshold(trace, p=DEFAULT_P):
    """Turning point of the component-count curve ``D(i)``.

    Node attacks: ``T = i - c`` once ``D`` has dropped on ``c = max(1,
    floor(pN))`` successive steps ending at ``i``. Edge attacks: the same
    with ``c`` successive unchanged steps, counted only after ``D`` first
    rises. Without detection ``T`` is the last maximizer of ``D``.
    """
    if not 0 < p < 1:
        raise ParameterError("p must lie in (0, 1)")
    n = trace.n
    c = max(1, int(math.floor(p * n)))
    last = min(trace.n_steps, trace.cd_last())
    D = np.asarray(trace.n_ncc[: last + 1], dtype=np.int64)
    fallback = int(last - np.argmax(D[::-1])) if D.size else 0
    run = 0
    risen = False
    mode = "node-decrease" if trace.kind == "node" else "edge-stagnation"
    for i in range(1, D.size):
        if trace.kind == "node":
            hit = D[i] < D[i - 1]
        else:
            risen = risen or D[i] > D[i - 1]
            hit = risen and D[i] == D[i - 1]
        run = run + 1 if hit else 0
        if run == c:
            return ThresholdResult(i - c, p, c, mode, D, True, fallback)
    return ThresholdResult(fallback, p, c, mode, D, False, fallback)


def r14(trace, T=None, measures=("r1",), p=DEFAULT_P, denominator="alive"):
    """Threshold-truncated (TD) value of each measure."""
    if T is None:
        T = detect_threshold(trace, p).T
    return {name: measure(trace, name, "td", T, denominator) for name in measures}


# -- reports --------------------------------------------------------------


@dataclass
class RobustnessReport:
    values: dict
    threshold: ThresholdResult | None
    strategy: str | None = None
    seed: int | None = None
    net: str | None = None

    def to_dict(self):
        out = {k: dict(v) for k, v in self.values.items()}
        if self.threshold is not None:
            out["threshold"] = {"T": self.threshold.T, "p": self.threshold.p}
        out["strategy"] = self.strategy
        out["seed"] = self.seed
        out["net"] = self.net
        return out


def evaluate(trace, measures=("r1",), schemes=("cd", "td"), p=DEFAULT_P, denominator="alive", net=None):
    """Every requested measure under every requested scheme."""
    thr = detect_threshold(trace, p) if "td" in schemes else None
    allow = trace.meta.get("stop_h") is not None or "stop_td" in trace.meta
    values = {}
    for name in measures:
        row = {}
        for scheme in schemes:
            if scheme == "td":
                row["td"] = measure(trace, name, "td", thr.T, denominator)
            else:
                row["cd"] = measure(trace, name, "cd", denominator=denominator, allow_truncated=allow)
        values[name] = row
    return RobustnessReport(values, thr, trace.strategy, trace.seed, net)


@dataclass
class ExaResult:
    mean: float
    stderr: float
    count: int
    exact: bool


def _needs(name):
    _, needs_nd, needs_rank = MEASURES[name]
    return needs_nd, needs_rank


def exa_measure(graph, name, kind="node", drivers="auto", samples=None, seed=42, denominator="alive"):
    """Mean of a measure over every removal order (or a random sample of them)."""
    needs_nd, needs_rank = _needs(name)
    k = graph.n_nodes if kind == "node" else graph.n_edges
    vals = []
    for perm in enumerate_exa(k, samples, seed):
        tr = trace_from_sequence(graph, perm, kind, drivers if needs_nd else None, needs_rank)
        vals.append(measure(tr, name, "cd", denominator=denominator))
    vals = np.asarray(vals)
    exact = k <= 8
    stderr = 0.0 if exact or vals.size < 2 else float(vals.std(ddof=1) / math.sqrt(vals.size))
    return ExaResult(float(vals.mean()), stderr, int(vals.size), exact)


@dataclass
class AveragedReport:
    matrix: np.ndarray
    strategies: list
    r11: float
    per_strategy: dict


def cell_seed(seed, p, q):
    """Independent seed for repeat ``p`` of strategy ``q``."""
    return int(np.random.SeedSequence([int(seed), p, q]).generate_state(1, np.uint64)[0])


def averaged(graph, plans, name, P=1, seed=42, drivers="auto", scheme="cd", p=DEFAULT_P, denominator="alive"):
    """Mean measure over ``P`` repeats of each plan (R11)."""
    if P < 1 or not plans:
        raise ParameterError("need at least one repeat and one strategy")
    needs_nd, needs_rank = _needs(name)
    mat = np.zeros((P, len(plans)))
    for q, plan in enumerate(plans):
        for rep in range(P):
            s = cell_seed(seed, rep, q)
            if plan.strategy == "EXA":
                mat[rep, q] = exa_measure(graph, name, plan.target, drivers, plan.samples, s, denominator).mean
                continue
            cell = replace(plan, seed=s)
            tr = run_trace(graph, cell, drivers if needs_nd else None, needs_rank)
            T = detect_threshold(tr, p).T if scheme == "td" else None
            mat[rep, q] = measure(tr, name, scheme, T, denominator)
    names = [pl.strategy for pl in plans]
    per = {nm: float(mat[:, q].mean()) for q, nm in enumerate(names)}
    return AveragedReport(mat, names, float(mat.mean()), per)


# -- rank tables ----------------------------------------------------------


def average_ranks(values, higher_is_better=True, tol=1e-9):
    """Rank values best-first; tied values (within ``tol``) share the mean rank.

    ``None`` entries stay ``None`` and are skipped.
    """
    idx = [i for i, v in enumerate(values) if v is not None and not (isinstance(v, float) and math.isnan(v))]
    sign = -1.0 if higher_is_better else 1.0
    order = sorted(idx, key=lambda i: sign * values[i])
    ranks = [None] * len(values)
    pos = 0
    while pos < len(order):
        end = pos
        base = values[order[pos]]
        while end + 1 < len(order) and abs(values[order[end + 1]] - base) <= tol * max(1.0, abs(base)):
            end += 1
        r = (pos + 1 + end + 1) / 2
        for j in range(pos, end + 1):
            ranks[order[j]] = r
        pos = end + 1
    return ranks


def rank_table(nets, strategies, measures, drivers="auto", denominator="alive"):
    """Fractional rank rows for named 4-node-scale graphs.

    Parameters
    ----------
    nets : dict of name -> Graph
    strategies : iterable of str
        ``"EXA"``, ``"MDTA"`` or ``"MBTA"`` style ids.
    measures : iterable of str

    Returns
    -------
    list of dict
        One row per (strategy, measure) with ``values`` and ``ranks`` keyed by net name.
    """
    names = list(nets)
    rows = []
    for strat in strategies:
        plan = AttackPlan(strat, "node")
        for name in measures:
            needs_nd, needs_rank = _needs(name)
            vals = []
            for net in names:
                g = nets[net]
                if plan.strategy == "EXA":
                    vals.append(exa_measure(g, name, "node", drivers, denominator=denominator).mean)
                else:
                    tr = run_trace(g, plan, drivers if needs_nd else None, needs_rank)
                    vals.append(measure(tr, name, "cd", denominator=denominator))
            ranks = average_ranks(vals, HIGHER_IS_BETTER[name])
            rows.append(
                {
                    "strategy": plan.strategy,
                    "measure": name,
                    "values": dict(zip(names, vals)),
                    "ranks": dict(zip(names, ranks)),
                }
            )
    return rows


# -- trace CSV ------------------------------------------------------------

TRACE_COLUMNS = ("i", "delta", "n_L", "n_NCC", "n_D", "cnp_exact", "cnp_sq")


def format_trace_csv(trace, stride=1):
    """Trace as CSV text: a ``#`` metadata line, the header, one row per step."""
    if stride < 1:
        raise ParameterError("stride must be >= 1")
    buf = io.StringIO()
    meta = {"target": trace.kind, "n": trace.n, "m": trace.m}
    if trace.driver:
        meta["driver"] = trace.driver
    if trace.strategy:
        meta["strategy"] = trace.strategy
    if trace.seed is not None:
        meta["seed"] = trace.seed
    buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    buf.write(",".join(TRACE_COLUMNS) + "\n")
    delta = trace.delta
    steps = list(range(0, trace.n_steps + 1, stride))
    if steps[-1] != trace.n_steps:
        steps.append(trace.n_steps)
    for i in steps:
        nd = "" if trace.n_d is None else str(int(trace.n_d[i]))
        buf.write(
            f"{i},{delta[i]:.9g},{int(trace.n_l[i])},{int(trace.n_ncc[i])},{nd},"
            f"{int(trace.cnp_exact[i])},{int(trace.cnp_sq[i])}\n"
        )
    return buf.getvalue()


def parse_trace_csv(text, source=None):
    """Inverse of :func:`format_trace_csv` for unstrided traces."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    meta = {}
    body = []
    for ln in lines:
        if ln.startswith("#"):
            for tok in ln[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
        else:
            body.append(ln)
    where = source or "<trace>"
    if not body or tuple(body[0].split(",")) != TRACE_COLUMNS:
        raise ContractViolation(f"{where}: missing trace header {','.join(TRACE_COLUMNS)}")
    for key in ("target", "n", "m"):
        if key not in meta:
            raise ContractViolation(f"{where}: metadata line lacks {key}=")
    rows = [r.split(",") for r in body[1:]]
    if [int(r[0]) for r in rows] != list(range(len(rows))):
        raise ContractViolation(f"{where}: strided or reordered traces cannot be re-ingested")
    col = {name: [r[j] for r in rows] for j, name in enumerate(TRACE_COLUMNS)}
    n = int(meta["n"])
    kind = meta["target"]
    k = len(rows) - 1
    n_alive = np.arange(n, n - k - 1, -1) if kind == "node" else np.full(k + 1, n)
    n_d = None if any(v == "" for v in col["n_D"]) else np.array(col["n_D"], dtype=np.int64)
    return AttackTrace(
        sequence=np.full(k, -1, dtype=np.int64),
        kind=kind,
        n=n,
        m=int(meta["m"]),
        n_l=np.array(col["n_L"], dtype=np.int64),
        n_ncc=np.array(col["n_NCC"], dtype=np.int64),
        cnp_exact=np.array(col["cnp_exact"], dtype=np.int64),
        cnp_sq=np.array(col["cnp_sq"], dtype=np.int64),
        n_alive=n_alive.astype(np.int64),
        n_d=n_d,
        driver=meta.get("driver"),
        strategy=meta.get("strategy"),
        seed=int(meta["seed"]) if "seed" in meta else None,
    )


def write_trace_csv(trace, path, stride=1):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_trace_csv(trace, stride))


def read_trace_csv(path):
    with open(path, encoding="utf-8") as fh:
        return parse_trace_csv(fh.read(), source=str(path))
