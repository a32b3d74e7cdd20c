"""Acceptance suite: one PASS/FAIL line per primary criterion.

Lines are printed with capture disabled so they appear in ``pytest -v``
output. Tolerances and runtime budgets are pinned below.
"""

from fractions import Fraction
import time

import numpy as np
import pytest

from netrobust import Graph
from netrobust.apriori import spectral
from netrobust.attacks import AttackPlan
from netrobust.engine import (
    MEASURES,
    average_ranks,
    detect_threshold,
    exa_measure,
    measure,
    rank_table,
    run_trace,
    trace_from_sequence,
    HIGHER_IS_BETTER,
)
from netrobust.functional import driver_nodes_ect, driver_nodes_mit
from netrobust.generators import GeneratorConfig, canonical4, generate
from netrobust.graph import components
from netrobust.optimizer import OptimizeConfig, objective, optimize

from oracles import brute_matching, cofactor_tree_count, exact_spectrum_k4, fraction_rank, naive_r1_over_orders

UNDIRECTED = ("FUL", "LOP", "STR", "CTS", "CHA", "ISO")
DIRECTED = ("FUL", "WKF", "LOP", "RIN", "CTS", "SSO", "SSI", "SSR", "DCH", "UCH", "DIS", "ISO")
UNAMBIGUOUS = ("FUL", "LOP", "SSO", "SSI", "DCH", "ISO")

# published rank rows, columns in UNDIRECTED order
TABLE_IV = {
    ("EXA", "r1"): [1, 2, 4.5, 3, 4.5, 6],
    ("EXA", "r15"): [1, 2, 4.5, 3, 4.5, 6],
    ("EXA", "r3"): [1, 4, 5, 2, 3, 6],
    ("EXA", "r7"): [1, 2, 4, 3, 5, 6],
    ("MDTA", "r1"): [1, 2, 5, 3.5, 3.5, 6],
    ("MDTA", "r15"): [1, 2, 5, 3.5, 3.5, 6],
    ("MDTA", "r3"): [1, 4, 5, 2.5, 2.5, 6],
    ("MDTA", "r7"): [1, 2, 5, 3.5, 3.5, 6],
    ("MBTA", "r1"): [1, 2.5, 5, 2.5, 4, 6],
    ("MBTA", "r15"): [1, 2.5, 5, 2.5, 4, 6],
    ("MBTA", "r3"): [1.5, 4, 5, 1.5, 3, 6],
    ("MBTA", "r7"): [1, 2, 5, 3, 4, 6],
}

# published EXA rank rows, columns in DIRECTED order
TABLE_III_EXA = {
    "r1": [1.5, 1.5, 3.5, 3.5, 5, 8, 8, 8, 8, 8, 11, 12],
    "r15": [1.5, 1.5, 3.5, 3.5, 5, 8, 8, 8, 8, 8, 11, 12],
    "r3": [1.5, 1.5, 3, 4.5, 4.5, 10.5, 10.5, 8, 6, 9, 7, 12],
    "r7": [1.5, 1.5, 3.5, 3.5, 5, 7, 7, 7, 9.5, 9.5, 11, 12],
}

EXA_R1_EXPECTED = {
    "FUL": Fraction(5, 8),
    "LOP": Fraction(29, 48),
    "STR": Fraction(9, 16),
    "CTS": Fraction(113, 192),
    "CHA": Fraction(9, 16),
    "ISO": Fraction(1, 4),
}

# published node-MDTA connectivity values and thresholds at N=1000, <k>=10
TABLE_II = {"ER": (0.476, 891), "BA": (0.418, 782), "SF": (0.205, 545)}

# mean R1 gain floor pinned from first-implementation runs (observed mean 0.0787, min 0.0595)
OPTIMIZER_FLOOR = 0.07


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\nACCEPTANCE {status} {name}: {detail}")
        return ok

    return emit


def test_table_iv_exact(report):
    nets = {n: canonical4(n) for n in UNDIRECTED}
    t0 = time.perf_counter()
    rows = rank_table(nets, ["EXA", "MDTA", "MBTA"], ["r1", "r15", "r3", "r7"], drivers="ect")
    elapsed = time.perf_counter() - t0
    got = {(r["strategy"], r["measure"]): [r["ranks"][n] for n in UNDIRECTED] for r in rows}
    bad = [k for k in TABLE_IV if got[k] != TABLE_IV[k]]
    ok = not bad and elapsed < 1.0
    report("table-iv", ok, f"{12 - len(bad)}/12 rows exact, {elapsed:.3f}s (budget 1s)")
    assert not bad, {k: (got[k], TABLE_IV[k]) for k in bad}
    assert elapsed < 1.0


def test_exa_value_oracle(report):
    worst = 0.0
    t0 = time.perf_counter()
    values = {n: exa_measure(canonical4(n), "r1").mean for n in UNDIRECTED}
    elapsed = time.perf_counter() - t0
    for name in UNDIRECTED:
        g = canonical4(name)
        ref = naive_r1_over_orders(4, g.edge_list())
        assert ref == EXA_R1_EXPECTED[name]
        worst = max(worst, abs(values[name] - float(ref)))
    ok = worst <= 1e-12 and elapsed < 1.0
    report("exa-oracle", ok, f"max |err| {worst:.2e} (tol 1e-12), {elapsed:.3f}s (budget 1s)")
    assert worst <= 1e-12
    assert elapsed < 1.0


def _subset_ranks(ranks, names):
    # a smaller published rank means more robust, so rank by -rank
    return average_ranks([-ranks[DIRECTED.index(n)] for n in names], True)


def test_table_iii_subset(report):
    nets = {n: canonical4(n, directed=True) for n in DIRECTED}
    rows = rank_table(nets, ["EXA"], ["r1", "r15", "r3", "r7"], drivers="mit")
    failures, notes = [], []
    for row in rows:
        name = row["measure"]
        vals = [row["values"][n] for n in UNAMBIGUOUS]
        mine = average_ranks(vals, HIGHER_IS_BETTER[name])
        published = _subset_ranks(TABLE_III_EXA[name], UNAMBIGUOUS)
        if mine != published:
            failures.append((name, mine, published))
        full = [row["ranks"][n] for n in DIRECTED]
        off = [n for n, a, b in zip(DIRECTED, full, TABLE_III_EXA[name]) if a != b]
        if off:
            notes.append(f"{name}: {','.join(off)}")
    detail = "subset order exact on r1,r15,r3,r7" if not failures else f"mismatch {failures}"
    detail += f"; full 12-net rank differences (reported only): {'; '.join(notes) or 'none'}"
    report("table-iii-subset", not failures, detail)
    assert not failures


def _table_ii_cell(model, seed):
    g = generate(GeneratorConfig(model, 1000, 10, seed=seed))
    tr = run_trace(g, AttackPlan("MDTA"))
    return measure(tr, "r1"), detect_threshold(tr).T


def test_table_ii_statistical(report, request):
    if not request.config.getoption("--runslow"):
        report("table-ii", None, "not run; long-running and opt-in via --runslow")
        pytest.skip("long-running; pass --runslow")
    seeds = range(5)
    lines, ok = [], True
    t0 = time.perf_counter()
    for model, (r_ref, t_ref) in TABLE_II.items():
        cells = [_table_ii_cell(model, s) for s in seeds]
        r_mean = float(np.mean([c[0] for c in cells]))
        t_mean = float(np.mean([c[1] for c in cells]))
        r_ok = abs(r_mean - r_ref) <= 0.03
        t_ok = abs(t_mean - t_ref) <= 0.05 * t_ref
        ok = ok and r_ok and t_ok
        lines.append(f"{model} R1 {r_mean:.3f} vs {r_ref} T {t_mean:.0f} vs {t_ref}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed <= 1800
    report("table-ii", ok, "; ".join(lines) + f"; {elapsed:.0f}s (budget 1800s)")
    assert ok


def _alive_edge_count(graph, seq, T):
    mask = graph.mask()
    for v in seq[:T]:
        mask.remove_node(int(v))
    return int(mask.alive_edges().size)


def test_threshold_semantics(report):
    graphs = [canonical4(n) for n in UNDIRECTED]
    rng = np.random.default_rng(2024)
    for s in range(50):
        n = int(rng.integers(10, 201))
        k = float(rng.integers(2, 9))
        graphs.append(generate(GeneratorConfig("ER", n, k, seed=s)))
    bad = 0
    for g in graphs:
        tr = run_trace(g, AttackPlan("MDTA"))
        T = detect_threshold(tr).T
        bad += _alive_edge_count(g, tr.sequence, T) != 0
    report("threshold-semantics", bad == 0, f"{len(graphs) - bad}/{len(graphs)} graphs edge-free at T")
    assert bad == 0


def test_controllability_oracle(report):
    rng = np.random.default_rng(7)
    mit_bad = ect_bad = 0
    for _ in range(200):
        n = int(rng.integers(1, 7))
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < rng.random()]
        g = Graph(n, arcs, directed=True)
        mit_bad += driver_nodes_mit(g) != max(1, n - brute_matching(n, arcs))
    for _ in range(200):
        n = int(rng.integers(1, 21))
        directed = bool(rng.random() < 0.5)
        p = rng.random()
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
        g = Graph(n, [e for e in pairs if rng.random() < p], directed=directed)
        ref = fraction_rank(g.adjacency_matrix(dtype=np.int64).tolist() if directed else _sym(g))
        ect_bad += driver_nodes_ect(g) != max(1, n - ref)
    ok = mit_bad == 0 and ect_bad == 0
    report("controllability-oracle", ok, f"MIT {200 - mit_bad}/200, ECT {200 - ect_bad}/200 exact")
    assert ok


def _sym(g):
    a = g.adjacency_matrix(dtype=np.int64)
    return (a + a.T).tolist()


def _random_connected(rng, n):
    edges = {(int(rng.integers(v)), v) for v in range(1, n)}
    p = rng.random()
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    perm = rng.permutation(n)
    return Graph(n, [(int(perm[u]), int(perm[v])) for u, v in edges])


def test_spectral_oracle(report):
    s = spectral(canonical4("FUL"))
    got = (s["as_sr"], s["as_sg"], s["as_nc"], s["ls_ac"], s["ls_ns"], s["ls_er"])
    k4_err = max(abs(a - b) for a, b in zip(got, exact_spectrum_k4()))
    rng = np.random.default_rng(11)
    bad = 0
    for _ in range(100):
        n = int(rng.integers(2, 11))
        g = _random_connected(rng, n)
        assert components(g).count == 1
        ref = cofactor_tree_count(n, g.edge_list())
        out = spectral(g)
        bad += out["ls_ns_exact"] != ref or round(out["ls_ns"]) != ref
    ok = k4_err <= 1e-8 and bad == 0
    report("spectral-oracle", ok, f"K4 max |err| {k4_err:.1e} (tol 1e-8), tree counts {100 - bad}/100")
    assert ok


def test_algebraic_identities(report):
    rng = np.random.default_rng(99)
    worst_sum = worst_td = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        directed = bool(rng.random() < 0.5)
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
        p = rng.random()
        g = Graph(n, [e for e in pairs if rng.random() < p], directed=directed)
        kind = "edge" if g.n_edges and rng.random() < 0.3 else "node"
        total = n if kind == "node" else g.n_edges
        tr = trace_from_sequence(g, rng.permutation(total), kind, drivers="mit" if directed else "ect", rank=True)
        if kind == "node":
            worst_sum = max(worst_sum, abs(measure(tr, "r9") + measure(tr, "r3") - 1.0))
        for name, (kinds, _, _) in MEASURES.items():
            if kind in kinds:
                worst_td = max(worst_td, abs(measure(tr, name, "td", tr.cd_last()) - measure(tr, name, "cd")))
    ok = worst_sum <= 1e-12 and worst_td <= 1e-12
    report("algebraic-identities", ok, f"|R9+R3-1| {worst_sum:.1e}, |TD(K)-CD| {worst_td:.1e} (tol 1e-12)")
    assert ok


def test_optimizer_regression(report):
    gains, preserved = [], True
    t0 = time.perf_counter()
    for s in range(10):
        g = generate(GeneratorConfig("ER", 100, 4, seed=s))
        cfg = OptimizeConfig(iterations=2000, seed=s)
        best, _ = optimize(g, cfg)
        preserved &= np.array_equal(best.degrees(), g.degrees())
        gains.append(objective(best, cfg) - objective(g, cfg))
    elapsed = time.perf_counter() - t0
    mean_gain = float(np.mean(gains))
    ok = preserved and mean_gain > OPTIMIZER_FLOOR and elapsed < 120
    report(
        "optimizer-regression",
        ok,
        f"mean R1 gain {mean_gain:.4f} (floor {OPTIMIZER_FLOOR}), degrees preserved {preserved}, {elapsed:.1f}s (budget 120s)",
    )
    assert ok
