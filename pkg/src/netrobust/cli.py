"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or malformed
input, infeasible parameters). Artifacts go to files or stdout; progress
goes to stderr.
"""

from __future__ import annotations

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import glob
import hashlib
import io
import json
import logging
import os
from pathlib import Path
import sys
import time

import numpy as np

from . import __version__
from .apriori import APRIORI_FIELDS, apriori
from .attacks import STRATEGY_ALIASES, AttackPlan, enumerate_exa
from .engine import (
    DEFAULT_P,
    MEASURES,
    average_ranks,
    cell_seed,
    detect_threshold,
    evaluate,
    format_trace_csv,
    measure,
    rank_table,
    run_trace,
    trace_from_sequence,
)
from .exceptions import RobustnessError
from .generators import (
    CANONICAL_DIRECTED,
    CANONICAL_UNDIRECTED,
    MODELS,
    RECONSTRUCTED_DIRECTED,
    GeneratorConfig,
    canonical4,
    generate,
)
from .graph import format_edgelist, read_edgelist
from .optimizer import OptimizeConfig, optimize

log = logging.getLogger("netrobust")

DEFAULT_SEED = 42
THREADS_ENV = "NETROBUST_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- helpers --------------------------------------------------------------


def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _strategy(name):
    key = name.lower()
    if key not in STRATEGY_ALIASES:
        raise UsageError(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGY_ALIASES)}")
    return STRATEGY_ALIASES[key]


def _measures(text):
    names = [m.lower() for m in _csv_list(text)]
    bad = [m for m in names if m not in MEASURES]
    if bad or not names:
        raise UsageError(f"unknown measures {bad}; expected from {', '.join(MEASURES)}")
    return names


def _threads(args):
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return 1


def _pmap(fn, items, threads):
    """Ordered map; runs in worker processes when ``threads > 1``."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _manifest(args, inputs, started):
    flags = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {
        "command": args.command,
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "inputs": {str(p): _digest(p) for p in inputs},
        "duration_s": round(time.perf_counter() - started, 6),
    }


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        _write(path, text)


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json(obj):
    def fix(x):
        if isinstance(x, dict):
            return {str(k): fix(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [fix(v) for v in x]
        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.floating):
            return float(x)
        if isinstance(x, np.ndarray):
            return fix(x.tolist())
        return x

    return json.dumps(fix(obj), indent=2, sort_keys=False) + "\n"


def _load(path, directed=None):
    if not os.path.exists(path):
        raise FileNotFoundError(f"{path}: no such file")
    return read_edgelist(path, directed=directed)


def _plan(args, strategy=None, seed=None):
    alpha = tuple(float(a) for a in _csv_list(args.alpha)) if getattr(args, "alpha", None) else (0.5, 0.5)
    return AttackPlan(
        strategy or _strategy(args.strategy),
        getattr(args, "target", "node"),
        not getattr(args, "static", False),
        args.seed if seed is None else seed,
        alpha,
        getattr(args, "samples", None),
        getattr(args, "tie", "smallest"),
        getattr(args, "degree_mode", "total"),
    )


def _driver_arg(args):
    d = getattr(args, "driver", "auto")
    return None if d == "none" else d


# -- subcommands ----------------------------------------------------------


def _params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = int(v)
        except ValueError:
            try:
                out[k] = float(v)
            except ValueError:
                out[k] = v
    return out


def cmd_gen(args, started):
    cfg = GeneratorConfig(args.model.upper(), args.n, args.k, args.directed, _params(args.param), args.seed)
    g = generate(cfg)
    _emit(format_edgelist(g), args.output)
    log.info("generated %s: n=%d m=%d", cfg.model, g.n_nodes, g.n_edges)
    return 0


def cmd_apriori(args, started):
    g = _load(args.file, _kind(args))
    rep = apriori(g).to_dict()
    if args.format == "json":
        rep["manifest"] = _manifest(args, [args.file], started)
        _emit(_json(rep), args.output)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rep))
        w.writerow([v if isinstance(v, str) else f"{v:.9g}" for v in rep.values()])
        _emit(buf.getvalue(), args.output)
    return 0


def _kind(args):
    if getattr(args, "directed", False):
        return True
    if getattr(args, "undirected", False):
        return False
    return None


def _exa_mean_csv(graph, plan, drivers):
    k = graph.n_nodes if plan.target == "node" else graph.n_edges
    cols = None
    count = 0
    first = None
    for perm in enumerate_exa(k, plan.samples, plan.seed):
        tr = trace_from_sequence(graph, perm, plan.target, drivers)
        first = first or tr
        stack = np.vstack([tr.n_l, tr.n_ncc, tr.n_d if tr.n_d is not None else tr.n_l * 0, tr.cnp_exact, tr.cnp_sq])
        cols = stack.astype(float) if cols is None else cols + stack
        count += 1
    cols /= count
    buf = io.StringIO()
    buf.write(f"# target={plan.target} n={graph.n_nodes} m={graph.n_edges} strategy=EXA orders={count}\n")
    buf.write("i,delta,n_L,n_NCC,n_D,cnp_exact,cnp_sq\n")
    for i, d in enumerate(first.delta):
        nd = f"{cols[2, i]:.9g}" if drivers else ""
        buf.write(f"{i},{d:.9g},{cols[0, i]:.9g},{cols[1, i]:.9g},{nd},{cols[3, i]:.9g},{cols[4, i]:.9g}\n")
    return buf.getvalue()


def cmd_attack(args, started):
    g = _load(args.file, _kind(args))
    plan = _plan(args)
    drivers = _driver_arg(args)
    if plan.strategy == "EXA":
        _emit(_exa_mean_csv(g, plan, drivers), args.output)
        return 0
    trace = run_trace(g, plan, drivers, stop_h=args.stop_h)
    _emit(format_trace_csv(trace, args.stride), args.output)
    log.info("attack %s: %d removals", plan.strategy, trace.n_steps)
    return 0


def _report_cell(job):
    graph, plan, measures, schemes, p, denominator, drivers, stop_h = job
    needs_nd = any(MEASURES[m][1] for m in measures)
    needs_rank = any(MEASURES[m][2] for m in measures)
    if plan.strategy == "EXA":
        k = graph.n_nodes if plan.target == "node" else graph.n_edges
        acc = {m: {s: [] for s in schemes} for m in measures}
        for perm in enumerate_exa(k, plan.samples, plan.seed):
            tr = trace_from_sequence(graph, perm, plan.target, drivers if needs_nd else None, needs_rank)
            rep = evaluate(tr, measures, schemes, p, denominator)
            for m in measures:
                for s in schemes:
                    acc[m][s].append(rep.values[m][s])
        return {m: {s: float(np.mean(v)) for s, v in row.items()} for m, row in acc.items()}, None, None
    tr = run_trace(graph, plan, drivers if needs_nd else None, needs_rank, stop_h=stop_h)
    rep = evaluate(tr, measures, schemes, p, denominator)
    return rep.values, rep.threshold, tr


def cmd_robustness(args, started):
    g = _load(args.file, _kind(args))
    measures = _measures(args.measures)
    schemes = [s.lower() for s in _csv_list(args.scheme)]
    if not schemes or any(s not in ("cd", "td") for s in schemes):
        raise UsageError("--scheme takes cd, td or cd,td")
    if args.repeats < 1:
        raise UsageError("--repeats must be >= 1")
    base = _plan(args)
    drivers = _driver_arg(args) or "auto"
    jobs = []
    for rep in range(args.repeats):
        seed = args.seed if args.repeats == 1 else cell_seed(args.seed, rep, 0)
        jobs.append((g, _plan(args, base.strategy, seed), measures, schemes, args.p, args.denominator, drivers, args.stop_h))
    results = _pmap(_report_cell, jobs, _threads(args))
    out = {}
    for m in measures:
        out[m] = {s: float(np.mean([r[0][m][s] for r in results])) for s in schemes}
    thr = results[0][1]
    if thr is not None:
        out["threshold"] = {"T": thr.T, "p": thr.p}
        if args.repeats > 1:
            out["threshold"]["T_repeats"] = [r[1].T for r in results]
    out["strategy"] = base.strategy
    out["target"] = base.target
    out["seed"] = args.seed
    out["repeats"] = args.repeats
    out["net"] = args.file
    out["manifest"] = _manifest(args, [args.file], started)
    _emit(_json(out), args.output)
    if args.trace:
        tr = results[0][2]
        if tr is None:
            _write(args.trace, _exa_mean_csv(g, base, drivers if any(MEASURES[m][1] for m in measures) else None))
        else:
            _write(args.trace, format_trace_csv(tr, args.stride))
    return 0


def _resolve_nets(spec):
    """Named graphs from a glob or the built-in 4-node sets."""
    if spec in ("canonical4-undirected", "canonical4"):
        return {k: canonical4(k, False) for k in CANONICAL_UNDIRECTED}
    if spec == "canonical4-directed":
        return {k: canonical4(k, True) for k in CANONICAL_DIRECTED}
    paths = sorted(glob.glob(spec))
    if not paths:
        raise FileNotFoundError(f"{spec}: no files match")
    return {Path(p).stem: read_edgelist(p) for p in paths}


def _table_csv(nets, rows, ranks, apriori_rows=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = list(nets)
    w.writerow(["strategy", "measure"] + names)
    for row in rows:
        cells = row["ranks"] if ranks else row["values"]
        w.writerow([row["strategy"], row["measure"]] + [_cell(cells[n]) for n in names])
    for row in apriori_rows or []:
        w.writerow(["apriori", row["measure"]] + [_cell(row["ranks" if ranks else "values"][n]) for n in names])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return "NA"
    if isinstance(v, float) and v == int(v) and abs(v) < 1e15:
        return f"{v:g}"
    return f"{v:.9g}"


def _apriori_rows(nets):
    reps = {k: apriori(g) for k, g in nets.items()}
    rows = []
    for field, label in APRIORI_FIELDS.items():
        vals = [getattr(reps[k], field) for k in nets]
        if all(v is None for v in vals):
            continue
        # lower effective resistance / betweenness load means more robust
        higher = field not in ("nb", "eb", "ls_er")
        ranks = average_ranks(vals, higher)
        rows.append({"measure": label, "values": dict(zip(nets, vals)), "ranks": dict(zip(nets, ranks))})
    return rows


def cmd_compare(args, started):
    nets = _resolve_nets(args.nets)
    strategies = [_strategy(s) for s in _csv_list(args.strategies)]
    measures = _measures(args.measures)
    rows = rank_table(nets, strategies, measures, args.driver if args.driver != "none" else "auto", args.denominator)
    extra = _apriori_rows(nets) if args.apriori else None
    _emit(_table_csv(nets, rows, args.ranks, extra), args.output)
    return 0


def cmd_threshold(args, started):
    g = _load(args.file, _kind(args))
    trace = run_trace(g, _plan(args))
    res = detect_threshold(trace, args.p)
    out = res.to_dict()
    out["fallback_T"] = res.fallback_T
    out["D"] = res.D.tolist()
    out["strategy"] = trace.strategy
    out["net"] = args.file
    out["manifest"] = _manifest(args, [args.file], started)
    _emit(_json(out), args.output)
    return 0


def cmd_optimize(args, started):
    g = _load(args.file, _kind(args))
    cfg = OptimizeConfig(
        measure=args.measure.lower(),
        strategy=_strategy(args.strategy),
        algorithm=args.algo,
        preserve=args.preserve,
        iterations=args.iters,
        sa_temp=args.sa_temp,
        sa_cool=args.sa_cool,
        keep_connected=args.keep_connected,
        seed=args.seed,
    )
    best, entries = optimize(g, cfg)
    _emit(format_edgelist(best), args.output)
    if args.log:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "value", "accepted", "best", "swap"])
        for e in entries:
            swap = "" if e.swap is None else ";".join("-".join(map(str, x)) if x else "" for x in e.swap)
            w.writerow([e.iteration, "" if e.value is None else f"{e.value:.9g}", int(e.accepted), f"{e.best:.9g}", swap])
        _write(args.log, buf.getvalue())
    if entries:
        log.info("optimize: best %s = %.6f after %d iterations", cfg.measure, entries[-1].best, len(entries))
    return 0


# -- table reproduction ---------------------------------------------------

TABLE2_MODELS = ("ER", "SW-NW", "SW-WS", "RT", "RH", "EH", "BA", "SF", "OS", "QS")


def _table2_cell(job):
    model, n, k, seed, p = job
    und = generate(GeneratorConfig(model, n, k, False, {}, seed))
    tr = run_trace(und, AttackPlan("MDTA", "node", seed=seed))
    thr = detect_threshold(tr, p)
    dig = generate(GeneratorConfig(model, n, k, True, {}, seed))
    trd = run_trace(dig, AttackPlan("MDTA", "node", seed=seed), drivers="mit")
    thd = detect_threshold(trd, p)
    return {
        "model": model,
        "seed": seed,
        "r1_cd": measure(tr, "r1"),
        "r1_td": measure(tr, "r1", "td", thr.T),
        "T": thr.T,
        "r3_cd": measure(trd, "r3"),
        "r3_td": measure(trd, "r3", "td", thd.T),
        "T_directed": thd.T,
    }


def reproduce(outdir, scale="desk", threads=1, p=DEFAULT_P):
    """Write the rank tables and the simulation table into ``outdir``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    und = {k: canonical4(k, False) for k in CANONICAL_UNDIRECTED}
    rows = rank_table(und, ["EXA", "MDTA", "MBTA"], ["r1", "r15", "r3", "r7"])
    _write(out / "table4_ranks.csv", _table_csv(und, rows, True, _apriori_rows(und)))
    _write(out / "table4_values.csv", _table_csv(und, rows, False, _apriori_rows(und)))
    dig = {k: canonical4(k, True) for k in CANONICAL_DIRECTED}
    rows3 = rank_table(dig, ["EXA", "MDTA", "MBTA"], ["r1", "r15", "r3", "r7"])
    _write(out / "table3_ranks.csv", _table_csv(dig, rows3, True, _apriori_rows(dig)))
    _write(out / "table3_values.csv", _table_csv(dig, rows3, False, _apriori_rows(dig)))
    _write(out / "table3_reconstructed.txt", "reconstructed directed topologies: " + ", ".join(RECONSTRUCTED_DIRECTED) + "\n")
    n, seeds = (500, 5) if scale == "desk" else (1000, 10)
    jobs = [(m, n, 10, s, p) for m in TABLE2_MODELS for s in range(seeds)]
    log.info("table 2: %d simulation cells at n=%d", len(jobs), n)
    cells = _pmap(_table2_cell, jobs, threads)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = ["r1_cd", "r1_td", "T", "r3_cd", "r3_td", "T_directed"]
    w.writerow(["model", "n", "seeds"] + keys)
    for m in TABLE2_MODELS:
        sel = [c for c in cells if c["model"] == m]
        w.writerow([m, n, len(sel)] + [f"{np.mean([c[k] for c in sel]):.6g}" for k in keys])
    _write(out / "table2.csv", buf.getvalue())
    return sorted(str(p) for p in out.iterdir())


def cmd_reproduce(args, started):
    files = reproduce(args.output, args.scale, _threads(args), args.p)
    for f in files:
        log.info("wrote %s", f)
    return 0


# -- parser ---------------------------------------------------------------


def _add_kind(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--directed", action="store_true", help="treat a headerless edge list as directed")
    g.add_argument("--undirected", action="store_true", help="treat a headerless edge list as undirected")


def _add_attack_flags(p, default_strategy="mdta"):
    p.add_argument("--strategy", default=default_strategy, help=f"one of {', '.join(STRATEGY_ALIASES)}")
    p.add_argument("--target", choices=("node", "edge"), default="node")
    p.add_argument("--alpha", help="WEIGHTED_PROB weights for degree,betweenness (e.g. 0.5,0.5)")
    p.add_argument("--static", action="store_true", help="rank by initial scores instead of recomputing")
    p.add_argument("--tie", choices=("smallest", "random"), default="smallest")
    p.add_argument("--degree-mode", choices=("total", "out", "in"), default="total")
    p.add_argument("--samples", type=int, help="Monte Carlo orders for EXA beyond 8 objects")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser():
    parser = _Parser(prog="netrobust", description="Attack-simulation robustness toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    parser.add_argument("--threads", type=int, help=f"worker processes (default ${THREADS_ENV} or 1)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a synthetic network")
    p.add_argument("--model", required=True, type=str.upper, choices=MODELS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True, help="mean total degree")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--param", action="append", metavar="KEY=VAL", help="model parameter (repeatable)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("apriori", help="one-shot robustness indicators")
    p.add_argument("file")
    _add_kind(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_apriori)

    p = sub.add_parser("attack", help="simulate one attack and write its trace")
    p.add_argument("file")
    _add_kind(p)
    _add_attack_flags(p)
    p.add_argument("--driver", choices=("auto", "mit", "ect", "none"), default="none")
    p.add_argument("--stop-h", type=int, help="stop after H removals")
    p.add_argument("--stride", type=int, default=1, help="write every k-th row")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("robustness", help="robustness measures under CD and TD schemes")
    p.add_argument("file")
    _add_kind(p)
    _add_attack_flags(p)
    p.add_argument("--measures", default="r1", help=f"comma list from {', '.join(MEASURES)}")
    p.add_argument("--scheme", default="cd,td")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--stop-h", type=int)
    p.add_argument("--p", type=float, default=DEFAULT_P, help="threshold detection parameter")
    p.add_argument("--denominator", choices=("alive", "total"), default="alive")
    p.add_argument("--driver", choices=("auto", "mit", "ect"), default="auto")
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--trace")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("compare", help="rank several networks")
    p.add_argument("--nets", required=True, help="glob of edge lists, or canonical4-undirected / canonical4-directed")
    p.add_argument("--strategies", default="exa,mdta,mbta")
    p.add_argument("--measures", default="r1,r15,r3,r7")
    p.add_argument("--ranks", action="store_true", help="write fractional ranks instead of values")
    p.add_argument("--apriori", action="store_true", help="append a-priori indicator rows")
    p.add_argument("--driver", choices=("auto", "mit", "ect"), default="auto")
    p.add_argument("--denominator", choices=("alive", "total"), default="alive")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("threshold", help="destruction threshold from the component-count curve")
    p.add_argument("file")
    _add_kind(p)
    _add_attack_flags(p)
    p.add_argument("--p", type=float, default=DEFAULT_P)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("optimize", help="rewire for robustness")
    p.add_argument("file")
    _add_kind(p)
    p.add_argument("--measure", default="r1")
    p.add_argument("--strategy", default="mdta")
    p.add_argument("--algo", choices=("hc", "sa"), default="hc")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--sa-temp", type=float, default=0.01)
    p.add_argument("--sa-cool", type=float, default=0.995)
    p.add_argument("--preserve", choices=("degrees", "avg", "none"), default="degrees")
    p.add_argument("--keep-connected", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-o", "--output")
    p.add_argument("--log")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("reproduce", help="regenerate the rank and simulation tables")
    p.add_argument("--scale", choices=("desk", "paper"), default="desk")
    p.add_argument("--p", type=float, default=DEFAULT_P)
    p.add_argument("-o", "--output", default="tables")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    logging.basicConfig(format="netrobust: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("netrobust: a subcommand is required (see --help)")
        log.setLevel(logging.INFO if args.verbose else logging.WARNING)
        return args.func(args, time.perf_counter())
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (OSError, RobustnessError, ValueError) as exc:
        print(f"netrobust: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
