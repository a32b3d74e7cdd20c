"""scikit-learn style wrappers.

Inputs are :class:`~netrobust.graph.Graph` objects (or sequences of them),
so these estimators compose with ``Pipeline`` only at the graph level;
``transform`` produces one numeric row per graph.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .apriori import APRIORI_FIELDS, apriori
from .attacks import AttackPlan
from .engine import MEASURES, detect_threshold, evaluate, run_trace
from .exceptions import ContractViolation
from .graph import Graph
from .optimizer import OptimizeConfig, optimize

__all__ = ["check_graph", "check_graphs", "RobustnessEvaluator", "AprioriTransformer", "RewiringOptimizer"]


def check_graph(graph):
    """Raise unless ``graph`` is a :class:`Graph`; return it unchanged."""
    if not isinstance(graph, Graph):
        raise ContractViolation(f"expected a Graph, got {type(graph).__name__}")
    return graph


def check_graphs(graphs):
    if isinstance(graphs, Graph):
        return [graphs]
    graphs = list(graphs)
    if not graphs:
        raise ContractViolation("need at least one graph")
    return [check_graph(g) for g in graphs]


def _uses_drivers(measures):
    return any(MEASURES[m][1] for m in measures)


def _uses_rank(measures):
    return any(MEASURES[m][2] for m in measures)


class RobustnessEvaluator(BaseEstimator, TransformerMixin):
    """Attack simulation plus a-posteriori measures.

    ``fit(graph)`` runs one attack and stores ``trace_``, ``threshold_`` and
    ``report_``. ``transform(graphs)`` returns an array of shape
    ``(n_graphs, n_measures * n_schemes)`` ordered measure-major.
    """

    def __init__(
        self,
        strategy="MDTA",
        target="node",
        measures=("r1",),
        schemes=("cd", "td"),
        adaptive=True,
        p=0.05,
        denominator="alive",
        seed=42,
    ):
        self.strategy = strategy
        self.target = target
        self.measures = measures
        self.schemes = schemes
        self.adaptive = adaptive
        self.p = p
        self.denominator = denominator
        self.seed = seed

    def _plan(self):
        return AttackPlan(self.strategy, self.target, self.adaptive, self.seed)

    def _report(self, graph):
        measures = tuple(self.measures)
        for m in measures:
            if m not in MEASURES:
                raise ContractViolation(f"unknown measure {m!r}")
        drivers = "auto" if _uses_drivers(measures) else None
        trace = run_trace(graph, self._plan(), drivers, _uses_rank(measures))
        return trace, evaluate(trace, measures, tuple(self.schemes), self.p, self.denominator)

    def fit(self, X, y=None):
        graph = check_graphs(X)[0]
        self.trace_, self.report_ = self._report(graph)
        self.threshold_ = detect_threshold(self.trace_, self.p)
        return self

    def _row(self, report):
        return [report.values[m][s] for m in self.measures for s in self.schemes]

    def transform(self, X):
        check_is_fitted(self, "report_")
        return np.array([self._row(self._report(g)[1]) for g in check_graphs(X)])

    def get_feature_names_out(self, input_features=None):
        return np.array([f"{m}_{s}" for m in self.measures for s in self.schemes], dtype=object)


class AprioriTransformer(BaseEstimator, TransformerMixin):
    """One-shot indicators as features; NA fields become ``nan``."""

    def __init__(self, fields=tuple(APRIORI_FIELDS), method="auto"):
        self.fields = fields
        self.method = method

    def fit(self, X, y=None):
        check_graphs(X)
        for f in self.fields:
            if f not in APRIORI_FIELDS:
                raise ContractViolation(f"unknown a-priori field {f!r}")
        self.n_features_out_ = len(self.fields)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        rows = []
        for g in check_graphs(X):
            rep = apriori(g, self.method)
            rows.append([np.nan if getattr(rep, f) is None else float(getattr(rep, f)) for f in self.fields])
        return np.array(rows)

    def get_feature_names_out(self, input_features=None):
        return np.array(list(self.fields), dtype=object)


class RewiringOptimizer(BaseEstimator):
    """Rewiring search; ``fit`` stores ``best_graph_``, ``log_`` and ``best_value_``."""

    def __init__(
        self,
        measure="r1",
        strategy="MDTA",
        algorithm="hc",
        preserve="degrees",
        iterations=1000,
        sa_temp=0.01,
        sa_cool=0.995,
        keep_connected=False,
        seed=42,
    ):
        self.measure = measure
        self.strategy = strategy
        self.algorithm = algorithm
        self.preserve = preserve
        self.iterations = iterations
        self.sa_temp = sa_temp
        self.sa_cool = sa_cool
        self.keep_connected = keep_connected
        self.seed = seed

    def fit(self, X, y=None):
        graph = check_graphs(X)[0]
        cfg = OptimizeConfig(
            measure=self.measure,
            strategy=self.strategy,
            algorithm=self.algorithm,
            preserve=self.preserve,
            iterations=self.iterations,
            sa_temp=self.sa_temp,
            sa_cool=self.sa_cool,
            keep_connected=self.keep_connected,
            seed=self.seed,
        )
        self.best_graph_, self.log_ = optimize(graph, cfg)
        self.best_value_ = self.log_[-1].best if self.log_ else None
        return self

    def transform(self, X=None):
        check_is_fitted(self, "best_graph_")
        return self.best_graph_
