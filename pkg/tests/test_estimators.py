import numpy as np
import pytest
from sklearn.base import clone

from netrobust import Graph
from netrobust.estimators import AprioriTransformer, RewiringOptimizer, RobustnessEvaluator
from netrobust.exceptions import ContractViolation
from netrobust.generators import canonical4


def test_evaluator_fit_transform():
    est = RobustnessEvaluator(measures=("r1", "r15"), schemes=("cd",))
    est.fit(canonical4("FUL"))
    assert est.report_.values["r1"]["cd"] == pytest.approx(0.625)
    out = est.transform([canonical4("FUL"), canonical4("STR")])
    assert out.shape == (2, 2)
    assert out[1, 0] == pytest.approx(0.4375)
    assert list(est.get_feature_names_out()) == ["r1_cd", "r15_cd"]


def test_evaluator_params_and_clone():
    est = RobustnessEvaluator(strategy="MBTA", p=0.1)
    params = est.get_params()
    assert params["strategy"] == "MBTA" and params["p"] == 0.1
    twin = clone(est)
    assert twin.get_params() == params and not hasattr(twin, "report_")


def test_evaluator_rejects_non_graphs():
    with pytest.raises(ContractViolation):
        RobustnessEvaluator().fit([np.eye(3)])
    with pytest.raises(ContractViolation):
        RobustnessEvaluator(measures=("rx",)).fit(canonical4("FUL"))


def test_apriori_transformer_marks_na():
    tr = AprioriTransformer(fields=("eff", "nb", "ls_er")).fit(canonical4("ISO"))
    out = tr.transform([canonical4("FUL"), canonical4("ISO")])
    assert out[0].tolist() == pytest.approx([1.0, 0.0, 3.0])
    assert out[1, 0] == 0.0 and np.isnan(out[1, 1]) and np.isnan(out[1, 2])
    with pytest.raises(ContractViolation):
        AprioriTransformer(fields=("bogus",)).fit(canonical4("FUL"))


def test_rewiring_optimizer():
    g = Graph(8, [(i, (i + 1) % 8) for i in range(8)] + [(0, 4), (2, 6)])
    opt = clone(RewiringOptimizer(iterations=30, seed=1)).fit(g)
    assert np.array_equal(opt.best_graph_.degrees(), g.degrees())
    assert opt.best_value_ == opt.log_[-1].best
    assert opt.transform() is opt.best_graph_
