import numpy as np
import pytest

from netrobust.exceptions import ParameterError
from netrobust.generators import (
    CANONICAL_DIRECTED,
    CANONICAL_UNDIRECTED,
    MODELS,
    GeneratorConfig,
    canonical4,
    generate,
)


def _simple(g):
    e = g.edge_list()
    keys = e if g.directed else [tuple(sorted(x)) for x in e]
    return all(u != v for u, v in e) and len(set(keys)) == len(keys)


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("directed", [False, True])
def test_models_are_simple_and_deterministic(model, directed):
    cfg = GeneratorConfig(model, 60, 6, directed=directed, seed=7)
    g = generate(cfg)
    assert g.n_nodes == 60 and g.directed == directed
    assert _simple(g)
    assert generate(cfg) == g
    assert abs(g.n_edges - cfg.target_edges()) <= 0.1 * cfg.target_edges()


def test_er_hits_target_exactly():
    g = generate(GeneratorConfig("ER", 1000, 10, seed=1))
    assert g.n_edges == 5000


def test_eh_is_regular():
    g = generate(GeneratorConfig("EH", 100, 10, seed=3))
    assert np.all(g.degrees() == 10)


def test_eh_rejects_odd_stub_count():
    with pytest.raises(ParameterError):
        generate(GeneratorConfig("EH", 11, 3))


def test_ba_is_heavy_tailed():
    hits = 0
    for s in range(100):
        g = generate(GeneratorConfig("BA", 100, 10, seed=s))
        hits += int(g.degrees().max() > 20)
    assert hits > 90


def test_bad_configs():
    with pytest.raises(ParameterError):
        generate(GeneratorConfig("XX", 10, 2))
    with pytest.raises(ParameterError):
        generate(GeneratorConfig("ER", 10, 10))
    with pytest.raises(ParameterError):
        generate(GeneratorConfig("ER", 0, 0))


def test_different_seeds_differ():
    a = generate(GeneratorConfig("ER", 50, 4, seed=1))
    b = generate(GeneratorConfig("ER", 50, 4, seed=2))
    assert a != b


def test_canonical_undirected():
    ful = canonical4("FUL")
    assert ful.n_edges == 6 and np.all(ful.degrees() == 3)
    cts = canonical4("CTS")
    assert cts.n_edges == 4 and sorted(cts.degrees().tolist()) == [1, 2, 2, 3]
    assert sorted(canonical4("STR").degrees().tolist()) == [1, 1, 1, 3]
    assert sorted(canonical4("CHA").degrees().tolist()) == [1, 1, 2, 2]
    assert np.all(canonical4("LOP").degrees() == 2)
    assert canonical4("ISO").n_edges == 0
    assert set(CANONICAL_UNDIRECTED) == {"FUL", "LOP", "STR", "CTS", "CHA", "ISO"}


def test_canonical_directed():
    dch = canonical4("DCH", directed=True)
    indeg, outdeg = dch.in_degrees(), dch.out_degrees()
    assert dch.n_edges == 3
    assert int(np.sum(indeg == 0)) == 1 and int(np.sum(outdeg == 0)) == 1
    assert canonical4("FUL", directed=True).n_edges == 12
    assert np.all(canonical4("LOP", directed=True).in_degrees() == 1)
    sso, ssi = canonical4("SSO", directed=True), canonical4("SSI", directed=True)
    assert sso.out_degrees()[0] == 3 and ssi.in_degrees()[0] == 3
    assert len(CANONICAL_DIRECTED) == 12
    for name in CANONICAL_DIRECTED:
        g = canonical4(name, directed=True)
        assert g.n_nodes == 4 and _simple(g)


def test_ssr_is_seeded_star():
    a = canonical4("SSR", directed=True, seed=5)
    assert a == canonical4("SSR", directed=True, seed=5)
    und = sorted(tuple(sorted(e)) for e in a.edge_list())
    assert und == [(0, 1), (0, 2), (0, 3)]


def test_unknown_canonical_name():
    with pytest.raises(ParameterError):
        canonical4("NOPE")
