"""Per-step functionality of an attacked network.

Each function evaluates the surviving subgraph described by a
:class:`~netrobust.graph.RemovalMask`: largest component size, component
count, driver nodes (matching- or rank-based) and communicable node pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np

from .exceptions import ContractViolation, GraphKindError
from .graph import components, _resolve_mask
from .linalg import matrix_rank
from .matching import maximum_matching

__all__ = [
    "FunctionalSample",
    "MEASURE_KEYS",
    "lcc",
    "ncc",
    "cnp",
    "driver_nodes_mit",
    "driver_nodes_ect",
    "adjacency_rank",
    "sample",
]

MEASURE_KEYS = frozenset({"lcc", "ncc", "cnp", "mit", "ect"})

# rank-based driver counts above this size log a cost warning
ECT_WARN_N = 512


@dataclass
class FunctionalSample:
    step: int
    n_alive: int
    n_l: int
    n_ncc: int
    cnp_exact: int
    cnp_sq: int
    n_d_mit: int | None = None
    n_d_ect: int | None = None
    rank_a: int | None = None

    @property
    def n_d(self):
        """Driver count from whichever engine was computed (matching preferred)."""
        return self.n_d_mit if self.n_d_mit is not None else self.n_d_ect


def lcc(graph, mask=None):
    """Number of nodes in the largest surviving component."""
    return components(graph, mask).largest


def ncc(graph, mask=None):
    return components(graph, mask).count


def cnp(graph, mask=None):
    """``(sum C(S_j, 2), sum S_j**2)`` over surviving components."""
    dec = components(graph, mask)
    return dec.cnp_exact, dec.cnp_sq


def driver_nodes_mit(graph, mask=None):
    """Driver nodes from a maximum matching: ``max(1, N' - |E*|)``.

    ``N'`` is the number of surviving nodes.
    """
    if not graph.directed:
        raise GraphKindError("matching-based driver nodes need a directed graph")
    mask = _resolve_mask(graph, mask)
    size, _ = maximum_matching(graph, mask)
    return max(1, mask.n_alive - size)


def _surviving_adjacency(graph, mask):
    alive = mask.alive_nodes()
    a = np.zeros((graph.n_nodes, graph.n_nodes))
    live = mask.alive_edges()
    if live.size:
        e = graph.edges[live]
        a[e[:, 0], e[:, 1]] = 1.0
        if not graph.directed:
            a[e[:, 1], e[:, 0]] = 1.0
    return a[np.ix_(alive, alive)]


def adjacency_rank(graph, mask=None, tol=None):
    """Rank of the surviving adjacency matrix."""
    mask = _resolve_mask(graph, mask)
    if mask.n_alive > ECT_WARN_N:
        warnings.warn(
            f"rank-based driver count on {mask.n_alive} nodes is O(N^3) per step",
            RuntimeWarning,
            stacklevel=2,
        )
    a = _surviving_adjacency(graph, mask)
    return matrix_rank(a, tol=tol)


def driver_nodes_ect(graph, mask=None, tol=None):
    """Driver nodes from the adjacency rank: ``max(1, N' - rank(A'))``."""
    mask = _resolve_mask(graph, mask)
    return max(1, mask.n_alive - adjacency_rank(graph, mask, tol))


def sample(graph, mask=None, which=("lcc", "ncc", "cnp"), step=None):
    """Evaluate the requested functionals on one masked graph.

    Component-based fields are always filled (they share one traversal);
    ``"mit"`` and ``"ect"`` are opt-in.
    """
    which = frozenset(which)
    if not which:
        raise ContractViolation("measure set must be nonempty")
    unknown = which - MEASURE_KEYS
    if unknown:
        raise ContractViolation(f"unknown measures {sorted(unknown)}")
    if "mit" in which and not graph.directed:
        raise GraphKindError("matching-based driver nodes need a directed graph")
    mask = _resolve_mask(graph, mask)
    dec = components(graph, mask)
    out = FunctionalSample(
        step=mask.n_removed_nodes + mask.n_removed_edges if step is None else step,
        n_alive=mask.n_alive,
        n_l=dec.largest,
        n_ncc=dec.count,
        cnp_exact=dec.cnp_exact,
        cnp_sq=dec.cnp_sq,
    )
    if "mit" in which:
        out.n_d_mit = driver_nodes_mit(graph, mask)
    if "ect" in which:
        r = adjacency_rank(graph, mask)
        out.rank_a = r
        out.n_d_ect = max(1, mask.n_alive - r)
    return out
