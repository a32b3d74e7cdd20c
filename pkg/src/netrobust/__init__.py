"""Attack-simulation robustness measures for complex networks."""

from .exceptions import (
    ContractViolation,
    EdgeListFormatError,
    GraphKindError,
    NoTargetError,
    ParameterError,
    RemovedTargetError,
    RobustnessError,
)
from .graph import (
    ComponentDecomposition,
    Graph,
    RemovalMask,
    apply_attack,
    components,
    degree,
    read_edgelist,
    removal_profile,
    write_edgelist,
)
from .functional import cnp, driver_nodes_ect, driver_nodes_mit, lcc, ncc, sample
from .apriori import AprioriReport, apriori, betweenness, clustering, efficiency, spectral
from .generators import GeneratorConfig, canonical4, generate
from .attacks import AttackPlan, attack_sequence, enumerate_exa, next_target
from .engine import (
    AttackTrace,
    ThresholdResult,
    averaged,
    detect_threshold,
    evaluate,
    exa_measure,
    measure,
    rank_table,
    run_trace,
    trace_from_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "EdgeListFormatError",
    "GraphKindError",
    "NoTargetError",
    "ParameterError",
    "RemovedTargetError",
    "RobustnessError",
    "ComponentDecomposition",
    "Graph",
    "RemovalMask",
    "apply_attack",
    "components",
    "degree",
    "read_edgelist",
    "removal_profile",
    "write_edgelist",
    "cnp",
    "driver_nodes_ect",
    "driver_nodes_mit",
    "lcc",
    "ncc",
    "sample",
    "AprioriReport",
    "apriori",
    "betweenness",
    "clustering",
    "efficiency",
    "spectral",
    "GeneratorConfig",
    "canonical4",
    "generate",
    "AttackPlan",
    "attack_sequence",
    "enumerate_exa",
    "next_target",
    "AttackTrace",
    "ThresholdResult",
    "averaged",
    "detect_threshold",
    "evaluate",
    "exa_measure",
    "measure",
    "rank_table",
    "run_trace",
    "trace_from_sequence",
]
