"""Switch Markov chains on degree sequences: exact kernels, canonical
paths, and desk-scale mixing verification."""

from .chain import empirical_distribution, run_walk, step
from .degseq import (
    DegreeSequence,
    Model,
    count_realizations,
    enumerate_realizations,
    format_sequence,
    initial_realization,
    is_graphical,
    load_sequence,
    parse_sequence_text,
    stability_ratio,
)
from .errors import SwitchmixError
from .graph import (
    Realization,
    chord_model_of,
    read_edge_list,
    to_json_dict,
    write_edge_list,
)
from .mixflow import (
    audit_instance,
    build_markov_graph,
    congestion,
    counting_bound_check,
    mixing_time_bound,
    spectral,
    tv_at,
)
from .redblue import RedBlueGraph, decompose, symmetric_difference
from .stability import (
    er_corollary_check,
    power_law_check,
    region_check,
    strong_stability_check,
)
from .sweep import bundle, bundle_at, canonical_path, reconstruct, sweep
from .toperator import decompose_rounds, primitive_decompose, roundtrip

__version__ = "0.1.0"

__all__ = [
    "DegreeSequence",
    "Model",
    "Realization",
    "RedBlueGraph",
    "SwitchmixError",
    "audit_instance",
    "build_markov_graph",
    "bundle",
    "bundle_at",
    "canonical_path",
    "chord_model_of",
    "congestion",
    "count_realizations",
    "counting_bound_check",
    "decompose",
    "decompose_rounds",
    "empirical_distribution",
    "enumerate_realizations",
    "er_corollary_check",
    "format_sequence",
    "initial_realization",
    "is_graphical",
    "load_sequence",
    "mixing_time_bound",
    "parse_sequence_text",
    "power_law_check",
    "primitive_decompose",
    "read_edge_list",
    "reconstruct",
    "region_check",
    "roundtrip",
    "run_walk",
    "spectral",
    "stability_ratio",
    "step",
    "strong_stability_check",
    "sweep",
    "symmetric_difference",
    "to_json_dict",
    "tv_at",
    "write_edge_list",
    "__version__",
]
