"""Expansion signatures and decentralized search simulation on undirected networks."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    Graph,
    GraphError,
    GraphStats,
    compute_stats,
    generate_ba,
    generate_er,
    load_edge_list,
    validate,
    write_edge_list,
)
from .expansion import (  # noqa: E402
    ExpansionSignature,
    FrontierState,
    SignaturePoint,
    brute_force_max_expansion,
    build_signature,
    expansion,
    expansion_quality,
    greedy_apx,
)
from .search import SearchState, SearchTrace, run_search, steps_to_coverage  # noqa: E402

__all__ = [
    "Graph", "GraphError", "GraphStats", "compute_stats", "generate_ba", "generate_er", "load_edge_list",
    "validate", "write_edge_list", "ExpansionSignature", "FrontierState", "SignaturePoint",
    "brute_force_max_expansion", "build_signature", "expansion", "expansion_quality", "greedy_apx",
    "SearchState", "SearchTrace", "run_search", "steps_to_coverage",
]
