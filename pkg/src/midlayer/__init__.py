"""Maximal independent sets in the graph between two consecutive layers of the Boolean lattice."""

from .asymptotics import composition_count, entropy_bound_check, main_formula_log2, stirling_gap
from .containers import (
    Certificate,
    G1Pair,
    G2Pair,
    Thresholds,
    phi_approx,
    psi_approx,
    replay_certificate,
    run_basic_container,
    verify_g1,
    verify_g2,
)
from .errors import BudgetExceeded, MidlayerError
from .graph import Graph
from .layer_graph import LayerGraph, build_layer_graph, canonical_matching, middle_layer_graph
from .lower_bound import ConstructionParams, enumerate_construction_m0, generate_construction, lower_bound_value
from .matching_assign import InducedMatching, assign_matching, classify_mis, classify_typical
from .mis_engine import complete_to_mis, count_mis, count_mis_oracle, enumerate_mis, list_mis
from .reports import IsoReport
from .set_family import SetFamily, shadow, shift

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Certificate",
    "ConstructionParams",
    "G1Pair",
    "G2Pair",
    "Graph",
    "InducedMatching",
    "IsoReport",
    "LayerGraph",
    "MidlayerError",
    "SetFamily",
    "Thresholds",
    "assign_matching",
    "build_layer_graph",
    "canonical_matching",
    "classify_mis",
    "classify_typical",
    "complete_to_mis",
    "composition_count",
    "count_mis",
    "count_mis_oracle",
    "entropy_bound_check",
    "enumerate_construction_m0",
    "enumerate_mis",
    "generate_construction",
    "list_mis",
    "lower_bound_value",
    "main_formula_log2",
    "middle_layer_graph",
    "phi_approx",
    "psi_approx",
    "replay_certificate",
    "run_basic_container",
    "shadow",
    "shift",
    "stirling_gap",
    "verify_g1",
    "verify_g2",
]
