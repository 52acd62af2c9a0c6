"""Accuracy metrics for overlapping and multi-resolution clusterings.

Omega and Soft Omega Index, the Mean F1 family (F1a, F1h, F1p), exact NMI
and its stochastic estimate GNMI, over clusterings read from
clusters-per-line files.
"""
from .exceptions import (
    ClusterAccError,
    DegenerateInputError,
    EmptyClusteringError,
    ParseError,
    SaturatedExpectationError,
    UniverseMismatchError,
)
from .meanf1 import MatchVariant, f1_sides, mean_f1
from .model import (
    Clustering,
    ContributionMode,
    UniversePolicy,
    align_universes,
    build_node_index,
    compute_contributions,
    dump_cnl,
    load_cnl,
    parse_cnl,
    save_cnl,
)
from .nmi import GnmiConfig, GnmiResult, Normalization, entropy, gnmi, nmi_exact
from .omega import OmegaScore, omega, omega_soft
from .synthetic import generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "ClusterAccError", "Clustering", "ContributionMode", "DegenerateInputError",
    "EmptyClusteringError", "GnmiConfig", "GnmiResult", "MatchVariant",
    "Normalization", "OmegaScore", "ParseError", "SaturatedExpectationError",
    "UniverseMismatchError", "UniversePolicy", "align_universes",
    "build_node_index", "compute_contributions", "dump_cnl", "entropy",
    "f1_sides", "generate_synthetic", "gnmi", "load_cnl", "mean_f1",
    "nmi_exact", "omega", "omega_soft", "parse_cnl", "save_cnl",
]
