"""Exact convex partitions in which every piece meets many measures."""

from .adversarial import gen_adversarial, oracle_1d, verify_adversarial
from .arrangement import build_poset, compare_formulas, order_complex_dim, orbit_summary, phi_image
from .fan import FanPartition, build_fan
from .geometry import ConvexPartition, ConvexRegion, HalfSpace, Hyperplane, orientation
from .hamsandwich import equipartition_2pow, ham_sandwich_cut
from .measures import DiscreteMeasure, MeasureFamily, coverage_counts, evaluate_matrix, mass
from .pipelines import fraction_pipeline, plan_alpha_groups, plan_epsilon_groups, theorem5_pipeline

__version__ = "0.1.0"

__all__ = [
    "ConvexPartition",
    "ConvexRegion",
    "DiscreteMeasure",
    "FanPartition",
    "HalfSpace",
    "Hyperplane",
    "MeasureFamily",
    "build_fan",
    "build_poset",
    "compare_formulas",
    "coverage_counts",
    "equipartition_2pow",
    "evaluate_matrix",
    "fraction_pipeline",
    "gen_adversarial",
    "ham_sandwich_cut",
    "mass",
    "orbit_summary",
    "oracle_1d",
    "order_complex_dim",
    "orientation",
    "phi_image",
    "plan_alpha_groups",
    "plan_epsilon_groups",
    "theorem5_pipeline",
    "verify_adversarial",
]
