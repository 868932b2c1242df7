"""Even-cover harvesting and null-vs-planted distinguishing for k-XOR signs.

The pipeline: view a k-uniform hypergraph through its level-ell Kikuchi
graph, collect closed walks whose odd-multiplicity colors form even covers,
then decide whether a vector of edge signs is random or carries a planted
parity by thresholding a noised polynomial over the covers.
"""

from .distinguish import (
    BlockPartition,
    DecisionReport,
    DerivedParams,
    DistinguisherConfig,
    derive_theorem_params,
    distinguish,
    evaluate_noised_polynomial,
    is_shattered,
    planted_mean,
    sample_equipartition,
    select_shattered_covers,
    suggest_level,
)
from .errors import (
    CapacityError,
    EmptyGraphError,
    EvenCoverError,
    InsufficientCoversError,
    IsolatedVertexError,
)
from .estimator import EvenCoverDistinguisher
from .harness import ExperimentConfig, check_feasibility, run_experiment, write_trials_csv
from .hypergraph import (
    Hypergraph,
    enumerate_even_covers,
    gf2_nullspace_basis,
    hypergraph_from_dict,
    hypergraph_to_dict,
    in_nullspace_span,
    load_hypergraph,
    nullspace_echelon,
    save_hypergraph,
    symmetric_difference,
    verify_even_cover,
)
from .instances import (
    GroundTruth,
    RngStream,
    SignedInstance,
    even_cover_sign_product,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    sample_null_signs,
    sample_planted_signs,
    sample_uniform_hypergraph,
    save_instance,
)
from .kikuchi import (
    KikuchiGraph,
    KikuchiParams,
    MaterializedKikuchi,
    compute_params,
    compute_params_from_counts,
)
from .walks import (
    ColoredWalk,
    GoodnessReport,
    HarvestResult,
    WalkSearchConfig,
    assess_goodness,
    find_good_closed_walk,
    harvest_distinct_covers,
    load_covers,
    odd_colors,
    run_walk,
    save_covers,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "CapacityError",
    "ColoredWalk",
    "DecisionReport",
    "DerivedParams",
    "DistinguisherConfig",
    "EmptyGraphError",
    "EvenCoverDistinguisher",
    "EvenCoverError",
    "ExperimentConfig",
    "GoodnessReport",
    "GroundTruth",
    "HarvestResult",
    "Hypergraph",
    "InsufficientCoversError",
    "IsolatedVertexError",
    "KikuchiGraph",
    "KikuchiParams",
    "MaterializedKikuchi",
    "RngStream",
    "SignedInstance",
    "WalkSearchConfig",
    "assess_goodness",
    "check_feasibility",
    "compute_params",
    "compute_params_from_counts",
    "derive_theorem_params",
    "distinguish",
    "enumerate_even_covers",
    "evaluate_noised_polynomial",
    "even_cover_sign_product",
    "find_good_closed_walk",
    "gf2_nullspace_basis",
    "harvest_distinct_covers",
    "hypergraph_from_dict",
    "hypergraph_to_dict",
    "in_nullspace_span",
    "instance_from_dict",
    "instance_to_dict",
    "is_shattered",
    "load_covers",
    "load_hypergraph",
    "load_instance",
    "nullspace_echelon",
    "odd_colors",
    "planted_mean",
    "run_experiment",
    "run_walk",
    "sample_equipartition",
    "sample_null_signs",
    "sample_planted_signs",
    "sample_uniform_hypergraph",
    "save_covers",
    "save_hypergraph",
    "save_instance",
    "select_shattered_covers",
    "suggest_level",
    "symmetric_difference",
    "verify_even_cover",
    "write_trials_csv",
]
