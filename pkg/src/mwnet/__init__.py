"""Controllability analysis of consensus dynamics on matrix-weighted networks.

Edges carry symmetric positive (semi)definite d x d weight matrices; the
package builds the block Laplacian, computes controllable-subspace
dimensions, certifies graph-theoretic lower and upper bounds through
distance partitions and almost equitable partitions, and constructs
provably uncontrollable input matrices.
"""

from .bounds import (
    BoundCertificate,
    CertificateKind,
    applicable_certificates,
    construct_uncontrollable_input,
    input_count_condition,
    lower_bound_complete,
    lower_bound_cycle,
    lower_bound_tree,
    partition_gcd,
    path_controllability,
    upper_bound_aep,
)
from .controllability import (
    ControllabilityReport,
    GeneralInputMatrix,
    InputMatrix,
    controllable_subspace,
    is_controllable,
    pbh_witness,
)
from .graph import (
    BlockLaplacian,
    MatrixWeight,
    MatrixWeightedGraph,
    adjacency_matrix,
    build_graph,
    degree_matrix,
    diameter,
    distance,
    graph_from_json,
    graph_to_json,
    has_pd_shortest_path,
    is_connected,
    laplacian,
    path_weight_product,
)
from .linalg import (
    Definiteness,
    Subspace,
    classify_definiteness,
    krylov_controllable_subspace,
    numerical_rank,
    orthonormal_basis,
    subspace_contains,
    subspace_sum,
)
from .partition import (
    CharacteristicMatrix,
    NodePartition,
    QuotientGraph,
    characteristic_matrix,
    coarsest_aep_refinement,
    distance_partition,
    is_almost_equitable,
    laplacian_invariance_residual,
    make_partition,
    quotient,
    relative_degree,
)

__version__ = "0.1.0"

__all__ = [
    "BlockLaplacian",
    "BoundCertificate",
    "CertificateKind",
    "CharacteristicMatrix",
    "ControllabilityReport",
    "Definiteness",
    "GeneralInputMatrix",
    "InputMatrix",
    "MatrixWeight",
    "MatrixWeightedGraph",
    "NodePartition",
    "QuotientGraph",
    "Subspace",
    "adjacency_matrix",
    "applicable_certificates",
    "build_graph",
    "characteristic_matrix",
    "classify_definiteness",
    "coarsest_aep_refinement",
    "construct_uncontrollable_input",
    "controllable_subspace",
    "degree_matrix",
    "diameter",
    "distance",
    "distance_partition",
    "graph_from_json",
    "graph_to_json",
    "has_pd_shortest_path",
    "input_count_condition",
    "is_almost_equitable",
    "is_connected",
    "is_controllable",
    "krylov_controllable_subspace",
    "laplacian",
    "laplacian_invariance_residual",
    "lower_bound_complete",
    "lower_bound_cycle",
    "lower_bound_tree",
    "make_partition",
    "numerical_rank",
    "orthonormal_basis",
    "partition_gcd",
    "path_controllability",
    "path_weight_product",
    "pbh_witness",
    "quotient",
    "relative_degree",
    "subspace_contains",
    "subspace_sum",
    "upper_bound_aep",
]
