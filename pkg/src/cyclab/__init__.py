"""Cyclability toolkit.

Decides whether every k chosen vertices of a graph lie on a common cycle,
four ways: a brute-force oracle, a dynamic program over tree decompositions
whose states are pairing signatures, a planar irrelevant-vertex pipeline,
and generators for the reduction instances used to stress all of the above.
"""

from ._kernels import BACKEND as kernel_backend
from .decomp import (
    NiceTreeDecomposition,
    TreeDecomposition,
    exact_pathwidth,
    exact_treewidth,
    greedy_treewidth,
    is_valid_decomposition,
    make_nice,
    parse_td,
    serialize_td,
)
from .dp import WIDTH_CAP, solve_pac, solve_pac_reference, solve_pac_traced
from .errors import (
    BudgetExceeded,
    CertificateError,
    CyclabError,
    EmbeddingError,
    FormatError,
    GenerationError,
    NotPlanar,
    ParameterError,
    PreconditionError,
    SizeError,
    UnknownName,
    WidthError,
)
from .generators import (
    catalog,
    clique_reduction,
    complete_graph,
    connected_graphs,
    cross_composition,
    cycle,
    embedding_from_positions,
    grid,
    petersen,
    prism,
    random_connected,
    random_k_connected,
    ring_of_rings,
    star,
    wall,
)
from .graph import (
    Graph,
    dissolve,
    is_cycle,
    is_cycle_through,
    lift,
    parse_graph,
    serialize_graph,
    vertex_connectivity,
)
from .oracle import (
    OracleBudget,
    cyclability,
    cycle_through,
    first_failing_subset,
    hamiltonian,
    hamiltonian_with_edge,
    is_hypohamiltonian,
    is_yes_pac,
)
from .pairings import (
    Pairing,
    aux_universe,
    enumerate_pairings,
    lift_pairing,
    oplus,
    union_pairings,
    xi,
    zeta,
)
from .planar import (
    ColorIrrelevant,
    ConcentricCertificate,
    Embedding,
    NoInstance,
    PipelineConfig,
    RailedAnnulusCertificate,
    RingSearchBudget,
    color_irrelevant_step,
    compute_faces,
    find_concentric_r_free,
    induced_embedded,
    is_q_dense,
    parse_certificate,
    parse_rotation,
    pipeline_solve,
    pipeline_solve_traced,
    problem_irrelevant_by_annulus,
    serialize_certificate,
    serialize_rotation,
    verify_concentric,
    verify_railed_annulus,
)

__version__ = "0.1.0"
