"""Hyperedge curvature via multi-marginal optimal transport.

A library and command line for computing the coarse scalar curvature of
hyperedges in finite hypergraphs, checking its closed forms and bounds,
and validating its Riemannian consistency numerically on
constant-curvature model surfaces.
"""

from .curvature import (
    CurvatureRecord,
    chain_hyperpath,
    common_neighbor_mass,
    common_neighbor_upper_bound,
    complete_uniform,
    curvature_report,
    edge_walks,
    graph_ricci,
    hyperedge_curvature,
    hyperpath_lower_bound,
    star_hyperpath,
    validate_hyperpath,
)
from .entropic import (
    EntropicBarycenterResult,
    EntropicConfig,
    SinkhornResult,
    entropic_barycenter,
    sinkhorn_w1,
)
from .errors import (
    CollinearError,
    ConvergenceError,
    DisconnectedError,
    EmptyHypergraphError,
    EpsilonFloorError,
    EpsilonInvalidError,
    GeometryError,
    HypercurvError,
    LPError,
    MarginalError,
    NotAHyperpathError,
    NotAnEdgeError,
    ParseError,
    SizeCapExceeded,
    SupportCapExceeded,
)
from .exact import (
    BarycenterSolution,
    DualPotentials,
    TransportPlan,
    barycenter,
    dual_lower_bound,
    dual_potentials,
    mmot,
    w1_pair,
)
from .hypergraph import (
    Hypergraph,
    from_edge_labels,
    parse_hypergraph,
    serialize,
    shortest_distance,
)
from .manifold import (
    CoarseScalarResult,
    MedianResult,
    MomentEstimate,
    PairRicciEstimate,
    cloud_w1,
    coupled_clouds,
    empirical_coarse_scalar,
    empirical_pair_ricci,
    eps_neighborhood_hypergraph,
    mc_moment,
    mc_ricci_moment,
    median_objective,
    riemannian_median,
)
from .metric import DistanceMatrix, distance_matrix, median_cost, median_vertex
from .rng import substream
from .surfaces import (
    ModelSurface,
    ball_mean_distance,
    ball_mean_distance_expansion,
    base_point,
    exp_map,
    frame,
    geodesic_distance,
    log_map,
    pairwise_distances,
    sample_ball,
    translate_along,
)
from .walks import WalkDistribution, all_walks, walk_distribution

__version__ = "0.1.0"
