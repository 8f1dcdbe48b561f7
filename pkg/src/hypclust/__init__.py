"""Hyperbolic random graphs: generation, clustering statistics and their limits."""

from ._backend import available as available_backends
from .clustering import (ClusterStats, cluster_stats, count_paths2, count_triangles,
                         degree_sequence, global_clustering, local_clustering_mean,
                         restricted_clustering, typical_split)
from .errors import (ApproximationDomainError, BuilderCapExceeded, HypClustError,
                     InsufficientTail, InvalidParameters, OutOfDomain, QuadratureFailure,
                     WindowUnavailable)
from .graph import Graph
from .graphgen import (build_binomial, build_disc_naive, build_disc_pruned,
                       connection_probability)
from .harness import ExperimentConfig, TrialReport, emit_report, fit_tail_exponent, run_sweep, run_trial
from .hypgeom import (ModelParams, PolarVertex, critical_angle, disc_angle_window,
                      distance_approx, hyperbolic_distance, radius_from_count)
from .sampler import VertexSet, max_type_bound, sample_radius, sample_vertex_set, type_pdf
from .theory import (GrowthOrder, LimitValue, QuadConfig, c_beta, edge_prob_asymptotic,
                     g_integral, lambda_T_order, limit_L_infinity, limit_L_restricted,
                     one_over_one_plus_pow_integral)

__version__ = "0.1.0"
