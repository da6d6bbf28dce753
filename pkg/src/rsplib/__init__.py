"""Bicriteria (1+eps, 1+eps) approximation algorithms for restricted shortest
paths on directed graphs: budget DP with edge frequencies, low-diameter
hierarchies (dense and sparse), an all-pairs threshold structure, exact
reference oracles, and a gap-reduction solving framework.
"""

from .config import INF, ResourceCapError
from .dp import (BACKEND, DpTable, FrequencyAssignment, exp_round,
                 frequency_ones, frequency_topological, path_cost,
                 pi_dp_preprocess, pi_dp_query, recover_path, round_up_delay)
from .graph import (CombinedWeightView, DedupResult, Edge, GraphFormatError,
                    MultiDigraph, ParetoFrontier, SccPartition, aspect_ratio,
                    combined_weight_view, compute_sccs, dedup_parallel_edges,
                    dumps_graph, frontier_from_points, load_graph, loads_graph,
                    pareto_dominates, save_graph, swap_length_delay)
from .allpairs import (AllPairsTable, all_pairs_preprocess, all_pairs_query,
                       all_pairs_recover_path, load_all_pairs_table,
                       save_all_pairs_table)
from .dense import (LddHierarchy, StarEdge, build_dense_hierarchy, dense_pi,
                    solve_dense)
from .dp import solve_dag_topological, solve_dp1
from .gap import (GapAnswer, SolveResult, gap_solve, reduce_to_gap,
                  rescale_lengths, single_pair_gamma, zero_length_targets)
from .instances import GENERATOR_KINDS, generate
from .ldd import LddResult, compute_ldd, estimate_hitting_rate, verify_bounded_diameter
from .oracle import ExactRspAnswer, exact_frontier, exact_rsp_integer_delays
from .sparse import (DagResult, SparseHierarchy, build_phase1, build_phase2,
                     partition_finely_chopped, solve_sparse, solve_sparse_dag,
                     sparse_parameters, sparse_pi)
from .workgraph import WorkGraph, shortest_combined_path

__all__ = [name for name in dir() if not name.startswith("_")]
