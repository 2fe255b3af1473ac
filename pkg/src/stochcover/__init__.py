"""Solvers for covering problems under independent random demand.

Exact tree-metric dynamic programs for non-adaptive and adaptive stochastic
k-center, a greedy for chance-constrained set cover, and brute-force and
Monte Carlo oracles to check them against.
"""
from .adaptive import (NO_HELPER, Profile, ProfileDistribution, VarResult,
                       failure_probability, leaf_distribution, merge_distributions,
                       solve_adaptive_var)
from .instance import (GraphInstance, KCenterInstance, SetCoverInstance,
                       generate_random_graph, generate_random_setcover,
                       generate_random_tree, parse_instance, serialize_instance)
from .nonadaptive import (CenterSolution, max_success_probability, reconstruct_centers,
                          solve_nonadaptive, success_probability)
from .setcover import (CoverSolution, exact_violation_probability, greedy_partial_cover,
                       solve_chance_setcover, to_partial_cover)
from .tree import RootedTree, all_pairs_distances, build_rooted_tree, candidate_radii

__version__ = "0.1.0"
