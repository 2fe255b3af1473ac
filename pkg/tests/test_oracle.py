import itertools
import math

import networkx as nx
import numpy as np
import pytest

from stochcover import oracle
from stochcover.instance import (GraphInstance, KCenterInstance, SetCoverInstance,
                                 generate_random_graph, generate_random_tree)

from conftest import metric, path3, random_trees

K3 = GraphInstance(3, ((0, 1), (0, 2), (1, 2)), (0.125,) * 3)


def test_closed_form_examples():
    _, d = metric(path3(probs=(0.25, 0.5, 0.5)))
    assert oracle.closed_form_success(d, [1], (0.25, 0.5, 0.5), 1.0) == 1.0
    assert oracle.closed_form_success(d, [1], (0.25, 0.5, 0.5), 0.5) == 0.75 * 0.5
    assert oracle.closed_form_success(d, [0, 1], (0.25, 0.5, 0.25), 0.5) == 0.75
    assert oracle.closed_form_success(d, [], (0.25, 0.5, 0.5), 3.0) == 0.75 * 0.25


def test_closed_form_equals_subset_sum():
    for inst, k in random_trees(30, 1, 10, seed=21):
        _, d = metric(inst)
        n = inst.n
        weights = oracle.subset_probabilities(inst.probs)
        r = float(np.median(d))
        centers = list(range(0, n, 3))[:max(k, 1)]
        covered = [all(d[v, centers].min() <= r for v in range(n) if mask >> v & 1)
                   for mask in range(1 << n)]
        assert math.isclose(oracle.closed_form_success(d, centers, inst.probs, r),
                            math.fsum(weights[covered]), abs_tol=1e-12)


def test_closed_form_matches_sampling():
    inst = generate_random_tree(7, 2)
    _, d = metric(inst)
    exact = oracle.closed_form_success(d, [0], inst.probs, 5.0)
    rng = np.random.default_rng(0)
    present = rng.random((100_000, 7)) < np.asarray(inst.probs)
    hit = ~(present & (d[0] > 5.0)).any(axis=1)
    est = hit.mean()
    assert abs(est - exact) <= 3 * math.sqrt(est * (1 - est) / 100_000)


def test_brute_force_nonadaptive_edges():
    _, d = metric(path3(probs=(0.2, 0.0, 0.5)))
    assert oracle.brute_force_nonadaptive_opt(d, (0.2, 0.0, 0.5), 0, 0.0)[0] == 0.8 * 0.5
    assert oracle.brute_force_nonadaptive_opt(d, (0.2, 0.0, 0.5), 3, 0.0) == (1.0, frozenset({0, 1, 2}))
    # ties resolve to the lexicographically smallest set
    assert oracle.brute_force_nonadaptive_opt(d, (0.0, 0.0, 0.0), 1, 0.0)[1] == frozenset({0})


def test_min_cover_size_examples():
    _, d = metric(path3())
    assert oracle.min_cover_size(d, [], 0.0) == 0
    assert oracle.min_cover_size(d, [2], 0.0) == 1
    assert oracle.min_cover_size(d, [0, 2], 1.0) == 1
    assert oracle.min_cover_size(d, [0, 2], 0.5) == 2


def test_coverable_table_agrees_with_min_cover_size():
    for inst, k in random_trees(10, 1, 7, seed=22):
        _, d = metric(inst)
        for r in np.unique(d)[::2]:
            table = oracle.coverable_table(d, r, k)
            for mask in range(1 << inst.n):
                subset = [v for v in range(inst.n) if mask >> v & 1]
                assert table[mask] == (oracle.min_cover_size(d, subset, r) <= k)


def test_adaptive_failure_examples():
    _, d = metric(path3(probs=(0.0, 0.0, 0.0)))
    assert oracle.brute_force_adaptive_failure(d, (0.0, 0.0, 0.0), 0, 0.0) == 0.0
    assert oracle.brute_force_adaptive_failure(np.zeros((1, 1)), (0.5,), 0, 0.0) == 0.5


def test_size_guards():
    big = generate_random_tree(15, 0)
    _, d = metric(big)
    with pytest.raises(oracle.SizeGuardError):
        oracle.brute_force_adaptive_failure(d, big.probs, 2, 1.0)
    with pytest.raises(oracle.SizeGuardError):
        oracle.verify_hardness_sandwich(generate_random_graph(13, 0))
    wide = SetCoverInstance(1, (0.5,), tuple((1.0, frozenset({0})) for _ in range(21)))
    with pytest.raises(oracle.SizeGuardError):
        oracle.brute_force_setcover_opt(wide, 0.1)


def test_setcover_oracle_examples():
    inst = SetCoverInstance(2, (0.3, 1.0), ((2.0, frozenset({0, 1})), (1.0, frozenset({1}))))
    assert oracle.brute_force_setcover_opt(inst, 1.0) == (0.0, frozenset())
    assert oracle.brute_force_setcover_opt(inst, 0.5) == (1.0, frozenset({1}))
    with pytest.raises(oracle.InfeasibleError):
        oracle.brute_force_setcover_opt(SetCoverInstance(1, (1.0,), ((1.0, frozenset()),)), 0.5)


def test_monte_carlo_degenerate():
    inst = KCenterInstance(3, ((0, 1, 1.0), (1, 2, 1.0)), (0.0, 0.0, 0.0))
    assert oracle.monte_carlo_failure(inst, 0, 0.0, 5000, 1) == (0.0, 0.0)
    sure = path3()
    assert oracle.monte_carlo_failure(sure, 1, 1.0, 5000, 1) == (0.0, 0.0)
    assert oracle.monte_carlo_failure(sure, 1, 0.5, 5000, 1) == (1.0, 0.0)


def test_monte_carlo_single_vertex():
    est, se = oracle.monte_carlo_failure(KCenterInstance(1, (), (0.5,)), 0, 0.0, 100_000, 3)
    assert abs(est - 0.5) <= 3 * se


def test_monte_carlo_thread_invariant():
    inst = generate_random_tree(9, 4)
    runs = {oracle.monte_carlo_failure(inst, 1, 6.0, 30_000, 11, threads=t) for t in (1, 2, 4)}
    assert len(runs) == 1
    assert oracle.monte_carlo_failure(inst, 1, 6.0, 30_000, 12) not in runs


def test_max_independent_set_examples():
    assert oracle.count_max_independent_sets(K3) == (1, 3)
    assert oracle.count_max_independent_sets(GraphInstance(3, ((0, 1), (1, 2)), (0.5,) * 3)) == (2, 1)
    assert oracle.count_max_independent_sets(GraphInstance(4, (), (0.5,) * 4)) == (4, 1)


def test_max_independent_sets_against_networkx():
    for seed in range(25):
        g = generate_random_graph(3 + seed % 8, seed)
        comp = nx.complement(nx.Graph(list(g.edges)) if g.edges else nx.empty_graph(g.n))
        comp.add_nodes_from(range(g.n))
        cliques = [c for c in nx.find_cliques(comp)]
        m = max(map(len, cliques))
        assert oracle.count_max_independent_sets(g) == (m, sum(len(c) == m for c in cliques))


def test_edge_cover_examples():
    f, counts = oracle.edge_cover_failure(K3, 0, 1.0)
    assert f == 1.0 and counts[0] == 0
    # at p = 1/2 only the empty subset survives
    assert oracle.edge_cover_failure(K3, 0, 0.5)[0] == pytest.approx(0.875, abs=1e-15)
    assert oracle.min_edge_cover_sizes(K3).tolist() == [0, 1, 1, 1, 1, 1, 1, 2]
    with pytest.raises(ValueError):
        oracle.min_edge_cover_sizes(GraphInstance(3, ((0, 1),), (0.5,) * 3))


def test_edge_cover_against_edge_subsets():
    for seed in range(6):
        g = generate_random_graph(6, seed)
        sizes = oracle.min_edge_cover_sizes(g)
        for mask in range(1 << g.n):
            need = {v for v in range(g.n) if mask >> v & 1}
            best = next(c for c in range(g.n + 1)
                        for combo in itertools.combinations(g.edges, c)
                        if need <= {u for e in combo for u in e})
            assert sizes[mask] == best


def test_failed_counts_vanish_below_threshold():
    for seed in range(10):
        g = generate_random_graph(7, seed)
        m, _ = oracle.count_max_independent_sets(g)
        _, counts = oracle.edge_cover_failure(g, m, 0.1)
        assert all(c == 0 for c in counts[:m])
        assert sum(counts) <= 2 ** g.n


def test_sandwich_examples():
    k2 = GraphInstance(2, ((0, 1),), (0.25, 0.25))
    rep = oracle.verify_hardness_sandwich(k2)
    assert (rep.m, rep.I) == (1, 2) and rep.holds
    rep = oracle.verify_hardness_sandwich(K3)
    assert (rep.m, rep.I, rep.p) == (1, 3, 0.125) and rep.holds
    assert rep.n_counts[rep.m] == rep.I


def test_sandwich_on_random_graphs():
    for seed in range(15):
        rep = oracle.verify_hardness_sandwich(generate_random_graph(2 + seed % 9, seed))
        assert rep.n_counts[rep.m] == rep.I
        assert rep.holds
