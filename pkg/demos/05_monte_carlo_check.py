"""
Checking the exact adaptive failure by simulation
=================================================

The profile dynamic program returns the exact probability that more than k
centers are needed. Sampling the random vertex set and solving each sample
by enumeration should agree within a few standard errors.
"""
from stochcover import failure_probability, generate_random_tree
from stochcover.oracle import monte_carlo_failure
from stochcover.tree import all_pairs_distances, build_rooted_tree

inst = generate_random_tree(12, seed=5)
tree = build_rooted_tree(inst)
dist = all_pairs_distances(tree)

for r in (4.0, 8.0, 12.0):
    exact = failure_probability(tree, dist, inst.probs, 2, r)
    est, se = monte_carlo_failure(inst, 2, r, samples=100_000, seed=1)
    print(f"r={r:>4}: exact {exact:.4f}  sampled {est:.4f} +- {se:.4f}  "
          f"({abs(est - exact) / se if se else 0:.1f} standard errors apart)")
