"""
Value at risk when centers are chosen after the fact
====================================================

If the centers may be placed after seeing which vertices showed up, the
question becomes: how large must the radius be so that k centers suffice with
probability at least 1 - rho?
"""
from stochcover import generate_random_tree, solve_adaptive_var, solve_nonadaptive

# sparse demand: each vertex shows up with probability at most 1/4
inst = generate_random_tree(25, seed=1, prob_law=("uniform", 0.0, 0.25))

for k in (1, 2, 3, 5):
    late = solve_adaptive_var(inst, k, rho=0.1)
    early = solve_nonadaptive(inst, k, rho=0.1)
    # waiting for the demand never needs a larger radius
    print(f"k={k}: adaptive radius {late.radius:>5.1f} (failure {late.failure_probability:.4f})"
          f"   fixed-in-advance radius {early.radius:>5.1f}")
