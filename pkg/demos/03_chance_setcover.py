"""
Set cover with a probabilistic covering constraint
==================================================

Elements show up independently. A selection of sets is acceptable when the
chance that some element shows up uncovered is at most rho. Taking logs turns
this into a budget on uncovered penalties, which a greedy handles.
"""
import math

from stochcover import generate_random_setcover, solve_chance_setcover, to_partial_cover
from stochcover.oracle import brute_force_setcover_opt

inst = generate_random_setcover(n=10, m=14, seed=11)
pc = to_partial_cover(inst, rho=0.1)
print("penalties:", [round(q, 3) for q in pc.penalties])
print(f"budget: {pc.budget:.4f}")

for rho in (0.5, 0.1, 0.01):
    sol = solve_chance_setcover(inst, rho)
    best, _ = brute_force_setcover_opt(inst, rho)
    print(f"rho={rho:<5} sets={list(sol.chosen)} cost={sol.cost:.0f} (optimum {best:.0f}, "
          f"bound {math.log(inst.n) + 1:.2f}x)  violation={sol.violation_probability:.4f}")
