"""
Trust, but verify: the brute-force reference solvers
====================================================

The package ships deliberately slow reference implementations that share
no logic with the fast paths.  On tiny inputs they recompute everything
by exhaustive enumeration, which is how the test suite (and a skeptical
user) can check the solver end to end:

* ``dubins_numeric`` rebuilds shortest-path lengths from circle-tangent
  geometry and validates them by numerically integrating the steering,
* ``enumerate_dtop`` tries every visit order and heading choice,
* ``enumerate_top_euclidean`` does the same for the straight-line
  relaxation, whose optimum can never be below the turn-constrained one.
"""

import math
import random

from dubins_top import (
    Configuration,
    Instance,
    Target,
    build_graph,
    dubins_numeric,
    enumerate_dtop,
    enumerate_top_euclidean,
    shortest_dubins,
    solve,
    uniform_headings,
)

# -- Geometry against numerical integration ----------------------------------
rng = random.Random(11)
worst = 0.0
for _ in range(200):
    a = Configuration(rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 2 * math.pi))
    b = Configuration(rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 2 * math.pi))
    worst = max(worst, abs(shortest_dubins(a, b, 1.0).total_length
                           - dubins_numeric(a, b, 1.0)))
print(f"200 random pose pairs: worst analytic-vs-numeric gap {worst:.2e}")

# -- Full solver against exhaustive enumeration -------------------------------
instance = Instance(
    targets=(
        Target(0.0, 0.0, 0.0),
        Target(1.5, 2.0, 6.0),
        Target(3.5, 0.5, 9.0),
        Target(4.0, 3.0, 5.0),
        Target(6.0, 1.5, 7.0),
        Target(7.5, 0.0, 0.0),
    ),
    num_vehicles=2,
    budget=11.0,
    rho=1.0,
    headings=uniform_headings(2),
)
graph = build_graph(instance)

reference = enumerate_dtop(graph, instance.num_vehicles, instance.budget)
result = solve(instance, workers=1)
print(f"\nexhaustive optimum: {reference.objective:.0f} "
      f"({reference.enumerated} visit orders tried)")
print(f"solver optimum:     {result.objective:.0f} "
      f"({result.stats.nodes_explored} search nodes)")
assert result.objective == reference.objective
print("solver matches the brute force exactly")

# -- The straight-line relaxation bounds from above ---------------------------
relaxed = enumerate_top_euclidean(instance, instance.num_vehicles, instance.budget)
print(f"\nstraight-line optimum: {relaxed.objective:.0f} "
      f">= turn-constrained optimum {result.objective:.0f}")
assert relaxed.objective >= result.objective
