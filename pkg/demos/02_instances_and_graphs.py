"""
Problem instances and the heading-expanded graph
================================================

A problem instance is a list of targets (position + score), a fleet
size, a per-route travel budget, a turn radius, and a finite set of
approach headings.  The first target is the shared start point and the
last is the shared end point; both carry score zero.  Discretizing the
headings turns each target into ``k`` graph vertices, and every pair of
vertices on different targets is joined by the shortest
turn-constrained path between their poses.
"""

from dubins_top import (
    Instance,
    Target,
    build_graph,
    load_instance,
    parse_instance,
    parse_structured_instance,
    uniform_headings,
)

# -- Building an instance in code -------------------------------------------
# Four targets on a line: start, two scored stops, end.  Two vehicles,
# budget 30, turn radius 0.5, and two approach headings (east/west).
instance = Instance(
    targets=(
        Target(0.0, 0.0, 0.0),
        Target(2.0, 0.0, 5.0),
        Target(4.0, 0.0, 7.0),
        Target(6.0, 0.0, 0.0),
    ),
    num_vehicles=2,
    budget=30.0,
    rho=0.5,
    headings=uniform_headings(2),
)
print(f"targets: {instance.num_targets}, scored: {list(instance.genuine_targets)}")
print(f"headings: {[round(h, 3) for h in instance.headings]}")

# -- The classic benchmark text format ---------------------------------------
# Three header lines (point count, vehicles, budget), then one x/y/score
# line per point.  Turn radius and heading count are not part of the
# format, so they are supplied by the caller.
classic = """\
n 4
m 2
tmax 30
0.0  0.0  0
2.0  0.0  5
4.0  0.0  7
6.0  0.0  0
"""
same = parse_instance(classic, rho=0.5, num_headings=2)
assert same == instance
print("classic-format text parses to the identical instance")

# -- The self-describing key/value format ------------------------------------
# Carries the geometry parameters inline, so nothing needs overriding.
structured = """\
# four collinear targets
vehicles 2
budget 30.0
turn_radius 0.5
headings 0.0 3.141592653589793
target 0.0 0.0 0.0
target 2.0 0.0 5.0
target 4.0 0.0 7.0
target 6.0 0.0 0.0
"""
assert parse_structured_instance(structured) == instance
print("structured-format text parses to the identical instance")

# Files on disk go through load_instance, which picks the format from the
# content (see the shipped benchmark set under instances/).
from pathlib import Path

bench = Path(__file__).resolve().parents[1] / "instances" / "top21_a.top"
if bench.exists():
    big = load_instance(bench, rho=1.0, num_headings=2)
    print(f"{bench.name}: {big.num_targets} targets, m={big.num_vehicles}, "
          f"budget={big.budget}")

# -- The discretized graph ----------------------------------------------------
# Vertex ids are target_id * k + heading_index.  Edges within a target do
# not exist; everything else gets a shortest-path cost.
graph = build_graph(instance)
print(f"k={graph.k}, vertices={graph.num_vertices}")
v_east = graph.vertex(1, 0)   # target 1 approached heading east
v_west = graph.vertex(2, 1)   # target 2 approached heading west
print(f"cost(target 1 @east -> target 2 @west) = {graph.cost(v_east, v_west):.4f}")
print(f"cost(target 1 @east -> target 2 @east) = "
      f"{graph.cost(v_east, graph.vertex(2, 0)):.4f}  (no U-turn needed)")
assert graph.cost(v_east, graph.vertex(1, 1)) == float("inf")  # same target
