"""
Column generation: pricing routes against the relaxation
========================================================

The solver never writes down all possible routes.  It keeps a small pool
of them inside a linear relaxation (the "restricted master"), reads off
dual prices, and asks a pricing engine for a new route whose score beats
the prices it would pay -- a positive *reduced cost*.  When no such
route exists, the relaxation is solved over the full (exponential) route
space even though only a handful of columns were ever built.  This demo
runs that loop by hand on a small instance and narrates each round.
"""

from dubins_top import (
    Instance,
    ReducedGraphView,
    Target,
    build_graph,
    build_master,
    price,
    reduced_cost,
    uniform_headings,
)

instance = Instance(
    targets=(
        Target(0.0, 0.0, 0.0),    # start
        Target(2.0, 2.5, 8.0),
        Target(4.5, 1.0, 11.0),
        Target(5.0, 4.0, 6.0),
        Target(7.5, 2.5, 9.0),
        Target(6.5, 5.5, 14.0),
        Target(3.0, 5.0, 10.0),
        Target(9.0, 5.0, 0.0),    # end
    ),
    num_vehicles=2,
    budget=16.0,
    rho=1.0,
    headings=uniform_headings(2),
)
graph = build_graph(instance)
print(f"{len(list(instance.genuine_targets))} scored targets, "
      f"m={instance.num_vehicles}, budget={instance.budget:.2f}\n")

# A view is a node's filtered slice of the graph; at the root nothing is
# forbidden.  The master starts with an empty route pool.
view = ReducedGraphView(graph)
master = build_master(view, [])

for round_number in range(1, 100):
    relaxation = master.solve()
    duals = relaxation.duals
    # The pricing engine searches the route space with the duals as costs:
    # visiting a target earns its score minus that target's dual price, and
    # using a vehicle at all costs the fleet dual.  Capping the batch at 5
    # routes per round keeps the pool growth visible.
    found = price(view, duals, max_paths=5, exclude=master.known_routes)
    if not found.routes:
        print(f"round {round_number}: relaxation {relaxation.objective:.3f}, "
              f"no improving route -- proven optimal over ALL routes")
        break
    best = max(found.routes, key=lambda r: reduced_cost(r, duals))
    print(f"round {round_number}: relaxation {relaxation.objective:.3f}, "
          f"{len(found.routes)} new routes, best visits "
          f"{best.target_sequence[1:-1]} (reduced cost "
          f"{reduced_cost(best, duals):+.3f})")
    for route in found.routes:
        master.add_route(route)

# The converged relaxation bounds the true optimum from above.  If every
# target/connection flow happens to be integral, it IS the optimum; the
# full solver handles the fractional case by branching.
print(f"\nfinal relaxation value: {relaxation.objective:.3f}")
print(f"columns generated:      {len(master.known_routes)}")
print(f"flows integral:         {relaxation.flows_integral()}")
for route, value in relaxation.route_values:
    if value > 1e-6:
        print(f"  route through {route.target_sequence[1:-1]}: weight {value:.3f}")
