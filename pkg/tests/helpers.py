"""Shared brute-force references and generators for the test suite.

Everything here favours obviousness over speed: sequences are enumerated
outright and heading choices resolved by a tiny DP, so the results serve
as ground truth for the clever implementations under test.
"""

import dataclasses
import itertools
import math

from dubins_top.instance import (
    DiscretizedGraph,
    Instance,
    ReducedGraphView,
    Target,
    build_graph,
    uniform_headings,
)
from dubins_top.master import DualValues


def random_instance(rng, num_genuine, k=2, num_vehicles=2, rho=1.0,
                    box=10.0, budget_factor=None):
    """A random problem over ``num_genuine`` scored targets in a square box.

    The budget is drawn as a multiple of the direct source-to-destination
    path length so that some (but rarely all) targets fit in one route.
    """
    points = []
    while len(points) < num_genuine + 2:
        x, y = rng.uniform(0.0, box), rng.uniform(0.0, box)
        if all(math.hypot(x - px, y - py) > 0.5 for px, py in points):
            points.append((x, y))
    targets = [Target(points[0][0], points[0][1], 0.0)]
    targets += [Target(x, y, float(rng.randint(1, 20))) for x, y in points[1:-1]]
    targets.append(Target(points[-1][0], points[-1][1], 0.0))
    inst = Instance(tuple(targets), num_vehicles, 1.0, rho, uniform_headings(k))
    graph = build_graph(inst)
    direct = min_sequence_length(graph, (inst.source, inst.destination))
    factor = budget_factor if budget_factor is not None else rng.uniform(1.8, 3.5)
    inst = dataclasses.replace(inst, budget=factor * direct)
    return inst, build_graph(inst)


def rebudget(graph: DiscretizedGraph, visits: int, factor: float):
    """Rebuild an instance so routes through ``visits`` targets are feasible:
    the budget becomes ``factor`` times the cheapest such tour."""
    inst = graph.instance
    need = min(
        min_sequence_length(graph, (inst.source,) + perm + (inst.destination,))
        for perm in itertools.permutations(inst.genuine_targets, visits)
    )
    new_inst = dataclasses.replace(inst, budget=factor * need)
    return new_inst, build_graph(new_inst)


def min_sequence_length(graph: DiscretizedGraph, target_seq) -> float:
    """Shortest realization of a target visit order over heading choices."""
    best = {v: 0.0 for v in graph.vertices_of(target_seq[0])}
    for t in target_seq[1:]:
        best = {
            w: min(cost + graph.cost(p, w) for p, cost in best.items())
            for w in graph.vertices_of(t)
        }
    return min(best.values())


def sequence_reduced_cost(instance: Instance, target_seq, duals: DualValues) -> float:
    """Reduced cost of any route visiting ``target_seq`` (vertex-independent)."""
    rc = -duals.fleet
    for t in target_seq[1:-1]:
        rc += (instance.targets[t].score - duals.cover.get(t, 0.0)
               + duals.enforced_targets.get(t, 0.0))
    for pair in zip(target_seq, target_seq[1:]):
        rc += duals.enforced_connections.get(pair, 0.0)
    return rc


def _sequence_allowed(view: ReducedGraphView, target_seq) -> bool:
    return all(pair not in view.forbidden_connections
               for pair in zip(target_seq, target_seq[1:]))


def enumerate_pricing_optimum(view: ReducedGraphView, duals: DualValues):
    """Exhaustive pricing: best reduced cost over all elementary routes.

    Returns ``(best_rc, best_seq, table)`` where ``table`` maps each
    budget-feasible genuine-target sequence to its reduced cost.  The empty
    route is included when the direct connection is usable.
    """
    inst = view.graph.instance
    budget = inst.budget + 1e-9
    best_rc, best_seq = -math.inf, None
    table = {}
    for size in range(len(view.active_genuine) + 1):
        for combo in itertools.combinations(view.active_genuine, size):
            for perm in itertools.permutations(combo):
                seq = (inst.source,) + perm + (inst.destination,)
                if not _sequence_allowed(view, seq):
                    continue
                if min_sequence_length(view.graph, seq) > budget:
                    continue
                rc = sequence_reduced_cost(inst, seq, duals)
                table[perm] = rc
                if rc > best_rc:
                    best_rc, best_seq = rc, seq
    return best_rc, best_seq, table


def random_duals(rng, view: ReducedGraphView, enforced_targets=(),
                 enforced_connections=()) -> DualValues:
    """Dual values shaped like a restricted master's output: nonnegative,
    with cover duals on a random subset of the active targets."""
    inst = view.graph.instance
    cover = {}
    for t in view.active_genuine:
        if rng.random() < 0.7:
            cover[t] = rng.uniform(0.0, inst.targets[t].score * 1.2)
    mu = {t: rng.uniform(0.0, 5.0) for t in enforced_targets}
    nu = {c: rng.uniform(0.0, 5.0) for c in enforced_connections}
    return DualValues(rng.uniform(0.0, 3.0), cover, mu, nu)