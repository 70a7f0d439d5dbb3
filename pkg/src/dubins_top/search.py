"""Exact tree search over the route-selection relaxation.

Every node runs column generation to LP optimality on its reduced graph,
then is classified: unmet enforcement rows (a positive artificial) prune
it as infeasible, a bound no better than the incumbent prunes it, integral
target and connection flows yield an incumbent even when individual route
values are fractional (see :func:`integralize`), and anything else
branches on a fractional target or connection flow.

A coordinator owns the open-node heap, the shared route pool and the
incumbent; worker threads each process one node at a time and talk to the
coordinator only through queues.  With ``workers=1`` the same node logic
runs inline, which makes single-worker runs bit-reproducible.
"""

import heapq
import itertools
import math
import queue
import threading
import time
import traceback
from dataclasses import dataclass, field, replace

from .instance import Instance, ReducedGraphView, build_graph
from .master import MasterSolution, RestrictedMaster, Route, build_master
from .pricing import price

#: Flows within this tolerance of an integer count as integral; bounds within
#: this tolerance of the incumbent are pruned.
FLOW_TOL = 1e-6
#: Allowed slack between an LP objective and the exact score of the integral
#: solution recovered from it (LP round-off scaled by the total score).
OBJECTIVE_SLACK = 1e-3

STATUS_OPTIMAL = "optimal"
STATUS_TIME_LIMIT = "time_limit"


@dataclass(frozen=True)
class SolveParams:
    """Knobs for :func:`solve`; the defaults suit benchmark-sized runs."""

    workers: int = 8
    time_limit: float = 3600.0
    big_m: float = 1e5
    max_paths: int = 500

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.max_paths is not None and self.max_paths < 1:
            raise ValueError("max_paths must be at least 1")


@dataclass(frozen=True)
class NodeState:
    """Constraints defining one subproblem, plus its inherited bound."""

    enforced_targets: frozenset = frozenset()
    forbidden_targets: frozenset = frozenset()
    enforced_connections: frozenset = frozenset()
    forbidden_connections: frozenset = frozenset()
    parent_bound: float = math.inf

    def __post_init__(self):
        if self.enforced_targets & self.forbidden_targets:
            raise ValueError("a target cannot be both enforced and forbidden")
        if self.enforced_connections & self.forbidden_connections:
            raise ValueError("a connection cannot be both enforced and forbidden")


@dataclass(frozen=True)
class SolveStats:
    nodes_explored: int
    wall_time: float
    root_bound: float | None
    status: str
    max_workers_observed: int


@dataclass(frozen=True)
class Solution:
    objective: float
    routes: tuple
    bound: float
    stats: SolveStats


class IntegralizationError(RuntimeError):
    """An integral-flow solution failed to regroup into an equal-value
    integral route selection; indicates a solver defect, never an instance
    property."""


@dataclass
class _NodeOutcome:
    kind: str  # timeout | pruned_infeasible | pruned_bound | integral | branched
    bound: float
    new_routes: list
    children: list = field(default_factory=list)
    incumbent_objective: float = 0.0
    incumbent_routes: tuple = ()
    error: str | None = None


def integralize(solution: MasterSolution, num_vehicles: int, big_m: float):
    """Turn integral flows with fractional route values into routes.

    Routes sharing one target-visit sequence are interchangeable in every
    flow row, so their values can be concentrated on a single
    representative; with all target and connection flows integral each
    group's total value is itself integral, and the regrouped selection is
    an integral solution with the same objective.  Returns
    ``(objective, routes)``; the objective is recomputed exactly from the
    chosen routes' scores.
    """
    if not solution.flows_integral(FLOW_TOL):
        raise ValueError("flows are not integral; branch instead")
    groups: dict[tuple, list] = {}
    for route, value in solution.route_values:
        if value <= FLOW_TOL:
            continue
        groups.setdefault(route.target_sequence, []).append((route, value))

    chosen = []
    visited = set()
    for seq in sorted(groups):
        members = groups[seq]
        group_value = sum(v for _, v in members)
        rounded = round(group_value)
        if abs(group_value - rounded) > FLOW_TOL * max(1, len(members)):
            raise IntegralizationError(
                f"visit sequence {seq} carries non-integral value {group_value}")
        if len(seq) == 2 or rounded == 0:
            continue  # unused group, or routes visiting nothing worth keeping
        if rounded != 1:
            raise IntegralizationError(
                f"visit sequence {seq} carries value {rounded} > 1")
        representative = sorted(members, key=lambda rv: (-rv[1], rv[0].vertices))[0][0]
        overlap = visited.intersection(seq[1:-1])
        if overlap:
            raise IntegralizationError(f"targets {overlap} selected twice")
        visited.update(seq[1:-1])
        chosen.append(representative)

    if len(chosen) > num_vehicles:
        raise IntegralizationError("more routes selected than vehicles")
    objective = sum(route.score for route in chosen)
    lp_net = solution.objective + big_m * solution.artificial
    if abs(lp_net - objective) > OBJECTIVE_SLACK * max(1.0, abs(objective)):
        raise IntegralizationError(
            f"regrouping changed the objective: LP {lp_net} vs routes {objective}")
    return objective, tuple(chosen)


def _fractional(value: float) -> bool:
    return abs(value - round(value)) > FLOW_TOL


def branch(node: NodeState, solution: MasterSolution, instance: Instance) -> list:
    """Children for a node whose converged LP has fractional flows.

    A fractional target flow splits into enforce/forbid on the target with
    the cheapest dual-minus-score.  Otherwise a fractional connection flow
    is chosen by the same key on its start target: when either endpoint is
    already guaranteed visited the connection itself is enforced or
    forbidden, and otherwise the start target's fate is decided together
    with the connection (three children).
    """
    def target_key(t):
        return (solution.duals.cover.get(t, 0.0) - instance.targets[t].score, t)

    base = replace(node, parent_bound=solution.objective)
    fractional_targets = [t for t, flow in solution.target_flows.items()
                          if _fractional(flow)]
    if fractional_targets:
        t = min(fractional_targets, key=target_key)
        return [
            replace(base, enforced_targets=node.enforced_targets | {t}),
            replace(base, forbidden_targets=node.forbidden_targets | {t}),
        ]

    candidates = [c for c, flow in solution.connection_flows.items()
                  if _fractional(flow) and c not in node.enforced_connections]
    if not candidates:
        raise RuntimeError("branch called without a fractional flow")

    def connection_key(conn):
        start = conn[0]
        if start == instance.source:
            return (0.0, conn)
        return (target_key(start)[0], conn)

    conn = min(candidates, key=connection_key)
    start, end = conn
    start_settled = start in node.enforced_targets or start == instance.source
    end_settled = end in node.enforced_targets or end == instance.destination
    if start_settled or end_settled:
        return [
            replace(base, enforced_connections=node.enforced_connections | {conn}),
            replace(base, forbidden_connections=node.forbidden_connections | {conn}),
        ]
    return [
        replace(base, forbidden_targets=node.forbidden_targets | {start}),
        replace(base, enforced_targets=node.enforced_targets | {start},
                forbidden_connections=node.forbidden_connections | {conn}),
        replace(base, enforced_targets=node.enforced_targets | {start},
                enforced_connections=node.enforced_connections | {conn}),
    ]


def node_loop(graph, node: NodeState, pool, params: SolveParams,
              incumbent_objective: float, deadline: float) -> _NodeOutcome:
    """Column generation to LP optimality, then classification."""
    view = ReducedGraphView(graph, node.forbidden_targets, node.forbidden_connections)
    master = build_master(view, pool, node.enforced_targets, node.enforced_connections,
                          big_m=params.big_m)
    new_routes = []
    while True:
        solution = master.solve()
        if time.monotonic() > deadline:
            return _NodeOutcome("timeout", node.parent_bound, new_routes)
        result = price(view, solution.duals, max_paths=params.max_paths,
                       exclude=master.known_routes)
        if not result.routes:
            break
        for route in result.routes:
            if master.add_route(route):
                new_routes.append(route)

    bound = solution.objective
    if solution.infeasible:
        return _NodeOutcome("pruned_infeasible", bound, new_routes)
    if bound <= incumbent_objective + FLOW_TOL:
        return _NodeOutcome("pruned_bound", bound, new_routes)
    if solution.flows_integral(FLOW_TOL):
        objective, routes = integralize(solution, master.num_vehicles, params.big_m)
        return _NodeOutcome("integral", bound, new_routes,
                            incumbent_objective=objective, incumbent_routes=routes)
    children = branch(node, solution, graph.instance)
    return _NodeOutcome("branched", bound, new_routes, children=children)


class _Coordinator:
    """Owns the heap, pool, incumbent and statistics for one solve."""

    def __init__(self, graph, params: SolveParams, deadline: float):
        self.graph = graph
        self.params = params
        self.deadline = deadline
        self.pool: dict[tuple, Route] = {}
        self.heap: list = []
        self.ticket = itertools.count()
        self.incumbent_objective = 0.0
        self.incumbent_routes: tuple = ()
        self.nodes_explored = 0
        self.root_bound: float | None = None
        self.timed_out = False
        self.leftover_bounds: list[float] = []

    def push(self, node: NodeState):
        heapq.heappush(self.heap, (-node.parent_bound, next(self.ticket), node))

    def pop_useful(self):
        """Next node still worth solving; prunes stale ones on the way."""
        while self.heap:
            neg_bound, _, node = heapq.heappop(self.heap)
            if -neg_bound <= self.incumbent_objective + FLOW_TOL:
                self.nodes_explored += 1
                continue
            return node
        return None

    def absorb(self, outcome: _NodeOutcome, is_root: bool):
        self.nodes_explored += 1
        for route in outcome.new_routes:
            self.pool[route.vertices] = route
        if is_root and outcome.kind != "timeout":
            self.root_bound = outcome.bound
        if outcome.kind == "timeout":
            self.timed_out = True
            self.leftover_bounds.append(outcome.bound)
        elif outcome.kind == "integral":
            if outcome.incumbent_objective > self.incumbent_objective:
                self.incumbent_objective = outcome.incumbent_objective
                self.incumbent_routes = outcome.incumbent_routes
        elif outcome.kind == "branched":
            if self.timed_out:
                self.leftover_bounds.append(outcome.bound)
            else:
                for child in outcome.children:
                    self.push(child)

    def final_bound(self) -> float:
        open_bounds = [-entry[0] for entry in self.heap]
        return max([self.incumbent_objective] + open_bounds + self.leftover_bounds)


def _worker(coordinator: _Coordinator, assignments: queue.Queue, results: queue.Queue):
    while True:
        message = assignments.get()
        if message is None:
            return
        ticket, node, incumbent_objective, pool_snapshot = message
        try:
            outcome = node_loop(coordinator.graph, node, pool_snapshot,
                                coordinator.params, incumbent_objective,
                                coordinator.deadline)
        except Exception:
            outcome = _NodeOutcome("error", node.parent_bound, [],
                                   error=traceback.format_exc())
        results.put((ticket, outcome))


def _solve_inline(coordinator: _Coordinator) -> int:
    is_root = True
    while True:
        if time.monotonic() > coordinator.deadline:
            coordinator.timed_out = True
            break
        node = coordinator.pop_useful()
        if node is None:
            break
        outcome = node_loop(coordinator.graph, node, tuple(coordinator.pool.values()),
                            coordinator.params, coordinator.incumbent_objective,
                            coordinator.deadline)
        if outcome.kind == "error":  # pragma: no cover - defensive
            raise RuntimeError(outcome.error)
        coordinator.absorb(outcome, is_root)
        is_root = False
    return 1


def _solve_threaded(coordinator: _Coordinator) -> int:
    params = coordinator.params
    assignments: queue.Queue = queue.Queue()
    results: queue.Queue = queue.Queue()
    threads = [threading.Thread(target=_worker, daemon=True,
                                args=(coordinator, assignments, results))
               for _ in range(params.workers)]
    for thread in threads:
        thread.start()

    active: dict[int, NodeState] = {}
    tickets = itertools.count()
    root_ticket: int | None = 0
    max_active = 0
    failure: str | None = None
    try:
        while True:
            while (not coordinator.timed_out and failure is None
                   and len(active) < params.workers):
                node = coordinator.pop_useful()
                if node is None:
                    break
                ticket = next(tickets)
                active[ticket] = node
                assignments.put((ticket, node, coordinator.incumbent_objective,
                                 tuple(coordinator.pool.values())))
            max_active = max(max_active, len(active))
            if not active:
                break
            ticket, outcome = results.get()
            node = active.pop(ticket)
            if outcome.kind == "error":
                failure = outcome.error
                coordinator.timed_out = True  # stop assigning, drain workers
                continue
            coordinator.absorb(outcome, is_root=(ticket == root_ticket))
    finally:
        for _ in threads:
            assignments.put(None)
        for thread in threads:
            thread.join()
    if failure is not None:
        raise RuntimeError(f"node processing failed:\n{failure}")
    return max(max_active, 1)


def solve(instance: Instance, params: SolveParams | None = None, **overrides) -> Solution:
    """Prove an optimal route selection for ``instance``.

    Returns the incumbent, the tightest global upper bound (equal to the
    incumbent on optimal termination), and run statistics.  A zero
    objective with no routes is a legitimate optimum when no scored target
    is reachable within budget.
    """
    if params is None:
        params = SolveParams(**overrides)
    elif overrides:
        params = replace(params, **overrides)
    started = time.monotonic()
    deadline = started + params.time_limit
    graph = build_graph(instance)
    coordinator = _Coordinator(graph, params, deadline)
    coordinator.push(NodeState())

    if params.workers == 1:
        observed = _solve_inline(coordinator)
    else:
        observed = _solve_threaded(coordinator)

    status = STATUS_TIME_LIMIT if coordinator.timed_out else STATUS_OPTIMAL
    bound = (coordinator.final_bound() if coordinator.timed_out
             else coordinator.incumbent_objective)
    stats = SolveStats(
        nodes_explored=max(coordinator.nodes_explored, 1),
        wall_time=time.monotonic() - started,
        root_bound=coordinator.root_bound,
        status=status,
        max_workers_observed=observed,
    )
    return Solution(coordinator.incumbent_objective, coordinator.incumbent_routes,
                    bound, stats)