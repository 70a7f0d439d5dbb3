"""Restricted master problem for the route-based set-packing formulation.

Each column is one feasible route; the LP relaxation maximizes collected
score subject to a fleet-size row and at-most-once cover rows per target.
A branch-and-bound node additionally carries at-least-once rows for its
enforced targets and enforced directed target connections; a single
artificial column priced at ``-big_m`` keeps those rows feasible, so an
artificial value above tolerance at the optimum certifies that the node
cannot satisfy its enforcements and can be pruned.
"""

import math
from dataclasses import dataclass

import numpy as np

from .instance import DiscretizedGraph, ReducedGraphView
from .lp import GREATER_EQUAL, LESS_EQUAL, OPTIMAL, TOL, LinearProgram

DEFAULT_BIG_M = 1e5


@dataclass(frozen=True)
class Route:
    """An elementary source-to-destination route over graph vertices."""

    vertices: tuple[int, ...]
    target_sequence: tuple[int, ...]
    length: float
    score: float

    @property
    def genuine_targets(self) -> frozenset:
        return frozenset(self.target_sequence[1:-1])

    @property
    def connections(self) -> tuple:
        """Directed target pairs traversed, including source/destination legs."""
        return tuple(zip(self.target_sequence, self.target_sequence[1:]))

    @staticmethod
    def from_vertices(graph: DiscretizedGraph, vertices) -> "Route":
        vertices = tuple(vertices)
        inst = graph.instance
        targets = tuple(graph.target_of(v) for v in vertices)
        if len(vertices) < 2 or targets[0] != inst.source or targets[-1] != inst.destination:
            raise ValueError("a route must run from a source vertex to a destination vertex")
        interior = targets[1:-1]
        if len(set(interior)) != len(interior) or inst.source in interior or inst.destination in interior:
            raise ValueError("route visits a target more than once")
        length = 0.0
        for p, q in zip(vertices, vertices[1:]):
            length += graph.cost(p, q)
        if not math.isfinite(length):
            raise ValueError("route uses a nonexistent edge")
        if length > inst.budget + 1e-9:
            raise ValueError(f"route length {length} exceeds budget {inst.budget}")
        score = sum(inst.targets[t].score for t in interior)
        return Route(vertices, targets, length, float(score))


@dataclass(frozen=True)
class DualValues:
    """Optimal duals of one master solve, already sign-normalized so that
    every component is >= 0 and enters the reduced cost with the signs in
    :func:`reduced_cost`."""

    fleet: float
    cover: dict
    enforced_targets: dict
    enforced_connections: dict


def reduced_cost(route: Route, duals: DualValues) -> float:
    """score - fleet dual - sum of cover duals + enforcement bonuses.

    Positive means the column would improve the current master optimum.
    """
    value = route.score - duals.fleet
    for t in route.target_sequence[1:-1]:
        value -= duals.cover.get(t, 0.0)
        value += duals.enforced_targets.get(t, 0.0)
    for pair in zip(route.target_sequence, route.target_sequence[1:]):
        value += duals.enforced_connections.get(pair, 0.0)
    return value


@dataclass
class MasterSolution:
    objective: float
    artificial: float
    route_values: list  # (Route, value) pairs, in column order
    duals: DualValues
    target_flows: dict
    connection_flows: dict

    def flows_integral(self, tol: float = TOL) -> bool:
        for flow in self.target_flows.values():
            if abs(flow - round(flow)) > tol:
                return False
        for flow in self.connection_flows.values():
            if abs(flow - round(flow)) > tol:
                return False
        return True

    @property
    def infeasible(self) -> bool:
        """Enforcements unmet even with every route available to the node."""
        return self.artificial > TOL


class RestrictedMaster:
    """LP over the current route pool for one branch-and-bound node."""

    def __init__(self, view: ReducedGraphView, enforced_targets=(), enforced_connections=(),
                 num_vehicles: int | None = None, big_m: float = DEFAULT_BIG_M):
        inst = view.graph.instance
        self.view = view
        self.num_vehicles = inst.num_vehicles if num_vehicles is None else num_vehicles
        self.big_m = big_m
        self.enforced_targets = tuple(sorted(enforced_targets))
        self.enforced_connections = tuple(sorted(enforced_connections))
        for t in self.enforced_targets:
            if t in view.forbidden_targets:
                raise ValueError(f"target {t} is both enforced and forbidden")
        for c in self.enforced_connections:
            if c in view.forbidden_connections:
                raise ValueError(f"connection {c} is both enforced and forbidden")

        self.cover_targets = tuple(view.active_genuine)
        senses = [LESS_EQUAL] + [LESS_EQUAL] * len(self.cover_targets)
        rhs = [float(self.num_vehicles)] + [1.0] * len(self.cover_targets)
        senses += [GREATER_EQUAL] * (len(self.enforced_targets) + len(self.enforced_connections))
        rhs += [1.0] * (len(self.enforced_targets) + len(self.enforced_connections))
        self._cover_row = {t: 1 + i for i, t in enumerate(self.cover_targets)}
        offset = 1 + len(self.cover_targets)
        self._enforced_row = {t: offset + i for i, t in enumerate(self.enforced_targets)}
        offset += len(self.enforced_targets)
        self._connection_row = {c: offset + i for i, c in enumerate(self.enforced_connections)}

        self.lp = LinearProgram(senses, rhs)
        y_coeffs = np.zeros(self.lp.num_rows)
        for row in self._enforced_row.values():
            y_coeffs[row] = 1.0
        for row in self._connection_row.values():
            y_coeffs[row] = 1.0
        self.lp.add_column(-big_m, y_coeffs, 0.0, math.inf)

        self.routes: list[Route] = []
        self._column_of: dict[tuple, int] = {}
        self._basis = None

    def __contains__(self, vertices) -> bool:
        return tuple(vertices) in self._column_of

    @property
    def known_routes(self) -> set:
        """Vertex sequences already priced into the LP."""
        return set(self._column_of)

    def add_route(self, route: Route) -> bool:
        """Append a column; returns False when the route is already present."""
        if route.vertices in self._column_of:
            return False
        if not self.view.allows_route(route.target_sequence):
            raise ValueError(f"route {route.target_sequence} violates the node's restrictions")
        coeffs = np.zeros(self.lp.num_rows)
        coeffs[0] = 1.0
        for t in route.target_sequence[1:-1]:
            coeffs[self._cover_row[t]] = 1.0
            row = self._enforced_row.get(t)
            if row is not None:
                coeffs[row] = 1.0
        for pair in zip(route.target_sequence, route.target_sequence[1:]):
            row = self._connection_row.get(pair)
            if row is not None:
                coeffs[row] = 1.0
        col = self.lp.add_column(route.score, coeffs, 0.0, 1.0)
        self.routes.append(route)
        self._column_of[route.vertices] = col
        return True

    def solve(self) -> MasterSolution:
        sol = self.lp.solve(warm_start=self._basis)
        if sol.status != OPTIMAL:
            raise RuntimeError(f"master LP unexpectedly {sol.status}")
        self._basis = sol.basis

        duals = DualValues(
            fleet=max(float(sol.duals[0]), 0.0),
            cover={t: max(float(sol.duals[row]), 0.0) for t, row in self._cover_row.items()},
            enforced_targets={t: max(-float(sol.duals[row]), 0.0) for t, row in self._enforced_row.items()},
            enforced_connections={c: max(-float(sol.duals[row]), 0.0) for c, row in self._connection_row.items()},
        )
        route_values = [(route, float(sol.primal[col]))
                        for route, col in zip(self.routes, range(1, 1 + len(self.routes)))]
        target_flows = {t: 0.0 for t in self.cover_targets}
        connection_flows = {}
        for route, value in route_values:
            if value == 0.0:
                continue
            for t in route.target_sequence[1:-1]:
                target_flows[t] += value
            for pair in route.connections:
                connection_flows[pair] = connection_flows.get(pair, 0.0) + value
        return MasterSolution(
            objective=float(sol.objective),
            artificial=float(sol.primal[0]),
            route_values=route_values,
            duals=duals,
            target_flows=target_flows,
            connection_flows=connection_flows,
        )


def build_master(view: ReducedGraphView, pool, enforced_targets=(), enforced_connections=(),
                 num_vehicles=None, big_m=DEFAULT_BIG_M) -> RestrictedMaster:
    """Create a node's master and load every pool route the node still allows."""
    master = RestrictedMaster(view, enforced_targets, enforced_connections, num_vehicles, big_m)
    for route in pool:
        if master.view.allows_route(route.target_sequence):
            master.add_route(route)
    return master


def target_flows(solution: MasterSolution) -> dict:
    return dict(solution.target_flows)


def connection_flows(solution: MasterSolution) -> dict:
    return dict(solution.connection_flows)
