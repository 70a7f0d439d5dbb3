"""Problem instances, heading discretization, and the vertex graph.

An instance is a list of scored targets in the plane (first entry is the
common source, last is the common destination), a fleet size, a per-route
length budget, a turn radius, and a finite set of approach headings.
Discretization expands every target into one vertex per heading; edge
costs between vertices of different targets are shortest Dubins lengths.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, Configuration, shortest_dubins


class InstanceFormatError(ValueError):
    """Raised for malformed instance text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Target:
    x: float
    y: float
    score: float


@dataclass(frozen=True)
class Instance:
    """A complete problem statement. ``targets[0]`` is the source and
    ``targets[-1]`` the destination; both always carry score 0."""

    targets: tuple[Target, ...]
    num_vehicles: int
    budget: float
    rho: float
    headings: tuple[float, ...]

    def __post_init__(self):
        if len(self.targets) < 2:
            raise ValueError("an instance needs at least a source and a destination")
        if self.num_vehicles < 1:
            raise ValueError(f"fleet size must be >= 1, got {self.num_vehicles}")
        if self.budget <= 0.0:
            raise ValueError(f"budget must be positive, got {self.budget}")
        if self.rho <= 0.0:
            raise ValueError(f"turn radius must be positive, got {self.rho}")
        if not self.headings:
            raise ValueError("at least one heading is required")
        for h0, h1 in zip(self.headings, self.headings[1:]):
            if h1 <= h0:
                raise ValueError("headings must be strictly increasing")
        if self.headings[0] < 0.0 or self.headings[-1] >= TWO_PI:
            raise ValueError("headings must lie in [0, 2*pi)")

    @property
    def num_targets(self) -> int:
        return len(self.targets)

    @property
    def source(self) -> int:
        return 0

    @property
    def destination(self) -> int:
        return len(self.targets) - 1

    @property
    def genuine_targets(self) -> range:
        """Targets that carry score and may be skipped (everything but the
        source and destination)."""
        return range(1, len(self.targets) - 1)


def uniform_headings(count: int) -> tuple[float, ...]:
    """``count`` equally spaced headings starting at 0: {2*pi*i/count}."""
    if count < 1:
        raise ValueError(f"need at least one heading, got {count}")
    return tuple(TWO_PI * i / count for i in range(count))


def _num(token: str, line: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise InstanceFormatError(f"expected a number for {what}, got {token!r}", line) from None


def parse_instance(text: str, rho: float = 1.0, num_headings: int = 2) -> Instance:
    """Parse the common three-header benchmark text format.

    Header lines ``n <targets>``, ``m <vehicles>``, ``tmax <budget>``
    (keys case-insensitive), followed by one ``x y score`` line per target;
    the first coordinate line is the source, the last the destination.
    ``rho`` and ``num_headings`` augment the file, which carries neither.
    """
    lines = text.splitlines()
    numbered = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if len(numbered) < 3:
        raise InstanceFormatError("missing header lines (need n, m, tmax)", len(lines))

    header = {}
    for (lineno, content), key in zip(numbered[:3], ("n", "m", "tmax")):
        parts = content.split()
        if len(parts) != 2 or parts[0].lower() != key:
            raise InstanceFormatError(f"expected header '{key} <value>', got {content!r}", lineno)
        header[key] = _num(parts[1], lineno, key)

    count = int(header["n"])
    if count != header["n"] or count < 2:
        raise InstanceFormatError(f"target count must be an integer >= 2, got {header['n']}", numbered[0][0])
    vehicles = int(header["m"])
    if vehicles != header["m"] or vehicles < 1:
        raise InstanceFormatError(f"fleet size must be an integer >= 1, got {header['m']}", numbered[1][0])
    budget = header["tmax"]
    if budget <= 0.0:
        raise InstanceFormatError(f"budget must be positive, got {budget}", numbered[2][0])

    body = numbered[3:]
    if len(body) != count:
        raise InstanceFormatError(
            f"header announces {count} targets but {len(body)} coordinate lines follow",
            body[-1][0] if body else numbered[2][0],
        )
    targets = []
    for lineno, content in body:
        parts = content.split()
        if len(parts) != 3:
            raise InstanceFormatError(f"expected 'x y score', got {content!r}", lineno)
        x = _num(parts[0], lineno, "x")
        y = _num(parts[1], lineno, "y")
        score = _num(parts[2], lineno, "score")
        targets.append(Target(x, y, score))
    targets[0] = Target(targets[0].x, targets[0].y, 0.0)
    targets[-1] = Target(targets[-1].x, targets[-1].y, 0.0)

    return Instance(tuple(targets), vehicles, budget, rho, uniform_headings(num_headings))


_STRUCTURED_KEYS = ("vehicles", "budget", "turn_radius", "headings", "target")


def parse_structured_instance(text: str) -> Instance:
    """Parse the self-describing fixture format.

    One ``<key> <values...>`` statement per line; ``#`` starts a comment.
    Required keys: ``vehicles``, ``budget``, ``turn_radius``, ``headings``
    (radians, strictly increasing in [0, 2*pi)), and two or more ``target
    x y score`` lines, first = source, last = destination.
    """
    fields: dict[str, tuple[int, list[str]]] = {}
    targets: list[Target] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        parts = content.split()
        key = parts[0].lower()
        if key not in _STRUCTURED_KEYS:
            raise InstanceFormatError(f"unknown field {parts[0]!r}", lineno)
        if key == "target":
            if len(parts) != 4:
                raise InstanceFormatError("expected 'target x y score'", lineno)
            targets.append(
                Target(
                    _num(parts[1], lineno, "x"),
                    _num(parts[2], lineno, "y"),
                    _num(parts[3], lineno, "score"),
                )
            )
        else:
            if key in fields:
                raise InstanceFormatError(f"duplicate field {key!r}", lineno)
            fields[key] = (lineno, parts[1:])

    for key in ("vehicles", "budget", "turn_radius", "headings"):
        if key not in fields:
            raise InstanceFormatError(f"missing required field {key!r}")
    if len(targets) < 2:
        raise InstanceFormatError("need at least two 'target' lines (source and destination)")

    lineno, vals = fields["vehicles"]
    if len(vals) != 1:
        raise InstanceFormatError("'vehicles' takes one value", lineno)
    vehicles = int(_num(vals[0], lineno, "vehicles"))
    lineno, vals = fields["budget"]
    if len(vals) != 1:
        raise InstanceFormatError("'budget' takes one value", lineno)
    budget = _num(vals[0], lineno, "budget")
    lineno, vals = fields["turn_radius"]
    if len(vals) != 1:
        raise InstanceFormatError("'turn_radius' takes one value", lineno)
    rho = _num(vals[0], lineno, "turn_radius")
    lineno, vals = fields["headings"]
    if not vals:
        raise InstanceFormatError("'headings' needs at least one value", lineno)
    headings = tuple(_num(v, lineno, "heading") for v in vals)

    targets[0] = Target(targets[0].x, targets[0].y, 0.0)
    targets[-1] = Target(targets[-1].x, targets[-1].y, 0.0)
    try:
        return Instance(tuple(targets), vehicles, budget, rho, headings)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def load_instance(path, rho: float = 1.0, num_headings: int = 2) -> Instance:
    """Read an instance file, auto-detecting which of the two formats it uses.

    ``rho`` and ``num_headings`` only apply to the benchmark format; the
    structured format fixes both in the file.
    """
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    for raw in text.splitlines():
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        key = content.split()[0].lower()
        if key in _STRUCTURED_KEYS:
            return parse_structured_instance(text)
        return parse_instance(text, rho=rho, num_headings=num_headings)
    raise InstanceFormatError("file contains no instance data")


@dataclass(frozen=True)
class DiscretizedGraph:
    """Heading-expanded vertex graph over an instance.

    Vertex ids are ``target_id * k + heading_index``; ``costs[p, q]`` is the
    shortest Dubins length from vertex p's pose to vertex q's pose, with
    ``inf`` between vertices of the same target (no such edges exist).
    """

    instance: Instance
    costs: np.ndarray = field(repr=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.instance.headings)

    @property
    def num_vertices(self) -> int:
        return self.instance.num_targets * self.k

    def vertex(self, target: int, heading_index: int) -> int:
        return target * self.k + heading_index

    def target_of(self, vertex: int) -> int:
        return vertex // self.k

    def heading_index_of(self, vertex: int) -> int:
        return vertex % self.k

    def vertices_of(self, target: int) -> range:
        return range(target * self.k, (target + 1) * self.k)

    def config_of(self, vertex: int) -> Configuration:
        tgt = self.instance.targets[self.target_of(vertex)]
        return Configuration(tgt.x, tgt.y, self.instance.headings[self.heading_index_of(vertex)])

    def cost(self, p: int, q: int) -> float:
        return float(self.costs[p, q])


def build_graph(instance: Instance) -> DiscretizedGraph:
    """Compute the dense vertex-to-vertex cost matrix for an instance."""
    k = len(instance.headings)
    n = instance.num_targets
    size = n * k
    configs = [
        Configuration(t.x, t.y, h) for t in instance.targets for h in instance.headings
    ]
    costs = np.full((size, size), np.inf)
    for p in range(size):
        for q in range(size):
            if p // k == q // k:
                continue
            costs[p, q] = shortest_dubins(configs[p], configs[q], instance.rho).total_length
    return DiscretizedGraph(instance, costs)


class ReducedGraphView:
    """A branch-and-bound node's view of the shared graph.

    Filters out forbidden targets and forbidden directed target connections
    without copying the cost matrix, and caches the adjacency lists the
    route-pricing labelling sweeps over.
    """

    def __init__(self, graph: DiscretizedGraph, forbidden_targets=frozenset(), forbidden_connections=frozenset()):
        inst = graph.instance
        if inst.source in forbidden_targets or inst.destination in forbidden_targets:
            raise ValueError("source and destination can never be forbidden")
        self.graph = graph
        self.forbidden_targets = frozenset(forbidden_targets)
        self.forbidden_connections = frozenset(forbidden_connections)
        self.active_genuine = tuple(
            t for t in inst.genuine_targets if t not in self.forbidden_targets
        )
        self._forward = None
        self._backward = None
        self._join = None

    def allows_route(self, targets_in_order) -> bool:
        """True when a target sequence avoids everything this node forbids."""
        if any(t in self.forbidden_targets for t in targets_in_order):
            return False
        return all(
            (a, b) not in self.forbidden_connections
            for a, b in zip(targets_in_order, targets_in_order[1:])
        )

    def _edges_from(self, p: int, to_targets) -> list[tuple[int, float, int]]:
        g = self.graph
        tp = g.target_of(p)
        out = []
        for tq in to_targets:
            if tq == tp or (tp, tq) in self.forbidden_connections:
                continue
            for q in g.vertices_of(tq):
                out.append((q, g.cost(p, q), tq))
        return out

    def forward_adjacency(self) -> dict[int, list[tuple[int, float, int]]]:
        """Extensions used while growing route prefixes: from the source or a
        genuine target to genuine targets."""
        if self._forward is None:
            g = self.graph
            starts = list(g.vertices_of(g.instance.source))
            for t in self.active_genuine:
                starts.extend(g.vertices_of(t))
            self._forward = {p: self._edges_from(p, self.active_genuine) for p in starts}
        return self._forward

    def backward_adjacency(self) -> dict[int, list[tuple[int, float, int]]]:
        """Reverse extensions for route suffixes: each entry lists the
        predecessors p that can precede vertex q, with the forward edge
        cost c(p, q)."""
        if self._backward is None:
            g = self.graph
            ends = list(g.vertices_of(g.instance.destination))
            for t in self.active_genuine:
                ends.extend(g.vertices_of(t))
            back = {}
            for q in ends:
                tq = g.target_of(q)
                rows = []
                for tp in self.active_genuine:
                    if tp == tq or (tp, tq) in self.forbidden_connections:
                        continue
                    for p in g.vertices_of(tp):
                        rows.append((p, g.cost(p, q), tp))
                back[q] = rows
            self._backward = back
        return self._backward

    def join_adjacency(self) -> dict[int, list[tuple[int, float, int]]]:
        """All usable edges: from source/genuine vertices to genuine/destination
        vertices.  Used to connect prefix and suffix label pairs."""
        if self._join is None:
            g = self.graph
            inst = g.instance
            froms = list(g.vertices_of(inst.source))
            for t in self.active_genuine:
                froms.extend(g.vertices_of(t))
            to_targets = list(self.active_genuine) + [inst.destination]
            self._join = {p: self._edges_from(p, to_targets) for p in froms}
        return self._join
