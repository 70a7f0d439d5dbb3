"""Independent brute-force reference implementations.

Everything here exists to check the fast code paths, so it deliberately
shares no logic with them: shortest paths are rebuilt from circle-tangent
geometry and validated by numerically integrating the steering sequence,
and optimal objectives come from exhaustive enumeration over tiny inputs.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, Configuration, normalize_angle

ENDPOINT_TOL = 1e-3
LP_ORACLE_MAX_COLS = 6


def _unit(angle):
    return np.array([math.cos(angle), math.sin(angle)])


def _left_center(cfg: Configuration, rho: float):
    return np.array([cfg.x - rho * math.sin(cfg.heading), cfg.y + rho * math.cos(cfg.heading)])


def _right_center(cfg: Configuration, rho: float):
    return np.array([cfg.x + rho * math.sin(cfg.heading), cfg.y - rho * math.cos(cfg.heading)])


def _arc_angle(center, from_pt, to_pt, turn: str) -> float:
    """Swept angle (in [0, 2*pi)) travelling from from_pt to to_pt around center."""
    a0 = math.atan2(from_pt[1] - center[1], from_pt[0] - center[0])
    a1 = math.atan2(to_pt[1] - center[1], to_pt[0] - center[0])
    return normalize_angle(a1 - a0) if turn == "L" else normalize_angle(a0 - a1)


def _csc_candidates(word, start, end, rho):
    """Straight-tangent construction for LSL/RSR/LSR/RSL."""
    c1 = _left_center(start, rho) if word[0] == "L" else _right_center(start, rho)
    c2 = _left_center(end, rho) if word[2] == "L" else _right_center(end, rho)
    delta = c2 - c1
    dist = float(np.hypot(*delta))
    psi = math.atan2(delta[1], delta[0])
    if word[0] == word[2]:
        # Outer tangent, parallel to the center line.
        straight = dist
        theta_t = psi
    else:
        # Inner tangent, crossing between the circles.
        if dist < 2.0 * rho - 1e-12:
            return []
        straight = math.sqrt(max(dist * dist - 4.0 * rho * rho, 0.0))
        if word[0] == "L":  # LSR
            theta_t = psi + math.atan2(2.0 * rho, straight)
        else:  # RSL
            theta_t = psi - math.atan2(2.0 * rho, straight)
    off1 = theta_t - math.pi / 2.0 if word[0] == "L" else theta_t + math.pi / 2.0
    off2 = theta_t - math.pi / 2.0 if word[2] == "L" else theta_t + math.pi / 2.0
    p1 = c1 + rho * _unit(off1)
    p2 = c2 + rho * _unit(off2)
    start_pt = np.array([start.x, start.y])
    end_pt = np.array([end.x, end.y])
    arc1 = _arc_angle(c1, start_pt, p1, word[0])
    arc2 = _arc_angle(c2, p2, end_pt, word[2])
    return [(arc1 * rho, straight, arc2 * rho)]


def _ccc_candidates(word, start, end, rho):
    """Middle-circle construction for RLR/LRL; both intersection points."""
    c1 = _left_center(start, rho) if word[0] == "L" else _right_center(start, rho)
    c3 = _left_center(end, rho) if word[2] == "L" else _right_center(end, rho)
    delta = c3 - c1
    dist = float(np.hypot(*delta))
    if dist > 4.0 * rho + 1e-12 or dist < 1e-12:
        return []
    half = dist / 2.0
    height = math.sqrt(max(4.0 * rho * rho - half * half, 0.0))
    mid = (c1 + c3) / 2.0
    perp = np.array([-delta[1], delta[0]]) / dist
    start_pt = np.array([start.x, start.y])
    end_pt = np.array([end.x, end.y])
    out = []
    for sign in (1.0, -1.0):
        c2 = mid + sign * height * perp
        p1 = (c1 + c2) / 2.0
        p2 = (c2 + c3) / 2.0
        arc1 = _arc_angle(c1, start_pt, p1, word[0])
        arc2 = _arc_angle(c2, p1, p2, word[1])
        arc3 = _arc_angle(c3, p2, end_pt, word[2])
        out.append((arc1 * rho, arc2 * rho, arc3 * rho))
    return out


def _integrate_endpoint(start: Configuration, word: str, seg_lengths, rho: float, step: float):
    """Forward-integrate the steering sequence with the midpoint rule."""
    x, y, heading = start.x, start.y, start.heading
    for turn, seg in zip(word, seg_lengths):
        if seg <= 0.0:
            continue
        kappa = 0.0 if turn == "S" else (1.0 / rho if turn == "L" else -1.0 / rho)
        n = max(1, math.ceil(seg / step))
        h = seg / n
        s_mid = (np.arange(n) + 0.5) * h
        thetas = heading + kappa * s_mid
        x += h * float(np.sum(np.cos(thetas)))
        y += h * float(np.sum(np.sin(thetas)))
        heading += kappa * seg
    return x, y, heading


_ORACLE_WORDS = ("LSL", "RSR", "LSR", "RSL", "RLR", "LRL")


def dubins_numeric(start: Configuration, end: Configuration, rho: float, step: float = 1e-3) -> float:
    """Reference shortest-path length, built independently of the closed forms.

    Candidates for each of the six words come from circle-tangent geometry;
    each one is accepted only if forward integration of its steering sequence
    lands within ``ENDPOINT_TOL`` of the requested end pose.
    """
    if rho <= 0.0 or step <= 0.0:
        raise ValueError("rho and step must be positive")
    dist = math.hypot(end.x - start.x, end.y - start.y)
    dturn = normalize_angle(start.heading - end.heading)
    if dist < 1e-9 and min(dturn, TWO_PI - dturn) < 1e-9:
        return 0.0
    best = math.inf
    for word in _ORACLE_WORDS:
        if word[1] == "S":
            candidates = _csc_candidates(word, start, end, rho)
        else:
            candidates = _ccc_candidates(word, start, end, rho)
        for seg_lengths in candidates:
            x, y, heading = _integrate_endpoint(start, word, seg_lengths, rho, step)
            pos_err = math.hypot(x - end.x, y - end.y)
            dh = normalize_angle(heading - end.heading)
            head_err = min(dh, TWO_PI - dh)
            if pos_err < ENDPOINT_TOL and head_err < ENDPOINT_TOL:
                best = min(best, sum(seg_lengths))
    return best


def enumerate_lp_optimum(program):
    """Optimum of a small bounded LP by enumerating basic solutions.

    Walks every choice of basis among structural and slack columns, with
    each remaining variable pinned at one of its finite bounds, and keeps
    the best feasible point.  Only meant for programs with at most
    ``LP_ORACLE_MAX_COLS`` structural columns; returns ``(status,
    objective, primal)`` with status "optimal" or "infeasible".
    """
    if program.num_cols > LP_ORACLE_MAX_COLS:
        raise ValueError(f"oracle only enumerates up to {LP_ORACLE_MAX_COLS} columns")
    m = program.num_rows
    n = program.num_cols
    A, c, lb, ub = program._extended()
    total = n + m
    b = program.rhs
    best_obj = -math.inf
    best_x = None
    feasible = False
    for basis in itertools.combinations(range(total), m):
        nonbasic = [j for j in range(total) if j not in basis]
        flippable = [j for j in nonbasic if math.isfinite(ub[j]) and ub[j] > lb[j]]
        B = A[:, list(basis)]
        if m and abs(np.linalg.det(B)) < 1e-12:
            continue
        for upper_mask in itertools.product((False, True), repeat=len(flippable)):
            x = lb.copy()
            for j, hi in zip(flippable, upper_mask):
                if hi:
                    x[j] = ub[j]
            if m:
                x[list(basis)] = 0.0
                x[list(basis)] = np.linalg.solve(B, b - A @ x)
            if np.any(x < lb - 1e-9) or np.any(x > ub + 1e-9):
                continue
            feasible = True
            obj = float(c[:n] @ x[:n]) if n else 0.0
            if obj > best_obj + 1e-12:
                best_obj = obj
                best_x = x[:n].copy()
    if not feasible:
        return "infeasible", math.nan, None
    return "optimal", best_obj, best_x


@dataclass(frozen=True)
class OracleResult:
    """Exhaustively verified optimum: the objective, one optimal set of
    visit orders (one tuple of target ids per used vehicle), and how many
    complete visit orders were evaluated along the way."""

    objective: float
    routes: tuple
    enumerated: int


def _best_disjoint_union(feasible, scores, num_vehicles):
    """Best total score over at most ``num_vehicles`` pairwise-disjoint
    feasible target sets.  ``feasible`` maps bitmask -> best visit order."""
    layers = {0: (0.0, ())}
    for _ in range(num_vehicles):
        grown = dict(layers)
        for covered, (score, chosen) in layers.items():
            for mask, order in feasible.items():
                if mask & covered:
                    continue
                total = score + scores[mask]
                key = covered | mask
                if total > grown.get(key, (-math.inf,))[0] + 1e-15:
                    grown[key] = (total, chosen + (order,))
        layers = grown
    return max(layers.values())


def enumerate_dtop(graph, num_vehicles: int, budget: float) -> OracleResult:
    """Exact optimum of the heading-discretized problem by trying every
    visit order and every heading choice for up to ``num_vehicles`` routes."""
    inst = graph.instance
    genuine = list(inst.genuine_targets)
    if len(genuine) > 8:
        raise ValueError("oracle limited to 8 scored targets")
    if graph.k > 3:
        raise ValueError("oracle limited to 3 headings per target")
    slack = budget + 1e-9
    dest = inst.destination
    feasible: dict[int, tuple] = {}
    lengths: dict[int, float] = {}
    counter = [0]

    def close(frontier, mask, order):
        counter[0] += 1
        tour = min(cost + graph.cost(v, w)
                   for v, cost in frontier.items()
                   for w in graph.vertices_of(dest))
        if mask and tour <= slack and tour < lengths.get(mask, math.inf):
            lengths[mask] = tour
            feasible[mask] = order

    def grow(frontier, mask, order):
        close(frontier, mask, order)
        for t in genuine:
            bit = 1 << t
            if mask & bit:
                continue
            nxt = {
                w: min(cost + graph.cost(v, w) for v, cost in frontier.items())
                for w in graph.vertices_of(t)
            }
            if min(nxt.values()) > slack:
                continue
            grow(nxt, mask | bit, order + (t,))

    grow({v: 0.0 for v in graph.vertices_of(inst.source)}, 0, ())
    scores = {mask: sum(inst.targets[t].score for t in order)
              for mask, order in feasible.items()}
    objective, routes = _best_disjoint_union(feasible, scores, num_vehicles)
    return OracleResult(objective, routes, counter[0])


def enumerate_top_euclidean(instance, num_vehicles: int, budget: float) -> OracleResult:
    """Exact optimum of the straight-line relaxation: same targets, scores
    and budget, but point-to-point distances and no heading constraints."""
    genuine = list(instance.genuine_targets)
    if len(genuine) > 8:
        raise ValueError("oracle limited to 8 scored targets")
    pts = [(t.x, t.y) for t in instance.targets]

    def dist(a, b):
        return math.hypot(pts[a][0] - pts[b][0], pts[a][1] - pts[b][1])

    slack = budget + 1e-9
    dest = instance.destination
    feasible: dict[int, tuple] = {}
    lengths: dict[int, float] = {}
    counter = [0]

    def grow(last, travelled, mask, order):
        counter[0] += 1
        tour = travelled + dist(last, dest)
        if mask and tour <= slack and tour < lengths.get(mask, math.inf):
            lengths[mask] = tour
            feasible[mask] = order
        for t in genuine:
            bit = 1 << t
            if mask & bit:
                continue
            reached = travelled + dist(last, t)
            if reached > slack:
                continue
            grow(t, reached, mask | bit, order + (t,))

    grow(instance.source, 0.0, 0, ())
    scores = {mask: sum(instance.targets[t].score for t in order)
              for mask, order in feasible.items()}
    objective, routes = _best_disjoint_union(feasible, scores, num_vehicles)
    return OracleResult(objective, routes, counter[0])
