"""Shortest curvature-constrained (Dubins) paths between planar poses.

A vehicle that moves forward at unit speed and cannot turn tighter than a
fixed radius follows, between any two poses, a shortest path made of at
most three segments: circular arcs at the minimum radius and straight
lines.  Only six segment words can be optimal: LSL, RSR, LSR, RSL, RLR,
LRL ('L' = left arc, 'R' = right arc, 'S' = straight).
"""

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# Numerical slack for deciding whether a word is geometrically applicable
# (e.g. a squared straight-segment length that comes out at -1e-15).
WORD_FEASIBILITY_TOL = 1e-9

# Below this separation two positions count as coincident.
COINCIDENT_TOL = 1e-9

WORDS = ("LSL", "RSR", "LSR", "RSL", "RLR", "LRL")


def normalize_angle(theta: float) -> float:
    """Map an angle to [0, 2*pi)."""
    theta = math.fmod(theta, TWO_PI)
    if theta < 0.0:
        theta += TWO_PI
    # fmod of a value infinitesimally below 2*pi can round back up to 2*pi
    if theta >= TWO_PI:
        theta -= TWO_PI
    return theta


@dataclass(frozen=True)
class Configuration:
    """A planar pose: position plus heading (radians, stored in [0, 2*pi))."""

    x: float
    y: float
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_angle(self.heading))


@dataclass(frozen=True)
class DubinsPath:
    """One solved shortest path.

    ``segment_params`` holds, per segment, the arc angle in radians for turn
    segments and the straight length in distance units for the 'S' segment,
    so ``total_length == rho * (sum of arc angles) + straight length``.
    """

    word: str
    segment_params: tuple[float, float, float]
    rho: float
    total_length: float


# ---------------------------------------------------------------------------
# The six word solutions, in the normalized frame where the start pose is the
# origin, the end position lies on the positive x-axis at distance d (units of
# rho), and alpha/beta are start/end headings in that frame.  Each returns
# (t, p, q) in normalized units (arc angles, straight length / rho) or None
# when the word has no real solution.
# ---------------------------------------------------------------------------


def _lsl(alpha, beta, d):
    sa, sb = math.sin(alpha), math.sin(beta)
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) + 2.0 * d * (sa - sb)
    if p_sq < -WORD_FEASIBILITY_TOL:
        return None
    p = math.sqrt(max(p_sq, 0.0))
    tmp = math.atan2(math.cos(beta) - math.cos(alpha), d + sa - sb)
    return (normalize_angle(tmp - alpha), p, normalize_angle(beta - tmp))


def _rsr(alpha, beta, d):
    sa, sb = math.sin(alpha), math.sin(beta)
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) + 2.0 * d * (sb - sa)
    if p_sq < -WORD_FEASIBILITY_TOL:
        return None
    p = math.sqrt(max(p_sq, 0.0))
    tmp = math.atan2(math.cos(alpha) - math.cos(beta), d - sa + sb)
    return (normalize_angle(alpha - tmp), p, normalize_angle(tmp - beta))


def _lsr(alpha, beta, d):
    sa, sb = math.sin(alpha), math.sin(beta)
    p_sq = -2.0 + d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (sa + sb)
    if p_sq < -WORD_FEASIBILITY_TOL:
        return None
    p = math.sqrt(max(p_sq, 0.0))
    tmp = math.atan2(-math.cos(alpha) - math.cos(beta), d + sa + sb) - math.atan2(-2.0, p)
    return (normalize_angle(tmp - alpha), p, normalize_angle(tmp - beta))


def _rsl(alpha, beta, d):
    sa, sb = math.sin(alpha), math.sin(beta)
    p_sq = -2.0 + d * d + 2.0 * math.cos(alpha - beta) - 2.0 * d * (sa + sb)
    if p_sq < -WORD_FEASIBILITY_TOL:
        return None
    p = math.sqrt(max(p_sq, 0.0))
    tmp = math.atan2(math.cos(alpha) + math.cos(beta), d - sa - sb) - math.atan2(2.0, p)
    return (normalize_angle(alpha - tmp), p, normalize_angle(beta - tmp))


def _rlr(alpha, beta, d):
    sa, sb = math.sin(alpha), math.sin(beta)
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (sa - sb)) / 8.0
    if abs(tmp) > 1.0 + WORD_FEASIBILITY_TOL:
        return None
    p = normalize_angle(TWO_PI - math.acos(max(-1.0, min(1.0, tmp))))
    phi = math.atan2(math.cos(alpha) - math.cos(beta), d - sa + sb)
    t = normalize_angle(alpha - phi + p / 2.0)
    q = normalize_angle(alpha - beta - t + p)
    return (t, p, q)


def _lrl(alpha, beta, d):
    sa, sb = math.sin(alpha), math.sin(beta)
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (sb - sa)) / 8.0
    if abs(tmp) > 1.0 + WORD_FEASIBILITY_TOL:
        return None
    p = normalize_angle(TWO_PI - math.acos(max(-1.0, min(1.0, tmp))))
    phi = math.atan2(math.cos(alpha) - math.cos(beta), d + sa - sb)
    t = normalize_angle(-alpha - phi + p / 2.0)
    q = normalize_angle(beta - alpha - t + p)
    return (t, p, q)


_WORD_SOLVERS = (
    ("LSL", _lsl),
    ("RSR", _rsr),
    ("LSR", _lsr),
    ("RSL", _rsl),
    ("RLR", _rlr),
    ("LRL", _lrl),
)


def shortest_dubins(start: Configuration, end: Configuration, rho: float) -> DubinsPath:
    """Return a shortest Dubins path from ``start`` to ``end``.

    Ties between words are broken by the fixed word order LSL, RSR, LSR,
    RSL, RLR, LRL.  ``rho`` is the minimum turn radius and must be positive.
    """
    if rho <= 0.0:
        raise ValueError(f"turn radius must be positive, got {rho}")
    dx = end.x - start.x
    dy = end.y - start.y
    dist = math.hypot(dx, dy)
    dtheta = normalize_angle(start.heading - end.heading)
    if dist < COINCIDENT_TOL and min(dtheta, TWO_PI - dtheta) < COINCIDENT_TOL:
        return DubinsPath("LSL", (0.0, 0.0, 0.0), rho, 0.0)

    theta = math.atan2(dy, dx)
    d = dist / rho
    alpha = normalize_angle(start.heading - theta)
    beta = normalize_angle(end.heading - theta)

    best_word = None
    best_params = None
    best_sum = math.inf
    for word, solver in _WORD_SOLVERS:
        params = solver(alpha, beta, d)
        if params is None:
            continue
        total = params[0] + params[1] + params[2]
        if total < best_sum:
            best_word, best_params, best_sum = word, params, total
    if best_word is None:  # cannot happen: LSL/RSR are always real
        raise RuntimeError("no feasible word found")

    t, p, q = best_params
    if best_word[1] == "S":
        segment_params = (t, p * rho, q)
    else:
        segment_params = (t, p, q)
    return DubinsPath(best_word, segment_params, rho, best_sum * rho)


def _segment_lengths(path: DubinsPath) -> tuple[float, float, float]:
    a, b, c = path.segment_params
    return (
        a * path.rho,
        b if path.word[1] == "S" else b * path.rho,
        c * path.rho,
    )


def _advance(x: float, y: float, heading: float, turn: str, length: float, rho: float):
    """Move ``length`` distance units along one segment, exactly."""
    if length <= 0.0:
        return x, y, heading
    if turn == "S":
        return x + length * math.cos(heading), y + length * math.sin(heading), heading
    phi = length / rho
    if turn == "L":
        nh = heading + phi
        return (
            x + rho * (math.sin(nh) - math.sin(heading)),
            y - rho * (math.cos(nh) - math.cos(heading)),
            nh,
        )
    nh = heading - phi
    return (
        x - rho * (math.sin(nh) - math.sin(heading)),
        y + rho * (math.cos(nh) - math.cos(heading)),
        nh,
    )


def pose_along(path: DubinsPath, start: Configuration, arc: float) -> Configuration:
    """Pose after travelling ``arc`` distance units from ``start`` along ``path``."""
    arc = max(0.0, min(arc, path.total_length))
    x, y, heading = start.x, start.y, start.heading
    for turn, seg_len in zip(path.word, _segment_lengths(path)):
        step = min(arc, seg_len)
        x, y, heading = _advance(x, y, heading, turn, step, path.rho)
        arc -= step
        if arc <= 0.0:
            break
    return Configuration(x, y, heading)


def sample_path(path: DubinsPath, start: Configuration, step: float) -> list[Configuration]:
    """Poses at arc lengths 0, L/n, ..., L with n = ceil(L / step).

    A zero-length path yields the single pose ``start``.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    total = path.total_length
    if total <= 0.0:
        return [start]
    n = max(1, math.ceil(total / step - 1e-12))
    return [pose_along(path, start, i * total / n) for i in range(n + 1)]
