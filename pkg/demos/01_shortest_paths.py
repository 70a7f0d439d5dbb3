"""
Shortest paths for a vehicle that cannot turn on the spot
=========================================================

A fixed-wing vehicle moves at unit speed and its turning circle has a
minimum radius ``rho``.  Between two oriented poses -- position plus
heading -- the shortest admissible path is always a sequence of at most
three pieces, each a full-lock turn (L or R) or a straight run (S).
This demo computes a few of these paths, checks the basic geometry
facts, and samples one path into a polyline for plotting.
"""

import math

from dubins_top import Configuration, sample_path, shortest_dubins

# A pose is a position plus a heading in radians.
start = Configuration(0.0, 0.0, math.pi / 2.0)  # at the origin, facing north
goal = Configuration(6.0, 2.0, 0.0)             # east of it, facing east

path = shortest_dubins(start, goal, rho=1.0)
print(f"maneuver word:  {path.word}")
print(f"segment params: {path.segment_params}")
print(f"total length:   {path.total_length:.6f}")

# The path can never beat the straight-line distance...
euclid = math.hypot(goal.x - start.x, goal.y - start.y)
print(f"straight-line:  {euclid:.6f}  (always a lower bound)")
assert path.total_length >= euclid

# ...and unlike the straight-line distance it is direction dependent:
# flying back to the start generally needs a different maneuver.
back = shortest_dubins(goal, start, rho=1.0)
print(f"reverse trip:   {back.word}, length {back.total_length:.6f}")

# Tight quarters force the all-turn words (e.g. RLR/LRL): when the goal
# sits closer than a couple of turn radii, weaving through three arcs is
# shorter than swinging out on a straight.
near = Configuration(0.5, 0.8, math.pi)
tight = shortest_dubins(start, near, rho=1.0)
print(f"tight quarters: {tight.word}, length {tight.total_length:.6f}")

# sample_path walks the maneuver at a fixed arc-length step, giving a
# polyline ready for plotting or export.
points = sample_path(path, start, step=0.05)
print(f"sampled {len(points)} poses, first {points[0]}, last {points[-1]}")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(6, 4))
for s, g, style in ((start, goal, "tab:blue"), (goal, start, "tab:orange")):
    p = shortest_dubins(s, g, rho=1.0)
    xy = sample_path(p, s, step=0.02)
    ax.plot([c.x for c in xy], [c.y for c in xy], color=style,
            label=f"{p.word}  ({p.total_length:.2f})")
ax.plot([start.x, goal.x], [start.y, goal.y], "k:", label=f"straight ({euclid:.2f})")
ax.set_aspect("equal")
ax.legend()
ax.set_title("Shortest turn-constrained paths are direction dependent")
fig.savefig("01_shortest_paths.png", dpi=120, bbox_inches="tight")
print("wrote 01_shortest_paths.png")
