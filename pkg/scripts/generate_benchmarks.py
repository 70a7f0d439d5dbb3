#!/usr/bin/env python3
"""Regenerate the 21-target benchmark instances shipped in ``instances/``.

Each instance follows the classic team-orienteering text format understood by
``dubins_top.instance.parse_top``::

    n <number of points, including start and end>
    m <number of vehicles>
    tmax <per-vehicle travel budget>
    <x> <y> <score>        (first line: start, last line: end)

The generator is deterministic: coordinates are drawn uniformly from a
10 x 10 box with a minimum pairwise separation of 0.8, the start/end depots
are the extreme points along the main diagonal, and the travel budget is a
fixed multiple of the straight-line start-to-end distance.  The multiples
were chosen so that every instance solves to proven optimality in seconds at
two headings per target, while still requiring nontrivial branching.

Run from anywhere::

    python scripts/generate_benchmarks.py
"""

from __future__ import annotations

import math
import random
from pathlib import Path

NUM_SCORED_TARGETS = 21
NUM_VEHICLES = 2
BOX_SIZE = 10.0
MIN_SEPARATION = 0.8
SCORE_RANGE = (5, 30)

#: (file stem, RNG seed, budget as a multiple of the start-end distance).
INSTANCES = (
    ("top21_a", 1, 2.5),
    ("top21_b", 2, 2.5),
    ("top21_c", 3, 3.0),
    ("top21_d", 4, 3.0),
    ("top21_e", 5, 2.5),
    ("top21_f", 6, 2.5),
    ("top21_g", 7, 3.0),
)


def generate_points(rng: random.Random, count: int) -> list[tuple[float, float]]:
    """Draw ``count`` points in the box, each at least MIN_SEPARATION apart."""
    points: list[tuple[float, float]] = []
    while len(points) < count:
        x = rng.uniform(0.0, BOX_SIZE)
        y = rng.uniform(0.0, BOX_SIZE)
        if all(math.hypot(x - px, y - py) > MIN_SEPARATION for px, py in points):
            points.append((x, y))
    return points


def build_instance(seed: int, budget_factor: float) -> str:
    rng = random.Random(seed)
    points = generate_points(rng, NUM_SCORED_TARGETS + 2)
    # The extreme points along the x+y diagonal become the start and end
    # depots, so routes sweep across the field instead of looping in place.
    points.sort(key=lambda p: p[0] + p[1])
    start, end = points[0], points[-1]
    middle = points[1:-1]
    rng.shuffle(middle)

    budget = round(budget_factor * math.hypot(end[0] - start[0], end[1] - start[1]), 1)

    lines = [
        f"n {NUM_SCORED_TARGETS + 2}",
        f"m {NUM_VEHICLES}",
        f"tmax {budget}",
        f"{start[0]:.6f}\t{start[1]:.6f}\t0",
    ]
    lines += [
        f"{x:.6f}\t{y:.6f}\t{rng.randint(*SCORE_RANGE)}" for x, y in middle
    ]
    lines.append(f"{end[0]:.6f}\t{end[1]:.6f}\t0")
    return "\n".join(lines) + "\n"


def main() -> None:
    out_dir = Path(__file__).resolve().parents[1] / "instances"
    out_dir.mkdir(exist_ok=True)
    for stem, seed, budget_factor in INSTANCES:
        path = out_dir / f"{stem}.top"
        path.write_text(build_instance(seed, budget_factor))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
