"""Command-line front end.

Loads an instance (either supported text format), runs the requested mode,
and writes one JSON report per run.  Modes: ``solve`` (the exact solver),
``oracle`` (brute-force reference, tiny instances only), and
``geometry-export`` (solve, then also write sampled route polylines for
plotting).  Exit codes: 0 optimal, 1 internal error, 2 bad invocation,
3 stopped at the time limit, 4 unreadable file, 5 malformed instance.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .geometry import sample_path, shortest_dubins
from .instance import InstanceFormatError, build_graph, load_instance
from .oracle import enumerate_dtop
from .search import STATUS_TIME_LIMIT, SolveParams, solve

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_TIME_LIMIT = 3
EXIT_UNREADABLE = 4
EXIT_BAD_INSTANCE = 5

#: Arc-length spacing of exported route polylines.
GEOMETRY_STEP = 0.05


@dataclass(frozen=True)
class RunConfig:
    instance: Path
    discretizations: int = 2
    turn_radius: float = 1.0
    time_limit: float = 3600.0
    workers: int = 8
    big_m: float = 1e5
    max_paths: int = 500
    output: Path | None = None
    mode: str = "solve"


def _route_record(graph, route) -> dict:
    return {
        "targets": list(route.target_sequence),
        "vertices": list(route.vertices),
        "headings": [graph.config_of(v).heading for v in route.vertices],
        "length": route.length,
        "score": route.score,
    }


def _route_polyline(graph, route) -> list:
    points = []
    for a, b in zip(route.vertices, route.vertices[1:]):
        start = graph.config_of(a)
        path = shortest_dubins(start, graph.config_of(b), graph.instance.rho)
        poses = sample_path(path, start, GEOMETRY_STEP)
        if points:
            poses = poses[1:]  # the leg starts where the previous one ended
        points.extend([pose.x, pose.y, pose.heading] for pose in poses)
    return points


def _config_echo(config: RunConfig) -> dict:
    return {
        "instance": str(config.instance),
        "discretizations": config.discretizations,
        "turn_radius": config.turn_radius,
        "time_limit": config.time_limit,
        "workers": config.workers,
        "big_m": config.big_m,
        "max_paths": config.max_paths,
        "mode": config.mode,
    }


def _finite_or_none(value):
    if value is None or math.isinf(value):
        return None
    return value


def run(config: RunConfig) -> int:
    """Execute one run and write its report; returns the process exit code."""
    try:
        instance = load_instance(config.instance, rho=config.turn_radius,
                                 num_headings=config.discretizations)
    except OSError as exc:
        print(f"cannot read instance: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except InstanceFormatError as exc:
        print(f"malformed instance: {exc}", file=sys.stderr)
        return EXIT_BAD_INSTANCE

    graph = build_graph(instance)
    started = time.monotonic()
    geometry = None
    if config.mode == "oracle":
        try:
            result = enumerate_dtop(graph, instance.num_vehicles, instance.budget)
        except ValueError as exc:
            print(f"oracle mode not applicable: {exc}", file=sys.stderr)
            return EXIT_USAGE
        report = {
            "status": "optimal",
            "opt": result.objective,
            "rub": None,
            "bound": result.objective,
            "nn": None,
            "time": round(time.monotonic() - started, 6),
            "max_solvers": None,
            "routes": [
                {
                    "targets": [instance.source, *order, instance.destination],
                    "score": sum(instance.targets[t].score for t in order),
                }
                for order in result.routes
            ],
            "config": _config_echo(config),
        }
        exit_code = EXIT_OK
    else:
        solution = solve(instance, SolveParams(
            workers=config.workers,
            time_limit=config.time_limit,
            big_m=config.big_m,
            max_paths=config.max_paths,
        ))
        report = {
            "status": solution.stats.status,
            "opt": solution.objective,
            "rub": _finite_or_none(solution.stats.root_bound),
            "bound": _finite_or_none(solution.bound),
            "nn": solution.stats.nodes_explored,
            "time": round(solution.stats.wall_time, 6),
            "max_solvers": solution.stats.max_workers_observed,
            "routes": [_route_record(graph, r) for r in solution.routes],
            "config": _config_echo(config),
        }
        exit_code = (EXIT_TIME_LIMIT if solution.stats.status == STATUS_TIME_LIMIT
                     else EXIT_OK)
        if config.mode == "geometry-export":
            geometry = {
                "step": GEOMETRY_STEP,
                "routes": [
                    {
                        "targets": list(r.target_sequence),
                        "points": _route_polyline(graph, r),
                    }
                    for r in solution.routes
                ],
            }

    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    try:
        if config.output is None:
            sys.stdout.write(text)
        else:
            config.output.write_text(text)
        if geometry is not None:
            geometry_path = config.output.with_name(config.output.stem + "_geometry.json")
            geometry_path.write_text(json.dumps(geometry, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    return exit_code


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dubins-top",
        description="Exact solver for team orienteering with turn-radius "
                    "constraints over discretized headings.",
    )
    parser.add_argument("--instance", type=Path, required=True,
                        help="instance file (benchmark or structured format)")
    parser.add_argument("--discretizations", type=_positive_int, default=2,
                        metavar="K", help="headings per target (default 2)")
    parser.add_argument("--turn-radius", type=_positive_float, default=1.0,
                        help="minimum turn radius (default 1.0)")
    parser.add_argument("--time-limit", type=_positive_float, default=3600.0,
                        help="seconds before the search stops (default 3600)")
    parser.add_argument("--workers", type=_positive_int, default=8,
                        help="concurrent node processors (default 8)")
    parser.add_argument("--big-m", type=_positive_float, default=1e5,
                        help="penalty weight on unmet enforcements (default 1e5)")
    parser.add_argument("--max-paths", type=_positive_int, default=500,
                        help="routes collected per pricing round (default 500)")
    parser.add_argument("--output", type=Path, default=None,
                        help="report path (default: stdout)")
    parser.add_argument("--mode", choices=("solve", "oracle", "geometry-export"),
                        default="solve")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.mode == "geometry-export" and args.output is None:
        print("geometry-export needs --output to name the geometry file",
              file=sys.stderr)
        return EXIT_USAGE
    config = RunConfig(
        instance=args.instance,
        discretizations=args.discretizations,
        turn_radius=args.turn_radius,
        time_limit=args.time_limit,
        workers=args.workers,
        big_m=args.big_m,
        max_paths=args.max_paths,
        output=args.output,
        mode=args.mode,
    )
    try:
        return run(config)
    except Exception:  # pragma: no cover - last-resort diagnostic
        import traceback
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())