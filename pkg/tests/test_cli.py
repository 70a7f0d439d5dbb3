import json
import math
import random
from pathlib import Path

import pytest

from dubins_top.cli import main

from helpers import random_instance

FIXTURES = Path(__file__).parent / "fixtures"
TINY = FIXTURES / "tiny.top"
TINY_STRUCTURED = FIXTURES / "tiny_structured.txt"

REPORT_KEYS = {"status", "opt", "rub", "bound", "nn", "time", "max_solvers",
               "routes", "config"}


def run_cli(*args):
    return main([str(a) for a in args])


def dump_structured(instance, path):
    lines = [
        f"vehicles {instance.num_vehicles}",
        f"budget {instance.budget!r}",
        f"turn_radius {instance.rho!r}",
        "headings " + " ".join(repr(h) for h in instance.headings),
    ]
    lines += [f"target {t.x!r} {t.y!r} {t.score!r}" for t in instance.targets]
    path.write_text("\n".join(lines) + "\n")


def test_solve_mode_report(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("--instance", TINY, "--workers", 1, "--output", out)
    assert code == 0
    report = json.loads(out.read_text())
    assert set(report) == REPORT_KEYS
    assert report["status"] == "optimal"
    assert report["opt"] == 32.0
    assert report["rub"] >= report["opt"] - 1e-6
    assert report["bound"] == report["opt"]
    assert report["nn"] >= 1
    assert report["time"] >= 0.0
    assert report["max_solvers"] == 1
    assert report["config"]["discretizations"] == 2
    collected = set()
    for record in report["routes"]:
        assert set(record) == {"targets", "vertices", "headings", "length", "score"}
        assert len(record["vertices"]) == len(record["targets"])
        assert len(record["headings"]) == len(record["targets"])
        collected.update(record["targets"][1:-1])
    assert collected == {1, 2, 3}


def test_report_goes_to_stdout_without_output(capsys):
    code = run_cli("--instance", TINY, "--workers", 1)
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["opt"] == 32.0


def test_structured_instance_gives_same_objective(tmp_path):
    out = tmp_path / "r.json"
    assert run_cli("--instance", TINY_STRUCTURED, "--workers", 1,
                   "--output", out) == 0
    assert json.loads(out.read_text())["opt"] == 32.0


def test_oracle_mode_matches_solve(tmp_path):
    solve_out = tmp_path / "solve.json"
    oracle_out = tmp_path / "oracle.json"
    assert run_cli("--instance", TINY, "--workers", 1, "--output", solve_out) == 0
    assert run_cli("--instance", TINY, "--mode", "oracle",
                   "--output", oracle_out) == 0
    solve_report = json.loads(solve_out.read_text())
    oracle_report = json.loads(oracle_out.read_text())
    assert oracle_report["opt"] == solve_report["opt"]
    assert oracle_report["status"] == "optimal"
    assert oracle_report["rub"] is None


def test_single_worker_reports_are_identical_apart_from_wall_time(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("--instance", TINY, "--workers", 1, "--output", first) == 0
    assert run_cli("--instance", TINY, "--workers", 1, "--output", second) == 0
    a = json.loads(first.read_text())
    b = json.loads(second.read_text())
    a.pop("time"), b.pop("time")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_geometry_export(tmp_path):
    out = tmp_path / "run.json"
    code = run_cli("--instance", TINY, "--workers", 1,
                   "--mode", "geometry-export", "--output", out)
    assert code == 0
    report = json.loads(out.read_text())
    geometry = json.loads((tmp_path / "run_geometry.json").read_text())
    assert geometry["step"] == 0.05
    assert len(geometry["routes"]) == len(report["routes"])
    for geo, rec in zip(geometry["routes"], report["routes"]):
        assert geo["targets"] == rec["targets"]
        points = geo["points"]
        assert len(points) >= 2
        assert points[0][:2] == [0.0, 0.0]
        assert math.hypot(points[-1][0] - 16.0, points[-1][1]) < 1e-6
        for (x0, y0, _), (x1, y1, _) in zip(points, points[1:]):
            assert math.hypot(x1 - x0, y1 - y0) <= 0.0501


def test_geometry_export_requires_output():
    assert run_cli("--instance", TINY, "--mode", "geometry-export") == 2


def test_zero_discretizations_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        run_cli("--instance", TINY, "--discretizations", 0)
    assert excinfo.value.code == 2


def test_oracle_guard_maps_to_usage_error(capsys):
    code = run_cli("--instance", TINY, "--mode", "oracle", "--discretizations", 4)
    assert code == 2
    assert "oracle mode" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    code = run_cli("--instance", "does/not/exist.top")
    assert code == 4
    assert "cannot read" in capsys.readouterr().err


def test_malformed_instance_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.top"
    bad.write_text("n 5\nm x\ntmax 60\n0 0 0\n1 1 1\n")
    code = run_cli("--instance", bad)
    assert code == 5
    assert "line 2" in capsys.readouterr().err


def test_time_limit_exit_code(tmp_path):
    rng = random.Random(13)
    inst, _ = random_instance(rng, 16, k=3, num_vehicles=3, budget_factor=4.0)
    path = tmp_path / "big.txt"
    dump_structured(inst, path)
    out = tmp_path / "report.json"
    code = run_cli("--instance", path, "--workers", 1,
                   "--time-limit", 0.01, "--output", out)
    assert code == 3
    report = json.loads(out.read_text())
    assert report["status"] == "time_limit"