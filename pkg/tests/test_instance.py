import math

import numpy as np
import pytest

from dubins_top.geometry import shortest_dubins
from dubins_top.instance import (
    DiscretizedGraph,
    Instance,
    InstanceFormatError,
    ReducedGraphView,
    Target,
    build_graph,
    load_instance,
    parse_instance,
    parse_structured_instance,
    uniform_headings,
)

BENCH_TEXT = """n 4
m 2
tmax 20.5
0.0\t0.0\t0
5.0\t1.0\t10
5.0\t-1.0\t7
10.0\t0.0\t0
"""

STRUCTURED_TEXT = """# three targets, one vehicle
vehicles 1
budget 25.0
turn_radius 0.5
headings 0.0 1.5707963267948966 3.141592653589793 4.71238898038469
target 0 0 0
target 4 2 12
target 8 0 3   # destination score is ignored
"""


def test_parse_benchmark_format():
    inst = parse_instance(BENCH_TEXT, rho=1.0, num_headings=2)
    assert inst.num_targets == 4
    assert inst.num_vehicles == 2
    assert inst.budget == pytest.approx(20.5)
    assert inst.headings == (0.0, math.pi)
    assert inst.source == 0 and inst.destination == 3
    assert list(inst.genuine_targets) == [1, 2]
    assert inst.targets[1].score == 10.0


def test_parse_benchmark_uppercase_keys():
    inst = parse_instance(BENCH_TEXT.replace("n ", "N ").replace("m ", "M ").replace("tmax", "TMAX"))
    assert inst.num_targets == 4


def test_endpoint_scores_forced_to_zero():
    text = BENCH_TEXT.replace("0.0\t0.0\t0", "0.0\t0.0\t99")
    inst = parse_instance(text)
    assert inst.targets[0].score == 0.0


@pytest.mark.parametrize(
    "mutation, expected_line",
    [
        (lambda t: t.replace("m 2", "m x"), 2),
        (lambda t: t.replace("tmax 20.5", "tmax -3"), 3),
        (lambda t: t.replace("5.0\t1.0\t10", "5.0\tzap\t10"), 5),
        (lambda t: t.replace("n 4", "n 5"), 7),
        (lambda t: t.replace("n 4", "vertices 4"), 1),
    ],
)
def test_benchmark_errors_carry_line_numbers(mutation, expected_line):
    with pytest.raises(InstanceFormatError) as err:
        parse_instance(mutation(BENCH_TEXT))
    assert err.value.line == expected_line
    assert f"line {expected_line}" in str(err.value)


def test_too_few_targets_rejected():
    with pytest.raises(InstanceFormatError):
        parse_instance("n 1\nm 1\ntmax 5\n0 0 0\n")


def test_parse_structured_format():
    inst = parse_structured_instance(STRUCTURED_TEXT)
    assert inst.num_vehicles == 1
    assert inst.rho == 0.5
    assert len(inst.headings) == 4
    assert inst.targets[-1].score == 0.0  # destination score forced to zero


def test_structured_missing_field():
    broken = STRUCTURED_TEXT.replace("budget 25.0", "")
    with pytest.raises(InstanceFormatError, match="budget"):
        parse_structured_instance(broken)


def test_structured_bad_headings():
    broken = STRUCTURED_TEXT.replace(
        "headings 0.0 1.5707963267948966 3.141592653589793 4.71238898038469",
        "headings 1.0 0.5",
    )
    with pytest.raises(InstanceFormatError, match="increasing"):
        parse_structured_instance(broken)


def test_load_instance_autodetects(tmp_path):
    bench = tmp_path / "bench.txt"
    bench.write_text(BENCH_TEXT)
    fixture = tmp_path / "fixture.txt"
    fixture.write_text(STRUCTURED_TEXT)
    assert load_instance(bench, num_headings=4).headings == uniform_headings(4)
    assert load_instance(fixture).rho == 0.5


def test_uniform_headings_sets():
    assert uniform_headings(2) == (0.0, math.pi)
    assert uniform_headings(4) == (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
    assert uniform_headings(6) == pytest.approx(tuple(i * math.pi / 3 for i in range(6)))


def make_graph(num_headings=2):
    return build_graph(parse_instance(BENCH_TEXT, rho=1.0, num_headings=num_headings))


def test_graph_shape_and_ids():
    graph = make_graph()
    assert graph.num_vertices == 8  # 4 targets x 2 headings
    assert graph.vertex(2, 1) == 5
    assert graph.target_of(5) == 2 and graph.heading_index_of(5) == 1
    assert list(graph.vertices_of(1)) == [2, 3]


def test_graph_costs_match_direct_computation():
    graph = make_graph()
    p, q = graph.vertex(0, 0), graph.vertex(1, 1)
    direct = shortest_dubins(graph.config_of(p), graph.config_of(q), 1.0).total_length
    assert graph.cost(p, q) == pytest.approx(direct, abs=1e-12)


def test_no_edges_within_a_target():
    graph = make_graph()
    for t in range(4):
        for p in graph.vertices_of(t):
            for q in graph.vertices_of(t):
                assert math.isinf(graph.cost(p, q))


def test_identical_text_gives_identical_graphs():
    a, b = make_graph(), make_graph()
    assert np.array_equal(a.costs, b.costs)


def test_nested_heading_sets_embed():
    # Every k=2 vertex reappears among the k=4 vertices with identical costs.
    g2, g4 = make_graph(2), make_graph(4)
    lift = {0: 0, 1: 2}  # heading index in k=2 -> index of same angle in k=4
    for p2 in range(g2.num_vertices):
        for q2 in range(g2.num_vertices):
            if g2.target_of(p2) == g2.target_of(q2):
                continue
            p4 = g4.vertex(g2.target_of(p2), lift[g2.heading_index_of(p2)])
            q4 = g4.vertex(g2.target_of(q2), lift[g2.heading_index_of(q2)])
            assert g2.cost(p2, q2) == pytest.approx(g4.cost(p4, q4), abs=1e-12)


def test_reduced_view_filters_targets_and_connections():
    graph = make_graph()
    view = ReducedGraphView(graph, forbidden_targets={2}, forbidden_connections={(1, 3)})
    assert view.active_genuine == (1,)
    fwd = view.forward_adjacency()
    assert {t for _, _, t in fwd[0]} == {1}  # target 2 gone
    join = view.join_adjacency()
    assert join[graph.vertex(1, 0)] == []  # 1 -> 3 forbidden, no other exits
    assert view.allows_route((0, 1, 3)) is False
    assert view.allows_route((0, 3)) is True


def test_reduced_view_backward_adjacency_uses_forward_costs():
    graph = make_graph()
    view = ReducedGraphView(graph)
    q = graph.vertex(3, 0)
    rows = view.backward_adjacency()[q]
    assert {t for _, _, t in rows} == {1, 2}
    for p, cost, _ in rows:
        assert cost == pytest.approx(graph.cost(p, q), abs=1e-15)


def test_view_rejects_forbidden_endpoints():
    graph = make_graph()
    with pytest.raises(ValueError):
        ReducedGraphView(graph, forbidden_targets={0})


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance((Target(0, 0, 0),), 1, 10.0, 1.0, (0.0,))
    with pytest.raises(ValueError):
        Instance((Target(0, 0, 0), Target(1, 0, 0)), 0, 10.0, 1.0, (0.0,))
    with pytest.raises(ValueError):
        Instance((Target(0, 0, 0), Target(1, 0, 0)), 1, -1.0, 1.0, (0.0,))
    with pytest.raises(ValueError):
        Instance((Target(0, 0, 0), Target(1, 0, 0)), 1, 10.0, 1.0, (0.0, 7.0))
