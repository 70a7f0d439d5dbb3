import random

import pytest

from dubins_top.instance import Instance, ReducedGraphView, Target, build_graph, uniform_headings
from dubins_top.lp import TOL
from dubins_top.master import DualValues, reduced_cost
from dubins_top.pricing import price

from helpers import (
    enumerate_pricing_optimum,
    random_duals,
    random_instance,
    rebudget,
    sequence_reduced_cost,
)


def _route_ok(view, route, duals, table):
    inst = view.graph.instance
    seq = route.target_sequence
    interior = seq[1:-1]
    assert len(set(interior)) == len(interior), "route revisits a target"
    assert route.length <= inst.budget + 1e-9
    assert all(pair not in view.forbidden_connections for pair in route.connections)
    assert interior in table
    assert reduced_cost(route, duals) == pytest.approx(table[interior], abs=1e-9)


def test_exact_mode_matches_enumeration_on_random_instances():
    rng = random.Random(401)
    for trial in range(12):
        inst, graph = random_instance(rng, rng.randint(3, 5), k=2)
        forbidden = frozenset()
        if trial % 3 == 0:
            a, b = rng.sample(list(inst.genuine_targets), 2)
            forbidden = frozenset({(a, b)})
        view = ReducedGraphView(graph, forbidden_connections=forbidden)
        duals = random_duals(rng, view)
        expected, _, table = enumerate_pricing_optimum(view, duals)

        result = price(view, duals, max_paths=None, early_exit=False)
        assert result.best_reduced_cost == pytest.approx(expected, abs=1e-6)
        if expected > TOL:
            assert result.routes
            assert result.best_elementary
            rcs = []
            for route in result.routes:
                _route_ok(view, route, duals, table)
                rcs.append(reduced_cost(route, duals))
            assert max(rcs) == pytest.approx(expected, abs=1e-6)
        else:
            assert result.routes == []


def test_early_exit_finds_improving_route_when_one_exists():
    rng = random.Random(733)
    for _ in range(10):
        inst, graph = random_instance(rng, rng.randint(3, 5), k=2)
        view = ReducedGraphView(graph)
        duals = random_duals(rng, view)
        expected, _, table = enumerate_pricing_optimum(view, duals)
        result = price(view, duals)
        if expected > TOL:
            assert result.routes
            for route in result.routes:
                _route_ok(view, route, duals, table)
                assert reduced_cost(route, duals) > TOL
        else:
            assert result.routes == []
            assert result.best_reduced_cost <= TOL


def test_dominance_toggle_does_not_change_the_optimum():
    rng = random.Random(512)
    for _ in range(6):
        inst, graph = random_instance(rng, 4, k=2)
        view = ReducedGraphView(graph)
        duals = random_duals(rng, view)
        with_dom = price(view, duals, max_paths=None, early_exit=False)
        without = price(view, duals, max_paths=None, early_exit=False,
                        use_dominance=False)
        assert with_dom.best_reduced_cost == pytest.approx(
            without.best_reduced_cost, abs=1e-9)
        assert with_dom.labels_created <= without.labels_created


def test_relaxation_restores_elementarity_on_a_revisit_magnet():
    # One target worth more than everything else combined, placed so a loop
    # back to it fits the budget: the first sweep's best join visits it
    # twice, forcing at least one growth round.
    targets = (
        Target(0.0, 0.0, 0.0),
        Target(5.0, 0.0, 100.0),
        Target(4.5, 1.2, 1.0),
        Target(5.5, 1.2, 1.0),
        Target(10.0, 0.0, 0.0),
    )
    inst = Instance(targets, 1, 22.0, 0.5, uniform_headings(2))
    graph = build_graph(inst)
    view = ReducedGraphView(graph)
    duals = DualValues(0.0, {}, {}, {})
    expected, _, table = enumerate_pricing_optimum(view, duals)
    assert expected == pytest.approx(102.0)

    result = price(view, duals, max_paths=None, early_exit=False)
    assert result.iterations >= 2
    assert result.best_reduced_cost == pytest.approx(expected, abs=1e-6)
    for route in result.routes:
        _route_ok(view, route, duals, table)


def test_excluded_routes_are_never_returned():
    rng = random.Random(88)
    _, graph = random_instance(rng, 4, k=2)
    inst, graph = rebudget(graph, visits=1, factor=1.6)
    view = ReducedGraphView(graph)
    duals = DualValues(0.0, {}, {}, {})
    exact = price(view, duals, max_paths=None, early_exit=False)
    best_route = max(exact.routes, key=lambda r: reduced_cost(r, duals))
    banned = frozenset({best_route.vertices})

    result = price(view, duals, exclude=banned)
    assert all(route.vertices not in banned for route in result.routes)
    assert result.best_reduced_cost >= reduced_cost(best_route, duals) - 1e-9


def test_max_paths_interrupts_the_join():
    rng = random.Random(19)
    _, graph = random_instance(rng, 4, k=2)
    inst, graph = rebudget(graph, visits=2, factor=1.5)
    view = ReducedGraphView(graph)
    duals = DualValues(0.0, {}, {}, {})
    unlimited = price(view, duals, max_paths=None, early_exit=False)
    assert len(unlimited.routes) > 1
    capped = price(view, duals, max_paths=1)
    assert len(capped.routes) == 1
    assert capped.interrupted


def test_certificate_when_every_route_prices_out():
    rng = random.Random(7)
    inst, graph = random_instance(rng, 4, k=2)
    view = ReducedGraphView(graph)
    cover = {t: inst.targets[t].score + 1.0 for t in inst.genuine_targets}
    duals = DualValues(5.0, cover, {}, {})
    expected, _, _ = enumerate_pricing_optimum(view, duals)
    assert expected <= TOL
    result = price(view, duals)
    assert result.routes == []
    assert result.best_reduced_cost == pytest.approx(expected, abs=1e-6)
    assert not result.interrupted


def test_connection_dual_rewards_the_enforced_leg():
    rng = random.Random(55)
    _, graph = random_instance(rng, 4, k=2)
    inst, graph = rebudget(graph, visits=2, factor=1.4)
    view = ReducedGraphView(graph)
    plain = DualValues(0.0, {}, {}, {})
    base = price(view, plain, max_paths=None, early_exit=False)
    assert base.routes, "construction should admit feasible routes"
    genuine = set(inst.genuine_targets)
    traversable = {c for route in base.routes for c in route.connections
                   if c[0] in genuine and c[1] in genuine}
    pair = sorted(traversable)[0]
    duals = DualValues(0.0, {}, {}, {pair: 1000.0})
    result = price(view, duals, max_paths=None, early_exit=False)
    best = max(result.routes, key=lambda r: reduced_cost(r, duals))
    assert pair in best.connections
    seq = best.target_sequence
    assert reduced_cost(best, duals) == pytest.approx(
        sequence_reduced_cost(inst, seq, duals), abs=1e-9)


def test_forbidden_connection_is_respected():
    rng = random.Random(21)
    _, graph = random_instance(rng, 4, k=2)
    inst, graph = rebudget(graph, visits=2, factor=1.3)
    duals = DualValues(0.0, {}, {}, {})
    free = price(ReducedGraphView(graph), duals, max_paths=None, early_exit=False)
    genuine = set(inst.genuine_targets)
    pair = next(c for route in free.routes for c in route.connections
                if c[0] in genuine and c[1] in genuine)

    view = ReducedGraphView(graph, forbidden_connections=frozenset({pair}))
    result = price(view, duals, max_paths=None, early_exit=False)
    for route in result.routes:
        assert pair not in route.connections
    expected, _, _ = enumerate_pricing_optimum(view, duals)
    assert result.best_reduced_cost == pytest.approx(expected, abs=1e-6)


def test_exact_mode_rejects_exclusions_and_caps():
    rng = random.Random(1)
    inst, graph = random_instance(rng, 3, k=2)
    view = ReducedGraphView(graph)
    duals = DualValues(0.0, {}, {}, {})
    with pytest.raises(ValueError, match="exclude"):
        price(view, duals, early_exit=False, max_paths=None,
              exclude=frozenset({(0, 2)}))
    with pytest.raises(ValueError, match="cap"):
        price(view, duals, early_exit=False, max_paths=10)
    with pytest.raises(ValueError, match="max_paths"):
        price(view, duals, max_paths=0)


def test_pricing_is_deterministic():
    rng = random.Random(99)
    inst, graph = random_instance(rng, 5, k=2)
    view = ReducedGraphView(graph)
    duals = random_duals(rng, view, enforced_targets=(1,),
                         enforced_connections=((2, 3),))
    first = price(view, duals)
    second = price(view, duals)
    assert [r.vertices for r in first.routes] == [r.vertices for r in second.routes]
    assert first.best_reduced_cost == second.best_reduced_cost
    assert first.labels_created == second.labels_created