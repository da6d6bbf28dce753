"""Exact oracles: label-correcting frontier search and the integer-delay DP."""

from __future__ import annotations

import math
import random

import pytest

from rsplib import (MultiDigraph, ResourceCapError, exact_frontier,
                    exact_rsp_integer_delays)
from conftest import assert_valid_path, path_sums, random_graph

# --- frontier shape -----------------------------------------------------------


def test_single_edge_frontier():
    g = MultiDigraph(2)
    g.add_edge(0, 1, 3.0, 2.0)
    ans = exact_frontier(g, 0)
    assert ans.frontiers[1].points == ((2.0, 3.0),)
    assert ans.dist(1, 2.0) == 3.0
    assert ans.dist(1, 1.9) == math.inf


def test_two_route_frontier():
    g = MultiDigraph(3)
    g.add_edge(0, 2, 10.0, 1.0)  # direct: long but quick
    g.add_edge(0, 1, 1.0, 2.0)
    g.add_edge(1, 2, 1.0, 3.0)  # via 1: short but slow (2, 5)
    ans = exact_frontier(g, 0)
    assert ans.frontiers[2].points == ((1.0, 10.0), (5.0, 2.0))
    assert ans.dist(2, 1.0) == 10.0
    assert ans.dist(2, 4.0) == 10.0
    assert ans.dist(2, 5.0) == 2.0


def test_unreachable_target():
    g = MultiDigraph(3)
    g.add_edge(0, 1, 1.0, 1.0)
    ans = exact_frontier(g, 0)
    assert ans.frontiers[2].points == ()
    assert ans.dist(2, math.inf) == math.inf
    assert ans.path(2, math.inf) is None


def test_source_distance_and_monotonicity(rng):
    for _ in range(20):
        n = rng.randint(2, 8)
        g = random_graph(rng, n, rng.randint(0, 16))
        ans = exact_frontier(g, 0)
        assert ans.dist(0, 0.0) == 0.0
        assert ans.path(0, 0.0) == []
        budgets = sorted({p[0] for fr in ans.frontiers for p in fr.points}
                         | {0.0, math.inf})
        for t in range(n):
            prev = math.inf
            for b in budgets:
                cur = ans.dist(t, b)
                assert cur <= prev
                prev = cur


def _shortest_by_length(g: MultiDigraph, s: int) -> list[float]:
    # Bellman-Ford on lengths alone (small n, nonnegative weights)
    dist = [math.inf] * g.n
    dist[s] = 0.0
    for _ in range(g.n):
        for e in g.edges:
            if dist[e.u] + e.length < dist[e.v]:
                dist[e.v] = dist[e.u] + e.length
    return dist


def test_unbounded_budget_is_plain_shortest_path(rng):
    for _ in range(20):
        n = rng.randint(2, 8)
        g = random_graph(rng, n, rng.randint(0, 16))
        ans = exact_frontier(g, 0)
        ref = _shortest_by_length(g, 0)
        for t in range(n):
            assert math.isclose(ans.dist(t, math.inf), ref[t]) or \
                ans.dist(t, math.inf) == ref[t]


# --- modes --------------------------------------------------------------------


def test_modes_agree(rng):
    for _ in range(25):
        n = rng.randint(2, 7)
        g = random_graph(rng, n, rng.randint(0, 14))
        lab = exact_frontier(g, 0, mode="labels")
        exh = exact_frontier(g, 0, mode="exhaustive")
        for t in range(n):
            assert lab.frontiers[t].points == exh.frontiers[t].points


def test_exhaustive_size_guard():
    g = MultiDigraph(13)
    with pytest.raises(ValueError):
        exact_frontier(g, 0, mode="exhaustive")


def test_mode_and_source_validation():
    g = MultiDigraph(2)
    with pytest.raises(ValueError):
        exact_frontier(g, 0, mode="bogus")
    with pytest.raises(ValueError):
        exact_frontier(g, 5)


def test_label_cap(rng):
    g = random_graph(random.Random(7), 8, 24)
    with pytest.raises(ResourceCapError):
        exact_frontier(g, 0, mode="labels", label_cap=2)
    with pytest.raises(ResourceCapError):
        exact_frontier(g, 0, mode="exhaustive", label_cap=2)


# --- path recovery --------------------------------------------------------------


def test_path_resummation_exact(rng):
    for _ in range(20):
        n = rng.randint(2, 8)
        g = random_graph(rng, n, rng.randint(1, 16))
        ans = exact_frontier(g, 0)
        for t in range(n):
            for d, l in ans.frontiers[t].points:
                edges = ans.path(t, d)
                assert edges is not None
                assert_valid_path(g, edges, 0, t)
                length, delay = path_sums(g, edges)
                assert length == l and delay <= d


# --- integer-delay DP ------------------------------------------------------------


def test_integer_dp_trivial_cases():
    g = MultiDigraph(3)
    g.add_edge(0, 1, 2.0, 1.0)
    g.add_edge(1, 2, 3.0, 1.0)
    assert exact_rsp_integer_delays(g, 0, 2) == [0.0, 2.0, 5.0]
    assert exact_rsp_integer_delays(g, 0, 0) == [0.0, math.inf, math.inf]


def test_integer_dp_validation():
    g = MultiDigraph(2)
    g.add_edge(0, 1, 1.0, 0.5)
    with pytest.raises(ValueError):
        exact_rsp_integer_delays(g, 0, 3)  # non-integer delay
    h = MultiDigraph(2)
    h.add_edge(0, 1, 1.0, 1.0)
    with pytest.raises(ValueError):
        exact_rsp_integer_delays(h, 0, -1)
    with pytest.raises(ValueError):
        exact_rsp_integer_delays(h, 9, 1)


def test_cross_oracle_agreement(rng):
    for _ in range(10):
        n = rng.randint(2, 8)
        g = MultiDigraph(n)
        for _ in range(rng.randint(1, 14)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u == v:
                continue
            g.add_edge(u, v, rng.uniform(0.0, 10.0), float(rng.randint(0, 5)))
        fr = exact_frontier(g, 0)
        top = int(sum(e.delay for e in g.edges))
        for budget in range(top + 1):
            got = exact_rsp_integer_delays(g, 0, budget)
            for t in range(n):
                assert got[t] == fr.dist(t, float(budget))
