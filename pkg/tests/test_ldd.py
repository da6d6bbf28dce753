"""Low-diameter decomposition: bounded diameter, hitting rates, determinism."""

from __future__ import annotations

import math
import random

import pytest

from rsplib import (MultiDigraph, combined_weight_view, compute_ldd,
                    estimate_hitting_rate, generate, verify_bounded_diameter)
from rsplib.config import lnn
from conftest import random_graph


def _cycle(n: int, weight: float) -> MultiDigraph:
    """Directed cycle whose combined edge weight is ``weight`` each."""
    g = MultiDigraph(n)
    for u in range(n):
        g.add_edge(u, (u + 1) % n, weight / 2.0, weight / 2.0)
    return g


def test_edgeless_graph():
    g = MultiDigraph(4)
    res = compute_ldd(combined_weight_view(g), 1.0, random.Random(0))
    assert res.boundary == ()
    assert sorted(v for piece in res.pieces for v in piece) == [0, 1, 2, 3]


def test_cycle_within_bound_stays_intact():
    g = _cycle(4, 2.0)  # total weight 8
    view = combined_weight_view(g)
    res = compute_ldd(view, 8.0, random.Random(3))
    assert res.boundary == ()
    assert len(res.pieces) == 1 and len(res.pieces[0]) == 4
    assert verify_bounded_diameter(view, res.boundary, 8.0)


def test_heavy_cycle_must_be_cut():
    g = _cycle(4, 4.0)  # total weight 16, bound 8
    view = combined_weight_view(g)
    assert not verify_bounded_diameter(view, (), 8.0)
    for seed in range(10):
        res = compute_ldd(view, 8.0, random.Random(seed))
        assert res.boundary != ()
        assert verify_bounded_diameter(view, res.boundary, 8.0)


def test_verify_all_edges_cut_gives_singletons():
    g = _cycle(5, 10.0)
    view = combined_weight_view(g)
    assert verify_bounded_diameter(view, tuple(range(g.m)), 0.001)


def test_diameter_bound_validation():
    g = _cycle(3, 1.0)
    with pytest.raises(ValueError):
        compute_ldd(combined_weight_view(g), 0.0, random.Random(0))
    with pytest.raises(ValueError):
        estimate_hitting_rate(combined_weight_view(g), 1.0, 0, random.Random(0))


def test_bounded_diameter_always_holds(rng):
    for trial in range(60):
        if trial % 2:
            n = rng.randint(2, 12)
            g = random_graph(rng, n, rng.randint(1, 3 * n))
        else:
            n = rng.randint(2, 12)
            g = generate("strongly-connected", n, max(n, rng.randint(n, 2 * n)),
                         seed=rng.randrange(10**6))
        view = combined_weight_view(g)
        bound = rng.uniform(0.5, 40.0)
        res = compute_ldd(view, bound, random.Random(rng.randrange(10**6)))
        assert verify_bounded_diameter(view, res.boundary, bound)
        assert set(res.boundary) <= set(range(g.m))
        assert sorted(v for piece in res.pieces for v in piece) == list(range(n))


def test_intact_small_scc_contributes_nothing():
    # a light cycle hanging off a heavy one: only the heavy side is cut
    g = MultiDigraph(6)
    for u in range(3):
        g.add_edge(u, (u + 1) % 3, 0.05, 0.05)  # light triangle, diameter 0.2
    for u in range(3, 6):
        g.add_edge(u, 3 + (u + 1 - 3) % 3, 5.0, 5.0)  # heavy triangle
    g.add_edge(2, 3, 1.0, 1.0)  # one-way bridge keeps them separate SCCs
    view = combined_weight_view(g)
    for seed in range(10):
        res = compute_ldd(view, 1.0, random.Random(seed))
        assert all(g.edges[eid].u >= 3 for eid in res.boundary)
        assert verify_bounded_diameter(view, res.boundary, 1.0)


def test_determinism_under_seed(rng):
    g = random_graph(rng, 10, 30)
    view = combined_weight_view(g)
    a = compute_ldd(view, 3.0, random.Random(42))
    b = compute_ldd(view, 3.0, random.Random(42))
    assert a.boundary == b.boundary and a.pieces == b.pieces


def test_hitting_rate_shape_and_extremes(rng):
    g = random_graph(rng, 8, 20)
    view = combined_weight_view(g)
    rates = estimate_hitting_rate(view, 4.0, 1, random.Random(5))
    assert rates.shape == (g.m,)
    assert set(rates.tolist()) <= {0.0, 1.0}  # single trial is an indicator


def test_zero_weight_edge_in_small_scc_never_cut():
    g = _cycle(3, 0.4)
    g.add_edge(0, 1, 0.0, 0.0)  # zero-weight chord
    view = combined_weight_view(g)
    rates = estimate_hitting_rate(view, 2.0, 100, random.Random(1))
    assert rates[3] == 0.0


def test_hitting_rate_statistical_bound(rng):
    # inclusion frequency <= C*(w(e)/D)*ln(n)^3 + slack per edge
    big_c, slack = 4.0, 0.05
    for _ in range(4):
        n = rng.randint(4, 10)
        g = generate("strongly-connected", n, 2 * n, seed=rng.randrange(10**6))
        view = combined_weight_view(g)
        bound = rng.uniform(5.0, 30.0)
        rates = estimate_hitting_rate(view, bound, 200,
                                      random.Random(rng.randrange(10**6)))
        rho = lnn(n) ** 3
        for eid, rate in enumerate(rates.tolist()):
            w = g.edges[eid].length + g.edges[eid].delay
            assert rate <= big_c * (w / bound) * rho + slack
