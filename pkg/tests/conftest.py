"""Shared helpers: seeded random instances and oracle-backed references."""

from __future__ import annotations

import math
import random

import pytest

from rsplib import MultiDigraph, exact_frontier


def random_graph(rng: random.Random, n: int, m: int, dag: bool = False,
                 max_len: float = 10.0, max_delay: float = 10.0,
                 zero_frac: float = 0.0) -> MultiDigraph:
    """Random multidigraph; with ``dag`` arcs point up a fixed vertex order."""
    g = MultiDigraph(n)
    made = 0
    attempts = 0
    while made < m and attempts < 50 * m + 50:
        attempts += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        if dag and u > v:
            u, v = v, u
        length = 0.0 if rng.random() < zero_frac else rng.uniform(0.0, max_len)
        g.add_edge(u, v, length, rng.uniform(0.0, max_delay))
        made += 1
    return g


def total_delay(g: MultiDigraph) -> float:
    return sum(e.delay for e in g.edges) or 1.0


def oracle_dist(g: MultiDigraph, s: int, t: int, budget: float) -> float:
    return exact_frontier(g, s).dist(t, budget)


def path_sums(g: MultiDigraph, edge_ids) -> tuple[float, float]:
    return (sum(g.edges[e].length for e in edge_ids),
            sum(g.edges[e].delay for e in edge_ids))


def assert_valid_path(g: MultiDigraph, edge_ids, s: int, t: int) -> None:
    """The edge ids must chain from s to t inside ``g``."""
    cur = s
    for eid in edge_ids:
        e = g.edges[eid]
        assert e.u == cur, f"edge {eid} starts at {e.u}, expected {cur}"
        cur = e.v
    assert cur == t, f"path ends at {cur}, expected {t}"


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
