"""Deterministic random instance generators.

Graphs are serialized in the extended-DIMACS format implemented by the graph
module (``p rsp`` header, ``a u v length delay`` arcs): identical
(kind, n, m, seed, ranges) inputs always produce byte-identical files since
the writer emits repr round-trip floats and no timestamps.
"""

from __future__ import annotations

import math
import random

from .graph import MultiDigraph, load_graph, save_graph

__all__ = ["GENERATOR_KINDS", "generate", "load_graph", "save_graph"]

GENERATOR_KINDS = ("random-digraph", "random-dag", "layered-dag",
                   "strongly-connected", "grid-like")


# --- generators ------------------------------------------------------------------


def _weights(rng: random.Random, length_range: tuple[float, float],
             delay_range: tuple[float, float]) -> tuple[float, float]:
    return (rng.uniform(*length_range), rng.uniform(*delay_range))


def generate(kind: str, n: int, m: int, seed: int,
             length_range: tuple[float, float] = (0.0, 10.0),
             delay_range: tuple[float, float] = (0.0, 10.0)) -> MultiDigraph:
    """Deterministic random instance of the given kind; see GENERATOR_KINDS.

    Raises ValueError for unknown kinds and infeasible (n, m) pairs (arcs on a
    single vertex, strongly-connected with m < n, layered/grid shapes with no
    admissible arcs).  Parallel arcs are allowed — the solvers accept them.
    """
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    if n == 1 and m > 0:
        raise ValueError("a single vertex admits no arcs (self-loops excluded)")
    rng = random.Random(seed)
    g = MultiDigraph(n)

    if kind == "random-digraph":
        for _ in range(m):
            u = rng.randrange(n)
            v = rng.randrange(n - 1)
            if v >= u:
                v += 1
            g.add_edge(u, v, *_weights(rng, length_range, delay_range))

    elif kind == "random-dag":
        order = list(range(n))
        rng.shuffle(order)
        for _ in range(m):
            i = rng.randrange(n)
            j = rng.randrange(n - 1)
            if j >= i:
                j += 1
            if i > j:
                i, j = j, i
            g.add_edge(order[i], order[j],
                       *_weights(rng, length_range, delay_range))

    elif kind == "layered-dag":
        width = max(1, math.isqrt(n))
        layers = [list(range(lo, min(lo + width, n)))
                  for lo in range(0, n, width)]
        if len(layers) < 2 and m > 0:
            raise ValueError(f"layered-dag with n={n} has a single layer; "
                             "no arcs are possible")
        for _ in range(m):
            li = rng.randrange(len(layers) - 1)
            u = layers[li][rng.randrange(len(layers[li]))]
            v = layers[li + 1][rng.randrange(len(layers[li + 1]))]
            g.add_edge(u, v, *_weights(rng, length_range, delay_range))

    elif kind == "strongly-connected":
        if n >= 2 and m < n:
            raise ValueError(f"strongly-connected needs m >= n, got ({n}, {m})")
        order = list(range(n))
        rng.shuffle(order)
        if n >= 2:
            for i in range(n):
                g.add_edge(order[i], order[(i + 1) % n],
                           *_weights(rng, length_range, delay_range))
        for _ in range(m - g.m):
            u = rng.randrange(n)
            v = rng.randrange(n - 1)
            if v >= u:
                v += 1
            g.add_edge(u, v, *_weights(rng, length_range, delay_range))

    else:  # grid-like
        rows = max(1, math.isqrt(n))
        cols = math.ceil(n / rows)
        arcs = []
        for v in range(n):
            r, c = divmod(v, cols)
            if c + 1 < cols and v + 1 < n:
                arcs.append((v, v + 1))
            if (r + 1) * cols + c < n:
                arcs.append((v, (r + 1) * cols + c))
        if not arcs and m > 0:
            raise ValueError(f"grid-like with n={n} admits no arcs")
        for _ in range(m):
            u, v = arcs[rng.randrange(len(arcs))]
            if rng.random() < 0.5:
                u, v = v, u
            g.add_edge(u, v, *_weights(rng, length_range, delay_range))

    return g
