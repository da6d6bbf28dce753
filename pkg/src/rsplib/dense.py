"""Nested low-diameter hierarchy for dense graphs, with interval frequencies.

Level i (i = 1, 2, ... while i < log2 n) decomposes every current piece at
combined-weight bound D_i = n / 2^i; pieces are laid out as nested contiguous
intervals of a position bijection tau, every piece gets a bidirected star
(length = delay = D_i) through its smallest-id vertex, and an edge's
frequency is the position gap max(1, |tau(u) - tau(v)|).  The frequency
inverse sum then telescopes to O(n log n) while stars keep every budget
query answerable within the slack of a single level.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .config import DENSE_DEPTH_LOG_EXP
from .dp import FrequencyAssignment
from .graph import MultiDigraph, combined_weight_view
from .ldd import compute_ldd
from .workgraph import WorkGraph, shortest_combined_path

# --- structures -------------------------------------------------------------


@dataclass(frozen=True)
class StarEdge:
    """Auxiliary spoke between a piece's center and a member vertex."""

    u: int
    v: int
    length: float
    delay: float
    level: int
    node_id: int


@dataclass
class SccNode:
    """One piece of the hierarchy (a strongly connected set at some level)."""

    id: int
    level: int
    parent: int
    vertices: tuple[int, ...]
    interval: tuple[int, int]  # 1-based inclusive tau range
    center: int
    large: bool
    internal_edges: tuple[int, ...]


@dataclass
class LddHierarchy:
    """All pieces, the position bijection, and per-edge level labels."""

    n: int
    levels: int
    d_bounds: tuple[float, ...]  # d_bounds[i-1] = D_i
    nodes: list[SccNode]
    tau: tuple[int, ...]  # vertex -> 1..n
    edge_labels: tuple[tuple[str, int], ...]  # ("back"|"forward"|"intra", level)


@dataclass
class AuxiliaryEdgeSet:
    stars: tuple[StarEdge, ...]


# --- construction -----------------------------------------------------------


def dense_level_count(n: int) -> int:
    """Largest level index i with i < log2(n) (0 for n <= 2)."""
    levels = 0
    while (levels + 1) < math.log2(n):
        levels += 1
    return levels


def build_dense_hierarchy(g: MultiDigraph,
                          rng: random.Random) -> tuple[LddHierarchy, AuxiliaryEdgeSet]:
    """Decompose ``g`` level by level; see module docstring for invariants."""
    n = g.n
    levels = dense_level_count(n)
    view = combined_weight_view(g)
    labels: list[tuple[str, int] | None] = [None] * g.m
    tau = [0] * n
    nodes: list[SccNode] = []
    stars: list[StarEdge] = []
    root = SccNode(id=0, level=0, parent=-1, vertices=tuple(range(n)),
                   interval=(1, n), center=min(range(n)) if n else 0,
                   large=True, internal_edges=tuple(range(g.m)))
    nodes.append(root)
    next_tau = 1

    def assign_bottom(comp: tuple[int, ...], eids: list[int], level: int) -> None:
        nonlocal next_tau
        for v in comp:  # comp is ascending
            tau[v] = next_tau
            next_tau += 1
        for eid in eids:
            labels[eid] = ("intra", level)

    def build(comp: tuple[int, ...], eids: list[int], level: int, parent: int) -> None:
        nonlocal next_tau
        if level > levels or len(comp) == 1:
            assign_bottom(comp, eids, level)
            return
        d_i = n / (2.0 ** level)
        ldd = compute_ldd(view, d_i, rng, list(comp), eids)
        for eid in ldd.boundary:
            labels[eid] = ("back", level)
        live = set(eids) - set(ldd.boundary)
        piece_of = {}
        for pi_idx, piece in enumerate(ldd.pieces):
            for v in piece:
                piece_of[v] = pi_idx
        per_piece: list[list[int]] = [[] for _ in ldd.pieces]
        for eid in live:
            e = g.edges[eid]
            if piece_of[e.u] == piece_of[e.v]:
                per_piece[piece_of[e.u]].append(eid)
            else:
                labels[eid] = ("forward", level)
        for pi_idx, piece in enumerate(ldd.pieces):
            internal = sorted(per_piece[pi_idx])
            node = SccNode(id=len(nodes), level=level, parent=parent,
                           vertices=piece, interval=(next_tau, next_tau + len(piece) - 1),
                           center=piece[0], large=len(piece) >= d_i,
                           internal_edges=tuple(internal))
            nodes.append(node)
            if len(piece) > 1:
                for v in piece:
                    if v != node.center:
                        stars.append(StarEdge(node.center, v, d_i, d_i, level, node.id))
                        stars.append(StarEdge(v, node.center, d_i, d_i, level, node.id))
            build(piece, internal, level + 1, node.id)

    build(tuple(range(n)), list(range(g.m)), 1, 0)
    if next_tau != n + 1:
        raise AssertionError("tau assignment did not cover all vertices")
    if any(lab is None for lab in labels):
        raise AssertionError("some edge never received a level label")

    hier = LddHierarchy(n=n, levels=levels,
                        d_bounds=tuple(n / (2.0 ** i) for i in range(1, levels + 1)),
                        nodes=nodes, tau=tuple(tau),
                        edge_labels=tuple(labels))  # type: ignore[arg-type]
    return hier, AuxiliaryEdgeSet(tuple(stars))


def dense_pi(hier: LddHierarchy, aux: AuxiliaryEdgeSet,
             g: MultiDigraph) -> FrequencyAssignment:
    """Position-gap frequencies over base edges then auxiliary stars."""
    tau = hier.tau
    values = [max(1, abs(tau[e.u] - tau[e.v])) for e in g.edges]
    values += [max(1, abs(tau[st.u] - tau[st.v])) for st in aux.stars]
    return FrequencyAssignment(tuple(values))


# --- work-graph assembly ------------------------------------------------------


def dense_builder(gnorm: MultiDigraph, rng: random.Random) -> WorkGraph:
    """Build the DP work graph for a normalized instance (gap framework hook)."""
    hier, aux = build_dense_hierarchy(gnorm, rng)
    combined = gnorm.copy()
    expanders = []
    for st in aux.stars:
        combined.add_edge(st.u, st.v, st.length, st.delay)
        node = hier.nodes[st.node_id]

        def expander(u=st.u, v=st.v, eids=node.internal_edges) -> list[int]:
            return shortest_combined_path(gnorm, list(eids), u, v)

        expanders.append(expander)
    freq = dense_pi(hier, aux, gnorm)
    return WorkGraph(combined=combined, base_m=gnorm.m, freq=freq,
                     expanders=expanders, meta=hier)


#: log-exponent for the DP depth formula when solving through this hierarchy.
DENSE_ALPHA = DENSE_DEPTH_LOG_EXP


def solve_dense(g: MultiDigraph, s: int, D: float, eps: float, rng: random.Random,
                **kwargs):
    """Approximate restricted shortest paths from ``s`` via the dense hierarchy.

    Returns a SolveResult with, for every target, a length estimate
    <= (1+eps) * dist(s, t, D) realized by a witness of delay <= (1+eps) * D.
    """
    from .gap import reduce_to_gap

    return reduce_to_gap(g, s, D, eps, dense_builder, DENSE_ALPHA, rng, **kwargs)
