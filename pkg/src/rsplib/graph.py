"""Directed multigraph core: storage, SCCs, weight views, dedup, file format.

Vertices are 0..n-1. Edges carry a nonnegative float ``length`` and ``delay``
and are identified by their index in ``MultiDigraph.edges``; parallel edges
and self-loops are allowed everywhere.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .config import INF, LOG_SNAP

# --- storage -----------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """One directed edge; ``length`` and ``delay`` are finite and >= 0."""

    u: int
    v: int
    length: float
    delay: float


@dataclass
class MultiDigraph:
    """Directed multigraph with adjacency lists of edge ids."""

    n: int
    edges: list[Edge] = field(default_factory=list)
    out: list[list[int]] = field(default_factory=list)
    inc: list[list[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        if not self.out:
            self.out = [[] for _ in range(self.n)]
            self.inc = [[] for _ in range(self.n)]
            existing, self.edges = self.edges, []
            for e in existing:
                self.add_edge(e.u, e.v, e.length, e.delay)

    @property
    def m(self) -> int:
        return len(self.edges)

    def add_edge(self, u: int, v: int, length: float, delay: float) -> int:
        """Append an edge and return its id."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
        for name, w in (("length", length), ("delay", delay)):
            if not (math.isfinite(w) and w >= 0.0):
                raise ValueError(f"edge ({u},{v}): {name} must be finite and >= 0, got {w}")
        eid = len(self.edges)
        self.edges.append(Edge(u, v, float(length), float(delay)))
        self.out[u].append(eid)
        self.inc[v].append(eid)
        return eid

    def copy(self) -> MultiDigraph:
        g = MultiDigraph(self.n)
        for e in self.edges:
            g.add_edge(e.u, e.v, e.length, e.delay)
        return g


def swap_length_delay(g: MultiDigraph) -> MultiDigraph:
    """Return a graph with length and delay roles exchanged on every edge.

    Solving on the swapped graph makes every aspect-ratio dependence track
    delays instead of lengths; results map back one-to-one by edge id.
    """
    out = MultiDigraph(g.n)
    for e in g.edges:
        out.add_edge(e.u, e.v, e.delay, e.length)
    return out


# --- strongly connected components ------------------------------------------


@dataclass(frozen=True)
class SccPartition:
    """SCCs in topological order of the condensation (edges go forward)."""

    components: tuple[tuple[int, ...], ...]
    comp_of: tuple[int, ...]


def compute_sccs(g: MultiDigraph, vertices: list[int] | None = None,
                 edge_ids: list[int] | None = None) -> SccPartition:
    """Tarjan SCCs (iterative) of the subgraph induced by ``vertices``/``edge_ids``.

    ``comp_of`` maps vertex id -> component index; vertices outside the
    induced set map to -1.  Components come out topologically sorted and each
    component's vertex tuple is ascending.
    """
    if vertices is None:
        verts = list(range(g.n))
    else:
        verts = sorted(vertices)
    vset = set(verts)
    if edge_ids is None:
        adj = {v: [g.edges[eid].v for eid in g.out[v] if g.edges[eid].v in vset]
               for v in verts}
    else:
        adj = {v: [] for v in verts}
        for eid in edge_ids:
            e = g.edges[eid]
            if e.u in vset and e.v in vset:
                adj[e.u].append(e.v)

    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    comps_rev: list[tuple[int, ...]] = []

    for root in verts:
        if root in index:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            neighbors = adj[v]
            while ei < len(neighbors):
                w = neighbors[ei]
                ei += 1
                if w not in index:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps_rev.append(tuple(sorted(comp)))
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])

    components = tuple(reversed(comps_rev))
    comp_of = [-1] * g.n
    for ci, comp in enumerate(components):
        for v in comp:
            comp_of[v] = ci
    return SccPartition(components, tuple(comp_of))


# --- weight views ---------------------------------------------------------


@dataclass(frozen=True)
class CombinedWeightView:
    """Read-only view weighting each edge by length + delay."""

    graph: MultiDigraph
    weights: tuple[float, ...]


def combined_weight_view(g: MultiDigraph) -> CombinedWeightView:
    """View of ``g`` where every edge weighs length + delay."""
    return CombinedWeightView(g, tuple(e.length + e.delay for e in g.edges))


def aspect_ratio(g: MultiDigraph) -> float:
    """Ratio of largest to smallest positive edge length (1.0 if none)."""
    positive = [e.length for e in g.edges if e.length > 0.0]
    if not positive:
        return 1.0
    return max(positive) / min(positive)


# --- dominance and frontiers -------------------------------------------------


def pareto_dominates(a: tuple[float, float], b: tuple[float, float]) -> bool:
    """Weak dominance of (length, delay) pairs: a is no worse in both."""
    return a[0] <= b[0] and a[1] <= b[1]


@dataclass(frozen=True)
class ParetoFrontier:
    """Nondominated (delay, length) points, delay ascending, length descending."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        for (d0, l0), (d1, l1) in zip(self.points, self.points[1:]):
            if not (d0 < d1 and l0 > l1):
                raise ValueError(f"not a frontier: {(d0, l0)} then {(d1, l1)}")

    def min_length_within(self, delay_budget: float) -> float:
        """Minimum length among points with delay <= budget (INF if none)."""
        idx = bisect_right(self.points, (delay_budget, INF))
        if idx == 0:
            return INF
        return self.points[idx - 1][1]


def frontier_from_points(points: list[tuple[float, float]]) -> ParetoFrontier:
    """Build the nondominated frontier of arbitrary (delay, length) points."""
    best: list[tuple[float, float]] = []
    for d, l in sorted(points):
        if not best or l < best[-1][1]:
            best.append((d, l))
    return ParetoFrontier(tuple(best))


# --- parallel edge deduplication ---------------------------------------------


def snapped_log(x: float, base: float) -> float:
    """log_base(x) with results within LOG_SNAP of an integer snapped to it."""
    r = math.log(x) / math.log(base)
    nearest = math.floor(r + 0.5)
    if abs(r - nearest) <= LOG_SNAP * max(1.0, abs(r)):
        return float(nearest)
    return r


def ceil_log(x: float, base: float) -> int:
    return math.ceil(snapped_log(x, base))


def floor_log(x: float, base: float) -> int:
    return math.floor(snapped_log(x, base))


@dataclass(frozen=True)
class DedupResult:
    """Reduced graph plus a map from its edge ids to originals."""

    graph: MultiDigraph
    original_ids: tuple[int, ...]


def dedup_parallel_edges(g: MultiDigraph, eps: float, delta: float, D: float) -> DedupResult:
    """Keep, per (u, v) and per threshold (1+eps)^k on the grid anchored at
    k0 = ceil(log_{1+eps} delta) up to ceil(log_{1+eps} D), only the
    minimum-length edge of delay within the threshold (ties: smaller delay,
    then smaller id).  Edges never selected are dropped.
    """
    if not (eps > 0.0):
        raise ValueError(f"eps must be positive, got {eps}")
    if not (0.0 < delta <= D):
        raise ValueError(f"need 0 < delta <= D, got delta={delta}, D={D}")
    base = 1.0 + eps
    k_lo = ceil_log(delta, base)
    k_hi = ceil_log(D, base)

    groups: dict[tuple[int, int], list[int]] = {}
    for eid, e in enumerate(g.edges):
        groups.setdefault((e.u, e.v), []).append(eid)

    keep: set[int] = set()
    for ids in groups.values():
        ids.sort(key=lambda i: (g.edges[i].delay, g.edges[i].length, i))
        for k in range(k_lo, k_hi + 1):
            threshold = base ** k
            best = -1
            for eid in ids:
                e = g.edges[eid]
                if e.delay > threshold:
                    break
                if best < 0 or (e.length, e.delay, eid) < (
                    g.edges[best].length, g.edges[best].delay, best
                ):
                    best = eid
            if best >= 0:
                keep.add(best)

    kept = sorted(keep)
    reduced = MultiDigraph(g.n)
    for eid in kept:
        e = g.edges[eid]
        reduced.add_edge(e.u, e.v, e.length, e.delay)
    return DedupResult(reduced, tuple(kept))


# --- file format ----------------------------------------------------------
# Line-oriented:  "c ..." comments, one "p rsp <n> <m>" header, then exactly
# m lines "a <u> <v> <length> <delay>" with 1-based endpoints.


class GraphFormatError(ValueError):
    """Malformed graph file; message carries the 1-based line number."""


def loads_graph(text: str) -> MultiDigraph:
    g: MultiDigraph | None = None
    declared_m = 0
    seen_m = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if g is not None:
                raise GraphFormatError(f"line {lineno}: duplicate problem line")
            if len(tokens) != 4 or tokens[1] != "rsp":
                raise GraphFormatError(f"line {lineno}: expected 'p rsp <n> <m>'")
            try:
                n, declared_m = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: n and m must be integers") from None
            if n < 1 or declared_m < 0:
                raise GraphFormatError(f"line {lineno}: need n >= 1 and m >= 0")
            g = MultiDigraph(n)
        elif tokens[0] == "a":
            if g is None:
                raise GraphFormatError(f"line {lineno}: arc before problem line")
            if len(tokens) != 5:
                raise GraphFormatError(f"line {lineno}: expected 'a <u> <v> <length> <delay>'")
            try:
                u, v = int(tokens[1]), int(tokens[2])
                length, delay = float(tokens[3]), float(tokens[4])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad arc fields") from None
            if not (1 <= u <= g.n and 1 <= v <= g.n):
                raise GraphFormatError(f"line {lineno}: endpoint out of range 1..{g.n}")
            try:
                g.add_edge(u - 1, v - 1, length, delay)
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: {exc}") from None
            seen_m += 1
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {tokens[0]!r}")
    if g is None:
        raise GraphFormatError("line 1: missing problem line")
    if seen_m != declared_m:
        raise GraphFormatError(f"line {lineno}: header declared {declared_m} arcs, found {seen_m}")
    return g


def dumps_graph(g: MultiDigraph, comments: tuple[str, ...] = ()) -> str:
    lines = [f"c {note}" for note in comments]
    lines.append(f"p rsp {g.n} {g.m}")
    for e in g.edges:
        lines.append(f"a {e.u + 1} {e.v + 1} {e.length!r} {e.delay!r}")
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> MultiDigraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_graph(fh.read())


def save_graph(g: MultiDigraph, path: str,
               comments: tuple[str, ...] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_graph(g, comments))
