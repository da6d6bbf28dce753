"""Exact reference solvers used to validate every approximation in the package.

Two independent routes are provided: a Pareto label-correcting search (the
workhorse) and an exhaustive simple-path enumeration for tiny graphs, plus a
budget-indexed dynamic program for integer delays.  They share no code with
the approximation pipeline.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass

from .config import INF, ORACLE_EXHAUSTIVE_MAX_N, ORACLE_LABEL_CAP, ResourceCapError
from .graph import MultiDigraph, ParetoFrontier

# --- answer container -------------------------------------------------------


@dataclass(frozen=True)
class ExactRspAnswer:
    """Per-target Pareto frontiers over simple paths, with witness paths."""

    source: int
    frontiers: tuple[ParetoFrontier, ...]
    paths: tuple[tuple[tuple[int, ...], ...], ...]
    labels_created: int

    def dist(self, t: int, delay_budget: float) -> float:
        """Minimum path length from the source to ``t`` within the budget."""
        return self.frontiers[t].min_length_within(delay_budget)

    def path(self, t: int, delay_budget: float) -> list[int] | None:
        """Edge ids of a path realizing ``dist(t, delay_budget)``."""
        pts = self.frontiers[t].points
        idx = bisect_right(pts, (delay_budget, INF))
        if idx == 0:
            return None
        return list(self.paths[t][idx - 1])


# --- label-correcting search ---------------------------------------------


class _Frontier:
    """Mutable (delay, length, payload) frontier with weak-dominance pruning."""

    __slots__ = ("pts",)

    def __init__(self) -> None:
        self.pts: list[tuple[float, float, object]] = []

    def insert(self, d: float, l: float, payload: object) -> bool:
        """Insert unless weakly dominated; evict points the new one dominates."""
        pts = self.pts
        lo, hi = 0, len(pts)
        while lo < hi:
            mid = (lo + hi) // 2
            if (pts[mid][0], pts[mid][1]) <= (d, l):
                lo = mid + 1
            else:
                hi = mid
        idx = lo
        if idx > 0 and pts[idx - 1][1] <= l:
            return False
        cut = idx
        while cut < len(pts) and pts[cut][1] >= l:
            cut += 1
        pts[idx:cut] = [(d, l, payload)]
        return True


def _frontier_answer(source: int, n: int, fronts: list[_Frontier],
                     path_of: "callable", labels: int) -> ExactRspAnswer:
    frontiers = []
    all_paths = []
    for t in range(n):
        pts = tuple((d, l) for d, l, _ in fronts[t].pts)
        frontiers.append(ParetoFrontier(pts))
        all_paths.append(tuple(tuple(path_of(payload)) for _, _, payload in fronts[t].pts))
    return ExactRspAnswer(source, tuple(frontiers), tuple(all_paths), labels)


def _exact_frontier_labels(g: MultiDigraph, s: int, label_cap: int) -> ExactRspAnswer:
    lab_delay = [0.0]
    lab_length = [0.0]
    lab_vertex = [s]
    lab_pred = [-1]
    lab_edge = [-1]
    fronts = [_Frontier() for _ in range(g.n)]
    fronts[s].insert(0.0, 0.0, 0)
    queue = [0]
    head = 0
    while head < len(queue):
        li = queue[head]
        head += 1
        v = lab_vertex[li]
        # skip labels evicted from their vertex frontier since enqueueing
        if all(payload != li for _, _, payload in fronts[v].pts):
            continue
        d0, l0 = lab_delay[li], lab_length[li]
        for eid in g.out[v]:
            e = g.edges[eid]
            nd, nl = d0 + e.delay, l0 + e.length
            if not fronts[e.v].insert(nd, nl, len(lab_delay)):
                continue
            lab_delay.append(nd)
            lab_length.append(nl)
            lab_vertex.append(e.v)
            lab_pred.append(li)
            lab_edge.append(eid)
            if len(lab_delay) > label_cap:
                raise ResourceCapError(f"oracle label cap {label_cap} exceeded")
            queue.append(len(lab_delay) - 1)

    def path_of(li: int) -> list[int]:
        out: list[int] = []
        while lab_pred[li] >= 0 or lab_edge[li] >= 0:
            out.append(lab_edge[li])
            li = lab_pred[li]
        return out[::-1]

    return _frontier_answer(s, g.n, fronts, path_of, len(lab_delay))


# --- exhaustive enumeration ------------------------------------------------


def _exact_frontier_exhaustive(g: MultiDigraph, s: int, label_cap: int) -> ExactRspAnswer:
    if g.n > ORACLE_EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive mode limited to n <= {ORACLE_EXHAUSTIVE_MAX_N}")
    fronts = [_Frontier() for _ in range(g.n)]
    fronts[s].insert(0.0, 0.0, ())
    visited = [False] * g.n
    visited[s] = True
    path: list[int] = []
    count = 0

    def walk(v: int, d: float, l: float) -> None:
        nonlocal count
        for eid in g.out[v]:
            e = g.edges[eid]
            if visited[e.v]:
                continue
            count += 1
            if count > label_cap:
                raise ResourceCapError(f"oracle path cap {label_cap} exceeded")
            path.append(eid)
            fronts[e.v].insert(d + e.delay, l + e.length, tuple(path))
            visited[e.v] = True
            walk(e.v, d + e.delay, l + e.length)
            visited[e.v] = False
            path.pop()

    walk(s, 0.0, 0.0)
    return _frontier_answer(s, g.n, fronts, list, count + 1)


def exact_frontier(g: MultiDigraph, s: int, mode: str = "labels",
                   label_cap: int = ORACLE_LABEL_CAP) -> ExactRspAnswer:
    """Exact per-target (delay, length) frontiers from ``s`` over simple paths.

    ``mode``: "labels" (Pareto label correcting) or "exhaustive" (DFS over all
    simple paths, tiny graphs only).  Both raise ResourceCapError past
    ``label_cap`` created labels / enumerated extensions.
    """
    if not (0 <= s < g.n):
        raise ValueError(f"source {s} out of range for n={g.n}")
    if mode == "labels":
        return _exact_frontier_labels(g, s, label_cap)
    if mode == "exhaustive":
        return _exact_frontier_exhaustive(g, s, label_cap)
    raise ValueError(f"unknown oracle mode {mode!r}")


# --- integer-delay dynamic program ----------------------------------------


def exact_rsp_integer_delays(g: MultiDigraph, s: int, delay_budget: int) -> list[float]:
    """Exact min lengths to every target with integer delays <= ``delay_budget``.

    Classic budget-indexed relaxation, O((D+1) * m log n); requires every
    delay (and the budget) to be a nonnegative integer.
    """
    if not (0 <= s < g.n):
        raise ValueError(f"source {s} out of range for n={g.n}")
    if delay_budget < 0 or delay_budget != int(delay_budget):
        raise ValueError(f"delay budget must be a nonnegative integer, got {delay_budget}")
    for eid, e in enumerate(g.edges):
        if e.delay != int(e.delay):
            raise ValueError(f"edge {eid} has non-integer delay {e.delay}")
    budget = int(delay_budget)

    zero_out: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    for e in g.edges:
        if int(e.delay) == 0:
            zero_out[e.u].append((e.v, e.length))

    rows: list[list[float]] = []
    for b in range(budget + 1):
        cur = list(rows[b - 1]) if b else [INF] * g.n
        cur[s] = 0.0
        if b:
            for e in g.edges:
                de = int(e.delay)
                if 1 <= de <= b:
                    cand = rows[b - de][e.u] + e.length
                    if cand < cur[e.v]:
                        cur[e.v] = cand
        # close under zero-delay edges (multi-source Dijkstra over lengths)
        heap = [(dist, v) for v, dist in enumerate(cur) if dist < INF]
        heapq.heapify(heap)
        while heap:
            dist, v = heapq.heappop(heap)
            if dist > cur[v]:
                continue
            for w, wl in zero_out[v]:
                if dist + wl < cur[w]:
                    cur[w] = dist + wl
                    heapq.heappush(heap, (cur[w], w))
        rows.append(cur)
    return rows[budget]
