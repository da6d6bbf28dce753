"""Work graphs: a normalized base graph plus auxiliary (star/hop) edges.

The budget DP runs on ``combined`` (base edges first, auxiliary edges
appended); ``expand_path`` maps a DP witness back to base edge ids by
replacing each auxiliary edge with a real path that is no longer and no
slower than the auxiliary edge's stamped (length, delay).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

from .config import INF
from .dp import FrequencyAssignment
from .graph import MultiDigraph


@dataclass
class WorkGraph:
    """DP-ready combined graph with frequencies and aux-edge expanders."""

    combined: MultiDigraph
    base_m: int
    freq: FrequencyAssignment
    expanders: list[Callable[[], list[int]]]
    meta: object = None

    def expand_path(self, work_path: list[int]) -> list[int]:
        """Replace auxiliary edges by real base paths; base ids pass through."""
        out: list[int] = []
        for wid in work_path:
            if wid < self.base_m:
                out.append(wid)
            else:
                out.extend(self.expanders[wid - self.base_m]())
        return out


def shortest_combined_path(g: MultiDigraph, edge_ids: list[int], src: int,
                           dst: int) -> list[int]:
    """Min (length + delay) path from src to dst using only ``edge_ids``.

    Returns the edge-id path; raises if dst is unreachable (callers only ask
    within pieces whose connectivity is certified).
    """
    if src == dst:
        return []
    adj: dict[int, list[tuple[int, int, float]]] = {}
    for eid in edge_ids:
        e = g.edges[eid]
        adj.setdefault(e.u, []).append((e.v, eid, e.length + e.delay))
    dist: dict[int, float] = {src: 0.0}
    pred: dict[int, tuple[int, int]] = {}
    heap = [(0.0, src)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist.get(v, INF):
            continue
        if v == dst:
            break
        for w, eid, wt in adj.get(v, ()):
            nd = d + wt
            if nd < dist.get(w, INF):
                dist[w] = nd
                pred[w] = (v, eid)
                heapq.heappush(heap, (nd, w))
    if dst not in dist:
        raise AssertionError(f"no internal path {src}->{dst}; piece certificate broken")
    path: list[int] = []
    cur = dst
    while cur != src:
        pv, eid = pred[cur]
        path.append(eid)
        cur = pv
    return path[::-1]
