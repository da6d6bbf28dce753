"""Gap reduction framework: normalized YES/NO tests and the threshold sweep.

``gap_solve`` answers the promise problem "is there an (s,t)-path of length
<= L and delay <= D?" with one budget-DP run on a hierarchy work graph built
over the normalized instance (lengths scaled by n/(eps*L), delays by
n/(eps*D)).  ``reduce_to_gap`` sweeps a geometric grid of length thresholds,
records slack * L_i at each first YES, and recovers witness paths; zero-length
targets and delay-infeasible targets are resolved up front.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Callable

from . import config
from .config import INF, GapConstants, log2n, max_witness_delay_factor
from .dp import DpTable, path_cost, pi_dp_preprocess, recover_path
from .graph import MultiDigraph, aspect_ratio
from .workgraph import WorkGraph

Builder = Callable[[MultiDigraph, random.Random], WorkGraph]

# --- normalization ----------------------------------------------------------


@dataclass(frozen=True)
class GapInstance:
    """Normalized promise instance; budget n/eps on both axes."""

    graph: MultiDigraph
    length_budget: float
    delay_budget: float
    eps: float

    @property
    def budget(self) -> float:
        return self.graph.n / self.eps


def normalize(g: MultiDigraph, L: float, D: float, eps: float) -> GapInstance:
    """Scale lengths by n/(eps*L) and delays by n/(eps*D)."""
    if not (L > 0.0 and D > 0.0 and eps > 0.0):
        raise ValueError(f"need positive L, D, eps; got L={L}, D={D}, eps={eps}")
    lf = g.n / (eps * L)
    df = g.n / (eps * D)
    gn = MultiDigraph(g.n)
    for e in g.edges:
        gn.add_edge(e.u, e.v, e.length * lf, e.delay * df)
    return GapInstance(gn, L, D, eps)


# --- gap solver -------------------------------------------------------------


@dataclass
class GapAnswer:
    """Verdicts plus enough context to recover and validate witnesses."""

    instance: GapInstance
    work: WorkGraph | None
    table: DpTable | None
    values: list[float]
    yes: list[bool]
    threshold_len: float
    delay_threshold: float
    slack: float
    eps_dp: float
    h: int

    def witness_base_path(self, t: int) -> list[int]:
        """Base edge ids realizing the YES at target ``t``."""
        if not self.yes[t]:
            raise ValueError(f"target {t} was not answered YES")
        if self.table is None:
            return []  # t == s on an edgeless work graph
        work_path = recover_path(self.table, t, self.delay_threshold)
        return self.work.expand_path(work_path)


def gap_solve(g: MultiDigraph, s: int, L: float, D: float, eps: float,
              builder: Builder, alpha: int, rng: random.Random) -> GapAnswer:
    """One randomized YES/NO test for every target simultaneously.

    YES verdicts are sound with certainty: the DP value is realized by a work
    path whose expansion is a real path of normalized length <= value and
    rounded delay <= (1+eps_dp) * delay_threshold.  Completeness (YES whenever
    a path fits the unslacked budgets) holds deterministically for work graphs
    without dead edges, since the depth cap covers every live simple path.
    """
    inst = normalize(g, L, D, eps)
    n = g.n
    slack = GapConstants.slack(n, eps)
    eps_dp = GapConstants.dp_eps(n, eps)
    budget = inst.budget
    threshold_len = slack * budget
    delay_threshold = slack * budget

    work = builder(inst.graph, rng)
    if work.combined.m == 0:
        values = [0.0 if t == s else INF for t in range(n)]
        yes = [v <= threshold_len for v in values]
        return GapAnswer(inst, None, None, values, yes, threshold_len,
                         delay_threshold, slack, eps_dp, 1)

    pi_sum = work.freq.pi_sum
    h_raw = math.ceil(config.GAP_DEPTH_C * n * log2n(n) ** alpha / eps)
    h_simple = max(1, (n - 1) * work.freq.max_live)
    h = max(1, min(h_raw, h_simple, pi_sum))
    table = pi_dp_preprocess(work.combined, work.freq, s, h,
                             delay_threshold, delay_threshold, eps_dp)
    col = table.query_col(delay_threshold)
    values = [float(table.values[col, t]) for t in range(n)]
    yes = [v <= threshold_len for v in values]
    return GapAnswer(inst, work, table, values, yes, threshold_len,
                     delay_threshold, slack, eps_dp, h)


# --- pre-reductions -----------------------------------------------------------


def rescale_lengths(g: MultiDigraph) -> tuple[MultiDigraph, float]:
    """Divide all lengths by the smallest positive one; returns (graph, factor)."""
    positive = [e.length for e in g.edges if e.length > 0.0]
    if not positive:
        return g.copy(), 1.0
    factor = min(positive)
    out = MultiDigraph(g.n)
    for e in g.edges:
        out.add_edge(e.u, e.v, e.length / factor, e.delay)
    return out, factor


def zero_length_targets(g: MultiDigraph, s: int, D: float) -> dict[int, list[int]]:
    """Targets reachable at total length 0 within delay D, with witness paths.

    Runs Dijkstra by delay over the zero-length subgraph; the returned paths
    are optimal (length 0 is unbeatable for nonnegative lengths).
    """
    if not (0 <= s < g.n):
        raise ValueError(f"source {s} out of range")
    adj: dict[int, list[tuple[int, int, float]]] = {}
    for eid, e in enumerate(g.edges):
        if e.length == 0.0:
            adj.setdefault(e.u, []).append((e.v, eid, e.delay))
    dist = {s: 0.0}
    pred: dict[int, tuple[int, int]] = {}
    heap = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist.get(v, INF):
            continue
        for w, eid, wd in adj.get(v, ()):
            nd = d + wd
            if nd < dist.get(w, INF):
                dist[w] = nd
                pred[w] = (v, eid)
                heapq.heappush(heap, (nd, w))
    out: dict[int, list[int]] = {}
    for t, d in dist.items():
        if d <= D:
            path = []
            cur = t
            while cur != s:
                pv, eid = pred[cur]
                path.append(eid)
                cur = pv
            out[t] = path[::-1]
    return out


def delay_only_mins(g: MultiDigraph, s: int) -> list[float]:
    """Minimum path delay from s to every vertex (lengths ignored)."""
    dist = [INF] * g.n
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for eid in g.out[v]:
            e = g.edges[eid]
            nd = d + e.delay
            if nd < dist[e.v]:
                dist[e.v] = nd
                heapq.heappush(heap, (nd, e.v))
    return dist


def single_pair_gamma(g: MultiDigraph, s: int, t: int, D: float) -> float:
    """A value gamma with gamma <= dist(s,t,D) <= n * gamma (INF if infeasible).

    Binary search over the sorted distinct edge lengths: x is feasible when
    the subgraph of edges with length <= x admits an (s,t)-path of delay <= D.
    The smallest feasible x bounds the distance on both sides (0 if the
    zero-length subgraph already reaches t).
    """

    def feasible(limit: float) -> bool:
        dist = [INF] * g.n
        dist[s] = 0.0
        heap = [(0.0, s)]
        while heap:
            d, v = heapq.heappop(heap)
            if v == t and d <= D:
                return True
            if d > dist[v]:
                continue
            for eid in g.out[v]:
                e = g.edges[eid]
                if e.length > limit:
                    continue
                nd = d + e.delay
                if nd < dist[e.v]:
                    dist[e.v] = nd
                    heapq.heappush(heap, (nd, e.v))
        return dist[t] <= D

    values = sorted(set(e.length for e in g.edges))
    values = [0.0] + [v for v in values if v > 0.0]
    lo, hi = 0, len(values) - 1
    if not feasible(values[-1] if values else 0.0):
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(values[mid]):
            hi = mid
        else:
            lo = mid + 1
    return values[lo]


# --- threshold sweep -----------------------------------------------------------


@dataclass
class SolveResult:
    """Per-target length estimates with recovered witnesses and counters."""

    source: int
    delay_budget: float
    eps: float
    lengths: list[float]
    witness_paths: list[list[int] | None]
    witness_lengths: list[float]
    witness_delays: list[float]
    gap_runs: int = 0
    dp_inspections: int = 0
    sweep_values: int = 0


AuditHook = Callable[[float, int, GapAnswer, frozenset[int]], None]


def reduce_to_gap(g: MultiDigraph, s: int, D: float, eps: float, builder: Builder,
                  alpha: int, rng: random.Random, trials: int | None = None,
                  early_skip: bool = True, want_paths: bool = True,
                  audit: AuditHook | None = None) -> SolveResult:
    """Sweep length thresholds L_i = (1+eps*)^i and fold gap verdicts into
    per-target estimates L(t) = slack * (first YES threshold).

    eps* = eps/(4c log n) splits the overall budget so that
    L(t) <= (1+eps) * dist(s,t,D) whenever the gap solver accepts at the first
    threshold >= dist (deterministic for dead-edge-free builders), and every
    recovered witness has delay <= (1+eps) * D.
    """
    if not (D > 0.0):
        raise ValueError(f"delay budget must be positive, got {D}")
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    n = g.n
    g1, factor = rescale_lengths(g)
    eps_star = GapConstants(eps, n).eps_star
    slack = GapConstants.slack(n, eps_star)
    if trials is None:
        trials = max(1, config.GAP_TRIALS_C * math.ceil(math.log2(max(n, 2))))

    lengths = [INF] * n
    paths: list[list[int] | None] = [None] * n
    wit_len = [INF] * n
    wit_delay = [INF] * n

    for t, path in zero_length_targets(g1, s, D).items():
        lengths[t] = 0.0
        paths[t] = path if want_paths else None
        wl, wd = path_cost(g, path)
        wit_len[t], wit_delay[t] = wl, wd

    max_delay = max_witness_delay_factor(n, eps_star) * D
    dmin = delay_only_mins(g1, s)
    pending = set(t for t in range(n)
                  if lengths[t] == INF and dmin[t] <= max_delay * (1.0 + 1e-12))

    result = SolveResult(source=s, delay_budget=D, eps=eps, lengths=lengths,
                         witness_paths=paths, witness_lengths=wit_len,
                         witness_delays=wit_delay)

    width = aspect_ratio(g1)
    l_hi = (1.0 + eps_star) * n * width
    base = 1.0 + eps_star
    i = 0
    l_i = 1.0
    while l_i <= l_hi * (1.0 + 1e-12) and pending:
        result.sweep_values += 1
        for trial in range(trials):
            if not pending:
                break
            child = random.Random(rng.randrange(2 ** 63))
            ans = gap_solve(g1, s, l_i, D, eps_star, builder, alpha, child)
            result.gap_runs += 1
            if ans.table is not None:
                result.dp_inspections += ans.table.inspections
            if audit is not None:
                audit(l_i, trial, ans, frozenset(pending))
            newly = [t for t in pending if ans.yes[t]]
            for t in newly:
                lengths[t] = slack * l_i * factor
                if want_paths:
                    path = ans.witness_base_path(t)
                    paths[t] = path
                    wit_len[t], wit_delay[t] = path_cost(g, path)
                pending.discard(t)
            if early_skip and not newly:
                break
        i += 1
        l_i = base ** i
    return result
