"""Frequency-driven budget dynamic program over a geometric delay grid.

Each edge carries a positive integer frequency pi(e) (or the dead marker
``inf``); the table column for budget (1+eps')^k inspects exactly the edges
whose frequency divides k.  Querying target t at delay budget D returns a
length that is at most the best over paths of frequency weight <= h within
budget D, realized by a recoverable path of rounded delay <= (1+eps) * D.

The inner loop lives in a compiled kernel (`_dpcore`) with a bit-identical
pure-Python twin (`_dpcore_py`) selected at import time.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .config import DP_MAX_CELLS, INF, PI_SUM_DEGREE, ResourceCapError
from .graph import MultiDigraph, ceil_log, compute_sccs, floor_log

if os.environ.get("RSP_FORCE_PYTHON"):
    from . import _dpcore_py as _kernel

    BACKEND = "python"
else:
    try:
        from . import _dpcore as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build environment
        from . import _dpcore_py as _kernel

        BACKEND = "python"


def kernel_for(name: str):
    """Return a kernel module by name ("cython" or "python"); for benchmarks."""
    if name == "python":
        from . import _dpcore_py

        return _dpcore_py
    if name == "cython":
        from . import _dpcore  # type: ignore[attr-defined]

        return _dpcore
    raise ValueError(f"unknown backend {name!r}")


# --- rounding primitives ----------------------------------------------------


def round_up_delay(d: float, delta: float) -> float:
    """Delay floor: max(d, delta)."""
    return d if d > delta else delta


def exp_round(gamma: float, x: float) -> float:
    """Smallest integer power of gamma that is >= x (0.0 for x == 0)."""
    if gamma <= 1.0:
        raise ValueError(f"gamma must exceed 1, got {gamma}")
    if x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    return gamma ** ceil_log(x, gamma)


# --- frequency assignments ---------------------------------------------------


@dataclass(frozen=True)
class FrequencyAssignment:
    """Per-edge frequencies: positive ints, with ``inf`` marking dead edges."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        for i, p in enumerate(self.values):
            if p == INF:
                continue
            if not (isinstance(p, int) or float(p).is_integer()) or p < 1:
                raise ValueError(f"frequency {i} must be a positive integer or inf, got {p}")

    @property
    def live_ids(self) -> list[int]:
        return [i for i, p in enumerate(self.values) if p != INF]

    @property
    def pi_sum(self) -> int:
        return int(sum(p for p in self.values if p != INF))

    @property
    def max_live(self) -> int:
        live = [int(p) for p in self.values if p != INF]
        return max(live) if live else 0

    @property
    def inverse_sum(self) -> float:
        """Pi = sum of 1/pi(e) over live edges — the work-bound aggregate."""
        return sum(1.0 / p for p in self.values if p != INF)


def frequency_ones(g: MultiDigraph) -> FrequencyAssignment:
    """The all-ones assignment (every edge inspected at every budget index)."""
    return FrequencyAssignment(tuple(1 for _ in g.edges))


def frequency_topological(g: MultiDigraph) -> FrequencyAssignment:
    """Topological-gap frequencies for a DAG: pi(e) = max(1, tau(v) - tau(u)).

    The inverse sum telescopes into O(n log n) regardless of density, which is
    what makes the budget DP near-linear on DAGs.
    """
    sccs = compute_sccs(g)
    if len(sccs.components) != g.n:
        raise ValueError("graph has a cycle; topological frequencies need a DAG")
    tau = [0] * g.n
    for pos, comp in enumerate(sccs.components):
        tau[comp[0]] = pos
    values = []
    for e in g.edges:
        if tau[e.v] <= tau[e.u]:
            raise ValueError("graph has a cycle; topological frequencies need a DAG")
        values.append(max(1, tau[e.v] - tau[e.u]))
    return FrequencyAssignment(tuple(values))


# --- table ------------------------------------------------------------------


@dataclass
class DpTable:
    """Budget-DP output: value grid, relaxation log, and run parameters."""

    graph: MultiDigraph
    source: int
    h: int
    eps: float
    eps_prime: float
    gamma: float
    delta: float
    d_min: float
    d_max: float
    k_min: int
    k_max: int
    live_ids: list[int]
    values: np.ndarray
    records: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    inspections: int
    relaxations: int
    backend: str
    _by_vertex: dict[int, tuple[list[int], list[int]]] = field(default_factory=dict, repr=False)

    @property
    def window(self) -> int:
        return self.k_max - self.k_min + 1

    def query_col(self, delay_budget: float) -> int:
        if not (self.d_min <= delay_budget <= self.d_max):
            raise ValueError(
                f"budget {delay_budget} outside preprocessed range "
                f"[{self.d_min}, {self.d_max}]")
        k = ceil_log((1.0 + self.eps_prime) * delay_budget, self.gamma) + self.h
        col = k - self.k_min
        if col < 0:
            col = 0
        if col > self.k_max - self.k_min:
            col = self.k_max - self.k_min
        return col

    def _vertex_records(self, v: int) -> tuple[list[int], list[int]]:
        got = self._by_vertex.get(v)
        if got is None:
            rec_v, rec_col = self.records[0], self.records[1]
            idxs = [i for i in range(len(rec_v)) if rec_v[i] == v]
            got = ([int(rec_col[i]) for i in idxs], idxs)
            self._by_vertex[v] = got
        return got


def pi_dp_preprocess(g: MultiDigraph, freq: FrequencyAssignment, s: int, h: int,
                     d_min: float, d_max: float, eps: float,
                     backend: str | None = None) -> DpTable:
    """Build the budget table from source ``s`` for budgets in [d_min, d_max].

    ``h`` is the depth budget: any path whose frequencies sum to <= h and
    whose delay fits the queried budget is guaranteed visible.  Requires
    1 <= h <= pi_sum and pi_sum <= max(n,2)^4.
    """
    if not (0 <= s < g.n):
        raise ValueError(f"source {s} out of range for n={g.n}")
    if len(freq.values) != g.m:
        raise ValueError(f"frequency assignment covers {len(freq.values)} edges, graph has {g.m}")
    if not (0.0 < d_min <= d_max) or not math.isfinite(d_max):
        raise ValueError(f"need 0 < d_min <= d_max finite, got [{d_min}, {d_max}]")
    if not (eps > 0.0):
        raise ValueError(f"eps must be positive, got {eps}")
    pi_sum = freq.pi_sum
    if pi_sum < 1:
        raise ValueError("no live edges: pi_sum must be >= 1")
    if pi_sum > max(g.n, 2) ** PI_SUM_DEGREE:
        raise ValueError(f"pi_sum {pi_sum} exceeds max(n,2)^{PI_SUM_DEGREE}")
    if not (1 <= h <= pi_sum):
        raise ValueError(f"depth h must lie in [1, pi_sum={pi_sum}], got {h}")

    eps_prime = eps / (2.0 * h + 4.0)
    gamma = 1.0 + eps_prime
    delta = (eps_prime / pi_sum) * d_min
    k_min = floor_log(delta, gamma)
    k_max = ceil_log((1.0 + eps_prime) * d_max, gamma) + h
    W = k_max - k_min + 1
    if W * g.n > DP_MAX_CELLS:
        raise ResourceCapError(
            f"budget table would need {W * g.n} cells (cap {DP_MAX_CELLS}); "
            "raise eps or lower h / the budget ratio")

    live = freq.live_ids
    eu = np.fromiter((g.edges[i].u for i in live), dtype=np.int32, count=len(live))
    ev = np.fromiter((g.edges[i].v for i in live), dtype=np.int32, count=len(live))
    elen = np.fromiter((g.edges[i].length for i in live), dtype=np.float64, count=len(live))
    edup = np.fromiter((round_up_delay(g.edges[i].delay, delta) for i in live),
                       dtype=np.float64, count=len(live))
    pi = np.fromiter((int(freq.values[i]) for i in live), dtype=np.int64, count=len(live))
    powers = np.fromiter((gamma ** k for k in range(k_min, k_max + 1)),
                         dtype=np.float64, count=W)

    kern = _kernel if backend is None else kernel_for(backend)
    bstarts, bedges = kern.build_buckets(k_min, k_max, pi)
    values, records, inspections, relaxations = kern.run_dp(
        g.n, s, k_min, k_max, math.log(gamma), powers,
        eu, ev, elen, edup, bstarts, bedges)

    return DpTable(
        graph=g, source=s, h=h, eps=eps, eps_prime=eps_prime, gamma=gamma,
        delta=delta, d_min=d_min, d_max=d_max, k_min=k_min, k_max=k_max,
        live_ids=live, values=values, records=records,
        inspections=int(inspections), relaxations=int(relaxations),
        backend=("cython" if (backend or BACKEND) == "cython" else "python"))


def pi_dp_query(tbl: DpTable, t: int, delay_budget: float) -> float:
    """Length estimate for target ``t`` within ``delay_budget``."""
    if not (0 <= t < tbl.graph.n):
        raise ValueError(f"target {t} out of range")
    return float(tbl.values[tbl.query_col(delay_budget), t])


def recover_path(tbl: DpTable, t: int, delay_budget: float) -> list[int]:
    """Edge ids (in ``tbl.graph``) of the path realizing the queried value."""
    col = tbl.query_col(delay_budget)
    if not math.isfinite(float(tbl.values[col, t])):
        raise ValueError(f"target {t} unreachable within budget {delay_budget}")
    rec_pu, rec_pe, rec_pk = tbl.records[2], tbl.records[3], tbl.records[4]
    path_rev: list[int] = []
    cur, ccol = t, col
    while True:
        cols, idxs = tbl._vertex_records(cur)
        pos = bisect_right(cols, ccol)
        if pos == 0:
            if cur != tbl.source:
                raise AssertionError(f"backtrace hit {cur} with no record")
            break
        ridx = idxs[pos - 1]
        path_rev.append(tbl.live_ids[int(rec_pe[ridx])])
        j = int(rec_pk[ridx])
        prev = int(rec_pu[ridx])
        if j < tbl.k_min:
            if prev != tbl.source:
                raise AssertionError("boundary predecessor is not the source")
            break
        cur, ccol = prev, j - tbl.k_min
    return path_rev[::-1]


def path_cost(g: MultiDigraph, edge_ids: list[int]) -> tuple[float, float]:
    """(length, delay) of an edge-id path, summed source-to-target."""
    length = 0.0
    delay = 0.0
    for eid in edge_ids:
        e = g.edges[eid]
        length += e.length
        delay += e.delay
    return length, delay


def solve_dp1(g: MultiDigraph, s: int, D: float,
              eps: float) -> tuple[list[float], list[list[int] | None],
                                   DpTable | None]:
    """Per-target budget-constrained lengths with unit frequencies at depth
    n - 1 (every simple path is inspected).  Returns (lengths, paths, table)."""
    if g.m == 0:
        lengths = [0.0 if t == s else INF for t in range(g.n)]
        return lengths, [[] if t == s else None for t in range(g.n)], None
    freq = frequency_ones(g)
    h = max(1, min(g.n - 1, freq.pi_sum))
    tbl = pi_dp_preprocess(g, freq, s, h, D, D, eps)
    col = tbl.query_col(D)
    lengths = []
    paths: list[list[int] | None] = []
    for t in range(g.n):
        val = float(tbl.values[col, t])
        lengths.append(val)
        paths.append(recover_path(tbl, t, D) if math.isfinite(val) else None)
    return lengths, paths, tbl


def solve_dag_topological(g: MultiDigraph, s: int, D: float,
                          eps: float) -> tuple[list[float],
                                               list[list[int] | None],
                                               DpTable | None]:
    """Per-target budget-constrained lengths on a DAG via topological
    frequencies at depth n - 1 (every simple path's frequencies telescope to
    at most tau(t) - tau(s)).  Returns (lengths, witness paths, table)."""
    freq = frequency_topological(g)
    if g.m == 0:
        lengths = [0.0 if t == s else INF for t in range(g.n)]
        return lengths, [[] if t == s else None for t in range(g.n)], None
    h = max(1, min(g.n - 1, freq.pi_sum))
    tbl = pi_dp_preprocess(g, freq, s, h, D, D, eps)
    col = tbl.query_col(D)
    lengths: list[float] = []
    paths: list[list[int] | None] = []
    for t in range(g.n):
        val = float(tbl.values[col, t])
        lengths.append(val)
        paths.append(recover_path(tbl, t, D) if math.isfinite(val) else None)
    return lengths, paths, tbl
