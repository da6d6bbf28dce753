"""All-pairs restricted-shortest-path structure over a geometric delay grid.

``all_pairs_preprocess`` builds, level by level (k = q-1 down to 0 with
q = ceil(log2 n)), tables R_k(s, t, i) approximating min path lengths within
delay (1+eps_run)^i, for pairs in (V_k x V) and (V x V_k) where V_k is a
sampled vertex set of ~ n/2^k * log n draws.  A level-k run is one budget DP
(all frequencies 1, depth 2^(k+1)) on the graph plus shortcut edges from the
run's source to level-(k+1) sampled vertices, whose lengths come from the
previous level's tables and whose delays are grid stamps.  Queries at level 0
are O(1) array lookups; path recovery unfurls shortcuts level by level using
retained relaxation logs (shortcuts only ever leave a run's source).

eps_run = eps / (2 * (2q+1)) so the at-most-(2q+1) grid slacks compound to
less than (1+eps); delays are floored at eps_run * d_min / n, which costs one
further grid step and is why queries look up exponent ceil(log D) + 1.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from . import config
from .config import AP_RATIO_DEGREE, INF, ResourceCapError
from .dp import FrequencyAssignment, pi_dp_preprocess
from .graph import MultiDigraph, ceil_log, floor_log


# --- retained per-run state ---------------------------------------------------


@dataclass
class _Run:
    """Relaxation log and metadata needed to re-walk one DP run at query time."""

    level: int
    orientation: str  # "fwd" or "rev"
    source: int
    k_min: int
    records: tuple[np.ndarray, ...]
    qcols: list[int]  # exponent index -> query column
    shortcut_v: list[int]
    shortcut_i: list[int]  # exponent index of the referenced table entry
    m_base: int
    by_vertex: dict[int, tuple[list[int], list[int]]] = field(default_factory=dict)

    def vertex_records(self, v: int) -> tuple[list[int], list[int]]:
        got = self.by_vertex.get(v)
        if got is None:
            rec_v, rec_col = self.records[0], self.records[1]
            idxs = [i for i in range(len(rec_v)) if rec_v[i] == v]
            got = ([int(rec_col[i]) for i in idxs], idxs)
            self.by_vertex[v] = got
        return got

    def walk(self, target: int, exp_idx: int) -> list[tuple[bool, int]]:
        """Backtrace from target at the exponent's query column.

        Returns [(is_shortcut, payload)] in walk order away from the target;
        payload is a base edge id or a shortcut index.
        """
        rec_pu, rec_pe, rec_pk = self.records[2], self.records[3], self.records[4]
        out: list[tuple[bool, int]] = []
        cur, col = target, self.qcols[exp_idx]
        while True:
            cols, idxs = self.vertex_records(cur)
            pos = bisect_right(cols, col)
            if pos == 0:
                if cur != self.source:
                    raise AssertionError("backtrace hit a vertex with no record")
                break
            ridx = idxs[pos - 1]
            e = int(rec_pe[ridx])
            if e < self.m_base:
                out.append((False, e))
            else:
                out.append((True, e - self.m_base))
            j = int(rec_pk[ridx])
            prev = int(rec_pu[ridx])
            if j < self.k_min:
                if prev != self.source:
                    raise AssertionError("boundary predecessor is not the run source")
                break
            cur, col = prev, j - self.k_min
        return out


# --- table --------------------------------------------------------------------


@dataclass
class AllPairsTable:
    """Query-ready structure; value grid kept for level 0 only."""

    graph: MultiDigraph
    raised: MultiDigraph
    d_min: float
    d_max: float
    eps: float
    eps_run: float
    q: int
    alpha_min: int
    alpha_max: int
    v_draws: list[list[int]]
    v_unique: list[list[int]]
    r0: dict[int, np.ndarray]
    runs_fwd: list[dict[int, _Run]]
    runs_rev: list[dict[int, _Run]]
    query_ops: int = 0
    build_inspections: int = 0

    @property
    def n_exp(self) -> int:
        return self.alpha_max - self.alpha_min + 1

    def exponents(self) -> list[int]:
        return list(range(self.alpha_min, self.alpha_max + 1))


def _reverse(g: MultiDigraph) -> MultiDigraph:
    out = MultiDigraph(g.n)
    for e in g.edges:
        out.add_edge(e.v, e.u, e.length, e.delay)
    return out


def _strict_breakpoints(vals: np.ndarray) -> list[int]:
    """Indices of first-finite-then-strictly-decreasing values."""
    out: list[int] = []
    best = INF
    for idx, v in enumerate(vals):
        fv = float(v)
        if fv < best:
            out.append(idx)
            best = fv
    return out


def all_pairs_preprocess(g: MultiDigraph, d_min: float, d_max: float, eps: float,
                         rng: random.Random) -> AllPairsTable:
    """Build the level structure for delay thresholds in [d_min, d_max]."""
    if not (0.0 < d_min <= d_max) or not math.isfinite(d_max):
        raise ValueError(f"need 0 < d_min <= d_max finite, got [{d_min}, {d_max}]")
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    n = g.n
    ratio_cap = float(max(n, 2) ** AP_RATIO_DEGREE)
    if d_max / d_min > ratio_cap:
        raise ResourceCapError(
            f"threshold ratio {d_max / d_min:.3g} exceeds cap n^{AP_RATIO_DEGREE}")

    if n == 1:
        return AllPairsTable(g, g.copy(), d_min, d_max, eps, eps, q=0,
                             alpha_min=0, alpha_max=0, v_draws=[[0]],
                             v_unique=[[0]], r0={}, runs_fwd=[], runs_rev=[])

    q = max(1, math.ceil(math.log2(n)))
    eps_run = eps / (2.0 * (2.0 * q + 1.0))
    base = 1.0 + eps_run

    floor_delay = eps_run * d_min / n
    raised = MultiDigraph(n)
    for e in g.edges:
        raised.add_edge(e.u, e.v, e.length, e.delay if e.delay > floor_delay else floor_delay)
    reversed_raised = _reverse(raised)

    alpha_min = floor_log(floor_delay, base)
    alpha_max = ceil_log(d_max, base) + 1
    n_exp = alpha_max - alpha_min + 1

    v_draws: list[list[int]] = [list(range(n))]
    v_unique: list[list[int]] = [list(range(n))]
    for k in range(1, q):
        count = math.ceil(config.SAMPLE_C * (n / 2.0 ** k)
                          * math.log2(max(n, 2)))
        draws = [rng.randrange(n) for _ in range(count)]
        v_draws.append(draws)
        v_unique.append(sorted(set(draws)))

    runs_fwd: list[dict[int, _Run]] = [dict() for _ in range(q)]
    runs_rev: list[dict[int, _Run]] = [dict() for _ in range(q)]
    vals_fwd: dict[int, np.ndarray] = {}
    vals_rev: dict[int, np.ndarray] = {}

    def run_one(level: int, orientation: str, source: int,
                upper_vals: dict[int, np.ndarray]
                ) -> tuple[_Run, np.ndarray, int]:
        bottom = level == q - 1
        graph_base = raised if orientation == "fwd" else reversed_raised
        work = graph_base.copy()
        shortcut_v: list[int] = []
        shortcut_i: list[int] = []
        if not bottom:
            stamp_off = 2 * (q - level - 1)
            for v in v_unique[level + 1]:
                if v == source or v not in upper_vals:
                    continue
                col = upper_vals[v][:, source]
                for idx in _strict_breakpoints(col):
                    work.add_edge(source, v, float(col[idx]),
                                  base ** (alpha_min + idx + stamp_off))
                    shortcut_v.append(v)
                    shortcut_i.append(idx)
            assert work.m <= graph_base.m + len(v_unique[level + 1]) * n_exp, \
                "shortcut graph exceeded its size bound"
        if work.m == 0:
            values = np.full((n_exp, n), INF)
            values[:, source] = 0.0
            empty = np.asarray([], dtype=np.int32)
            run = _Run(level, orientation, source, 0,
                       (empty, empty, empty, empty, empty),
                       [0] * n_exp, [], [], graph_base.m)
            return run, values, 0

        off = 0 if bottom else 2 * (q - level) - 1
        h_cap = n if bottom else 2 ** (level + 1)
        pi_sum = work.m
        h = max(1, min(h_cap, pi_sum))
        d_lo = base ** (alpha_min + off)
        d_hi = base ** (alpha_max + off)
        freq = FrequencyAssignment(tuple(1 for _ in range(work.m)))
        tbl = pi_dp_preprocess(work, freq, source, h, d_lo, d_hi, eps_run)
        qcols = [tbl.query_col(base ** (i + off))
                 for i in range(alpha_min, alpha_max + 1)]
        values = tbl.values[qcols, :].copy()
        run = _Run(level, orientation, source, tbl.k_min, tbl.records, qcols,
                   shortcut_v, shortcut_i, graph_base.m)
        return run, values, tbl.inspections

    total_insp = 0
    for level in range(q - 1, -1, -1):
        new_fwd: dict[int, np.ndarray] = {}
        new_rev: dict[int, np.ndarray] = {}
        for source in v_unique[level]:
            run, values, insp = run_one(level, "fwd", source, vals_rev)
            runs_fwd[level][source] = run
            new_fwd[source] = values
            total_insp += insp
        if level > 0:
            for source in v_unique[level]:
                run, values, insp = run_one(level, "rev", source, vals_fwd)
                runs_rev[level][source] = run
                new_rev[source] = values
                total_insp += insp
        vals_fwd, vals_rev = new_fwd, new_rev

    return AllPairsTable(g, raised, d_min, d_max, eps, eps_run, q,
                         alpha_min, alpha_max, v_draws, v_unique,
                         r0=vals_fwd, runs_fwd=runs_fwd, runs_rev=runs_rev,
                         build_inspections=total_insp)


# --- queries --------------------------------------------------------------------


def _query_exp(tbl: AllPairsTable, delay_budget: float) -> int:
    if not (tbl.d_min <= delay_budget <= tbl.d_max):
        raise ValueError(f"budget {delay_budget} outside [{tbl.d_min}, {tbl.d_max}]")
    j = ceil_log(delay_budget, 1.0 + tbl.eps_run) + 1
    j = max(tbl.alpha_min, min(tbl.alpha_max, j))
    return j - tbl.alpha_min


def all_pairs_query(tbl: AllPairsTable, s: int, t: int, delay_budget: float) -> float:
    """O(1) length estimate for (s, t) within the delay budget."""
    if not (0 <= s < tbl.graph.n and 0 <= t < tbl.graph.n):
        raise ValueError("endpoint out of range")
    if tbl.graph.n == 1:
        tbl.query_ops += 1
        return 0.0
    idx = _query_exp(tbl, delay_budget)
    tbl.query_ops += 1  # one table-cell read per query
    return float(tbl.r0[s][idx, t])


def simplify_walk(g: MultiDigraph, edge_ids: list[int], source: int) -> list[int]:
    """Drop cycles from a walk (never increases length or delay sums)."""
    seen = {source: 0}
    out: list[int] = []
    cur = source
    for eid in edge_ids:
        e = g.edges[eid]
        out.append(eid)
        cur = e.v
        if cur in seen:
            del out[seen[cur]:]
            for w in list(seen):
                if seen[w] > len(out):
                    del seen[w]
            seen[cur] = len(out)
        else:
            seen[cur] = len(out)
    return out


def all_pairs_recover_path(tbl: AllPairsTable, s: int, t: int,
                           delay_budget: float) -> list[int]:
    """Edge ids realizing the queried estimate (unfurls retained run logs)."""
    if tbl.graph.n == 1:
        if s == t == 0:
            return []
        raise ValueError("endpoint out of range")
    idx = _query_exp(tbl, delay_budget)
    if s == t:
        return []
    if not math.isfinite(float(tbl.r0[s][idx, t])):
        raise ValueError(f"no path {s} -> {t} within budget {delay_budget}")

    def unfurl(level: int, orientation: str, source: int, target: int,
               exp_idx: int) -> list[int]:
        if target == source:
            return []
        if orientation == "fwd":
            run = tbl.runs_fwd[level][source]
        else:
            run = tbl.runs_rev[level][source]
        steps = run.walk(target, exp_idx)
        if orientation == "fwd":
            steps = steps[::-1]  # backtrace order -> forward order
        out: list[int] = []
        for is_shortcut, payload in steps:
            if not is_shortcut:
                out.append(payload)
                continue
            v = run.shortcut_v[payload]
            sub_exp = run.shortcut_i[payload]
            if orientation == "fwd":
                # shortcut source->v priced from the reverse table at v
                out.extend(unfurl(level + 1, "rev", v, source, sub_exp))
            else:
                # reversed shortcut source->v is the forward segment v->source
                out.extend(unfurl(level + 1, "fwd", v, source, sub_exp))
        return out

    walk_edges = unfurl(0, "fwd", s, t, idx)
    return simplify_walk(tbl.raised, walk_edges, s)


# --- binary cache ---------------------------------------------------------------
#
# Layout (all integers little-endian):
#   bytes 0..7    magic b"RSPAPTBL"
#   bytes 8..11   format version (uint32), currently 1
#   bytes 12..19  metadata length L (uint64)
#   bytes 20..    UTF-8 JSON metadata, then the raw arrays named in
#                 metadata["arrays"], concatenated in order ("<i4" / "<f8")

_CACHE_MAGIC = b"RSPAPTBL"
_CACHE_VERSION = 1
_REC_NAMES = ("vert", "col", "predv", "prede", "predk")


def save_all_pairs_table(tbl: AllPairsTable, path: str) -> None:
    """Write a preprocessed table (queries and recovery both restorable)."""
    import json
    import struct

    arrays: list[tuple[str, str, tuple[int, ...], bytes]] = []

    def put(name: str, arr: np.ndarray, dtype: str) -> None:
        a = np.ascontiguousarray(arr).astype(dtype, copy=False)
        arrays.append((name, dtype, tuple(a.shape), a.tobytes()))

    g = tbl.graph
    put("edge_u", np.asarray([e.u for e in g.edges]), "<i4")
    put("edge_v", np.asarray([e.v for e in g.edges]), "<i4")
    put("edge_len", np.asarray([e.length for e in g.edges], dtype=np.float64), "<f8")
    put("edge_del", np.asarray([e.delay for e in g.edges], dtype=np.float64), "<f8")
    for s in sorted(tbl.r0):
        put(f"r0_{s}", tbl.r0[s], "<f8")

    def run_meta(run: _Run, tag: str) -> dict:
        for rn, arr in zip(_REC_NAMES, run.records):
            put(f"{tag}_{rn}", arr, "<i4")
        return {"level": run.level, "orientation": run.orientation,
                "source": run.source, "k_min": run.k_min, "qcols": run.qcols,
                "shortcut_v": run.shortcut_v, "shortcut_i": run.shortcut_i,
                "m_base": run.m_base, "tag": tag}

    run_metas = []
    for level, per_src in enumerate(tbl.runs_fwd):
        for s, run in sorted(per_src.items()):
            run_metas.append(run_meta(run, f"f{level}_{s}"))
    for level, per_src in enumerate(tbl.runs_rev):
        for s, run in sorted(per_src.items()):
            run_metas.append(run_meta(run, f"r{level}_{s}"))

    meta = {
        "n": g.n, "d_min": tbl.d_min, "d_max": tbl.d_max, "eps": tbl.eps,
        "eps_run": tbl.eps_run, "q": tbl.q, "alpha_min": tbl.alpha_min,
        "alpha_max": tbl.alpha_max, "v_draws": tbl.v_draws,
        "v_unique": tbl.v_unique, "r0_sources": sorted(tbl.r0),
        "runs": run_metas,
        "arrays": [(n_, d, list(sh)) for n_, d, sh, _ in arrays],
    }
    blob = json.dumps(meta).encode("utf-8")
    with open(path, "wb") as f:
        f.write(struct.pack("<8sIQ", _CACHE_MAGIC, _CACHE_VERSION, len(blob)))
        f.write(blob)
        for _, _, _, raw in arrays:
            f.write(raw)


def load_all_pairs_table(path: str) -> AllPairsTable:
    """Read a table written by ``save_all_pairs_table``."""
    import json
    import struct

    with open(path, "rb") as f:
        head = f.read(20)
        if len(head) < 20:
            raise ValueError(f"{path}: truncated cache header")
        magic, version, meta_len = struct.unpack("<8sIQ", head)
        if magic != _CACHE_MAGIC:
            raise ValueError(f"{path}: not an all-pairs cache file")
        if version != _CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        meta = json.loads(f.read(meta_len).decode("utf-8"))
        payload = f.read()

    arrays: dict[str, np.ndarray] = {}
    off = 0
    for name, dtype, shape in meta["arrays"]:
        count = 1
        for d in shape:
            count *= d
        nbytes = count * np.dtype(dtype).itemsize
        arrays[name] = np.frombuffer(payload[off:off + nbytes],
                                     dtype=dtype).reshape(shape).copy()
        off += nbytes
    if off != len(payload):
        raise ValueError(f"{path}: cache payload size mismatch")

    n = meta["n"]
    g = MultiDigraph(n)
    for u, v, le, de in zip(arrays["edge_u"], arrays["edge_v"],
                            arrays["edge_len"], arrays["edge_del"]):
        g.add_edge(int(u), int(v), float(le), float(de))
    q = meta["q"]
    if n == 1 or q == 0:
        return AllPairsTable(g, g.copy(), meta["d_min"], meta["d_max"],
                             meta["eps"], meta["eps_run"], q,
                             meta["alpha_min"], meta["alpha_max"],
                             meta["v_draws"], meta["v_unique"],
                             r0={}, runs_fwd=[], runs_rev=[])

    floor_delay = meta["eps_run"] * meta["d_min"] / n
    raised = MultiDigraph(n)
    for e in g.edges:
        raised.add_edge(e.u, e.v, e.length,
                        e.delay if e.delay > floor_delay else floor_delay)

    r0 = {int(s): arrays[f"r0_{s}"] for s in meta["r0_sources"]}
    runs_fwd: list[dict[int, _Run]] = [dict() for _ in range(q)]
    runs_rev: list[dict[int, _Run]] = [dict() for _ in range(q)]
    for rm in meta["runs"]:
        tag = rm["tag"]
        recs = tuple(arrays[f"{tag}_{rn}"] for rn in _REC_NAMES)
        run = _Run(rm["level"], rm["orientation"], rm["source"], rm["k_min"],
                   recs, list(rm["qcols"]), list(rm["shortcut_v"]),
                   list(rm["shortcut_i"]), rm["m_base"])
        dest = runs_fwd if run.orientation == "fwd" else runs_rev
        dest[run.level][run.source] = run

    return AllPairsTable(g, raised, meta["d_min"], meta["d_max"], meta["eps"],
                         meta["eps_run"], q, meta["alpha_min"],
                         meta["alpha_max"], meta["v_draws"], meta["v_unique"],
                         r0=r0, runs_fwd=runs_fwd, runs_rev=runs_rev)
