"""Sparse-regime decomposition: two-phase hierarchy with block hop shortcuts.

Phase 1 recursively decomposes at combined-weight bound D_i = n/2^i like the
dense hierarchy, but classifies pieces by size: small (<= delta_block) pieces
become leaves, large (>= D_i) pieces keep their stars while their interior
edges go dead, and only medium pieces recurse.  Phase 2 groups each level's
small pieces into finely chopped blocks, samples vertices per block, and adds
hop edges whose lengths come from all-pairs queries on the block subgraph and
whose delays are rounded-up grid stamps.  Frequencies: dead = never, hops /
stars / inter-piece = delta_block, intra-block = ceil(delta_block/delta_run).

Also contains the standalone acyclic solver built on topological blocks.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .allpairs import (AllPairsTable, all_pairs_preprocess, all_pairs_query,
                       all_pairs_recover_path)
from . import config
from .config import (BLOCK_AP_EXACT_CUTOFF, INF, SPARSE_DEPTH_LOG_EXP,
                     GapConstants)
from .dense import StarEdge
from .dp import (FrequencyAssignment, path_cost, pi_dp_preprocess,
                 recover_path)
from .gap import SolveResult, reduce_to_gap
from .graph import MultiDigraph, ceil_log, combined_weight_view, compute_sccs
from .ldd import compute_ldd
from .oracle import ExactRspAnswer, exact_frontier
from .workgraph import WorkGraph, shortest_combined_path

# --- structures -------------------------------------------------------------


@dataclass(frozen=True)
class HopEdge:
    """Auxiliary shortcut inside one block, stamped one grid step above."""

    u: int
    v: int
    length: float
    delay: float
    block_id: int
    threshold: float


@dataclass
class SparseNode:
    """One piece of the phase-1 tree with its size class."""

    id: int
    level: int
    parent: int
    vertices: tuple[int, ...]
    center: int
    size_class: str  # "root" | "small" | "medium" | "large"
    internal_edges: tuple[int, ...]
    children_topo: tuple[int, ...] = ()


@dataclass
class Block:
    """A finely chopped group of small pieces at one level."""

    id: int
    level: int
    parent: int
    sccs: tuple[int, ...]
    vertices: tuple[int, ...]


@dataclass
class SparseHierarchy:
    """Phase-1 tree plus phase-2 blocks and the per-edge label table."""

    n: int
    delta_run: int
    delta_block: int
    level_cap: int
    d_bounds: dict[int, float]
    nodes: list[SparseNode]
    stars: list[StarEdge]
    edge_labels: list[tuple[str, int] | None]
    blocks: list[Block] = field(default_factory=list)
    construction_work: int = 0


def sparse_parameters(n: int, m: int) -> tuple[int, int]:
    """(delta_run, delta_block) from the density exponent alpha, clamped."""
    if n <= 1:
        return 1, 1
    alpha = math.log(max(m, 2), n) - 1.0
    alpha = min(0.5, max(0.0, alpha))
    delta_run = math.ceil(n ** ((1.0 - 2.0 * alpha) / 5.0))
    delta_block = math.ceil(n ** ((3.0 - alpha) / 5.0))
    return max(1, delta_run), max(1, delta_block)


# --- phase 1 ------------------------------------------------------------------


def build_phase1(g: MultiDigraph, delta_run: int, delta_block: int,
                 rng: random.Random) -> SparseHierarchy:
    """Decompose level by level, recursing only into medium pieces."""
    if not (1 <= delta_run <= delta_block):
        raise ValueError(f"need 1 <= delta_run <= delta_block, got "
                         f"({delta_run}, {delta_block})")
    n = g.n
    level_cap = max(1, math.ceil(math.log2(max(n, 1) / delta_block)) + 1)
    hier = SparseHierarchy(n, delta_run, delta_block, level_cap, {}, [], [],
                           [None] * g.m)
    root = SparseNode(0, 0, -1, tuple(range(n)), 0, "root",
                      tuple(range(g.m)))
    hier.nodes.append(root)
    view = combined_weight_view(g)

    def build(vertices: tuple[int, ...], eids: tuple[int, ...], level: int,
              parent_id: int) -> None:
        assert level <= level_cap, "recursion exceeded the level cap"
        d_i = n / 2.0 ** level
        hier.d_bounds[level] = d_i
        hier.construction_work += len(vertices) + len(eids)
        res = compute_ldd(view, d_i, rng, list(vertices), list(eids))
        for beid in res.boundary:
            hier.edge_labels[beid] = ("back", level)
        cut = set(res.boundary)
        comp_of: dict[int, int] = {}
        for ci, comp in enumerate(res.pieces):
            for v in comp:
                comp_of[v] = ci
        internal: list[list[int]] = [[] for _ in res.pieces]
        for eid in eids:
            if eid in cut:
                continue
            e = g.edges[eid]
            if comp_of[e.u] == comp_of[e.v]:
                internal[comp_of[e.u]].append(eid)
            else:
                hier.edge_labels[eid] = ("forward", level)
        children: list[int] = []
        for ci, comp in enumerate(res.pieces):
            node_id = len(hier.nodes)
            children.append(node_id)
            if len(comp) <= delta_block:
                size_class = "small"
            elif len(comp) >= d_i:
                size_class = "large"
            else:
                size_class = "medium"
            center = comp[0]
            hier.nodes.append(SparseNode(node_id, level, parent_id, comp,
                                         center, size_class,
                                         tuple(internal[ci])))
            if len(comp) > 1:
                for v in comp:
                    if v != center:
                        hier.stars.append(StarEdge(center, v, d_i, d_i,
                                                   level, node_id))
                        hier.stars.append(StarEdge(v, center, d_i, d_i,
                                                   level, node_id))
            if size_class == "large":
                for eid in internal[ci]:
                    hier.edge_labels[eid] = ("dead", level)
            elif size_class == "medium":
                build(comp, tuple(internal[ci]), level + 1, node_id)
        hier.nodes[parent_id].children_topo = tuple(children)

    if n > 0:
        build(root.vertices, root.internal_edges, 1, 0)
    return hier


# --- phase 2 ------------------------------------------------------------------


def partition_finely_chopped(children: list[tuple[int, str, int]],
                             delta_block: int) -> list[list[int]]:
    """Group one parent's topologically ordered pieces into blocks.

    ``children`` holds (piece_id, size_class, vertex_count) in topological
    order.  Non-small pieces close the running block (no block ever spans
    one), and a block also closes rather than exceed delta_block vertices.
    """
    blocks: list[list[int]] = []
    cur: list[int] = []
    cur_n = 0
    for piece_id, size_class, size in children:
        if size_class != "small":
            if cur:
                blocks.append(cur)
                cur, cur_n = [], 0
            continue
        if cur and cur_n + size > delta_block:
            blocks.append(cur)
            cur, cur_n = [], 0
        cur.append(piece_id)
        cur_n += size
    if cur:
        blocks.append(cur)
    return blocks


@dataclass
class _BlockAp:
    """Per-block all-pairs backend: exact frontiers or the leveled structure."""

    sub: MultiDigraph
    index: dict[int, int]  # original vertex -> block-local vertex
    edge_ids: list[int]  # block-local edge -> original edge id
    frontiers: dict[int, ExactRspAnswer] | None
    table: AllPairsTable | None

    def dist(self, u: int, v: int, threshold: float) -> float:
        iu, iv = self.index[u], self.index[v]
        if self.frontiers is not None:
            return self.frontiers[iu].dist(iv, threshold)
        return all_pairs_query(self.table, iu, iv, threshold)

    def path(self, u: int, v: int, threshold: float) -> list[int]:
        iu, iv = self.index[u], self.index[v]
        if self.frontiers is not None:
            local = self.frontiers[iu].path(iv, threshold)
        else:
            local = all_pairs_recover_path(self.table, iu, iv, threshold)
        assert local is not None, "hop expander asked for an unreachable pair"
        return [self.edge_ids[le] for le in local]


def _block_ap(g: MultiDigraph, block_eids: list[int],
              vertices: tuple[int, ...], sources: list[int], d_lo: float,
              d_hi: float, eps: float, rng: random.Random,
              ap_backend: str) -> tuple[_BlockAp, int]:
    index = {v: i for i, v in enumerate(vertices)}
    sub = MultiDigraph(len(vertices))
    for eid in block_eids:
        e = g.edges[eid]
        sub.add_edge(index[e.u], index[e.v], e.length, e.delay)
    use_exact = ap_backend == "exact" or (
        ap_backend == "auto" and len(vertices) <= BLOCK_AP_EXACT_CUTOFF)
    if use_exact:
        frontiers = {index[u]: exact_frontier(sub, index[u]) for u in sources}
        work = sum(fr.labels_created for fr in frontiers.values())
        return _BlockAp(sub, index, list(block_eids), frontiers, None), work
    table = all_pairs_preprocess(sub, d_lo, d_hi, eps, rng)
    return (_BlockAp(sub, index, list(block_eids), None, table),
            table.build_inspections)


def build_phase2(hier: SparseHierarchy, g: MultiDigraph, eps: float,
                 delta: float, d_top: float, rng: random.Random,
                 ap_backend: str = "auto") -> tuple[list[HopEdge], list[_BlockAp]]:
    """Form blocks, relabel intra-block edges, and emit pruned hop edges."""
    if not (0.0 < delta <= d_top):
        raise ValueError(f"need 0 < delta <= d_top, got [{delta}, {d_top}]")
    base = 1.0 + eps
    k_lo = ceil_log(delta, base)
    k_hi = ceil_log(d_top, base)
    thresholds = [base ** k for k in range(k_lo, k_hi + 1)]
    hops: list[HopEdge] = []
    backends: list[_BlockAp] = []

    for parent in hier.nodes:
        if not parent.children_topo:
            continue
        level = parent.level + 1
        children = [(cid, hier.nodes[cid].size_class,
                     len(hier.nodes[cid].vertices))
                    for cid in parent.children_topo]
        block_of: dict[int, int] = {}
        new_blocks: list[Block] = []
        for group in partition_finely_chopped(children, hier.delta_block):
            block_id = len(hier.blocks) + len(new_blocks)
            verts: list[int] = []
            for cid in group:
                verts.extend(hier.nodes[cid].vertices)
            new_blocks.append(Block(block_id, level, parent.id, tuple(group),
                                    tuple(verts)))
            for v in verts:
                block_of[v] = block_id
        base_block = len(hier.blocks)
        hier.blocks.extend(new_blocks)

        block_eids: dict[int, list[int]] = {b.id: [] for b in new_blocks}
        for eid in parent.internal_edges:
            e = g.edges[eid]
            bu = block_of.get(e.u)
            if bu is None or block_of.get(e.v) != bu:
                continue
            label = hier.edge_labels[eid]
            assert label is None or label == ("forward", level) \
                or label == ("back", level), f"unexpected label {label}"
            hier.edge_labels[eid] = ("intra", bu)
            block_eids[bu].append(eid)

        for block in new_blocks:
            draws = math.ceil(config.SAMPLE_C * hier.delta_block
                              * math.log2(max(hier.n, 2)) / hier.delta_run)
            samples = [block.vertices[rng.randrange(len(block.vertices))]
                       for _ in range(draws)]
            sources = sorted(set(samples))
            ap, work = _block_ap(g, block_eids[block.id], block.vertices,
                                 sources, delta, thresholds[-1], eps, rng,
                                 ap_backend)
            backends.append(ap)
            hier.construction_work += work + len(sources) ** 2 * len(thresholds)
            for u in sources:
                for v in sources:
                    if u == v:
                        continue
                    best = INF
                    for thr in thresholds:
                        val = ap.dist(u, v, thr)
                        if val < best:
                            best = val
                            hops.append(HopEdge(u, v, val, thr * base,
                                                block.id, thr))
        assert base_block + len(new_blocks) == len(hier.blocks)

    for eid, label in enumerate(hier.edge_labels):
        assert label is not None, f"edge {eid} left unlabeled"
    return hops, backends


def sparse_pi(hier: SparseHierarchy, n_stars: int,
              n_hops: int) -> FrequencyAssignment:
    """Frequencies for [base edges, stars, hops] in work-graph order."""
    intra = math.ceil(hier.delta_block / hier.delta_run)
    values: list[float] = []
    for label in hier.edge_labels:
        kind = label[0]
        if kind == "dead":
            values.append(INF)
        elif kind == "intra":
            values.append(intra)
        else:  # back / forward
            values.append(hier.delta_block)
    values.extend(hier.delta_block for _ in range(n_stars + n_hops))
    return FrequencyAssignment(tuple(values))


# --- solver -------------------------------------------------------------------


def make_sparse_builder(eps_star: float, delta_run: int, delta_block: int,
                        ap_backend: str = "auto"):
    """Work-graph factory for the gap framework at the given parameters."""

    def builder(gnorm: MultiDigraph, rng: random.Random) -> WorkGraph:
        n = gnorm.n
        hier = build_phase1(gnorm, delta_run, delta_block, rng)
        slack = GapConstants.slack(n, eps_star)
        d_top = slack * n / eps_star
        delta = eps_star * d_top / max(n, 2) ** 2
        hops, backends = build_phase2(hier, gnorm, eps_star, delta, d_top,
                                      rng, ap_backend)
        combined = gnorm.copy()
        expanders = []
        for st in hier.stars:
            combined.add_edge(st.u, st.v, st.length, st.delay)
            node = hier.nodes[st.node_id]
            expanders.append(
                lambda u=st.u, v=st.v, eids=node.internal_edges:
                shortest_combined_path(gnorm, list(eids), u, v))
        ap_of_block = {block.id: ap
                       for ap, block in zip(backends, hier.blocks)}
        for hop in hops:
            combined.add_edge(hop.u, hop.v, hop.length, hop.delay)
            expanders.append(
                lambda a=ap_of_block[hop.block_id], u=hop.u, v=hop.v,
                thr=hop.threshold: a.path(u, v, thr))
        freq = sparse_pi(hier, len(hier.stars), len(hops))
        return WorkGraph(combined, gnorm.m, freq, expanders, meta=hier)

    return builder


def solve_sparse(g: MultiDigraph, s: int, D: float, eps: float,
                 rng: random.Random, trials: int | None = None,
                 early_skip: bool = True, want_paths: bool = True,
                 audit=None, ap_backend: str = "auto") -> SolveResult:
    """Bicriteria solve via the sparse hierarchy plugged into the gap sweep."""
    eps_star = GapConstants(eps, g.n).eps_star
    delta_run, delta_block = sparse_parameters(g.n, g.m)
    builder = make_sparse_builder(eps_star, delta_run, delta_block, ap_backend)
    return reduce_to_gap(g, s, D, eps, builder, SPARSE_DEPTH_LOG_EXP, rng,
                         trials=trials, early_skip=early_skip,
                         want_paths=want_paths, audit=audit)


# --- standalone acyclic solver --------------------------------------------------


@dataclass
class DagResult:
    """Per-target output of the topological-block acyclic solver."""

    source: int
    delay_budget: float
    eps: float
    delta_run: int
    delta_block: int
    h: int
    pi_inverse_sum: float
    lengths: list[float]
    witness_paths: list[list[int] | None]
    witness_lengths: list[float]
    witness_delays: list[float]
    inspections: int


def topological_blocks(g: MultiDigraph, delta_block: int) -> list[list[int]]:
    """Contiguous chunks of a topological vertex order; rejects cyclic input."""
    sccs = compute_sccs(g)
    if len(sccs.components) != g.n or any(e.u == e.v for e in g.edges):
        raise ValueError("graph has a cycle; the acyclic solver needs a DAG")
    order = [comp[0] for comp in sccs.components]
    return [order[i:i + delta_block] for i in range(0, len(order), delta_block)]


def solve_sparse_dag(g: MultiDigraph, s: int, D: float, eps: float,
                     rng: random.Random, ap_backend: str = "auto",
                     delta_block: int | None = None,
                     delta_run: int | None = None) -> DagResult:
    """(1, 1+eps)-approximate per-target lengths on a DAG.

    Internally runs at eps0 = eps/4: hop stamps spend two grid factors and
    the DP's own rounding a third, and (1+eps/4)^3 <= 1+eps for eps <= 1.
    """
    if not (0 <= s < g.n):
        raise ValueError(f"source {s} out of range")
    if not (D > 0.0) or not (0.0 < eps <= 1.0):
        raise ValueError(f"need D > 0 and eps in (0, 1], got D={D}, eps={eps}")
    n = g.n
    eps0 = eps / 4.0
    if delta_block is None:
        delta_block = max(1, math.ceil(n ** (2.0 / 3.0)))
    if delta_run is None:
        delta_run = max(1, math.ceil(math.sqrt(delta_block)))
    blocks = topological_blocks(g, delta_block)
    if n == 1:
        return DagResult(s, D, eps, delta_run, delta_block, 1, 0.0, [0.0],
                         [[]], [0.0], [0.0], 0)

    block_of = {}
    for bi, verts in enumerate(blocks):
        for v in verts:
            block_of[v] = bi

    base = 1.0 + eps0
    delta = eps0 * D / n ** 2
    k_lo = ceil_log(delta, base)
    k_hi = ceil_log(D, base)
    thresholds = [base ** k for k in range(k_lo, k_hi + 1)]

    combined = g.copy()
    expanders = []
    pi_values: list[float] = []
    intra = math.ceil(delta_block / delta_run)
    for e in g.edges:
        pi_values.append(intra if block_of[e.u] == block_of[e.v]
                         else delta_block)

    for bi, verts in enumerate(blocks):
        vset = set(verts)
        block_eids = [eid for eid, e in enumerate(g.edges)
                      if e.u in vset and e.v in vset]
        draws = math.ceil(config.SAMPLE_C * delta_block
                          * math.log2(max(n, 2)) / delta_run)
        samples = [verts[rng.randrange(len(verts))] for _ in range(draws)]
        sources = sorted(set(samples))
        ap, _work = _block_ap(g, block_eids, tuple(verts), sources, delta,
                              thresholds[-1], eps0, rng, ap_backend)
        for u in sources:
            for v in sources:
                if u == v:
                    continue
                best = INF
                for thr in thresholds:
                    val = ap.dist(u, v, thr)
                    if val < best:
                        best = val
                        combined.add_edge(u, v, val, thr * base)
                        pi_values.append(delta_block)
                        expanders.append(
                            lambda a=ap, uu=u, vv=v, t=thr: a.path(uu, vv, t))

    if combined.m == 0:
        lengths = [0.0 if t == s else INF for t in range(n)]
        paths = [[] if t == s else None for t in range(n)]
        wc = [0.0 if t == s else INF for t in range(n)]
        return DagResult(s, D, eps, delta_run, delta_block, 1, 0.0, lengths,
                         paths, list(wc), list(wc), 0)
    freq = FrequencyAssignment(tuple(pi_values))
    work = WorkGraph(combined, g.m, freq, expanders)
    pi_sum = freq.pi_sum
    h = max(1, min(pi_sum, (n - 1) * delta_block))
    d_query = base * base * D
    table = pi_dp_preprocess(combined, freq, s, h, d_query, d_query, eps0)
    col = table.query_col(d_query)

    lengths: list[float] = []
    paths: list[list[int] | None] = []
    wls: list[float] = []
    wds: list[float] = []
    for t in range(n):
        val = float(table.values[col, t])
        lengths.append(val)
        if not math.isfinite(val):
            paths.append(None)
            wls.append(INF)
            wds.append(INF)
            continue
        real = work.expand_path(recover_path(table, t, d_query))
        wl, wd = path_cost(g, real)
        paths.append(real)
        wls.append(wl)
        wds.append(wd)
    return DagResult(s, D, eps, delta_run, delta_block, h, freq.inverse_sum,
                     lengths, paths, wls, wds, table.inspections)
