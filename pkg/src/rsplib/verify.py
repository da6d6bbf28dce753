"""Replayable property suites: decomposition certificates, order structure,
fine chopping, and oracle equivalence, each returning machine-readable results.

These are the deep invariants the solvers rely on; the CLI ``verify``
subcommand runs them on freshly generated corpora and reports one PASS/FAIL
line per check, exiting nonzero if anything fails.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .config import INF, lnn
from .dense import build_dense_hierarchy
from .dp import solve_dp1
from .graph import MultiDigraph, combined_weight_view
from .instances import generate
from .ldd import compute_ldd, estimate_hitting_rate, verify_bounded_diameter
from .oracle import exact_frontier
from .sparse import build_phase2, build_phase1, sparse_parameters, sparse_pi
from .workgraph import shortest_combined_path


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _instances(seed: int, count: int, kinds: tuple[str, ...],
               n_range: tuple[int, int], density: float):
    rng = random.Random(seed)
    for i in range(count):
        kind = kinds[i % len(kinds)]
        n = rng.randint(*n_range)
        m = max(0, int(density * n))
        if kind == "strongly-connected":
            m = max(m, n)
        if n == 1:
            m = 0
        yield i, generate(kind, n, m, rng.randrange(2 ** 32))


# --- low-diameter decomposition ---------------------------------------------


def check_ldd_diameter(seed: int = 0, runs: int = 50) -> CheckResult:
    """Every decomposition's pieces stay within the diameter bound, exactly."""
    rng = random.Random(seed)
    kinds = ("strongly-connected", "random-digraph", "grid-like")
    for i, g in _instances(seed, runs, kinds, (2, 28), 2.5):
        view = combined_weight_view(g)
        total = sum(view.weights) or 1.0
        bound = rng.uniform(0.05, 0.6) * total
        res = compute_ldd(view, bound, rng)
        if not verify_bounded_diameter(view, res.boundary, bound):
            return CheckResult("ldd-diameter", False, f"violated at run {i}")
    return CheckResult("ldd-diameter", True, f"{runs} decompositions")


def check_ldd_hitting(seed: int = 0, trials: int = 200,
                      rate_c: float = 2.0) -> CheckResult:
    """Per-edge cut frequency <= rate_c * (w(e)/D) * ln^3 n + 0.02."""
    rng = random.Random(seed)
    for i, g in _instances(seed + 17, 6, ("strongly-connected",), (6, 16), 3.0):
        view = combined_weight_view(g)
        total = sum(view.weights) or 1.0
        bound = 0.3 * total
        rates = estimate_hitting_rate(view, bound, trials, rng)
        for eid, rate in enumerate(rates):
            cap = rate_c * (view.weights[eid] / bound) * lnn(g.n) ** 3 + 0.02
            if rate > cap:
                return CheckResult(
                    "ldd-hitting", False,
                    f"edge {eid} of run {i}: rate {rate:.3f} > cap {cap:.3f}")
    return CheckResult("ldd-hitting", True, f"{trials} trials x 6 instances")


def check_ldd_counterexample(seed: int = 0) -> CheckResult:
    """An empty cut on a heavy cycle must be rejected by the verifier."""
    g = MultiDigraph(4)
    for i in range(4):
        g.add_edge(i, (i + 1) % 4, 5.0, 5.0)
    view = combined_weight_view(g)
    if verify_bounded_diameter(view, (), 1.0):
        return CheckResult("ldd-counterexample", False,
                           "empty cut accepted on a heavy cycle")
    return CheckResult("ldd-counterexample", True, "bad decomposition rejected")


# --- dense hierarchy order ----------------------------------------------------


def replay_dense_order(g: MultiDigraph, rng: random.Random) -> str | None:
    """Recheck every structural invariant of one build; None when clean."""
    hier, aux = build_dense_hierarchy(g, rng)
    n = g.n
    if sorted(hier.tau) != list(range(1, n + 1)):
        return "tau is not a bijection onto 1..n"
    children: dict[int, list[int]] = {}
    for node in hier.nodes[1:]:
        children.setdefault(node.parent, []).append(node.id)
    for node in hier.nodes:
        lo, hi = node.interval
        image = sorted(hier.tau[v] for v in node.vertices)
        if image != list(range(lo, hi + 1)):
            return f"node {node.id}: tau image is not its interval"
        kids = children.get(node.id, [])
        if kids:
            spans = [hier.nodes[k].interval for k in kids]
            if sorted(x for lo2, hi2 in spans
                      for x in range(lo2, hi2 + 1)) != list(range(lo, hi + 1)):
                return f"node {node.id}: child intervals do not tile the parent"
            if any(spans[j][0] >= spans[j + 1][0]
                   for j in range(len(spans) - 1)):
                return f"node {node.id}: children out of interval order"
    for eid, (kind, _level) in enumerate(hier.edge_labels):
        e = g.edges[eid]
        if kind == "forward" and hier.tau[e.u] >= hier.tau[e.v]:
            return f"forward edge {eid} not tau-ascending"
    for level in range(1, hier.levels + 1):
        d_i = hier.d_bounds[level - 1]
        large = sum(1 for nd in hier.nodes
                    if nd.level == level and nd.large)
        if large > n / d_i + 1e-9:
            return f"level {level}: {large} large pieces exceeds n/D_i"
    for st in aux.stars:
        node = hier.nodes[st.node_id]
        path = shortest_combined_path(g, list(node.internal_edges), st.u, st.v)
        cost = sum(g.edges[eid].length + g.edges[eid].delay for eid in path)
        if cost > 2.0 * st.length * (1.0 + 1e-9):
            return f"star ({st.u},{st.v}) has no cheap witness inside its piece"
    return None


def check_dense_order(seed: int = 0, runs: int = 25) -> CheckResult:
    rng = random.Random(seed)
    kinds = ("random-digraph", "strongly-connected", "random-dag")
    for i, g in _instances(seed + 31, runs, kinds, (2, 24), 2.0):
        problem = replay_dense_order(g, rng)
        if problem is not None:
            return CheckResult("dense-order", False, f"run {i}: {problem}")
    return CheckResult("dense-order", True, f"{runs} builds replayed")


# --- sparse fine chopping -------------------------------------------------------


def replay_fine_chopping(g: MultiDigraph, rng: random.Random) -> str | None:
    """Build both phases and recheck blocks, labels, and the pi table."""
    dr, db = sparse_parameters(g.n, g.m)
    hier = build_phase1(g, dr, db, rng)
    d_top = float(max(g.n, 2) ** 2)
    eps = 0.25
    hops, _backends = build_phase2(hier, g, eps, eps * d_top / g.n ** 2,
                                   d_top, rng)
    blocked: set[int] = set()
    for b in hier.blocks:
        if len(b.vertices) > db:
            return f"block {b.id} has {len(b.vertices)} > {db} vertices"
        order = hier.nodes[b.parent].children_topo
        pos = sorted(order.index(c) for c in b.sccs)
        for p in range(pos[0], pos[-1] + 1):
            node = hier.nodes[order[p]]
            if node.size_class != "small":
                return (f"block {b.id} spans non-small piece {node.id} "
                        f"({node.size_class})")
        blocked.update(b.sccs)
    for node in hier.nodes[1:]:
        if node.size_class == "small" and node.id not in blocked:
            return f"small piece {node.id} missing from every block"
    for eid, label in enumerate(hier.edge_labels):
        if label is None:
            return f"edge {eid} unlabeled after phase 2"
    freq = sparse_pi(hier, len(hier.stars), len(hops))
    intra = math.ceil(db / dr)
    for eid, label in enumerate(hier.edge_labels):
        expect = {"dead": INF, "intra": intra}.get(label[0], db)
        if freq.values[eid] != expect:
            return f"edge {eid}: pi {freq.values[eid]} != expected {expect}"
    if any(freq.values[g.m + j] != db
           for j in range(len(hier.stars) + len(hops))):
        return "auxiliary edge with frequency != delta_block"
    return None


def check_fine_chopping(seed: int = 0, runs: int = 25) -> CheckResult:
    rng = random.Random(seed)
    kinds = ("random-digraph", "strongly-connected", "grid-like")
    for i, g in _instances(seed + 47, runs, kinds, (2, 40), 2.0):
        problem = replay_fine_chopping(g, rng)
        if problem is not None:
            return CheckResult("fine-chopping", False, f"run {i}: {problem}")
    return CheckResult("fine-chopping", True, f"{runs} builds replayed")


# --- oracle equivalence ----------------------------------------------------------


def check_oracle_equivalence(seed: int = 0, runs: int = 40) -> CheckResult:
    """Unit-frequency DP values sandwich the oracle on tiny instances."""
    rng = random.Random(seed)
    eps = 0.25
    for i, g in _instances(seed + 93, runs, ("random-digraph",), (2, 8), 2.0):
        s = rng.randrange(g.n)
        total = sum(e.delay for e in g.edges) or 1.0
        budget = rng.uniform(0.1, 1.1) * total
        fr = exact_frontier(g, s)
        lengths, paths, _tbl = solve_dp1(g, s, budget, eps)
        for t in range(g.n):
            hi = fr.dist(t, budget)
            lo = fr.dist(t, (1.0 + eps) * budget)
            if lengths[t] > hi + 1e-9 or (math.isfinite(lengths[t])
                                          and lengths[t] < lo - 1e-9):
                return CheckResult(
                    "oracle-equivalence", False,
                    f"run {i} target {t}: {lengths[t]} outside "
                    f"[{lo}, {hi}]")
            if paths[t] is not None:
                delay = sum(g.edges[e].delay for e in paths[t])
                if delay > (1.0 + eps) * budget + 1e-9:
                    return CheckResult("oracle-equivalence", False,
                                       f"run {i} target {t}: witness delay")
    return CheckResult("oracle-equivalence", True, f"{runs} instances")


ALL_SUITES = {
    "ldd": (check_ldd_diameter, check_ldd_hitting, check_ldd_counterexample),
    "dense": (check_dense_order,),
    "sparse": (check_fine_chopping,),
    "oracle": (check_oracle_equivalence,),
}


def run_suites(names: tuple[str, ...], seed: int = 0,
               trials: int | None = None) -> list[CheckResult]:
    results: list[CheckResult] = []
    for name in names:
        if name not in ALL_SUITES:
            raise ValueError(f"unknown suite {name!r}; "
                             f"choose from {sorted(ALL_SUITES)}")
        for check in ALL_SUITES[name]:
            if check is check_ldd_hitting and trials is not None:
                results.append(check(seed, trials=max(1, trials)))
            else:
                results.append(check(seed))
    return results
