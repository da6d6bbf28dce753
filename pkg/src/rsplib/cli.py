"""Command-line frontend: generators, solvers, oracle runs, verification,
and kernel benchmarks, all emitting reproducible CSV.

Every run is a pure function of (input file bytes, parsed flags): randomness
flows from --seed only, CSV floats use repr round-trip precision, and wall
times are reported but never asserted anywhere.

Exit codes: 0 success, 1 verification failure, 2 usage/input error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time

from . import config
from .allpairs import (all_pairs_preprocess, all_pairs_query,
                       load_all_pairs_table, save_all_pairs_table)
from .config import ResourceCapError, apply_constant_overrides, \
    parse_constant_overrides
from .dense import DENSE_ALPHA, dense_builder, solve_dense
from .dp import (BACKEND, frequency_ones, path_cost, pi_dp_preprocess,
                 solve_dp1, solve_dag_topological)
from .gap import SolveResult, gap_solve
from .graph import MultiDigraph, swap_length_delay
from .instances import GENERATOR_KINDS, generate, load_graph, save_graph
from .oracle import exact_frontier
from .sparse import (make_sparse_builder, solve_sparse, solve_sparse_dag,
                     sparse_parameters)
from .verify import ALL_SUITES, run_suites


# --- plumbing ---------------------------------------------------------------


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def _emit(path: str | None, header: list[str], rows: list[list]) -> None:
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _parse_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(",")
    out = (float(lo), float(hi))
    if out[0] > out[1]:
        raise ValueError(f"range {text!r} has min > max")
    return out


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise ValueError(f"--{name} is required for this subcommand")


def _load_input(args) -> MultiDigraph:
    g = load_graph(args.input)
    return swap_length_delay(g) if args.swap_roles else g


# --- subcommands --------------------------------------------------------------


def cmd_gen(args) -> int:
    _require(args, "output", "n", "m")
    g = generate(args.kind, args.n, args.m, args.seed,
                 _parse_range(args.length_range),
                 _parse_range(args.delay_range))
    if args.swap_roles:
        g = swap_length_delay(g)
    comments = (f"kind={args.kind} n={args.n} m={args.m} seed={args.seed} "
                f"length-range={args.length_range} "
                f"delay-range={args.delay_range}",)
    save_graph(g, args.output, comments)
    return 0


def _solve_rows(g: MultiDigraph, res: SolveResult,
                wall: float) -> tuple[list[str], list[list]]:
    header = ["target", "length", "witness_length", "witness_delay",
              "wall_s", "gap_runs", "dp_inspections", "sweep_values"]
    rows = [[t, res.lengths[t], res.witness_lengths[t],
             res.witness_delays[t], wall, res.gap_runs, res.dp_inspections,
             res.sweep_values] for t in range(g.n)]
    return header, rows


def cmd_solve_gap_family(args, mode: str) -> int:
    _require(args, "input", "delay")
    g = _load_input(args)
    rng = random.Random(args.seed)
    dense_route = mode == "dense"
    if mode == "sparse" and g.m > g.n ** 1.5:
        print(f"note: m={g.m} exceeds n^1.5; routing to the dense solver",
              file=sys.stderr)
        dense_route = True
    if args.length is not None:
        return _gap_probe(args, g, rng, dense_route)
    solver = solve_dense if dense_route else solve_sparse
    t0 = time.perf_counter()
    res = solver(g, args.source, args.delay, args.eps, rng,
                 trials=args.trials)
    wall = time.perf_counter() - t0
    header, rows = _solve_rows(g, res, wall)
    _emit(args.output, header, rows)
    return 0


def _gap_probe(args, g: MultiDigraph, rng: random.Random,
               dense_route: bool) -> int:
    """One gap-solver run at the given (L, D): YES/NO verdicts per target.

    --eps here is the gap parameter itself (no end-to-end rescaling), and the
    input is solved as-is: the caller is responsible for lengths being
    normalized if the YES guarantee is to carry its usual meaning.
    """
    if dense_route:
        builder, alpha = dense_builder, DENSE_ALPHA
    else:
        dr, db = sparse_parameters(g.n, g.m)
        builder = make_sparse_builder(args.eps, dr, db)
        alpha = config.SPARSE_DEPTH_LOG_EXP
    t0 = time.perf_counter()
    ans = gap_solve(g, args.source, args.length, args.delay, args.eps,
                    builder, alpha, rng)
    wall = time.perf_counter() - t0
    scale = args.eps * args.length / max(g.n, 1)
    rows = []
    for t in range(g.n):
        wl = wd = config.INF
        if ans.yes[t]:
            wl, wd = path_cost(g, ans.witness_base_path(t))
        rows.append([t, "yes" if ans.yes[t] else "no", ans.values[t] * scale,
                     wl, wd, wall, ans.h,
                     0 if ans.table is None else ans.table.inspections])
    _emit(args.output, ["target", "verdict", "length", "witness_length",
                        "witness_delay", "wall_s", "h", "dp_inspections"],
          rows)
    return 0


def cmd_solve_dag(args) -> int:
    _require(args, "input", "delay")
    g = _load_input(args)
    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    if args.pi_topological:
        lengths, paths, tbl = solve_dag_topological(g, args.source,
                                                    args.delay, args.eps)
        insp = 0 if tbl is None else tbl.inspections
    else:
        res = solve_sparse_dag(g, args.source, args.delay, args.eps, rng)
        lengths, paths, insp = res.lengths, res.witness_paths, res.inspections
    wall = time.perf_counter() - t0
    rows = []
    for t in range(g.n):
        wl = wd = config.INF
        if paths[t] is not None:
            wl = sum(g.edges[e].length for e in paths[t])
            wd = sum(g.edges[e].delay for e in paths[t])
        rows.append([t, lengths[t], wl, wd, wall, insp])
    _emit(args.output, ["target", "length", "witness_length",
                        "witness_delay", "wall_s", "dp_inspections"], rows)
    return 0


def cmd_solve_dp(args) -> int:
    _require(args, "input", "delay")
    g = _load_input(args)
    t0 = time.perf_counter()
    lengths, paths, tbl = solve_dp1(g, args.source, args.delay, args.eps)
    wall = time.perf_counter() - t0
    insp = 0 if tbl is None else tbl.inspections
    rows = []
    for t in range(g.n):
        wl = wd = config.INF
        if paths[t] is not None:
            wl = sum(g.edges[e].length for e in paths[t])
            wd = sum(g.edges[e].delay for e in paths[t])
        rows.append([t, lengths[t], wl, wd, wall, insp])
    _emit(args.output, ["target", "length", "witness_length",
                        "witness_delay", "wall_s", "dp_inspections"], rows)
    return 0


def cmd_all_pairs(args) -> int:
    _require(args, "input", "delay")
    g = _load_input(args)
    rng = random.Random(args.seed)
    d_lo = args.delay_min if args.delay_min is not None else args.delay
    d_hi = args.delay_max if args.delay_max is not None else args.delay
    if not (d_lo <= args.delay <= d_hi):
        raise ValueError(f"--delay {args.delay} outside "
                         f"[{d_lo}, {d_hi}]")
    t0 = time.perf_counter()
    if args.load_cache:
        tbl = load_all_pairs_table(args.load_cache)
    else:
        tbl = all_pairs_preprocess(g, d_lo, d_hi, args.eps, rng)
    build_wall = time.perf_counter() - t0
    if args.save_cache:
        save_all_pairs_table(tbl, args.save_cache)
    rows = []
    t0 = time.perf_counter()
    for s in range(g.n):
        for t in range(g.n):
            rows.append([s, t, all_pairs_query(tbl, s, t, args.delay)])
    query_wall = time.perf_counter() - t0
    for row in rows:
        row.extend([build_wall, query_wall, tbl.build_inspections,
                    tbl.query_ops])
    _emit(args.output, ["source", "target", "length", "build_wall_s",
                        "query_wall_s", "build_inspections", "query_ops"],
          rows)
    return 0


def cmd_oracle(args) -> int:
    _require(args, "input", "delay")
    g = _load_input(args)
    t0 = time.perf_counter()
    fr = exact_frontier(g, args.source)
    wall = time.perf_counter() - t0
    rows = []
    for t in range(g.n):
        dist = fr.dist(t, args.delay)
        path = fr.path(t, args.delay)
        wd = sum(g.edges[e].delay for e in path) if path is not None \
            else config.INF
        rows.append([t, dist, wd, wall, fr.labels_created])
    _emit(args.output, ["target", "length", "witness_delay", "wall_s",
                        "labels_created"], rows)
    return 0


def cmd_verify(args) -> int:
    names = tuple(args.suites.split(",")) if args.suites \
        else tuple(sorted(ALL_SUITES))
    results = run_suites(names, args.seed, args.trials)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail} "
              f"(seed={args.seed})")
    failed = sum(1 for r in results if not r.ok)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes:
        raise ValueError("--sizes must list at least one n")
    backends = ["python"] if BACKEND == "python" else ["cython", "python"]
    rows = []
    for n in sizes:
        m = 3 * n
        g = generate("random-digraph", n, m, args.seed)
        freq = frequency_ones(g)
        total = sum(e.delay for e in g.edges) or 1.0
        budget = 0.5 * total
        h = max(1, min(n - 1, freq.pi_sum))
        for backend in backends:
            t0 = time.perf_counter()
            tbl = pi_dp_preprocess(g, freq, 0, h, budget, budget, args.eps,
                                   backend=backend)
            wall = time.perf_counter() - t0
            rows.append([n, m, backend, wall, tbl.inspections,
                         tbl.values.size])
    _emit(args.output, ["n", "m", "backend", "build_wall_s",
                        "dp_inspections", "table_cells"], rows)
    return 0


# --- argument parsing -----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, *, source: bool = True) -> None:
    p.add_argument("--input", help="extended-DIMACS graph file")
    p.add_argument("--output", help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--delay", type=float, help="delay budget D")
    p.add_argument("--length", type=float,
                   help="gap-probe mode (solve-dense/solve-sparse): run one "
                        "gap decision at this length threshold")
    if source:
        p.add_argument("--source", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--swap-roles", action="store_true",
                   help="exchange lengths and delays of the working graph "
                        "(budget the length axis instead)")
    p.add_argument("--constants", default="",
                   help="override fitted constants, e.g. c_h=4,c_t=1.5")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rsp",
        description="Bicriteria restricted-shortest-path toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", choices=GENERATOR_KINDS, default="random-digraph")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--length-range", default="0,10")
    p.add_argument("--delay-range", default="0,10")
    _add_common(p, source=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve-dense", help="dense-hierarchy bicriteria solve")
    _add_common(p)
    p.set_defaults(func=lambda a: cmd_solve_gap_family(a, "dense"))

    p = sub.add_parser("solve-sparse", help="sparse-hierarchy bicriteria solve")
    _add_common(p)
    p.set_defaults(func=lambda a: cmd_solve_gap_family(a, "sparse"))

    p = sub.add_parser("solve-dag", help="acyclic solver (topological blocks)")
    p.add_argument("--pi-topological", action="store_true",
                   help="use plain topological frequencies instead of blocks")
    _add_common(p)
    p.set_defaults(func=cmd_solve_dag)

    p = sub.add_parser("solve-dp", help="unit-frequency budget DP")
    _add_common(p)
    p.set_defaults(func=cmd_solve_dp)

    p = sub.add_parser("all-pairs", help="build/query the all-pairs structure")
    p.add_argument("--delay-min", type=float)
    p.add_argument("--delay-max", type=float)
    p.add_argument("--save-cache", help="write the binary table here")
    p.add_argument("--load-cache", help="read a previously saved table")
    _add_common(p, source=False)
    p.set_defaults(func=cmd_all_pairs)

    p = sub.add_parser("oracle", help="exact frontier reference solver")
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suites", help=f"comma list from {sorted(ALL_SUITES)}")
    _add_common(p, source=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="compare DP kernel backends")
    p.add_argument("--sizes", default="64,128")
    _add_common(p, source=False)
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.constants:
            apply_constant_overrides(parse_constant_overrides(args.constants))
        return args.func(args)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
