"""Command-line front end.

Exit codes: 0 success (``verify``: every verdict passed), 1 runtime error or a
failed verdict, 2 usage error, 3 exact computation infeasible under the cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, verify
from .coloring import ColoringConfig, set_threads, simulate
from .exact import DEFAULT_CAP, InfeasibleError, exact_pmf
from .graph import FAMILIES, GraphError, generate, read_edge_list

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj: dict) -> str:
    return json.dumps({"schema": verify.SCHEMA, **obj}, indent=2, sort_keys=True) + "\n"


def _sizes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_gen(args) -> int:
    try:
        g = generate(args.family, args.n, b=args.b, p=args.p, seed=args.seed)
    except GraphError as exc:
        raise UsageError(str(exc))
    _emit(g.to_text(), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.m < 1 or args.c < 2:
        raise UsageError("need --m >= 1 and --c >= 2")
    if args.km is not None and args.km < 0:
        raise UsageError("--km must be non-negative")
    if args.c0 <= 0:
        raise UsageError("--c0 must be positive")
    rep = bounds.bound_report(args.m, args.c, args.km, args.c0)
    _emit(_dump(rep.to_dict()), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = read_edge_list(args.graph)
    cfg = ColoringConfig(args.c, args.seed, args.stream)
    summary = simulate(g, cfg, args.samples, args.partitions)
    _emit(summary.to_csv(), args.out)
    if args.out:
        Path(args.out + ".json").write_text(_dump({
            "seed": cfg.seed, "stream_id": cfg.stream_id, "stream_count": summary.stream_count,
            "n_samples": summary.n_samples, "graph_hash": g.digest, "c": cfg.c}))
    return EXIT_OK


def cmd_exact(args) -> int:
    g = read_edge_list(args.graph)
    d = exact_pmf(g, args.c, args.cap)
    rows = "".join(f"{y},{p:.17g}\n" for y, p in zip(d.support.tolist(), d.probs.tolist()))
    _emit("y,prob\n" + rows, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    if g.m < 1:
        raise UsageError("graph has no edges")
    method = "monte-carlo" if args.mc else "exact"
    rep = verify.verify_graph(g, args.c, method, samples=args.samples, seed=args.seed,
                              cap=args.cap, C0=args.c0, name=str(args.graph))
    _emit(rep.to_json() + "\n", args.out)
    return EXIT_OK if rep.passed else EXIT_RUNTIME


def cmd_sweep(args) -> int:
    try:
        rule = verify.parse_c_rule(args.c_rule)
    except ValueError as exc:
        raise UsageError(str(exc))
    method = "monte-carlo" if args.method == "mc" else "exact"
    try:
        rows = verify.sweep(args.family, args.sizes, rule, method, samples=args.samples,
                            seed=args.seed, cap=args.cap, C0=args.c0)
    except GraphError as exc:
        raise UsageError(str(exc))
    _emit(verify.rows_to_csv(rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mono-clt", allow_abbrev=False,
                                 description="Monochromatic edge counts: bounds, exact laws, simulation.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph=True, seed=False, samples=False):
        if graph:
            p.add_argument("graph", help="edge-list file")
            p.add_argument("--c", type=int, required=True, help="number of colors")
        if seed:
            p.add_argument("--seed", type=int, default=None, required=True, help="64-bit RNG seed")
        if samples:
            p.add_argument("--samples", type=int, default=10**6, help="Monte Carlo sample count")
            p.add_argument("--threads", type=int, default=None, help="cap on worker threads")
        p.add_argument("-o", "--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("gen", allow_abbrev=False, help="write a generated graph as an edge list")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True,
                   help="vertices (matching: edges; complete_bipartite: first side)")
    p.add_argument("--b", type=int, default=None, help="second side for complete_bipartite")
    p.add_argument("--p", type=float, default=None, help="edge probability for erdos_renyi")
    p.add_argument("--seed", type=int, default=None, help="seed (required for erdos_renyi)")
    common(p, graph=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bound", allow_abbrev=False, help="evaluate the closed-form bounds")
    p.add_argument("--m", type=int, required=True, help="edge count")
    p.add_argument("--c", type=int, required=True, help="number of colors")
    p.add_argument("--km", type=int, default=None, help="sum of per-edge min degrees")
    p.add_argument("--c0", type=float, default=1.0, help="multiplier for the K_m rate")
    common(p, graph=False)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("simulate", allow_abbrev=False, help="Monte Carlo histogram of Y (CSV y,count)")
    common(p, seed=True, samples=True)
    p.add_argument("--stream", type=int, default=0, help="stream id")
    p.add_argument("--partitions", type=int, default=1, help="index-range partitions (output invariant)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exact", allow_abbrev=False, help="exact pmf of Y (CSV y,prob)")
    common(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max enumerated states per component")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", allow_abbrev=False, help="measured distances vs bounds (JSON report)")
    common(p, samples=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact oracle (default)")
    mode.add_argument("--mc", action="store_true", help="Monte Carlo")
    p.add_argument("--seed", type=int, default=0, help="seed for --mc")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--c0", type=float, default=1.0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", allow_abbrev=False, help="verification rows over a size schedule (CSV)")
    p.add_argument("--family", choices=FAMILIES[:-1], required=True)
    p.add_argument("--sizes", type=_sizes, required=True, help="comma-separated sizes")
    p.add_argument("--c-rule", default="sqrt", help="sqrt | const:K | mul:K")
    p.add_argument("--method", choices=("exact", "mc"), default="mc")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--c0", type=float, default=1.0)
    common(p, graph=False, samples=True)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is not None:
        if args.threads < 1:
            parser.error("--threads must be >= 1")
        set_threads(args.threads)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except InfeasibleError as exc:
        print(f"mono-clt: infeasible exact computation: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"mono-clt: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
