"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 parse error, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import oracle
from .apa import VARIANTS, buchi_priorities, cobuchi_priorities, compute_apa, parity_apa
from .game_model import GameGraph, GameParseError, parse_pgsolver, serialize_pgsolver
from .genbench import CSV_HEADER, BenchRow, GenSpec, family_game, generate, time_call
from .templates import Assumption, Bounds, render_ltl

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 64
OBJECTIVES = ("parity", "buchi", "cobuchi", "safety")
CHECKS = ("regions", "permissive", "implementable", "sufficient")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def env_bounds() -> Bounds:
    b = Bounds()
    try:
        if "APA_ORACLE_MAX_VERTICES" in os.environ:
            b.max_vertices = int(os.environ["APA_ORACLE_MAX_VERTICES"])
        if "APA_ORACLE_MAX_EDGES" in os.environ:
            b.max_edges = int(os.environ["APA_ORACLE_MAX_EDGES"])
    except ValueError as exc:
        raise UsageError(f"bad oracle bound in environment: {exc}") from None
    return b


def load_game(path: Path) -> GameGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_pgsolver(text)


def resolve_target(G: GameGraph, objective: str, target: str | None) -> frozenset | None:
    if objective == "parity":
        if target is not None:
            raise UsageError("--target is only meaningful for buchi, cobuchi and safety")
        return None
    if target is None:
        raise UsageError(f"objective {objective} needs --target")
    tokens = [t for t in target.replace(",", " ").split() if t]
    try:
        return frozenset(G.vertex_id(t) for t in tokens)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_assumption(path: str, G: GameGraph) -> Assumption:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise GameParseError(f"assumption file is not JSON: {exc}") from None
    try:
        a = Assumption.from_json(data)
        a.validate(G)
    except (ValueError, KeyError, TypeError) as exc:
        raise GameParseError(f"invalid assumption: {exc}") from None
    return a


def _names(G: GameGraph, vs) -> str:
    return " ".join(G.label(v) for v in sorted(vs))


def _edges(G: GameGraph, es) -> str:
    return " ".join(f"({G.label(u)},{G.label(v)})" for u, v in sorted(es))


def format_text(G: GameGraph, region, a: Assumption) -> str:
    lines = [f"region: {_names(G, region)}", f"unsafe: {_edges(G, a.unsafe)}", f"colive: {_edges(G, a.colive)}"]
    for c in a.cond_live:
        groups = ", ".join("{" + _edges(G, h) + "}" for h in c.groups)
        lines.append(f"live: if {{{_names(G, c.condition)}}} then [{groups}]")
    return "\n".join(line.rstrip() for line in lines)


def _objective(kind: str, target) -> oracle.Objective:
    return oracle.Objective(kind, target or frozenset())


# -- verbs ------------------------------------------------------------------

def cmd_solve(args) -> int:
    G = load_game(args.game)
    target = resolve_target(G, args.objective, args.target)
    results = {v: compute_apa(G, args.objective, target, v) for v in VARIANTS}
    region = results["standard"].region
    iterations = {v: r.iterations for v, r in results.items()}
    if args.format == "json":
        print(json.dumps({"objective": args.objective, "region": sorted(region), "iterations": iterations}))
    else:
        print(f"region: {_names(G, region)}".rstrip())
        print("iterations: " + " ".join(f"{v}={n}" for v, n in iterations.items()))
    return EXIT_OK


def _via_parity(G: GameGraph, objective: str, target, variant: str):
    prio = buchi_priorities(G, target) if objective == "buchi" else cobuchi_priorities(G, target)
    return parity_apa(G, prio, variant)


def cmd_assume(args) -> int:
    G = load_game(args.game)
    target = resolve_target(G, args.objective, args.target)
    if args.via_parity and args.objective not in ("buchi", "cobuchi"):
        raise UsageError("--via-parity applies to buchi and cobuchi objectives")
    if args.via_parity:
        result = _via_parity(G, args.objective, target, args.variant)
    else:
        result = compute_apa(G, args.objective, target, args.variant)
    status = EXIT_OK
    if args.cross_check:
        status = _cross_check(G, args.objective, target, args.variant, env_bounds())
    a = result.assumption
    if args.format == "json":
        print(json.dumps(a.to_json()))
    elif args.format == "ltl":
        print(render_ltl(a, G))
    else:
        print(format_text(G, result.region, a))
    return status


def _cross_check(G: GameGraph, objective: str, target, variant: str, bounds: Bounds) -> int:
    """Compare the native and parity-encoded pipelines."""
    if objective not in ("buchi", "cobuchi"):
        raise UsageError("--cross-check applies to buchi and cobuchi objectives")
    native = compute_apa(G, objective, target, variant)
    encoded = _via_parity(G, objective, target, variant)
    if native.region != encoded.region:
        print(f"cross-check: FAIL regions differ ({sorted(native.region)} vs {sorted(encoded.region)})", file=sys.stderr)
        return EXIT_FAIL
    obj = _objective(objective, target)
    if G.alive.sum() <= bounds.max_vertices:
        for label, r in (("native", native), ("parity", encoded)):
            verdict = oracle.check_permissive(G, obj, r.assumption, bounds)
            if not verdict:
                print(f"cross-check: FAIL {label} assumption not permissive", file=sys.stderr)
                return EXIT_FAIL
    print("cross-check: PASS", file=sys.stderr)
    return EXIT_OK


def _run_check(name: str, G: GameGraph, obj, result, a: Assumption, bounds: Bounds, target) -> oracle.Verdict | None:
    """One oracle check; ``None`` when the game exceeds the oracle bounds."""
    try:
        if name == "regions":
            brute = oracle.coop_region(G, obj)
            if brute != result.region:
                return oracle.Verdict(False, f"fixpoint {sorted(result.region)} != brute force {sorted(brute)}")
            return oracle.Verdict(True)
        if name == "permissive":
            return oracle.check_permissive(G, obj, a, bounds)
        if name == "implementable":
            sep = oracle.check_separation(a)
            return sep if not sep else oracle.check_implementable_structural(G, a)
        if obj.kind == "safety":
            verdict = oracle.safety_sure_after_removal(G, obj.target, a)
            if not verdict:
                return verdict
        strategy = oracle.build_proof_strategy(G, obj.kind, result, result.region, target)
        return oracle.check_sufficient(G, obj, a, strategy, result.region)
    except ValueError as exc:
        if "exceed" in str(exc) or "more than" in str(exc):
            return None
        raise


def cmd_check(args) -> int:
    G = load_game(args.game)
    target = resolve_target(G, args.objective, args.target)
    bounds = env_bounds()
    if args.max_vertices is not None:
        bounds.max_vertices = args.max_vertices
    if args.max_edges is not None:
        bounds.max_edges = args.max_edges
    checks = args.checks.split(",") if args.checks else list(CHECKS)
    for c in checks:
        if c not in CHECKS:
            raise UsageError(f"unknown check {c!r}; choose from {','.join(CHECKS)}")
    result = compute_apa(G, args.objective, target, args.variant)
    a = load_assumption(args.assumption_file, G) if args.assumption_file else result.assumption
    obj = _objective(args.objective, target)
    status = EXIT_OK
    for name in checks:
        verdict = _run_check(name, G, obj, result, a, bounds, target)
        if verdict is None:
            print(f"{name}: SKIP (game exceeds oracle bounds)")
            status = EXIT_FAIL
        elif verdict:
            print(f"{name}: PASS")
        else:
            print(f"{name}: FAIL {verdict.message}")
            if verdict.counterexample is not None:
                print(f"  counterexample: {verdict.counterexample.render(G)}")
            status = EXIT_FAIL
    return status


def _bench_one(job) -> list[BenchRow]:
    label, G, objective, target, variants = job
    d = int(G.priority[G.alive].max()) if G.alive.any() else 0
    if objective != "parity" and target is None:
        target = frozenset(v for v in G.vertices() if G.priority[v] % 2 == 0)
    rows = []
    for v in variants:
        r, us = time_call(compute_apa, G, objective, target, v)
        rows.append(BenchRow(label, int(G.alive.sum()), G.m, d, v, r.iterations, us))
    return rows


def cmd_bench(args) -> int:
    variants = args.variants.split(",")
    for v in variants:
        if v not in VARIANTS:
            raise UsageError(f"unknown variant {v!r}")
    jobs = []
    for path in args.games:
        G = load_game(Path(path))
        target = resolve_target(G, args.objective, args.target) if args.target is not None else None
        jobs.append((Path(path).name, G, args.objective, target, variants))
    if args.family:
        for n in _sizes(args.sizes):
            G = family_game(args.family, n, args.d, args.seed)
            jobs.append((f"{args.family}-{n}", G, args.objective, None, variants))
    if not jobs:
        raise UsageError("bench needs game files or --family")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            batches = list(pool.map(_bench_one, jobs))
    else:
        batches = [_bench_one(j) for j in jobs]
    print(CSV_HEADER)
    for batch in batches:
        for row in batch:
            print(row.csv())
    return EXIT_OK


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise UsageError(f"bad --sizes {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise UsageError("--sizes must be positive integers")
    return sizes


def cmd_bench_gen(args) -> int:
    try:
        if args.family:
            G = family_game(args.family, args.n, args.d, args.seed)
        else:
            G = generate(GenSpec(args.n, args.min_out, args.max_out, args.d, args.p1_fraction, args.seed))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = serialize_pgsolver(G)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_render_ltl(args) -> int:
    G = load_game(args.game)
    if args.assumption_file:
        a = load_assumption(args.assumption_file, G)
    else:
        target = resolve_target(G, args.objective, args.target)
        a = compute_apa(G, args.objective, target, args.variant).assumption
    print(render_ltl(a, G))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _game_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("game", type=Path, help="game in pgsolver format")
    p.add_argument("--objective", choices=OBJECTIVES, default="parity")
    p.add_argument("--target", help="target vertices (ids or names, comma separated; '' for none)")
    p.add_argument("--variant", choices=VARIANTS, default="standard")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apa", description="Environment assumptions for omega-regular games.")
    sub = parser.add_subparsers(
        dest="verb", required=True, parser_class=_Parser,
        metavar="{solve,assume,check,bench,bench gen,render-ltl}",
    )

    p = sub.add_parser("solve", help="print the cooperative region and iteration counts")
    _game_options(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("assume", help="compute the assumption")
    _game_options(p)
    p.add_argument("--format", choices=("text", "json", "ltl"), default="text")
    p.add_argument("--via-parity", action="store_true", help="run buchi/cobuchi through the parity algorithm")
    p.add_argument("--cross-check", action="store_true", help="compare the native and parity pipelines")
    p.set_defaults(func=cmd_assume)

    p = sub.add_parser("check", help="verify an assumption with the brute-force oracles")
    _game_options(p)
    p.add_argument("--assumption-file", help="JSON assumption to check instead of the computed one")
    p.add_argument("--checks", help=f"comma separated subset of {','.join(CHECKS)}")
    p.add_argument("--max-vertices", type=int)
    p.add_argument("--max-edges", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="time the algorithms; 'bench gen' writes a game")
    p.add_argument("games", nargs="*", help="game files")
    p.add_argument("--family", choices=("chain", "clique", "random"))
    p.add_argument("--sizes", default="10,100,1000")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objective", choices=OBJECTIVES, default="parity")
    p.add_argument("--target")
    p.add_argument("--variants", default=",".join(VARIANTS))
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bench-gen", help=argparse.SUPPRESS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min-out", type=int, default=1)
    p.add_argument("--max-out", type=int, default=3)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--p1-fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=("chain", "clique"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench_gen)

    p = sub.add_parser("render-ltl", help="print an assumption as an LTL formula")
    _game_options(p)
    p.add_argument("--assumption-file")
    p.set_defaults(func=cmd_render_ltl)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:2] == ["bench", "gen"]:
        argv = ["bench-gen"] + argv[2:]
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GameParseError as exc:
        print(f"apa: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"apa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
