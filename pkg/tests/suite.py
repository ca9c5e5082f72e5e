"""Seeded random games and cached algorithm outputs shared by the test modules."""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from apa.apa import VARIANTS, ApaResult, compute_apa
from apa.game_model import GameGraph, parse_pgsolver
from apa.genbench import random_suite
from apa.oracle import Objective

GAMES_DIR = Path(__file__).resolve().parent.parent / "games"
KINDS = ("parity", "buchi", "cobuchi", "safety")

SUITE_SIZE = 1000
SUITE_MAX_N = 8
SUITE_SEED = 1


def load(name: str) -> GameGraph:
    return parse_pgsolver((GAMES_DIR / f"{name}.gm").read_text())


def even_target(G: GameGraph) -> frozenset:
    """Target set used for the non-parity objectives: even-priority vertices."""
    return frozenset(v for v in G.vertices() if G.priority[v] % 2 == 0)


def objective_for(G: GameGraph, kind: str) -> Objective:
    return Objective(kind, even_target(G) if kind != "parity" else ())


@lru_cache(maxsize=None)
def games() -> tuple[GameGraph, ...]:
    return tuple(random_suite(SUITE_SIZE, SUITE_MAX_N, d=4, seed=SUITE_SEED))


@lru_cache(maxsize=None)
def result(i: int, kind: str, variant: str) -> ApaResult:
    G = games()[i]
    target = None if kind == "parity" else even_target(G)
    return compute_apa(G, kind, target, variant)


def cases(kinds=KINDS, variants=VARIANTS):
    """``(index, game, objective, variant, result)`` over the whole suite."""
    for i, G in enumerate(games()):
        for kind in kinds:
            obj = objective_for(G, kind)
            for variant in variants:
                yield i, G, obj, variant, result(i, kind, variant)


@lru_cache(maxsize=None)
def verdicts(i: int, kind: str, variant: str) -> dict:
    """Oracle verdicts for one suite case: permissive, implementable, sufficient."""
    from apa import oracle

    G = games()[i]
    obj = objective_for(G, kind)
    r = result(i, kind, variant)
    a = r.assumption
    out = {
        "permissive": oracle.check_permissive(G, obj, a),
        "implementable": oracle.check_implementable_structural(G, a),
        "separated": oracle.check_separation(a),
    }
    if kind == "safety":
        out["sufficient"] = oracle.safety_sure_after_removal(G, obj.target, a)
    else:
        target = None if kind == "parity" else obj.target
        strategy = oracle.build_proof_strategy(G, kind, r, r.region, target)
        out["sufficient"] = oracle.check_sufficient(G, obj, a, strategy, r.region)
    return out
