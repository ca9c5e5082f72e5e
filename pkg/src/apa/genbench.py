"""Random and structured game generators plus a small timing harness.

``generate`` draws from ``random.Random(seed)`` in a fixed order: for each
vertex in id order, the owner (``random() < p1_fraction`` means Player 1),
the priority (``randint(0, d)``), the out-degree (``randint(min_out,
min(max_out, n))``) and the successors (``sample(range(n), k)``, sorted).
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from .game_model import GameGraph


@dataclass(frozen=True)
class GenSpec:
    n: int
    min_out: int = 1
    max_out: int = 3
    d: int = 4
    p1_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 1 <= self.min_out <= self.max_out:
            raise ValueError("need 1 <= min_out <= max_out")
        if self.d < 0:
            raise ValueError("d must be a natural number")
        if not 0.0 <= self.p1_fraction <= 1.0:
            raise ValueError("p1_fraction must lie in [0, 1]")


def generate(spec: GenSpec) -> GameGraph:
    rng = random.Random(spec.seed)
    owner, priority, succ = [], [], []
    for _ in range(spec.n):
        owner.append(1 if rng.random() < spec.p1_fraction else 0)
        priority.append(rng.randint(0, spec.d))
        k = rng.randint(min(spec.min_out, spec.n), min(spec.max_out, spec.n))
        succ.append(sorted(rng.sample(range(spec.n), k)))
    return GameGraph.build(owner, priority, succ)


def random_suite(count: int, max_n: int, d: int = 4, seed: int = 0, max_out: int = 3) -> list[GameGraph]:
    """``count`` games with ``1 <= n <= max_n``; game ``i`` uses seed ``seed + i``."""
    games = []
    for i in range(count):
        rng = random.Random(seed + i)
        spec = GenSpec(
            n=rng.randint(1, max_n),
            max_out=max_out,
            d=rng.randint(0, d),
            p1_fraction=rng.choice((0.0, 0.3, 0.5, 0.7, 1.0)),
            seed=rng.randrange(2**31),
        )
        games.append(generate(spec))
    return games


# -- structured families ----------------------------------------------------

def chain(n: int, d: int = 3) -> GameGraph:
    """Path ``0 -> 1 -> ... -> n-1`` where every vertex may also reset to 0
    and the last vertex has a self-loop.

    The last vertex has the largest even priority ``<= d`` and the others
    cycle through the odd priorities below it, so the only winning cycles run
    through the whole chain. Owners alternate starting with Player 0.
    """
    top = d - d % 2
    odd = list(range(1, top, 2)) or [0]
    prio = [odd[i % len(odd)] for i in range(n - 1)] + [top]
    succ = [sorted({0, min(i + 1, n - 1)}) for i in range(n)]
    return GameGraph.build([i % 2 for i in range(n)], prio, succ)


def clique(n: int, d: int = 3) -> GameGraph:
    """Complete digraph with self-loops; owners alternate, priority ``i mod (d+1)``."""
    row = list(range(n))
    return GameGraph.build([i % 2 for i in range(n)], [i % (d + 1) for i in range(n)], [row] * n)


FAMILIES = {"chain": chain, "clique": clique}


def family_game(name: str, n: int, d: int = 3, seed: int = 0) -> GameGraph:
    if name == "random":
        return generate(GenSpec(n=n, d=d, seed=seed))
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}")
    return FAMILIES[name](n, d)


# -- timing -----------------------------------------------------------------

@dataclass(frozen=True)
class BenchRow:
    game: str
    n: int
    m: int
    d: int
    variant: str
    iterations: int
    micros: int

    def csv(self) -> str:
        return f"{self.game},{self.n},{self.m},{self.d},{self.variant},{self.iterations},{self.micros}"


CSV_HEADER = "game,n,m,d,variant,iterations,micros"


def time_call(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, int((time.perf_counter() - start) * 1e6)


def loglog_slope(ns, micros) -> float:
    """Least-squares slope of ``log(time)`` against ``log(n)``."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.maximum(np.asarray(micros, dtype=float), 1.0))
    return float(np.polyfit(x, y, 1)[0])
