"""Predecessor operators and cooperative fixpoints over boolean vertex masks.

Functions suffixed ``_mask`` take and return numpy boolean arrays of length
``G.n`` and are what the assumption algorithms use internally. The unsuffixed
wrappers accept any vertex collection and return frozensets.

Dead ends never appear in an operator's output: a play cannot continue from
them, so they are not cooperatively winning for anything.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .game_model import GameGraph, VertexSet, to_set


# -- one-step operators -----------------------------------------------------

# Below this many edges a bincount beats the call overhead of a sparse product.
_SMALL_GRAPH_EDGES = 4096


def count_mask(G: GameGraph, U: np.ndarray) -> np.ndarray:
    """Number of successors of each vertex that lie in ``U``."""
    if G.m < _SMALL_GRAPH_EDGES:
        return np.bincount(G.edge_src, weights=U[G.indices], minlength=G.n)
    return G.adjacency @ U.view(np.int8)


def _stable(X: np.ndarray, nxt: np.ndarray) -> bool:
    # Fixpoint iterates are monotone, so equal cardinality means equal sets.
    return np.count_nonzero(X) == np.count_nonzero(nxt)


def pre_mask(G: GameGraph, U: np.ndarray) -> np.ndarray:
    return count_mask(G, U) > 0


def cpre_mask(G: GameGraph, U: np.ndarray, a: int) -> np.ndarray:
    cnt = count_mask(G, U)
    mine = G.is_p1 if a == 1 else G.is_p0
    return np.where(mine, cnt > 0, cnt == G.outdeg) & G.has_succ


def attr_mask(G: GameGraph, U: np.ndarray, a: int, rounds: list | None = None) -> np.ndarray:
    """Vertices outside ``U`` from which player ``a`` forces a visit to ``U``.

    If ``rounds`` is given, the newly added vertices of every cpre round are
    appended to it (the attractor ranks).
    """
    reached = U.copy()
    while True:
        new = cpre_mask(G, reached, a) & ~reached
        if not new.any():
            break
        if rounds is not None:
            rounds.append(new)
        reached |= new
    return reached & ~U


def tpre_mask(G: GameGraph, U: np.ndarray) -> np.ndarray:
    at = attr_mask(G, U, 0)
    return at | cpre_mask(G, at | U, 1)


def front_mask(G: GameGraph, U: np.ndarray) -> np.ndarray:
    """Player-1 vertices added by ``tpre`` beyond ``U`` and its attractor."""
    at = attr_mask(G, U, 0)
    closed = at | U
    return cpre_mask(G, closed, 1) & ~closed


def pre(G: GameGraph, U) -> VertexSet:
    return to_set(pre_mask(G, G.mask(U)))


def cpre(G: GameGraph, U, a: int) -> VertexSet:
    if a not in (0, 1):
        raise ValueError("player must be 0 or 1")
    return to_set(cpre_mask(G, G.mask(U), a))


def attr(G: GameGraph, U, a: int) -> VertexSet:
    if a not in (0, 1):
        raise ValueError("player must be 0 or 1")
    return to_set(attr_mask(G, G.mask(U), a))


def tpre(G: GameGraph, U) -> VertexSet:
    return to_set(tpre_mask(G, G.mask(U)))


def front(G: GameGraph, U) -> VertexSet:
    return to_set(front_mask(G, G.mask(U)))


# -- traces -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FixpointTrace:
    """The X^i sequence of a least fixpoint, stored as first-appearance levels.

    ``level[v] = i`` means ``v`` first appears in X^i (``0`` means never), so
    X^i is ``{v : 1 <= level[v] <= i}``. ``count`` is the index of the last
    step, which equals the result.
    """

    level: np.ndarray
    count: int
    outer_iterations: int = 1
    inner_iterations: int = 0
    tags: dict = field(default_factory=dict)

    @property
    def result_mask(self) -> np.ndarray:
        return self.level > 0

    @property
    def result(self) -> VertexSet:
        return to_set(self.result_mask)

    def step_mask(self, i: int) -> np.ndarray:
        if not 0 <= i <= self.count:
            raise IndexError(i)
        return (self.level > 0) & (self.level <= i)

    def step(self, i: int) -> VertexSet:
        return to_set(self.step_mask(i))

    @property
    def steps(self) -> tuple[VertexSet, ...]:
        return tuple(self.step(i) for i in range(self.count + 1))

    @property
    def iterations(self) -> int:
        return self.count


def mu_trace(n: int, f: Callable[[np.ndarray], np.ndarray], start: np.ndarray | None = None):
    """Iterate ``f`` from the empty set (or ``start``) until it stabilises.

    Returns ``(level, count)`` as stored by :class:`FixpointTrace`.
    """
    level = np.zeros(n, dtype=np.int64)
    X = np.zeros(n, dtype=bool)
    count = 0
    if start is not None:
        X = start.copy()
        count = 1
        level[X] = 1
    while True:
        nxt = f(X)
        new = nxt & ~X
        if not new.any():
            return level, count
        count += 1
        level[new] = count
        X = X | new


def nu_fix(init: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> tuple[np.ndarray, int]:
    Y = init.copy()
    it = 0
    while True:
        it += 1
        nxt = f(Y)
        if _stable(Y, nxt):
            return Y, it
        Y = nxt


# -- cooperative regions ----------------------------------------------------

def safety_coop_mask(G: GameGraph, U: np.ndarray) -> np.ndarray:
    U = U & G.alive
    return nu_fix(G.alive, lambda Y: U & pre_mask(G, Y))[0]


def _nu_mu(G: GameGraph, U: np.ndarray, step, fronts: list | None = None) -> FixpointTrace:
    # ``fronts``, when given, is cleared before every inner iteration so that
    # whatever ``step`` appends to it describes the final one.
    U = U & G.alive
    Y = G.alive.copy()
    outer = inner = 0
    while True:
        outer += 1
        if fronts is not None:
            fronts.clear()
        base = U & pre_mask(G, Y)
        level, count = mu_trace(G.n, lambda X: base | step(G, X))
        inner += count + 1
        nxt = level > 0
        if _stable(Y, nxt):
            tags = {"front": tuple(fronts)} if fronts is not None else {}
            return FixpointTrace(level, count, outer, inner, tags)
        Y = nxt


def _mu_nu(G: GameGraph, U: np.ndarray, step) -> FixpointTrace:
    U = U & G.alive
    level = np.zeros(G.n, dtype=np.int64)
    X = np.zeros(G.n, dtype=bool)
    count = outer = inner = 0
    while True:
        outer += 1
        stepX = step(G, X)
        nxt, it = nu_fix(G.alive, lambda Y: (U & pre_mask(G, Y)) | stepX)
        inner += it
        new = nxt & ~X
        if not new.any():
            return FixpointTrace(level, count, outer, inner)
        count += 1
        level[new] = count
        X = X | new


def buchi_mask(G: GameGraph, U: np.ndarray) -> FixpointTrace:
    if G.n <= _BITSET_VERTICES:
        return _nu_mu_bits(G, U, accelerated=False)
    return _nu_mu(G, U, pre_mask)


def tbuchi_mask(G: GameGraph, U: np.ndarray) -> FixpointTrace:
    """Büchi fixpoint with tpre; ``tags["front"][i]`` is the frontier of X^i."""
    if G.n <= _BITSET_VERTICES:
        return _nu_mu_bits(G, U, accelerated=True)
    fronts: list[np.ndarray] = []

    def step(G: GameGraph, X: np.ndarray) -> np.ndarray:
        at = attr_mask(G, X, 0)
        closed = X | at
        reach = cpre_mask(G, closed, 1)
        fronts.append(reach & ~closed)
        return at | reach

    return _nu_mu(G, U, step, fronts)


def cobuchi_mask(G: GameGraph, U: np.ndarray) -> FixpointTrace:
    return _mu_nu(G, U, pre_mask)


def tcobuchi_mask(G: GameGraph, U: np.ndarray) -> FixpointTrace:
    return _mu_nu(G, U, tpre_mask)


def safety_coop(G: GameGraph, U) -> VertexSet:
    return to_set(safety_coop_mask(G, G.mask(U)))


def buchi_coop(G: GameGraph, U) -> FixpointTrace:
    return buchi_mask(G, G.mask(U))


def tbuchi(G: GameGraph, U) -> FixpointTrace:
    return tbuchi_mask(G, G.mask(U))


def cobuchi_coop(G: GameGraph, U) -> FixpointTrace:
    return cobuchi_mask(G, G.mask(U))


def tcobuchi(G: GameGraph, U) -> FixpointTrace:
    return tcobuchi_mask(G, G.mask(U))


# Up to this many vertices the nested parity and Büchi fixpoints run on Python
# integer bitsets, which are cheaper per operation than numpy arrays on small
# games.
_BITSET_VERTICES = 24


def _to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _from_bits(x: int, n: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def _pre_bits(pred: tuple[int, ...], X: int) -> int:
    out = 0
    while X:
        low = X & -X
        out |= pred[low.bit_length() - 1]
        X ^= low
    return out


def _nu_mu_bits(G: GameGraph, U: np.ndarray, accelerated: bool) -> FixpointTrace:
    """The Büchi fixpoint of :func:`buchi_mask` or :func:`tbuchi_mask` on bitsets.

    Produces the same trace, including the ``front`` tag when ``accelerated``.
    """
    pred = G.pred_bits
    full = (1 << G.n) - 1
    alive = _to_bits(G.alive)
    p0 = _to_bits(G.is_p0)
    has = _to_bits(G.has_succ)
    target = _to_bits(U) & alive

    def pre(X: int) -> int:
        return _pre_bits(pred, X)

    def cpre(X: int, mine: int) -> int:
        # A vertex of the other player needs a successor and none outside X.
        return (mine & pre(X)) | (has & ~mine & ~pre(full & ~X))

    def step(X: int, fronts: list) -> int:
        if not accelerated:
            return pre(X)
        reached = X
        while True:
            new = cpre(reached, p0) & ~reached
            if not new:
                break
            reached |= new
        reach = cpre(reached, full & ~p0)
        fronts.append(reach & ~reached)
        return (reached & ~X) | reach

    Y = alive
    outer = inner = 0
    while True:
        outer += 1
        fronts: list[int] = []
        base = target & pre(Y)
        X = count = 0
        added = []
        while True:
            new = (base | step(X, fronts)) & ~X
            if not new:
                break
            count += 1
            added.append(new)
            X |= new
        inner += count + 1
        if X == Y:
            break
        Y = X
    level = [0] * G.n
    for i, new in enumerate(added, 1):
        while new:
            low = new & -new
            level[low.bit_length() - 1] = i
            new ^= low
    tags = {"front": tuple(_from_bits(f, G.n) for f in fronts)} if accelerated else {}
    return FixpointTrace(np.array(level, dtype=np.int64), count, outer, inner, tags)


def _nested_parity(classes, top, bottom, pre, size, same, warm: bool):
    """Evaluate the nested parity fixpoint over any set type with ``|``/``&``.

    Level ``i`` (0 innermost) is a greatest fixpoint for even ``i`` and a least
    fixpoint for odd ``i``; the body is the union of ``C_i & pre(X_i)``.
    Empty levels do not occur in the body and are dropped; the levels around
    them, now adjacent and of the same kind, collapse into one fixpoint over
    the union of their classes. With ``warm`` set, a level restarts only the
    inner levels of the opposite kind when its value changes; inner levels of
    the same kind resume from their last value, which stays on the correct
    side of the new fixpoint by monotonicity. ``size`` counts a set and
    ``same`` compares two iterates of one level.
    Returns the fixpoint and the number of body evaluations.
    """
    merged: list[list] = []  # [kind, class], innermost first
    for k, c in enumerate(classes):
        if not size(c):
            continue
        if merged and merged[-1][0] == k % 2:
            merged[-1][1] = merged[-1][1] | c
        else:
            merged.append([k % 2, c])
    if not merged:
        return bottom, 1
    kinds = [kind for kind, _ in merged]
    cls = [c for _, c in merged]
    init = [top if kind == 0 else bottom for kind in kinds]
    resets = [range(i - 1, -1, -2) for i in range(len(merged))]
    state = list(init)
    evals = 0

    def solve(i: int, outer):
        # ``outer`` is the union of C_j & pre(X_j) over the levels above i.
        nonlocal evals
        X = state[i] if warm else init[i]
        ci = cls[i]
        if i == 0:
            # Innermost level: the body is evaluated directly.
            while True:
                evals += 1
                nxt = outer | (ci & pre(X))
                if same(nxt, X):
                    break
                X = nxt
            state[0] = X
            return X
        ri = resets[i]
        while True:
            for j in ri:
                state[j] = init[j]
            nxt = solve(i - 1, outer | (ci & pre(X)))
            if same(nxt, X):
                break
            X = nxt
        state[i] = X
        return X

    return solve(len(merged) - 1, bottom), evals


def parity_coop_mask(G: GameGraph, priority=None, warm: bool = True) -> tuple[np.ndarray, int]:
    """Cooperative parity region and the number of body evaluations used.

    ``warm=False`` restarts every inner level on each outer step (the naive
    evaluation), kept for cross-checking.
    """
    prio = G.priority if priority is None else np.asarray(priority)
    alive = G.alive
    if not alive.any():
        return np.zeros(G.n, dtype=bool), 0
    d = int(prio[alive].max())
    classes = [alive & (prio == i) for i in range(d + 1)]
    if G.n <= _BITSET_VERTICES:
        # The iteration revisits the same few sets over and over.
        pre = functools.lru_cache(maxsize=None)(functools.partial(_pre_bits, G.pred_bits))
        X, evals = _nested_parity(
            [_to_bits(c) for c in classes], _to_bits(alive), 0, pre, int.bit_count, int.__eq__, warm
        )
        return _from_bits(X, G.n), evals
    return _nested_parity(
        classes, alive, np.zeros(G.n, dtype=bool),
        lambda X: pre_mask(G, X), np.count_nonzero, _stable, warm,
    )


def parity_coop(G: GameGraph, priority=None) -> VertexSet:
    return to_set(parity_coop_mask(G, priority)[0])
