"""Adequately permissive assumptions for safety, Büchi, co-Büchi and parity games.

Every algorithm returns the cooperative region ``Z*`` of its objective
together with an assumption on Player 1 consisting of

* unsafe edges: Player-1 edges leaving ``Z*``;
* co-live edges: edges that may be taken only finitely often;
* conditional live groups: if the condition is visited infinitely often, each
  group whose sources are visited infinitely often must be taken infinitely
  often.

Variants: ``standard`` reads the assumption off the pre-based fixpoint layers
(for Büchi the tpre frontiers are always used, since pre-based extraction is
not permissive), ``accelerated`` uses tpre layers, and ``linear`` runs the
worklist algorithms that touch every edge a constant number of times.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .fixpoint import (
    FixpointTrace,
    attr_mask,
    buchi_mask,
    cobuchi_mask,
    cpre_mask,
    front_mask,
    mu_trace,
    parity_coop_mask,
    pre_mask,
    safety_coop_mask,
    tbuchi_mask,
    tcobuchi_mask,
)
from .game_model import EdgeSet, GameGraph, P0, P1, VertexSet, to_set
from .templates import Assumption, ConditionalLiveGroup, sources

VARIANTS = ("standard", "accelerated", "linear")


@dataclass(frozen=True, eq=False)
class ParityLevel:
    """One round of the parity recursion, kept for strategy construction.

    ``region`` is the subgame the round works on, ``priority`` its (relabelled)
    priorities and ``d`` its top priority. For odd ``d``, ``lower`` is the
    region winning without ``d`` and ``trace`` the co-Büchi layering towards
    it. For even ``d``, ``top`` is the region visiting ``d`` infinitely often
    and ``buchi`` maps each odd ``i`` present there to the layering towards
    the even priorities above ``i``.
    """

    region: np.ndarray
    priority: np.ndarray
    d: int
    lower: np.ndarray
    top: np.ndarray | None = None
    trace: FixpointTrace | None = None
    buchi: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ApaResult:
    region: VertexSet
    assumption: Assumption
    variant: str
    objective: str = ""
    trace: FixpointTrace | None = None
    levels: tuple[ParityLevel, ...] = ()
    iterations: int = 0


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def edges_between(G: GameGraph, src: np.ndarray, dst: np.ndarray) -> EdgeSet:
    keep = src[G.edge_src] & dst[G.indices]
    return frozenset(zip(G.edge_src[keep].tolist(), G.indices[keep].tolist()))


def _unsafe_mask(G: GameGraph, W: np.ndarray) -> EdgeSet:
    return edges_between(G, W & G.is_p1, ~W)


def unsafe_a(G: GameGraph, W) -> EdgeSet:
    """Player-1 edges leaving ``W``."""
    return _unsafe_mask(G, G.mask(W))


# -- safety -----------------------------------------------------------------

def safety_apa(G: GameGraph, U) -> ApaResult:
    Z = safety_coop_mask(G, G.mask(U))
    level = Z.astype(np.int64)
    trace = FixpointTrace(level, 1 if Z.any() else 0)
    return ApaResult(to_set(Z), Assumption(unsafe=_unsafe_mask(G, Z)), "standard", "safety", trace)


# -- Büchi ------------------------------------------------------------------

def _frontier_groups(G: GameGraph, trace: FixpointTrace) -> list[EdgeSet]:
    """Live groups from the frontiers of consecutive tpre layers."""
    groups = []
    fronts = trace.tags.get("front")
    for i in range(1, trace.count):
        fr = fronts[i] if fronts is not None else front_mask(G, trace.step_mask(i))
        H = edges_between(G, fr, trace.step_mask(i + 1) & ~fr)
        if H:
            groups.append(H)
    return groups


def _live_a_linear(G: GameGraph, U: np.ndarray) -> tuple[list[EdgeSet], FixpointTrace]:
    """Worklist form of the frontier construction on a game won everywhere.

    Alternates a Player-0 attractor with one layer of Player-1 vertices that
    have an edge into the current set; each layer yields the group of those
    edges. Each edge is inspected a constant number of times.
    """
    n = G.n
    succ_of = [G.indices[G.indptr[v]:G.indptr[v + 1]].tolist() for v in range(n)]
    preds = G.preds
    owner = G.owner.tolist()
    remaining = G.outdeg.tolist()  # successors not yet in the set
    level = np.zeros(n, dtype=np.int64)
    inside = [False] * n
    touched: list[int] = []  # Player-1 vertices with some successor inside
    queue: deque[int] = deque()

    def add(v: int, lvl: int) -> None:
        inside[v] = True
        level[v] = lvl
        queue.append(v)

    for v in np.flatnonzero(U & G.alive).tolist():
        add(v, 1)
    count = 1 if queue else 0
    groups: list[EdgeSet] = []
    total = int(G.alive.sum())
    added = len(queue)
    while True:
        while queue:
            u = queue.popleft()
            for p in preds[u]:
                if inside[p]:
                    continue
                remaining[p] -= 1
                if owner[p] == P0 or remaining[p] == 0:
                    add(p, count)
                    added += 1
                else:
                    touched.append(p)
        if added == total or count == 0:
            break
        layer = sorted({v for v in touched if not inside[v]})
        touched = []
        if not layer:
            break
        count += 1
        group = []
        for c in layer:
            group.extend((c, w) for w in succ_of[c] if inside[w])
        groups.append(frozenset(group))
        for c in layer:
            add(c, count)
            added += 1
    return groups, FixpointTrace(level, count)


def live_a(G: GameGraph, U, variant: str = "standard") -> tuple[np.ndarray, list[EdgeSet], FixpointTrace]:
    """Region, live groups and layering for the Büchi target ``U``."""
    _check_variant(variant)
    U = G.mask(U)
    if variant == "linear":
        Z = buchi_mask(G, U).result_mask
        groups, trace = _live_a_linear(G.restrict(Z), U & Z)
        return Z, groups, trace
    trace = tbuchi_mask(G, U)
    return trace.result_mask, _frontier_groups(G, trace), trace


def live_a_linear(G: GameGraph, U) -> list[EdgeSet]:
    """Live groups of a game in which every vertex is cooperatively Büchi winning."""
    U = G.mask(U)
    if not np.array_equal(buchi_mask(G, U).result_mask, G.alive):
        raise ValueError("every vertex must be cooperatively winning for the Büchi target")
    return _live_a_linear(G, U)[0]


def _as_groups(groups: list[EdgeSet]) -> tuple[ConditionalLiveGroup, ...]:
    return tuple(ConditionalLiveGroup(sources(h), (h,)) for h in groups)


def buchi_apa(G: GameGraph, U, variant: str = "standard") -> ApaResult:
    Z, groups, trace = live_a(G, U, variant)
    a = Assumption(unsafe=_unsafe_mask(G, Z), cond_live=_as_groups(groups))
    return ApaResult(to_set(Z), a, variant, "buchi", trace, iterations=trace.count)


def naive_live_groups(G: GameGraph, U) -> list[EdgeSet]:
    """Live groups read off the pre-based Büchi layers (not permissive).

    Kept for comparison: every Player-1 vertex of a layer gets a group of its
    edges into the previous layer, even when Player 0 could force progress.
    """
    trace = buchi_mask(G, G.mask(U))
    groups = []
    for i in range(1, trace.count):
        prev = trace.step_mask(i)
        new = trace.step_mask(i + 1) & ~prev & G.is_p1
        H = edges_between(G, new, prev)
        if H:
            groups.append(H)
    return groups


# -- co-Büchi ---------------------------------------------------------------

def _pre_layers(G: GameGraph, core: np.ndarray) -> FixpointTrace:
    level, count = mu_trace(G.n, lambda X: core | pre_mask(G, X))
    return FixpointTrace(level, count)


def _tpre_layers(G: GameGraph, core: np.ndarray) -> tuple[FixpointTrace, np.ndarray]:
    """Layers ``X^{i+1} = X^i | attr0(X^i) | front(X^i)`` above the safety core.

    Also returns which vertices entered through a frontier.
    """
    is_front = np.zeros(G.n, dtype=bool)
    level = core.astype(np.int64)
    count = 1 if core.any() else 0
    X = core.copy()
    while count:
        at = attr_mask(G, X, 0)
        closed = X | at
        fr = cpre_mask(G, closed, 1) & ~closed
        new = at | fr
        if not new.any():
            break
        count += 1
        level[new] = count
        is_front |= fr
        X |= new
    return FixpointTrace(level, count), is_front


def _colive_standard(G: GameGraph, Z: np.ndarray, lv: np.ndarray) -> EdgeSet:
    # (u, v) is co-live iff u is a Player-1 vertex on layer a and v lies on a
    # layer b >= max(2, a): the edge does not lead to a lower layer.
    src, dst = G.edge_src, G.indices
    a, b = lv[src], lv[dst]
    keep = G.is_p1[src] & Z[src] & Z[dst] & (b >= np.maximum(2, a))
    return frozenset(zip(src[keep].tolist(), dst[keep].tolist()))


def _colive_frontier(G: GameGraph, Z: np.ndarray, lv: np.ndarray, is_front: np.ndarray) -> EdgeSet:
    # Core edges leaving the core, and frontier edges that stay on their own
    # frontier or go above their layer.
    src, dst = G.edge_src, G.indices
    a, b = lv[src], lv[dst]
    core = G.is_p1[src] & (a == 1) & (b >= 2)
    fr = is_front[src] & ((b > a) | ((b == a) & is_front[dst]))
    keep = Z[src] & Z[dst] & (core | fr)
    return frozenset(zip(src[keep].tolist(), dst[keep].tolist()))


def _colive_a_linear(G: GameGraph, core: np.ndarray) -> tuple[EdgeSet, FixpointTrace]:
    """Worklist co-live extraction on a game won everywhere.

    Starts from the safety core; Player-1 core edges leaving it are co-live.
    Then alternates a Player-0 attractor with one layer of Player-1 vertices
    having an edge into the set; their edges to vertices not yet in the set
    are co-live.
    """
    n = G.n
    succ_of = [G.indices[G.indptr[v]:G.indptr[v + 1]].tolist() for v in range(n)]
    preds = G.preds
    owner = G.owner.tolist()
    remaining = G.outdeg.tolist()
    level = np.zeros(n, dtype=np.int64)
    inside = [False] * n
    queue: deque[int] = deque()
    touched: list[int] = []
    colive: list[tuple[int, int]] = []

    def add(v: int, lvl: int) -> None:
        inside[v] = True
        level[v] = lvl
        queue.append(v)

    for v in np.flatnonzero(core & G.alive).tolist():
        add(v, 1)
    for v in np.flatnonzero(core & G.alive & G.is_p1).tolist():
        colive.extend((v, w) for w in succ_of[v] if not inside[w])
    count = 1 if queue else 0
    while count:
        while queue:
            u = queue.popleft()
            for p in preds[u]:
                if inside[p]:
                    continue
                remaining[p] -= 1
                if owner[p] == P0 or remaining[p] == 0:
                    add(p, count)
                else:
                    touched.append(p)
        layer = sorted({v for v in touched if not inside[v]})
        touched = []
        if not layer:
            break
        count += 1
        for c in layer:
            colive.extend((c, w) for w in succ_of[c] if not inside[w])
        for c in layer:
            add(c, count)
    return frozenset(colive), FixpointTrace(level, count)


def _core(fix: FixpointTrace) -> np.ndarray:
    return fix.step_mask(1) if fix.count else np.zeros(len(fix.level), dtype=bool)


def colive_a(G: GameGraph, U, variant: str = "standard") -> tuple[np.ndarray, EdgeSet, FixpointTrace]:
    """Region, co-live edges and layering for the co-Büchi target ``U``."""
    _check_variant(variant)
    U = G.mask(U)
    if variant == "linear":
        Z = cobuchi_mask(G, U).result_mask
        sub = G.restrict(Z)
        D, trace = _colive_a_linear(sub, safety_coop_mask(sub, U))
        return Z, D, trace
    if variant == "accelerated":
        fix = tcobuchi_mask(G, U)
        Z = fix.result_mask
        trace, is_front = _tpre_layers(G, _core(fix))
        return Z, _colive_frontier(G, Z, trace.level, is_front), trace
    fix = cobuchi_mask(G, U)
    Z = fix.result_mask
    trace = _pre_layers(G, _core(fix))
    return Z, _colive_standard(G, Z, trace.level), trace


def cobuchi_apa(G: GameGraph, U, variant: str = "standard") -> ApaResult:
    Z, D, trace = colive_a(G, U, variant)
    a = Assumption(unsafe=_unsafe_mask(G, Z), colive=D)
    return ApaResult(to_set(Z), a, variant, "cobuchi", trace, iterations=trace.count)


# -- parity -----------------------------------------------------------------

def parity_apa(G: GameGraph, priority=None, variant: str = "standard") -> ApaResult:
    """Assumption for the parity objective by peeling off the top priority.

    With top priority ``d`` odd, plays must eventually settle in the region
    winning without ``d``, which becomes co-live reachability. With ``d``
    even, inside the region visiting ``d`` infinitely often every odd ``i``
    is answered by live groups towards the even priorities above ``i``,
    conditioned on visiting ``i``. The rest of the game recurses with ``d``
    relabelled to 0.
    """
    _check_variant(variant)
    prio = np.array(G.priority if priority is None else priority, dtype=np.int64)
    Z, iterations = parity_coop_mask(G, prio)
    S = _unsafe_mask(G, Z)
    H = G.restrict(Z)
    colive: set = set()
    cond: list[ConditionalLiveGroup] = []
    levels: list[ParityLevel] = []
    while H.alive.any():
        alive = H.alive
        d = int(prio[alive].max())
        if d % 2 == 1:
            lower, its = parity_coop_mask(H.restrict(alive & (prio != d)), prio)
            iterations += its
            _, D, trace = colive_a(H, lower, variant)
            colive |= D
            iterations += trace.count
            levels.append(ParityLevel(alive, prio.copy(), d, lower, trace=trace))
        else:
            btrace = buchi_mask(H, alive & (prio == d))
            iterations += btrace.count
            top = btrace.result_mask
            lower = alive & ~top
            sub = H.restrict(top)
            buchi = {}
            for i in range(1, d, 2):
                R = top & (prio == i)
                if not R.any():
                    continue
                target = top & (prio > i) & (prio % 2 == 0)
                _, groups, trace = live_a(sub, target, variant)
                iterations += trace.count
                buchi[i] = (target, trace)
                if groups:
                    cond.append(ConditionalLiveGroup(to_set(R), tuple(groups)))
            levels.append(ParityLevel(alive, prio.copy(), d, lower, top=top, buchi=buchi))
        if d == 0:
            break
        H = H.restrict(lower)
        prio[lower & (prio == d)] = 0
    a = Assumption(unsafe=S, colive=frozenset(colive), cond_live=tuple(cond))
    return ApaResult(to_set(Z), a, variant, "parity", levels=tuple(levels), iterations=iterations)


# -- objective encodings ------------------------------------------------------

def buchi_priorities(G: GameGraph, U) -> np.ndarray:
    return np.where(G.mask(U), 2, 1).astype(np.int64)


def cobuchi_priorities(G: GameGraph, U) -> np.ndarray:
    return np.where(G.mask(U), 0, 1).astype(np.int64)


def compute_apa(G: GameGraph, objective: str, target=None, variant: str = "standard") -> ApaResult:
    """Dispatch on the objective name."""
    if objective == "parity":
        return parity_apa(G, variant=variant)
    if target is None:
        raise ValueError(f"objective {objective} needs a target set")
    if objective == "safety":
        return safety_apa(G, target)
    if objective == "buchi":
        return buchi_apa(G, target, variant)
    if objective == "cobuchi":
        return cobuchi_apa(G, target, variant)
    raise ValueError(f"unknown objective {objective!r}")
