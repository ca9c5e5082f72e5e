"""Brute-force checks used to validate the assumption algorithms.

Nothing here calls the fixpoint engine: cooperative regions come from
strongly connected components, sure winning from Zielonka's recursion, and
the permissiveness and sufficiency checks search for offending plays
directly, using the finite-witness semantics of :mod:`apa.templates`.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .game_model import Edge, GameGraph, P0, P1, VertexSet
from .templates import (
    Assumption,
    Bounds,
    Lasso,
    enumerate_inf_edge_sets,
    inf_satisfies_assumption,
    is_strongly_connected,
    sources,
    vertices_of,
)


# -- objectives -------------------------------------------------------------

@dataclass(frozen=True)
class Objective:
    """A winning condition: ``parity`` (priorities of the game unless given),
    or ``safety``/``buchi``/``cobuchi`` with a target vertex set."""

    kind: str
    target: frozenset = frozenset()
    priority: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("parity", "safety", "buchi", "cobuchi"):
            raise ValueError(f"unknown objective {self.kind!r}")
        object.__setattr__(self, "target", frozenset(self.target))
        if self.priority is not None:
            object.__setattr__(self, "priority", tuple(int(p) for p in self.priority))

    def priorities(self, G: GameGraph):
        return self.priority if self.priority is not None else G.priority.tolist()

    def holds_inf(self, G: GameGraph, K) -> bool:
        """Verdict on the set of vertices visited infinitely often."""
        if self.kind == "parity":
            prio = self.priorities(G)
            return max(prio[v] for v in K) % 2 == 0
        if self.kind == "buchi":
            return bool(self.target & set(K))
        return set(K) <= self.target  # cobuchi, and the cycle part of safety

    def holds(self, G: GameGraph, lasso: Lasso) -> bool:
        if self.kind == "safety" and not set(lasso.stem) <= self.target:
            return False
        return self.holds_inf(G, set(lasso.cycle))

    def as_priorities(self, G: GameGraph) -> list[int]:
        """Parity encoding of a prefix-independent objective."""
        if self.kind == "parity":
            return list(self.priorities(G))
        if self.kind == "buchi":
            return [2 if v in self.target else 1 for v in range(G.n)]
        if self.kind == "cobuchi":
            return [0 if v in self.target else 1 for v in range(G.n)]
        raise ValueError("safety has no prefix-independent parity encoding")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    message: str = ""
    counterexample: Lasso | None = None

    def __bool__(self) -> bool:
        return self.ok


def _digraph(G: GameGraph, drop: frozenset = frozenset()) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(G.vertices())
    g.add_edges_from(e for e in G.edges() if e not in drop)
    return g


def _backward_closure(g: nx.DiGraph, targets) -> set:
    out = set(targets)
    for t in list(targets):
        out |= nx.ancestors(g, t)
    return out


# -- cooperative regions ----------------------------------------------------

def coop_region_bruteforce(G: GameGraph, priority=None) -> VertexSet:
    """Vertices that can reach a cycle whose highest priority is even.

    For each even ``p``: keep the vertices of priority at most ``p`` and look
    for a strongly connected component with a cycle through a ``p``-vertex.
    """
    prio = G.priority.tolist() if priority is None else list(priority)
    g = _digraph(G)
    good: set = set()
    for p in sorted({prio[v] for v in g.nodes if prio[v] % 2 == 0}):
        low = g.subgraph([v for v in g.nodes if prio[v] <= p])
        for comp in nx.strongly_connected_components(low):
            has_cycle = len(comp) > 1 or any(low.has_edge(v, v) for v in comp)
            if has_cycle and any(prio[v] == p for v in comp):
                good |= comp
    return frozenset(_backward_closure(g, good))


def coop_region_by_cycles(G: GameGraph, priority=None, max_vertices: int = 6) -> VertexSet:
    """Same region by listing every simple cycle (small games only)."""
    if G.alive.sum() > max_vertices:
        raise ValueError(f"cycle enumeration limited to {max_vertices} vertices")
    prio = G.priority.tolist() if priority is None else list(priority)
    g = _digraph(G)
    good = set()
    for cyc in nx.simple_cycles(g):
        if max(prio[v] for v in cyc) % 2 == 0:
            good |= set(cyc)
    return frozenset(_backward_closure(g, good))


def safety_region_bruteforce(G: GameGraph, U) -> VertexSet:
    """Vertices of ``U`` with an infinite path inside ``U`` (iterative pruning)."""
    keep = {v for v in G.vertices() if v in set(U)}
    changed = True
    while changed:
        changed = False
        for v in sorted(keep):
            if not any(w in keep for w in G.succ(v)):
                keep.discard(v)
                changed = True
    return frozenset(keep)


def coop_region(G: GameGraph, objective: Objective) -> VertexSet:
    if objective.kind == "safety":
        return safety_region_bruteforce(G, objective.target)
    return coop_region_bruteforce(G, objective.as_priorities(G))


# -- sure winning -----------------------------------------------------------

def _attractor(succ: dict, owner, V: set, target: set, player: int) -> set:
    """Attractor of ``target`` (included) for ``player`` inside ``V``."""
    attr = set(target) & V
    pred: dict = {v: [] for v in V}
    for v in V:
        for w in succ[v]:
            if w in V:
                pred[w].append(v)
    left = {v: sum(1 for w in succ[v] if w in V) for v in V}
    queue = deque(attr)
    while queue:
        w = queue.popleft()
        for v in pred[w]:
            if v in attr:
                continue
            left[v] -= 1
            if owner[v] == player or left[v] == 0:
                attr.add(v)
                queue.append(v)
    return attr


def zielonka(G: GameGraph, priority=None) -> tuple[VertexSet, VertexSet]:
    """Sure-winning regions ``(W0, W1)`` of the parity game.

    A player stuck in a dead end loses.
    """
    prio = G.priority.tolist() if priority is None else list(priority)
    owner = G.owner.tolist()
    succ = {v: list(G.succ(v)) for v in G.vertices()}
    V = set(succ)
    won: list[set] = [set(), set()]
    while True:
        stuck = sorted(v for v in V if not any(w in V for w in succ[v]))
        if not stuck:
            break
        v = stuck[0]
        winner = 1 - owner[v]
        A = _attractor(succ, owner, V, {v}, winner)
        won[winner] |= A
        V -= A

    def solve(V: set) -> tuple[set, set]:
        if not V:
            return set(), set()
        d = max(prio[v] for v in V)
        i = d % 2
        A = _attractor(succ, owner, V, {v for v in V if prio[v] == d}, i)
        sub = solve(V - A)
        if not sub[1 - i]:
            res = [set(), set()]
            res[i] = set(V)
            return res[0], res[1]
        B = _attractor(succ, owner, V, sub[1 - i], 1 - i)
        sub2 = solve(V - B)
        res = [set(sub2[0]), set(sub2[1])]
        res[1 - i] |= B
        return res[0], res[1]

    w0, w1 = solve(V)
    return frozenset(won[0] | w0), frozenset(won[1] | w1)


def safety_sure_after_removal(G: GameGraph, U, a: Assumption) -> Verdict:
    """Does Player 0 surely win ``safety(U)`` on ``Z*`` once unsafe edges are gone?"""
    U = set(U)
    Z = safety_region_bruteforce(G, U)
    succ, owner, prio = [], G.owner.tolist(), []
    for v in range(G.n):
        if v in U:
            succ.append([w for w in G.succ(v) if (v, w) not in a.unsafe])
            prio.append(0)
        else:
            succ.append([v] if G.alive[v] else [])
            prio.append(1)
    H = GameGraph.build(owner, prio, succ, alive=G.alive.tolist())
    W0, _ = zielonka(H)
    missing = sorted(Z - W0)
    if missing:
        return Verdict(False, f"vertices {missing} not surely safe")
    return Verdict(True)


# -- permissiveness ---------------------------------------------------------

class _Bits:
    """Bitmask view of a small game for subset scans."""

    def __init__(self, G: GameGraph, drop: frozenset = frozenset()):
        self.verts = G.vertices()
        self.index = {v: i for i, v in enumerate(self.verts)}
        k = len(self.verts)
        self.succ = [0] * k
        self.pred = [0] * k
        for u, v in G.edges():
            if (u, v) in drop:
                continue
            self.add(u, v)

    def add(self, u, v):
        i, j = self.index[u], self.index[v]
        self.succ[i] |= 1 << j
        self.pred[j] |= 1 << i

    def bits(self, vs) -> int:
        out = 0
        for v in vs:
            if v in self.index:
                out |= 1 << self.index[v]
        return out

    def members(self, mask: int) -> list[int]:
        return [self.verts[i] for i in range(len(self.verts)) if mask >> i & 1]


def _closure(start: int, within: int, arr: list[int]) -> int:
    reach = start & within
    frontier = reach
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= arr[low.bit_length() - 1]
            f ^= low
        frontier = nxt & within & ~reach
        reach |= frontier
    return reach


def _spans(K: int, succ: list[int], pred: list[int]) -> bool:
    """Is there a strongly connected edge set (from ``succ``) covering exactly ``K``?"""
    low = K & -K
    if K == low:
        return bool(succ[low.bit_length() - 1] & low)
    return _closure(low, K, succ) == K and _closure(low, K, pred) == K


def _edges_within(G: GameGraph, K: set, drop=frozenset()) -> frozenset:
    return frozenset((u, v) for u in K for v in G.succ(u) if v in K and (u, v) not in drop)


def _shortest_path(succ_fn, sources_, goal_fn):
    prev = {s: None for s in sources_}
    queue = deque(sources_)
    while queue:
        x = queue.popleft()
        if goal_fn(x):
            path = []
            while x is not None:
                path.append(x)
                x = prev[x]
            return path[::-1]
        for y in succ_fn(x):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _closed_walk(F: frozenset, start) -> list:
    """A closed walk from ``start`` taking exactly the edges of ``F``."""
    out: dict = {}
    for u, v in F:
        out.setdefault(u, []).append(v)
    for u in out:
        out[u].sort()

    def path(a, b):
        if a == b:
            return [a]
        return _shortest_path(lambda x: out.get(x, []), [a], lambda x: x == b)

    walk = [start]
    cur = start
    for u, v in sorted(F):
        walk.extend(path(cur, u)[1:])
        walk.append(v)
        cur = v
    walk.extend(path(cur, start)[1:])
    return walk[:-1]


def _minimize(F: frozenset, keep) -> frozenset:
    """A small strongly connected subset of ``F`` still satisfying ``keep``.

    Prefers the shortest simple cycle (lowest vertex sequence on ties), then
    falls back to dropping edges greedily.
    """
    g = nx.DiGraph(list(F))
    for bound in range(1, g.number_of_nodes() + 1):
        found = []
        for cyc in nx.simple_cycles(g, length_bound=bound):
            if len(cyc) == bound:
                i = cyc.index(min(cyc))
                found.append(tuple(cyc[i:] + cyc[:i]))
        for cyc in sorted(found):
            E = frozenset(zip(cyc, cyc[1:] + cyc[:1]))
            if keep(E):
                return E
    for e in sorted(F):
        smaller = F - {e}
        if smaller and is_strongly_connected(smaller) and keep(smaller):
            F = smaller
    return F


def check_permissive(
    G: GameGraph,
    objective: Objective,
    a: Assumption,
    bounds: Bounds | None = None,
    method: str = "scan",
) -> Verdict:
    """Search for a play that satisfies the objective but violates ``a``.

    Such a play must start in the cooperative region, so all vertices are
    tried as starting points. ``method="scan"`` ranges over vertex sets ``K``
    visited infinitely often and tests only the extremal edge sets on ``K``
    (all edges, or all edges minus one live group), which decides every
    template exactly. ``method="enumerate"`` ranges over all strongly
    connected edge subsets instead.
    """
    bounds = bounds or Bounds()
    if G.alive.sum() > bounds.max_vertices:
        raise ValueError(f"game has more than {bounds.max_vertices} vertices")
    allowed = set(objective.target) if objective.kind == "safety" else set(G.vertices())
    g_allowed = _digraph(G).subgraph(allowed)
    stem_reach = {}
    for u, v in sorted(a.unsafe):
        if u in allowed and v in allowed:
            stem_reach[(u, v)] = {v} | nx.descendants(g_allowed, v)
    pairs = [(c.condition, h) for c in a.cond_live for h in c.groups]

    def phi(K) -> bool:
        return set(K) <= allowed and objective.holds_inf(G, K)

    def report(F: frozenset, unsafe_edge: Edge | None) -> Verdict:
        if unsafe_edge is None:
            F = _minimize(F, lambda f: phi(vertices_of(f)) and not inf_satisfies_assumption(frozenset(), f, a))
            entry = min(vertices_of(F))
            lasso = Lasso((), _closed_walk(F, entry))
        else:
            F = _minimize(F, lambda f: phi(vertices_of(f)) and bool(stem_reach[unsafe_edge] & vertices_of(f)))
            u, v = unsafe_edge
            Fv = vertices_of(F)
            path = _shortest_path(lambda x: [y for y in G.succ(x) if y in allowed], [v], lambda x: x in Fv)
            lasso = Lasso((u,) + tuple(path[:-1]), _closed_walk(F, path[-1]))
        return Verdict(False, "play satisfies the objective but violates the assumption", lasso)

    if method == "enumerate":
        for inf in enumerate_inf_edge_sets(G, None, bounds):
            K = inf.vertices
            if not phi(K):
                continue
            if not inf_satisfies_assumption(frozenset(), inf.edges, a):
                return report(inf.edges, None)
            for e, reach in stem_reach.items():
                if reach & K:
                    return report(inf.edges, e)
        return Verdict(True)
    if method != "scan":
        raise ValueError(f"unknown method {method!r}")

    bits = _Bits(G)
    minus = []
    for R, h in pairs:
        b = _Bits(G, drop=h)
        minus.append((bits.bits(R), bits.bits(sources(h)), b))
    bad = _Bits(G)
    bad.succ = [0] * len(bits.verts)
    for u, v in a.unsafe | a.colive:
        bad.add(u, v)
    allowed_bits = bits.bits(allowed)
    reach_bits = {e: bits.bits(r) for e, r in stem_reach.items()}
    for K in range(1, 1 << len(bits.verts)):
        if K & ~allowed_bits:
            continue
        Kset = bits.members(K)
        if not objective.holds_inf(G, Kset):
            continue
        full = _spans(K, bits.succ, bits.pred)
        if full:
            if any(bad.succ[i] & K for i in range(len(bits.verts)) if K >> i & 1):
                return report(_edges_within(G, set(Kset)), None)
            for e, rb in reach_bits.items():
                if rb & K:
                    return report(_edges_within(G, set(Kset)), e)
        for Rb, Sb, b in minus:
            if Rb & K and Sb & K and _spans(K, b.succ, b.pred):
                h = pairs[minus.index((Rb, Sb, b))][1]
                return report(_edges_within(G, set(Kset), drop=h), None)
    return Verdict(True)


# -- implementability -------------------------------------------------------

def check_implementable_structural(G: GameGraph, a: Assumption) -> Verdict:
    """Structural conditions under which Player 1 can always satisfy ``a``."""
    problems = []
    for u, v in sorted(a.all_edges()):
        if not G.has_edge(u, v):
            problems.append(f"({u},{v}) is not an edge")
        elif G.owner[u] != P1:
            problems.append(f"({u},{v}) starts at a Player-0 vertex")
    for v in G.vertices():
        if G.owner[v] != P1:
            continue
        succ = G.succ(v)
        if succ and all((v, w) in a.unsafe for w in succ):
            problems.append(f"every edge of {v} is unsafe")
    for u in sorted(sources(a.colive)):
        if not any((u, w) not in a.unsafe and (u, w) not in a.colive for w in G.succ(u)):
            problems.append(f"co-live source {u} has no other edge")
    for e in sorted(a.live_edges()):
        if e in a.unsafe or e in a.colive:
            problems.append(f"live edge {e} is unsafe or co-live")
    if problems:
        return Verdict(False, "; ".join(problems))
    return Verdict(True)


def check_separation(a: Assumption) -> Verdict:
    if a.unsafe & a.colive:
        return Verdict(False, "an edge is both unsafe and co-live")
    if a.live_edges() & (a.unsafe | a.colive):
        return Verdict(False, "a live-group edge is unsafe or co-live")
    return Verdict(True)


# -- strategies -------------------------------------------------------------

@dataclass(frozen=True)
class Strategy0:
    """Player-0 strategy.

    ``choice`` fixes one successor per vertex. Vertices in ``options`` cycle
    through their list: each visit plays the entry selected by that vertex's
    own counter and advances it, so the memory is one counter per such vertex.
    """

    choice: dict
    options: dict = field(default_factory=dict)

    @property
    def switching(self) -> list[int]:
        return sorted(self.options)

    @property
    def memory_size(self) -> int:
        return math.prod(len(o) for o in self.options.values())

    def initial_memory(self) -> tuple:
        return (0,) * len(self.options)

    def move(self, v: int, memory: tuple) -> tuple[int, tuple]:
        if v in self.options:
            idx = self.switching.index(v)
            opts = self.options[v]
            w = opts[memory[idx]]
            memory = memory[:idx] + ((memory[idx] + 1) % len(opts),) + memory[idx + 1:]
            return w, memory
        return self.choice[v], memory

    def validate(self, G: GameGraph) -> None:
        for v, w in self.choice.items():
            if not G.has_edge(v, w):
                raise ValueError(f"strategy choice ({v},{w}) is not an edge")
        for v, opts in self.options.items():
            for w in opts:
                if not G.has_edge(v, w):
                    raise ValueError(f"strategy option ({v},{w}) is not an edge")


def _progress_rank(G: GameGraph, region: set, prev: set, layer: set) -> dict:
    """Order in which the vertices of ``layer`` can be justified from ``prev``.

    Rounds add Player-0 vertices with a ranked successor and Player-1
    vertices whose successors in ``region`` are all ranked; when neither
    applies, the Player-1 vertices with some ranked successor (a frontier)
    are added together.
    """
    rank = {v: 0 for v in prev}
    r = 0
    while True:
        r += 1
        new = []
        frontier = []
        for v in sorted(layer - set(rank)):
            succ = [w for w in G.succ(v) if w in region]
            hit = [w in rank for w in succ]
            if G.owner[v] == P0:
                if any(hit):
                    new.append(v)
            elif succ and all(hit):
                new.append(v)
            elif any(hit):
                frontier.append(v)
        new = new or frontier
        if not new:
            return rank
        for v in new:
            rank[v] = r


def _layer_choices(G: GameGraph, kind: str, steps: list[set], region: set, base: set) -> dict:
    """Rank-decreasing successor for every Player-0 vertex of ``region``.

    ``base`` is the Büchi target or the co-Büchi safety core. Its Player-0
    vertices stay in the region (Büchi) or in the core (co-Büchi); every other
    vertex of layer ``l`` moves down the attractor of layer ``l - 1``.
    """
    choice = {}
    for v in sorted(base):
        if G.owner[v] != P0:
            continue
        stay = base if kind == "cobuchi" else region
        cands = [w for w in G.succ(v) if w in stay]
        if not cands:
            raise ValueError(f"vertex {v} cannot stay in the winning core")
        choice[v] = cands[0]
    layers = [set(base)] + [set(s) | set(base) for s in steps]
    for prev, cur in zip(layers, layers[1:]):
        new = cur - prev
        if not any(G.owner[v] == P0 for v in new):
            continue
        rank = _progress_rank(G, region, prev, new)
        for v in sorted(new):
            if G.owner[v] != P0:
                continue
            if v not in rank:
                raise ValueError(f"layering does not justify vertex {v}")
            cands = [w for w in G.succ(v) if w in rank and rank[w] < rank[v]]
            choice[v] = cands[0]
    return choice


def _complete(G: GameGraph, choice: dict) -> dict:
    for v in G.vertices():
        if G.owner[v] == P0 and v not in choice and G.succ(v):
            choice[v] = G.succ(v)[0]
    return choice


def _base(G: GameGraph, kind: str, region: set, target) -> set:
    if kind == "buchi":
        return region & set(target)
    return set(safety_region_bruteforce(G.restrict(sorted(region)), target))


def build_proof_strategy(G: GameGraph, kind: str, source, region=None, target=None) -> Strategy0:
    """Player-0 strategy that makes progress along an assumption's layering.

    ``source`` is a fixpoint trace (or a result carrying one) for
    ``safety``/``buchi``/``cobuchi``, whose objective ``target`` is required;
    in every layer Player 0 moves to the lowest-id successor of smaller
    attractor rank. For ``parity`` it is the parity result, and the strategy
    switches between the Büchi strategies of its live groups (see
    :func:`build_switching_strategy`).
    """
    if kind == "parity":
        return build_switching_strategy(G, source)
    if kind not in ("safety", "buchi", "cobuchi"):
        raise ValueError(f"unknown objective {kind!r}")
    trace = getattr(source, "trace", None) or source
    region = set(region) if region is not None else set(trace.result)
    if kind == "safety":
        choice = _layer_choices(G, kind, [], region, region)
    else:
        if target is None:
            raise ValueError(f"{kind} strategy needs the target set")
        steps = [set(s) for s in trace.steps[1:]]
        choice = _layer_choices(G, kind, steps, region, _base(G, kind, region, target))
    strat = Strategy0(_complete(G, choice))
    strat.validate(G)
    return strat


def _mask_set(mask) -> set:
    return set(np.flatnonzero(mask).tolist())


def build_switching_strategy(G: GameGraph, result) -> Strategy0:
    """Finite-memory strategy for the parity assumption.

    Each round of the parity recursion settles some vertices: with odd top
    priority Player 0 follows the co-Büchi layering towards the lower region;
    with even top priority, inside the region visiting the top priority
    infinitely often, every Player-0 vertex cycles through the Büchi
    strategies for the targets of each odd priority present.
    """
    choice: dict = {}
    options: dict = {}
    for lv in result.levels:
        region = _mask_set(lv.region)
        lower = _mask_set(lv.lower)
        if lv.d == 0:
            for v in sorted(region):
                if G.owner[v] == P0:
                    choice[v] = next(w for w in G.succ(v) if w in region)
        elif lv.d % 2 == 1:
            steps = [set(s) for s in lv.trace.steps[1:]]
            layered = _layer_choices(G, "cobuchi", steps, region, _base(G, "cobuchi", region, lower))
            for v in region - lower:
                if G.owner[v] == P0:
                    choice[v] = layered[v]
        else:
            top = _mask_set(lv.top)
            per_target = []
            for i in sorted(lv.buchi):
                target, trace = lv.buchi[i]
                steps = [set(s) for s in trace.steps[1:]]
                base = _base(G, "buchi", top, _mask_set(target))
                per_target.append(_layer_choices(G, "buchi", steps, top, base))
            for v in sorted(top):
                if G.owner[v] != P0:
                    continue
                opts = tuple(c[v] for c in per_target)
                if not opts:
                    choice[v] = next(w for w in G.succ(v) if w in top)
                elif len(set(opts)) == 1:
                    choice[v] = opts[0]
                else:
                    options[v] = opts
    strat = Strategy0(_complete(G, choice), options)
    strat.validate(G)
    return strat


# -- sufficiency ------------------------------------------------------------

def _product(G: GameGraph, strategy: Strategy0, starts, unsafe: frozenset):
    """Plays consistent with ``strategy`` as a graph over (vertex, memory)."""
    init = strategy.initial_memory()
    nodes = [(v, init) for v in sorted(starts)]
    succ: dict = {}
    queue = deque(nodes)
    seen = set(nodes)
    while queue:
        node = queue.popleft()
        v, mem = node
        if G.owner[v] == P0:
            w, mem2 = strategy.move(v, mem)
            nxt = [] if (v, w) in unsafe else [(w, mem2)]
        else:
            nxt = [(w, mem) for w in G.succ(v) if (v, w) not in unsafe]
        succ[node] = nxt
        for y in nxt:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return succ


def _fair_scc(succ: dict, nodes: set, colive: frozenset, pairs: list, required) -> set | None:
    """A strongly connected node set whose edges avoid ``colive`` and satisfy
    every live pair, containing a ``required`` node; ``None`` if none exists."""
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    for x in nodes:
        for y in succ[x]:
            if y in nodes and (x[0], y[0]) not in colive:
                g.add_edge(x, y)
    comps = sorted((sorted(c) for c in nx.strongly_connected_components(g)), key=lambda c: c[0])
    for comp in comps:
        C = set(comp)
        if len(C) == 1 and not g.has_edge(comp[0], comp[0]):
            continue
        if required is not None and not any(required(x) for x in C):
            continue
        proj = {x[0] for x in C}
        violated = None
        for R, h in pairs:
            if R & proj and sources(h) & proj:
                if not any((x[0], y[0]) in h for x in C for y in g.successors(x) if y in C):
                    violated = (R, h)
                    break
        if violated is None:
            return C
        R, h = violated
        for drop in (R, sources(h)):
            found = _fair_scc(succ, {x for x in C if x[0] not in drop}, colive, pairs, required)
            if found:
                return found
    return None


def check_sufficient(
    G: GameGraph,
    objective: Objective,
    a: Assumption,
    strategy: Strategy0,
    region=None,
    max_nodes: int = 200_000,
) -> Verdict:
    """Search for a play from the region, consistent with ``strategy``, that
    satisfies ``a`` but loses the objective."""
    region = set(region) if region is not None else set(coop_region(G, objective))
    if G.n * strategy.memory_size > max_nodes:
        raise ValueError("strategy product exceeds the configured bound")
    succ = _product(G, strategy, region, a.unsafe)
    nodes = set(succ)
    pairs = [(c.condition, h) for c in a.cond_live for h in c.groups]
    starts = {x for x in nodes if x[0] in region and x[1] == strategy.initial_memory()}

    searches = []
    if objective.kind == "parity":
        prio = objective.priorities(G)
        for p in sorted({prio[v] for v, _ in nodes if prio[v] % 2 == 1}):
            searches.append(({x for x in nodes if prio[x[0]] <= p}, lambda x, p=p: prio[x[0]] == p))
    elif objective.kind == "buchi":
        searches.append(({x for x in nodes if x[0] not in objective.target}, None))
    elif objective.kind == "cobuchi":
        searches.append((nodes, lambda x: x[0] not in objective.target))
    else:
        bad = [x for x in nodes if x[0] not in objective.target]
        after = set(bad)
        queue = deque(bad)
        while queue:
            x = queue.popleft()
            for y in succ[x]:
                if y not in after:
                    after.add(y)
                    queue.append(y)
        searches.append((after, None))

    for within, required in searches:
        C = _fair_scc(succ, within, a.colive, pairs, required)
        if C is None:
            continue
        F = frozenset((x, y) for x in C for y in succ[x] if y in C and (x[0], y[0]) not in a.colive)

        def keep(f) -> bool:
            played = frozenset((x[0], y[0]) for x, y in f)
            if not inf_satisfies_assumption(frozenset(), played, a):
                return False
            return objective.kind == "safety" or not objective.holds_inf(G, vertices_of(played))

        F = _minimize(F, keep)
        Fv = vertices_of(F)
        if objective.kind == "safety":
            path = _safety_stem(succ, starts, Fv, objective.target)
        else:
            path = _shortest_path(lambda x: succ[x], sorted(starts), lambda x: x in Fv)
        walk = _closed_walk(F, path[-1])
        lasso = Lasso(tuple(x[0] for x in path[:-1]), tuple(x[0] for x in walk))
        return Verdict(False, "play satisfies the assumption but loses", lasso)
    return Verdict(True)


def _safety_stem(succ: dict, starts, C: set, target) -> list:
    """Shortest path from a start into ``C`` that visits a vertex outside ``target``."""
    layered = {}
    queue = deque()
    for s in sorted(starts):
        key = (s, s[0] not in target)
        layered[key] = None
        queue.append(key)
    while queue:
        key = queue.popleft()
        x, flag = key
        if flag and x in C:
            path = []
            while key is not None:
                path.append(key[0])
                key = layered[key]
            return path[::-1]
        for y in succ[x]:
            nk = (y, flag or y[0] not in target)
            if nk not in layered:
                layered[nk] = key
                queue.append(nk)
    raise AssertionError("no stem found")


def check_sufficient_scan(
    G: GameGraph,
    objective: Objective,
    a: Assumption,
    strategy: Strategy0,
    region=None,
    bounds: Bounds | None = None,
) -> Verdict:
    """Sufficiency of a memoryless strategy by scanning vertex sets.

    For a fixed set ``K`` visited infinitely often, keeping every non-co-live
    edge inside ``K`` is the best a compliant play can do, so ``K`` is a
    counterexample iff that edge set is strongly connected on ``K``, meets
    every active live group and ``K`` loses.
    """
    bounds = bounds or Bounds()
    if strategy.options:
        raise ValueError("vertex-set scan needs a memoryless strategy")
    if G.alive.sum() > bounds.max_vertices:
        raise ValueError(f"game has more than {bounds.max_vertices} vertices")
    region = set(region) if region is not None else set(coop_region(G, objective))
    drop = set(a.unsafe)
    for v, w in strategy.choice.items():
        drop |= {(v, x) for x in G.succ(v) if x != w}
    g = _digraph(G, frozenset(drop))
    reach = set(region)
    for z in region:
        reach |= nx.descendants(g, z)
    if objective.kind == "safety":
        bad = {v for v in reach if v not in objective.target}
        reach = set(bad)
        for b in bad:
            reach |= nx.descendants(g, b)
    bits = _Bits(G, drop=frozenset(drop) | a.colive)
    allowed = bits.bits(reach)
    pairs = [(c.condition, h) for c in a.cond_live for h in c.groups]
    for K in range(1, 1 << len(bits.verts)):
        if K & ~allowed:
            continue
        Kset = set(bits.members(K))
        if objective.kind != "safety" and objective.holds_inf(G, Kset):
            continue
        if not _spans(K, bits.succ, bits.pred):
            continue
        F = _edges_within(G, Kset, drop=frozenset(drop) | a.colive)
        if all(not (R & Kset and sources(h) & Kset) or (h & F) for R, h in pairs):
            return Verdict(False, f"losing compliant cycle through {sorted(Kset)}")
    return Verdict(True)
