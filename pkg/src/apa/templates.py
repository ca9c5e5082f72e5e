"""Assumption templates, LTL rendering and finite-witness semantics.

An ultimately periodic play is judged only through two edge sets: the edges
of its finite prefix (the stem) and the set ``F`` of edges it takes
infinitely often. ``F`` is exactly a strongly connected edge set, and every
template and objective used here is decided by ``(stem, F)``:

* unsafe edges: none in the stem or in ``F``;
* co-live edges: none in ``F``;
* conditional live group ``(R, [H_1, ...])``: if ``F`` visits ``R`` then every
  ``H_i`` whose sources are visited by ``F`` has an edge in ``F``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .game_model import Edge, EdgeSet, GameGraph, VertexSet


def sources(edges: Iterable[Edge]) -> VertexSet:
    return frozenset(u for u, _ in edges)


def vertices_of(edges: Iterable[Edge]) -> VertexSet:
    return frozenset(x for e in edges for x in e)


@dataclass(frozen=True)
class ConditionalLiveGroup:
    condition: VertexSet
    groups: tuple[EdgeSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "condition", frozenset(self.condition))
        object.__setattr__(self, "groups", tuple(frozenset(map(tuple, h)) for h in self.groups))
        if not self.condition:
            raise ValueError("condition must be nonempty")
        if any(not h for h in self.groups):
            raise ValueError("live groups must be nonempty")


@dataclass(frozen=True)
class Assumption:
    unsafe: EdgeSet = frozenset()
    colive: EdgeSet = frozenset()
    cond_live: tuple[ConditionalLiveGroup, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "unsafe", frozenset(map(tuple, self.unsafe)))
        object.__setattr__(self, "colive", frozenset(map(tuple, self.colive)))
        object.__setattr__(self, "cond_live", tuple(self.cond_live))

    @property
    def is_trivial(self) -> bool:
        return not (self.unsafe or self.colive or self.cond_live)

    def live_edges(self) -> EdgeSet:
        return frozenset(e for c in self.cond_live for h in c.groups for e in h)

    def all_edges(self) -> EdgeSet:
        return self.unsafe | self.colive | self.live_edges()

    def to_json(self) -> dict:
        return {
            "unsafe": [list(e) for e in sorted(self.unsafe)],
            "colive": [list(e) for e in sorted(self.colive)],
            "cond_live": [
                {
                    "condition": sorted(c.condition),
                    "groups": [[list(e) for e in sorted(h)] for h in c.groups],
                }
                for c in self.cond_live
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> Assumption:
        def edges(items) -> EdgeSet:
            out = set()
            for item in items:
                if len(item) != 2:
                    raise ValueError(f"edge must be a pair: {item!r}")
                out.add((int(item[0]), int(item[1])))
            return frozenset(out)

        unknown = set(data) - {"unsafe", "colive", "cond_live"}
        if unknown:
            raise ValueError(f"unknown assumption keys: {sorted(unknown)}")
        groups = tuple(
            ConditionalLiveGroup(
                frozenset(int(v) for v in c["condition"]),
                tuple(edges(h) for h in c["groups"]),
            )
            for c in data.get("cond_live", [])
        )
        return cls(edges(data.get("unsafe", [])), edges(data.get("colive", [])), groups)

    def validate(self, G: GameGraph) -> None:
        """Raise ``ValueError`` if an edge is not an edge of ``G``."""
        for u, v in self.all_edges():
            if not (0 <= u < G.n and 0 <= v < G.n and G.has_edge(u, v)):
                raise ValueError(f"({u},{v}) is not an edge of the game")
        for c in self.cond_live:
            for v in c.condition:
                if not (0 <= v < G.n and G.alive[v]):
                    raise ValueError(f"condition vertex {v} is not a vertex of the game")


TRUE = Assumption()


# -- witnesses --------------------------------------------------------------

@dataclass(frozen=True)
class Lasso:
    stem: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("cycle must be nonempty")

    def stem_edges(self) -> EdgeSet:
        path = self.stem + self.cycle[:1]
        return frozenset(zip(path, path[1:]))

    def cycle_edges(self) -> EdgeSet:
        c = self.cycle
        return frozenset(zip(c, c[1:] + c[:1]))

    def edges(self) -> EdgeSet:
        return self.stem_edges() | self.cycle_edges()

    def inf(self) -> InfEdgeSet:
        return InfEdgeSet(self.cycle_edges(), self.cycle[0])

    def render(self, G: GameGraph | None = None) -> str:
        name = G.label if G is not None else (lambda v: f"v{v}")
        stem = " ".join(name(v) for v in self.stem)
        cycle = " ".join(name(v) for v in self.cycle)
        return f"{stem} ({cycle})^w".strip()


@dataclass(frozen=True)
class InfEdgeSet:
    edges: EdgeSet
    entry: int

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(map(tuple, self.edges)))
        if not self.edges:
            raise ValueError("inf edge set must be nonempty")
        if self.entry not in self.vertices:
            raise ValueError("entry must be a vertex of the edge set")
        if not is_strongly_connected(self.edges):
            raise ValueError("inf edge set must be strongly connected")

    @property
    def vertices(self) -> VertexSet:
        return vertices_of(self.edges)


def is_strongly_connected(edges: Iterable[Edge]) -> bool:
    g = nx.DiGraph()
    g.add_edges_from(edges)
    return g.number_of_nodes() > 0 and nx.is_strongly_connected(g)


def _witness_parts(w) -> tuple[EdgeSet, EdgeSet]:
    if isinstance(w, Lasso):
        return w.stem_edges(), w.cycle_edges()
    stem, inf = w
    inf_edges = inf.edges if isinstance(inf, InfEdgeSet) else frozenset(inf)
    return frozenset(stem), inf_edges


def lasso_satisfies_parity(lasso: Lasso, priority) -> bool:
    return max(int(priority[v]) for v in lasso.cycle) % 2 == 0


def inf_satisfies_assumption(stem: EdgeSet, inf: EdgeSet, a: Assumption) -> bool:
    if a.unsafe & (stem | inf):
        return False
    if a.colive & inf:
        return False
    seen = vertices_of(inf)
    for c in a.cond_live:
        if not (c.condition & seen):
            continue
        for h in c.groups:
            if sources(h) & seen and not (h & inf):
                return False
    return True


def witness_satisfies_assumption(w, a: Assumption, G: GameGraph | None = None) -> bool:
    """Decide a witness against an assumption.

    ``w`` is a :class:`Lasso` or a pair ``(stem edges, InfEdgeSet)``. When
    ``G`` is given the witness edges are checked to belong to it.
    """
    stem, inf = _witness_parts(w)
    if G is not None:
        for u, v in stem | inf:
            if not (0 <= u < G.n and 0 <= v < G.n and G.has_edge(u, v)):
                raise ValueError(f"witness edge ({u},{v}) is not an edge of the game")
    return inf_satisfies_assumption(stem, inf, a)


# -- LTL rendering ----------------------------------------------------------

def _disj(items: Sequence[str]) -> str:
    if len(items) == 1:
        return items[0]
    return " | ".join(f"({x})" if " " in x else x for x in items)


def render_ltl(a: Assumption, G: GameGraph | None = None) -> str:
    """Render an assumption with ``G``/``F``/``X`` operators.

    An edge ``(u, v)`` is the atom ``u & X v``. Vertex names come from ``G``
    when given, otherwise ``v<id>``.
    """
    name = G.label if G is not None else (lambda v: f"v{v}")

    def edge(e: Edge) -> str:
        return f"{name(e[0])} & X {name(e[1])}"

    def vset(vs) -> str:
        return _disj([name(v) for v in sorted(vs)])

    parts = [f"G !({edge(e)})" for e in sorted(a.unsafe)]
    parts += [f"F G !({edge(e)})" for e in sorted(a.colive)]
    for c in a.cond_live:
        inner = [
            f"G F ({vset(sources(h))}) -> G F ({_disj([edge(e) for e in sorted(h)])})"
            for h in c.groups
        ]
        body = inner[0] if len(inner) == 1 else " & ".join(f"({x})" for x in inner)
        parts.append(f"G F ({vset(c.condition)}) -> ({body})")
    if not parts:
        return "true"
    if len(parts) == 1:
        return parts[0]
    return " & ".join(f"({p})" for p in parts)


# -- witness enumeration ----------------------------------------------------

@dataclass
class Bounds:
    """Size limits of the exhaustive witness searches."""

    max_vertices: int = 10
    max_edges: int = 20


def enumerate_inf_edge_sets(G: GameGraph, start=None, bounds: Bounds | None = None) -> Iterator[InfEdgeSet]:
    """Every strongly connected edge set reachable from ``start``.

    Edge subsets of each strongly connected component are scanned
    exhaustively, so the component edge count is limited by ``bounds``.
    ``start`` may be a vertex, a collection of vertices, or ``None`` (all).
    """
    bounds = bounds or Bounds()
    if G.alive.sum() > bounds.max_vertices:
        raise ValueError(f"game has more than {bounds.max_vertices} vertices")
    g = nx.DiGraph()
    g.add_nodes_from(G.vertices())
    g.add_edges_from(G.edges())
    if start is None:
        reach = set(g.nodes)
    else:
        starts = [start] if isinstance(start, int) else list(start)
        reach = set(starts)
        for s in starts:
            reach |= nx.descendants(g, s)
    comps = sorted(sorted(c) for c in nx.strongly_connected_components(g))
    for comp in comps:
        if not reach & set(comp):
            continue
        members = set(comp)
        inner = sorted((u, v) for u, v in g.subgraph(comp).edges() if u in members)
        if len(inner) > bounds.max_edges:
            raise ValueError(f"component with more than {bounds.max_edges} edges")
        for size in range(1, len(inner) + 1):
            for subset in itertools.combinations(inner, size):
                if is_strongly_connected(subset):
                    yield InfEdgeSet(frozenset(subset), min(vertices_of(subset)))


def enumerate_witnesses(G: GameGraph, start: int, bounds: Bounds | None = None) -> Iterator[tuple[EdgeSet, InfEdgeSet]]:
    """Pairs (simple stem from ``start`` to the entry of ``F``, ``F``).

    The entry of ``F`` is its least vertex; every simple path from ``start``
    to it gives one witness (the empty stem when ``start`` is the entry).
    """
    g = nx.DiGraph()
    g.add_nodes_from(G.vertices())
    g.add_edges_from(G.edges())
    for inf in enumerate_inf_edge_sets(G, start, bounds):
        if inf.entry == start:
            yield frozenset(), inf
            continue
        seen = set()
        for path in nx.all_simple_paths(g, start, inf.entry):
            stem = frozenset(zip(path, path[1:]))
            if stem not in seen:
                seen.add(stem)
                yield stem, inf
