"""Two-player turn-based game graphs with priorities.

Vertices keep their global ids under restriction: a restricted graph marks the
removed vertices dead instead of renumbering, so every edge set computed on a
subgame is reported in the coordinates of the input graph.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

P0 = 0
P1 = 1

Edge = tuple[int, int]
VertexSet = frozenset  # frozenset[int]; sort before iterating when order matters
EdgeSet = frozenset  # frozenset[tuple[int, int]]


class GameParseError(ValueError):
    """Raised for malformed pgsolver input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class GameGraph:
    """Immutable game graph in CSR form.

    ``indices[indptr[v]:indptr[v + 1]]`` are the successors of ``v`` in
    ascending order. Dead vertices have no edges and no edge points to them.
    """

    owner: np.ndarray
    priority: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    alive: np.ndarray
    names: tuple | None = None

    # -- construction -----------------------------------------------------

    @classmethod
    def build(
        cls,
        owner: Sequence[int],
        priority: Sequence[int],
        successors: Sequence[Iterable[int]],
        alive: Sequence[bool] | None = None,
        names: Sequence[str | None] | None = None,
    ) -> GameGraph:
        n = len(owner)
        if len(priority) != n or len(successors) != n:
            raise ValueError("owner, priority and successors must have equal length")
        alive_arr = np.ones(n, dtype=bool) if alive is None else np.array(alive, dtype=bool)
        rows = []
        for v, succ in enumerate(successors):
            row = sorted(succ)
            if len(set(row)) != len(row):
                raise ValueError(f"duplicate successor of vertex {v}")
            for w in row:
                if not 0 <= w < n:
                    raise ValueError(f"successor {w} of vertex {v} out of range")
                if not (alive_arr[v] and alive_arr[w]):
                    raise ValueError(f"edge ({v},{w}) touches a dead vertex")
            rows.append(row)
        own = np.array(owner, dtype=np.int8)
        if own.size and not np.isin(own, (P0, P1)).all():
            raise ValueError("owner must be 0 or 1")
        prio = np.array(priority, dtype=np.int64)
        if prio.size and prio.min() < 0:
            raise ValueError("priorities must be natural numbers")
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(r) for r in rows])
        indices = np.array([w for r in rows for w in r], dtype=np.int64)
        if names is not None:
            names = tuple(names)
            if len(names) != n:
                raise ValueError("names must have one entry per vertex")
        return cls._from_arrays(own, prio, indptr, indices, alive_arr, names)

    @classmethod
    def _from_arrays(cls, owner, priority, indptr, indices, alive, names=None) -> GameGraph:
        for arr in (owner, priority, indptr, indices, alive):
            arr.setflags(write=False)
        return cls(owner, priority, indptr, indices, alive, names)

    # -- basic queries ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.owner)

    @property
    def m(self) -> int:
        return len(self.indices)

    def succ(self, v: int) -> tuple[int, ...]:
        return tuple(self.indices[self.indptr[v]:self.indptr[v + 1]].tolist())

    def vertices(self) -> list[int]:
        return np.flatnonzero(self.alive).tolist()

    def edges(self) -> list[Edge]:
        return list(zip(self.edge_src.tolist(), self.indices.tolist()))

    def has_edge(self, u: int, v: int) -> bool:
        row = self.indices[self.indptr[u]:self.indptr[u + 1]]
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def label(self, v: int) -> str:
        if self.names is not None and self.names[v]:
            return self.names[v]
        return f"v{v}"

    def vertex_id(self, token: str) -> int:
        """Resolve a vertex given as an id or as a name."""
        token = token.strip()
        if re.fullmatch(r"\d+", token):
            v = int(token)
        else:
            labels = [self.label(u) for u in range(self.n)]
            if token not in labels:
                raise ValueError(f"unknown vertex {token!r}")
            v = labels.index(token)
        if not (0 <= v < self.n and self.alive[v]):
            raise ValueError(f"vertex {token} out of range")
        return v

    # -- derived arrays ---------------------------------------------------

    @cached_property
    def edge_src(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))

    @cached_property
    def outdeg(self) -> np.ndarray:
        return np.diff(self.indptr).astype(np.int32)

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        data = np.ones(self.m, dtype=np.int32)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def is_p1(self) -> np.ndarray:
        return self.owner == P1

    @cached_property
    def is_p0(self) -> np.ndarray:
        return self.alive & (self.owner == P0)

    @cached_property
    def has_succ(self) -> np.ndarray:
        return self.outdeg > 0

    @cached_property
    def preds(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges():
            out[v].append(u)
        return out

    @cached_property
    def pred_bits(self) -> tuple[int, ...]:
        """Predecessors of each vertex as an integer bitset."""
        return tuple(sum(1 << u for u in ps) for ps in self.preds)

    def mask(self, vertices) -> np.ndarray:
        """Boolean membership mask of a vertex collection (or a mask)."""
        if isinstance(vertices, np.ndarray) and vertices.dtype == bool:
            if vertices.shape != (self.n,):
                raise ValueError("mask has wrong length")
            return vertices.copy()
        out = np.zeros(self.n, dtype=bool)
        ids = list(vertices)
        if ids:
            arr = np.array(ids, dtype=np.int64)
            if arr.min() < 0 or arr.max() >= self.n:
                raise ValueError("vertex id out of range")
            out[arr] = True
        return out

    # -- restriction ------------------------------------------------------

    def restrict(self, vertices) -> GameGraph:
        """The subgame on ``vertices``; everything else is marked dead."""
        keep = self.mask(vertices) & self.alive
        edge_keep = keep[self.edge_src] & keep[self.indices]
        counts = np.bincount(self.edge_src[edge_keep], minlength=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(counts)
        return GameGraph._from_arrays(
            self.owner, self.priority, indptr, self.indices[edge_keep].copy(), keep, self.names
        )

    def with_priority(self, priority) -> GameGraph:
        prio = np.array(priority, dtype=np.int64)
        if prio.shape != (self.n,):
            raise ValueError("priority has wrong length")
        return GameGraph._from_arrays(
            self.owner, prio, self.indptr, self.indices, self.alive, self.names
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GameGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.owner, other.owner)
            and np.array_equal(self.priority, other.priority)
            and np.array_equal(self.alive, other.alive)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"GameGraph(n={self.n}, m={self.m}, alive={int(self.alive.sum())})"


def to_set(mask: np.ndarray) -> VertexSet:
    return frozenset(np.flatnonzero(mask).tolist())


def restrict(G: GameGraph, U) -> GameGraph:
    return G.restrict(U)


def restrict_priorities(priority, U) -> dict[int, int]:
    """Project a priority function (array or mapping) onto ``U``."""
    if isinstance(priority, Mapping):
        return {v: int(priority[v]) for v in sorted(U) if v in priority}
    return {v: int(priority[v]) for v in sorted(U)}


# -- pgsolver format --------------------------------------------------------

_HEADER = re.compile(r"parity\s+(\d+)\s*;")
_START = re.compile(r"start\s+(\d+)\s*;")
_VERTEX = re.compile(
    r"(\d+)\s+(\d+)\s+(\d+)"  # id priority owner
    r"(?:\s+(\d+(?:\s*,\s*\d+)*))?"  # successors
    r"(?:\s+\"([^\"]*)\")?"  # optional name
    r"\s*;"
)
_SPACE = re.compile(r"(?:\s+|#[^\n]*)+")


def parse_pgsolver(text: str) -> GameGraph:
    """Parse a game in pgsolver format.

    Statements end with ``;`` and may share a line. Vertices not declared are
    absent from the game; referencing one as a successor is an error.
    """
    pos = 0

    def skip(p: int) -> int:
        mt = _SPACE.match(text, p)
        return mt.end() if mt else p

    def line_of(p: int) -> int:
        return text.count("\n", 0, p) + 1

    pos = skip(pos)
    mt = _HEADER.match(text, pos)
    if not mt:
        raise GameParseError("expected 'parity <maxid>;' header", line_of(pos))
    n = int(mt.group(1)) + 1
    pos = skip(mt.end())
    mt = _START.match(text, pos)
    if mt:
        pos = skip(mt.end())

    owner = [0] * n
    priority = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    names: list[str | None] = [None] * n
    declared = [False] * n
    decl_line = [0] * n
    while pos < len(text):
        mt = _VERTEX.match(text, pos)
        line = line_of(pos)
        if not mt:
            raise GameParseError("malformed vertex statement", line)
        v, prio, own = int(mt.group(1)), int(mt.group(2)), int(mt.group(3))
        if v >= n:
            raise GameParseError(f"vertex id {v} exceeds declared maximum {n - 1}", line)
        if own not in (0, 1):
            raise GameParseError(f"owner of vertex {v} must be 0 or 1", line)
        if declared[v]:
            raise GameParseError(f"duplicate vertex id {v}", line)
        if mt.group(4) is None:
            raise GameParseError(f"vertex {v} is a dead end", line)
        targets = [int(t) for t in mt.group(4).split(",")]
        if len(set(targets)) != len(targets):
            raise GameParseError(f"duplicate successor of vertex {v}", line)
        declared[v] = True
        decl_line[v] = line
        owner[v], priority[v], succ[v], names[v] = own, prio, targets, mt.group(5)
        pos = skip(mt.end())

    for v in range(n):
        for w in succ[v]:
            if w >= n or not declared[w]:
                raise GameParseError(f"vertex {v} has undeclared successor {w}", decl_line[v])
    return GameGraph.build(
        owner, priority, succ, alive=declared, names=names if any(names) else None
    )


def serialize_pgsolver(G: GameGraph) -> str:
    lines = [f"parity {G.n - 1};"]
    for v in G.vertices():
        succ = ",".join(str(w) for w in G.succ(v))
        name = f' "{G.names[v]}"' if G.names is not None and G.names[v] else ""
        lines.append(f"{v} {int(G.priority[v])} {int(G.owner[v])} {succ}{name};")
    return "\n".join(lines) + "\n"


def graph_to_json(G: GameGraph) -> dict:
    vertices = []
    for v in G.vertices():
        entry = {
            "id": v,
            "owner": int(G.owner[v]),
            "priority": int(G.priority[v]),
            "succ": list(G.succ(v)),
        }
        if G.names is not None and G.names[v]:
            entry["name"] = G.names[v]
        vertices.append(entry)
    return {"vertices": vertices}


def graph_from_json(data: dict) -> GameGraph:
    items = data["vertices"]
    n = max((item["id"] for item in items), default=-1) + 1
    owner, priority = [0] * n, [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    names: list[str | None] = [None] * n
    alive = [False] * n
    for item in items:
        v = item["id"]
        alive[v] = True
        owner[v], priority[v] = item["owner"], item["priority"]
        succ[v] = list(item["succ"])
        names[v] = item.get("name")
    return GameGraph.build(owner, priority, succ, alive=alive, names=names if any(names) else None)
