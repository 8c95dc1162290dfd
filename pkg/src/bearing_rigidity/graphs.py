"""Sensing graphs and their incidence matrices.

Vertices are numbered 1..n. An edge (i, j) points from its head i (the agent
taking the measurement) to its tail j (the agent being measured). Three kinds
are supported:

* ``undirected``  -- measurement direction irrelevant; edges stored (min, max)
* ``directed``    -- arbitrary ordered pairs, (i, j) and (j, i) may coexist
* ``oriented``    -- one direction chosen per undirected pair, stored head < tail

Edge lists are canonicalized to lexicographic order on construction, so edge
label k always refers to the k-th pair in that order. Row blocks of every
matrix built downstream follow the same order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

GRAPH_KINDS = ("undirected", "directed", "oriented")


@dataclass(frozen=True)
class SensingGraph:
    """Vertex count, edge list and kind. Immutable after construction."""

    n: int
    edges: tuple[tuple[int, int], ...]
    kind: str = "directed"

    def __post_init__(self) -> None:
        if self.kind not in GRAPH_KINDS:
            raise ValidationError(f"unknown graph kind {self.kind!r}")
        if not isinstance(self.n, int) or self.n < 3:
            raise ValidationError(f"vertex count must be an integer >= 3, got {self.n!r}")
        canon = []
        for e in self.edges:
            if len(e) != 2:
                raise ValidationError(f"edge {e!r} is not a pair")
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValidationError(f"self loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValidationError(f"edge ({i}, {j}) out of range 1..{self.n}")
            if self.kind == "undirected":
                canon.append((min(i, j), max(i, j)))
            elif self.kind == "oriented":
                if i > j:
                    raise ValidationError(
                        f"oriented edges are stored head < tail, got ({i}, {j})"
                    )
                canon.append((i, j))
            else:
                canon.append((i, j))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValidationError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_index(self) -> dict[tuple[int, int], int]:
        """Edge pair -> canonical label in 0..m-1."""
        return {e: k for k, e in enumerate(self.edges)}


def complete_edges(n: int, kind: str) -> tuple[tuple[int, int], ...]:
    """All edges of the complete graph on n vertices, canonical order."""
    if kind == "directed":
        return tuple((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


def complete_graph(g: SensingGraph) -> SensingGraph:
    """Complete graph on the same vertex set, same kind."""
    return SensingGraph(g.n, complete_edges(g.n, g.kind), g.kind)


def orient(g: SensingGraph) -> SensingGraph:
    """Orientation of an undirected graph: each pair gets the head < tail direction.

    Oriented input is returned unchanged; directed input is rejected because
    collapsing a genuinely directed edge set would silently drop measurements.
    """
    if g.kind == "oriented":
        return g
    if g.kind != "undirected":
        raise ValidationError("orient expects an undirected graph")
    return SensingGraph(g.n, g.edges, "oriented")


@dataclass(frozen=True)
class IncidenceMatrices:
    """Incidence matrix E, its outgoing part, and their d-dimensional liftings.

    E is n x m with E[i, k] = -1 when edge k leaves vertex i+1 (head) and +1
    when it enters (tail). E_out keeps only the -1 entries. The lifted forms
    replace every entry by entry * I_d.
    """

    E: np.ndarray
    E_out: np.ndarray
    Ebar: np.ndarray
    Ebar_out: np.ndarray
    d: int


def incidence_matrices(g: SensingGraph, d: int) -> IncidenceMatrices:
    """Build incidence matrices for a directed or oriented graph.

    Undirected graphs carry no edge directions, so they are rejected; call
    orient() first.
    """
    if g.kind == "undirected":
        raise ValidationError("incidence matrices need edge directions; orient() first")
    if d < 1:
        raise ValidationError(f"dimension must be positive, got {d}")
    E = np.zeros((g.n, g.m))
    for k, (i, j) in enumerate(g.edges):
        E[i - 1, k] = -1.0
        E[j - 1, k] = 1.0
    E_out = np.where(E < 0, E, 0.0)
    eye = np.eye(d)
    return IncidenceMatrices(E=E, E_out=E_out, Ebar=np.kron(E, eye),
                             Ebar_out=np.kron(E_out, eye), d=d)


def connected_components(g: SensingGraph) -> list[set[int]]:
    """Weakly connected components (edge directions ignored), as vertex sets."""
    adj: dict[int, set[int]] = {v: set() for v in range(1, g.n + 1)}
    for i, j in g.edges:
        adj[i].add(j)
        adj[j].add(i)
    seen: set[int] = set()
    comps = []
    for v in range(1, g.n + 1):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def is_connected(g: SensingGraph) -> bool:
    return len(connected_components(g)) == 1
