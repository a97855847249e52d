"""Simple undirected graphs on ``0..n-1`` stored as per-vertex bitsets.

Bit ``j`` of ``adj[i]`` is set iff ``i`` and ``j`` are adjacent.  Graphs are
immutable; operations return new graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .groups import AbelianGroup, ConnectionSet, GroupError


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class CayleySpec:
    group: AbelianGroup
    connection_set: ConnectionSet

    def to_json(self) -> dict:
        return {"kind": "cayley", "group": str(self.group), "connection_set": str(self.connection_set)}


@dataclass(frozen=True)
class CirculantSpec:
    n: int
    residues: tuple[int, ...]  # full inverse-closed set, sorted

    @property
    def cayley(self) -> CayleySpec:
        A = AbelianGroup.cyclic(self.n)
        return CayleySpec(A, ConnectionSet(A, frozenset((r,) for r in self.residues)))

    def to_json(self) -> dict:
        return {"kind": "circulant", "n": self.n, "residues": list(self.residues)}


@dataclass(frozen=True)
class FamilySpec:
    family: str
    param: int
    base: CayleySpec | CirculantSpec

    @property
    def cayley(self) -> CayleySpec:
        return self.base if isinstance(self.base, CayleySpec) else self.base.cayley

    def to_json(self) -> dict:
        return {"kind": "family", "family": self.family, "param": self.param, "base": self.base.to_json()}


@dataclass(frozen=True)
class AdHoc:
    label: str = ""

    def to_json(self) -> dict:
        return {"kind": "adhoc", "label": self.label}


Provenance = Union[CayleySpec, CirculantSpec, FamilySpec, AdHoc]


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    adj: tuple[int, ...]
    provenance: Provenance = field(default_factory=AdHoc)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"vertex {v} has a neighbour outside 0..{self.n - 1}")
            if row >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            r = row
            while r:
                low = r & -r
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric at edge {v}-{u}")
                r ^= low

    # -- construction ----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], provenance: Provenance | None = None) -> "Graph":
        adj = [0] * n
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), provenance or AdHoc())

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)), AdHoc(f"K{n}"))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)], AdHoc(f"C{n}"))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)], AdHoc(f"P{n}"))

    # -- queries ---------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and 0 <= v < self.n and bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        out = []
        for u, row in enumerate(self.adj):
            for v in bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    @property
    def cayley(self) -> CayleySpec | None:
        p = self.provenance
        if isinstance(p, CayleySpec):
            return p
        if isinstance(p, (CirculantSpec, FamilySpec)):
            return p.cayley
        return None

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]`` (provenance is dropped)."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()], AdHoc("relabeled"))

    def vertex_label(self, v: int) -> str:
        spec = self.cayley
        if spec is not None:
            return spec.group.format_element(spec.group.element(v))
        return str(v)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges}, provenance={self.provenance!r})"

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()], "provenance": self.provenance.to_json()}

    @classmethod
    def from_json(cls, data: dict | str) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(data["n"], data["edges"], _provenance_from_json(data.get("provenance")))

    def to_edgelist(self) -> str:
        lines = [f"{self.n} {self.num_edges}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str, label: str = "") -> "Graph":
        """Parse ``"n m\\nu v\\n..."``; blank lines and ``#`` comments are ignored."""
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append(line.split())
        if not rows:
            raise GraphError("empty edge list")
        try:
            header = [int(x) for x in rows[0]]
            body = [(int(r[0]), int(r[1])) for r in rows[1:]]
        except (ValueError, IndexError):
            raise GraphError("edge list must contain integer pairs") from None
        if len(header) != 2:
            raise GraphError("edge list header must be 'n m'")
        n, m = header
        if len(body) != m:
            raise GraphError(f"header announces {m} edges, found {len(body)}")
        return cls.from_edges(n, body, AdHoc(label))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.n):
            lines.append(f'  {v} [label="{self.vertex_label(v)}"];')
        for u, v in self.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _provenance_from_json(data: dict | None) -> Provenance:
    if not data:
        return AdHoc()
    kind = data.get("kind")
    if kind == "adhoc":
        return AdHoc(data.get("label", ""))
    if kind == "circulant":
        return CirculantSpec(int(data["n"]), tuple(sorted(int(r) for r in data["residues"])))
    if kind == "cayley":
        A = AbelianGroup.parse(data["group"])
        return CayleySpec(A, ConnectionSet.parse(A, data["connection_set"]))
    if kind == "family":
        base = _provenance_from_json(data["base"])
        return FamilySpec(data["family"], int(data["param"]), base)  # type: ignore[arg-type]
    raise GraphError(f"unknown provenance kind {kind!r}")


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# -- constructors ------------------------------------------------------------


def cayley_graph(A: AbelianGroup, S: ConnectionSet) -> Graph:
    """``Cay(A; S)``: vertex ``i`` is ``A.element(i)``; ``x ~ y`` iff ``y - x`` is in ``S``."""
    if S.group != A:
        raise GroupError(f"connection set belongs to {S.group}, not {A}")
    table = A.add_table
    s_idx = S.indices()
    adj = []
    for v in range(A.order):
        row = 0
        for s in s_idx:
            row |= 1 << table[v][s]
        adj.append(row)
    return Graph(A.order, tuple(adj), CayleySpec(A, S))


def circulant(n: int, residues: Iterable[int]) -> Graph:
    """``Circ(n; S)`` where ``S`` is closed under negation automatically."""
    if n < 1:
        raise GraphError(f"circulant order must be positive, got {n}")
    A = AbelianGroup.cyclic(n)
    if n == 1:
        raise GroupError("the trivial group has no non-identity elements")
    S = ConnectionSet.closed(A, [(r,) for r in residues])
    G = cayley_graph(A, S)
    return Graph(G.n, G.adj, CirculantSpec(n, tuple(sorted(x[0] for x in S.elements))))


# -- structural operations ---------------------------------------------------


def is_connected(G: Graph) -> bool:
    if G.n == 0:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= G.adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == G.full_mask


def components(G: Graph) -> list[list[int]]:
    left = G.full_mask
    out = []
    while left:
        start = left & -left
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= G.adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        out.append(bits(seen))
        left &= ~seen
    return out


def delete_vertices(G: Graph, W: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph on ``V - W`` and the list mapping new ids to old ids."""
    removed = mask_of(W)
    keep = [v for v in range(G.n) if not removed >> v & 1]
    new_id = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        row = 0
        for u in bits(G.adj[v] & ~removed):
            row |= 1 << new_id[u]
        adj.append(row)
    return Graph(len(keep), tuple(adj), AdHoc("induced")), keep


@dataclass(frozen=True)
class BipartiteGraph:
    """Left vertices ``0..n_left-1``; ``adj[i]`` is a bitset over right vertices."""

    n_left: int
    n_right: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n_left:
            raise GraphError("one adjacency row per left vertex required")
        full = (1 << self.n_right) - 1
        if any(row & ~full for row in self.adj):
            raise GraphError("edge to a right vertex out of range")

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.adj) for j in bits(row)]

    def right_adjacency(self) -> tuple[int, ...]:
        radj = [0] * self.n_right
        for i, row in enumerate(self.adj):
            for j in bits(row):
                radj[j] |= 1 << i
        return tuple(radj)

    def swapped(self) -> "BipartiteGraph":
        return BipartiteGraph(self.n_right, self.n_left, self.right_adjacency())


def bipartite_double_cover(G: Graph) -> BipartiteGraph:
    """Left copy ``v+`` and right copy ``v-`` of every vertex; ``uv`` gives ``u+v-`` and ``v+u-``."""
    return BipartiteGraph(G.n, G.n, G.adj)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for H in graphs:
        edges.extend((u + offset, v + offset) for u, v in H.edges())
        offset += H.n
    return Graph.from_edges(offset, edges)


def k4_bridge() -> Graph:
    """Two copies of ``K4`` joined by the single edge ``{3, 4}``."""
    edges = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    edges += [(u + 4, v + 4) for u, v in edges]
    edges.append((3, 4))
    return Graph.from_edges(8, edges, AdHoc("k4bridge"))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, AdHoc("petersen"))
