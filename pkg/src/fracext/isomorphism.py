"""Exact isomorphism testing for small graphs by backtracking.

Vertices are first coloured by cheap invariants (degree, triangles through the
vertex, common-neighbour counts) and the colouring is refined to a stable
partition over both graphs at once.  The search then maps vertices of ``G`` in
BFS order onto same-coloured vertices of ``H`` and checks adjacency to every
vertex mapped so far.
"""

from __future__ import annotations

import math

from .graphs import Graph, bits

DEFAULT_ISO_CAP = 64


class IsoBudgetExceeded(RuntimeError):
    """Graph too large for the exact engine; no answer is guessed."""


def _initial_colours(G: Graph) -> list[tuple]:
    adj = G.adj
    out = []
    for v in range(G.n):
        nb = adj[v]
        common_nb = []
        common_non = []
        for u in range(G.n):
            if u == v:
                continue
            c = (adj[u] & nb).bit_count()
            (common_nb if nb >> u & 1 else common_non).append(c)
        triangles = sum(common_nb) // 2
        out.append((nb.bit_count(), triangles, tuple(sorted(common_nb)), tuple(sorted(common_non))))
    return out


def _refine(graphs: list[Graph], colours: list[list]) -> list[list[int]]:
    """Colour refinement run jointly so that colour ids are comparable across graphs."""
    palette: dict = {}
    cur = []
    for c in colours:
        cur.append([palette.setdefault(x, len(palette)) for x in c])
    while True:
        palette = {}
        nxt = []
        for G, col in zip(graphs, cur):
            row = []
            for v in range(G.n):
                sig = (col[v], tuple(sorted(col[u] for u in bits(G.adj[v]))))
                row.append(palette.setdefault(sig, len(palette)))
            nxt.append(row)
        if len(palette) == len({c for row in cur for c in row}):
            return nxt
        cur = nxt


def invariants_match(G: Graph, H: Graph) -> bool:
    if G.n != H.n or G.num_edges != H.num_edges:
        return False
    return sorted(G.degrees()) == sorted(H.degrees())


def are_isomorphic(G: Graph, H: Graph, max_n: int = DEFAULT_ISO_CAP) -> list[int] | None:
    """A bijection ``phi`` with ``u ~ v`` in ``G`` iff ``phi[u] ~ phi[v]`` in ``H``, or ``None``.

    Raises :class:`IsoBudgetExceeded` if either graph has more than ``max_n`` vertices.
    """
    if max(G.n, H.n) > max_n:
        raise IsoBudgetExceeded(f"order {max(G.n, H.n)} exceeds isomorphism cap {max_n}")
    if not invariants_match(G, H):
        return None
    n = G.n
    if n == 0:
        return []
    cg, ch = _refine([G, H], [_initial_colours(G), _initial_colours(H)])
    if sorted(cg) != sorted(ch):
        return None

    # BFS order inside each component, components started from the rarest colour
    freq: dict[int, int] = {}
    for c in cg:
        freq[c] = freq.get(c, 0) + 1
    order: list[int] = []
    placed = 0
    while len(order) < n:
        start = min((v for v in range(n) if not placed >> v & 1), key=lambda v: (freq[cg[v]], v))
        placed |= 1 << start
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(bits(G.adj[v] & ~placed), key=lambda u: (freq[cg[u]], u)):
                placed |= 1 << u
                queue.append(u)

    by_colour: dict[int, list[int]] = {}
    for w in range(n):
        by_colour.setdefault(ch[w], []).append(w)

    gadj, hadj = G.adj, H.adj
    phi = [-1] * n
    used = 0
    mapped_g = 0  # bitset of G vertices already mapped

    def candidates(v: int) -> list[int]:
        # a vertex with an already-mapped neighbour must go to a neighbour of its image
        prior = gadj[v] & mapped_g
        if prior:
            anchor = phi[(prior & -prior).bit_length() - 1]
            return [w for w in bits(hadj[anchor] & ~used) if ch[w] == cg[v]]
        return [w for w in by_colour[cg[v]] if not used >> w & 1]

    def image_mask(mask: int) -> int:
        out = 0
        for u in bits(mask):
            out |= 1 << phi[u]
        return out

    def search(k: int) -> bool:
        nonlocal used, mapped_g
        if k == n:
            return True
        v = order[k]
        want = image_mask(gadj[v] & mapped_g)
        for w in candidates(v):
            if hadj[w] & used != want:
                continue
            phi[v] = w
            used |= 1 << w
            mapped_g |= 1 << v
            if search(k + 1):
                return True
            used &= ~(1 << w)
            mapped_g &= ~(1 << v)
            phi[v] = -1
        return False

    if search(0):
        return phi
    return None


def check_isomorphism(G: Graph, H: Graph, phi: list[int]) -> bool:
    """Edge-by-edge validation of a claimed isomorphism ``G -> H``."""
    if G.n != H.n or sorted(phi) != list(range(G.n)):
        return False
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if G.has_edge(u, v) != H.has_edge(phi[u], phi[v]):
                return False
    return True


def multiplier_equivalent(n: int, S: set[int], T: set[int]) -> int | None:
    """A unit ``k`` of ``Z_n`` with ``k*S == T`` (so ``v -> k*v`` maps Circ(n,S) onto Circ(n,T))."""
    S = {s % n for s in S}
    T = {t % n for t in T}
    if len(S) != len(T):
        return None
    for k in range(1, n):
        if math.gcd(k, n) == 1 and {k * s % n for s in S} == T:
            return k
    return None
