"""Fractional perfect matchings, perfect matchings and their certificates.

A graph has a fractional perfect matching exactly when its bipartite double
cover has a perfect matching.  That reduction drives everything here:

* a perfect matching of the double cover is a fixed-point-free permutation
  ``p`` with ``p(v)`` adjacent to ``v``; its cycles give a spanning
  edge / odd-cycle factor (the YES certificate);
* a minimum vertex cover of the double cover, halved, is a half-integral
  cover; its all-in and all-out vertices give an independent set ``I`` whose
  neighbourhood lies in a smaller set ``U`` (the NO certificate).

All fractional values are kept as integer counts of halves.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels
from .graphs import BipartiteGraph, Graph, bipartite_double_cover, bits, delete_vertices, mask_of

ORACLE_MAX_N = 20


class CertificateError(AssertionError):
    """A certificate failed independent re-validation."""


class ContractViolation(ValueError):
    """An operation was called outside its precondition."""


class BudgetExceeded(ValueError):
    """Exhaustive oracle asked to scan a graph beyond its size cap."""


Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class MatchingSpec:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(_edge(int(u), int(v)) for u, v in self.edges)))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    @property
    def vertices(self) -> list[int]:
        return sorted(v for e in self.edges for v in e)

    def validate(self, G: Graph) -> None:
        seen = set()
        for u, v in self.edges:
            if not G.has_edge(u, v):
                raise CertificateError(f"{u}-{v} is not an edge")
            if u in seen or v in seen:
                raise CertificateError(f"matching edges share a vertex at {u}-{v}")
            seen.update((u, v))

    def to_json(self) -> list:
        return [list(e) for e in self.edges]

    @classmethod
    def from_json(cls, data) -> "MatchingSpec":
        return cls(tuple(tuple(e) for e in data))


@dataclass(frozen=True)
class HalfIntegralAssignment:
    """Edge values in units of halves: 0, 1 (= 1/2) or 2 (= 1)."""

    values: dict[Edge, int]

    def vertex_sums(self, n: int) -> list[int]:
        sums = [0] * n
        for (u, v), x in self.values.items():
            sums[u] += x
            sums[v] += x
        return sums

    def is_perfect(self, n: int) -> bool:
        return all(s == 2 for s in self.vertex_sums(n))

    def value(self, u: int, v: int) -> Fraction:
        return Fraction(self.values.get(_edge(u, v), 0), 2)

    def validate(self, G: Graph, perfect: bool = True) -> None:
        for (u, v), x in self.values.items():
            if not G.has_edge(u, v):
                raise CertificateError(f"assignment on non-edge {u}-{v}")
            if x not in (0, 1, 2):
                raise CertificateError(f"value {x}/2 on {u}-{v} not in {{0, 1/2, 1}}")
        for v, s in enumerate(self.vertex_sums(G.n)):
            if s > 2 or (perfect and s != 2):
                raise CertificateError(f"vertex {v} has incident sum {s}/2")

    def to_json(self) -> dict:
        return {"halves": [[u, v, x] for (u, v), x in sorted(self.values.items()) if x]}


@dataclass(frozen=True)
class EdgeOddCycleFactor:
    """Spanning subgraph whose components are single edges or odd cycles."""

    matched_edges: tuple[Edge, ...]
    odd_cycles: tuple[tuple[int, ...], ...]

    def assignment(self, G: Graph) -> HalfIntegralAssignment:
        values = {e: 0 for e in G.edges()}
        for u, v in self.matched_edges:
            values[_edge(u, v)] = 2
        for cyc in self.odd_cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                values[_edge(a, b)] = 1
        return HalfIntegralAssignment(values)

    def validate(self, G: Graph, forced: Iterable[Sequence[int]] = ()) -> None:
        covered: set[int] = set()

        def claim(v: int) -> None:
            if not 0 <= v < G.n:
                raise CertificateError(f"vertex {v} out of range")
            if v in covered:
                raise CertificateError(f"vertex {v} used twice")
            covered.add(v)

        for u, v in self.matched_edges:
            if not G.has_edge(u, v):
                raise CertificateError(f"{u}-{v} is not an edge")
            claim(u)
            claim(v)
        for cyc in self.odd_cycles:
            if len(cyc) < 3 or len(cyc) % 2 == 0:
                raise CertificateError(f"cycle {cyc} is not an odd cycle")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if not G.has_edge(a, b):
                    raise CertificateError(f"cycle {cyc} uses non-edge {a}-{b}")
            for v in cyc:
                claim(v)
        if len(covered) != G.n:
            raise CertificateError(f"factor misses vertices {sorted(set(range(G.n)) - covered)}")
        matched = {_edge(u, v) for u, v in self.matched_edges}
        for e in forced:
            if _edge(*e) not in matched:
                raise CertificateError(f"forced edge {tuple(e)} not among matched edges")
        self.assignment(G).validate(G, perfect=True)

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.matched_edges], "odd_cycles": [list(c) for c in self.odd_cycles]}

    @classmethod
    def from_json(cls, data: dict | str) -> "EdgeOddCycleFactor":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(tuple(e) for e in data["edges"]), tuple(tuple(c) for c in data["odd_cycles"]))


@dataclass(frozen=True)
class DeficiencyWitness:
    """``I`` independent, ``N(I)`` inside ``U``, ``|I| > |U|``: no fractional perfect matching."""

    independent: tuple[int, ...]
    blocker: tuple[int, ...]

    @property
    def deficiency(self) -> int:
        return len(self.independent) - len(self.blocker)

    def validate(self, G: Graph) -> None:
        I = mask_of(self.independent)
        U = mask_of(self.blocker)
        if len(set(self.independent)) != len(self.independent) or len(set(self.blocker)) != len(self.blocker):
            raise CertificateError("witness sets contain duplicates")
        if any(not 0 <= v < G.n for v in self.independent + self.blocker):
            raise CertificateError("witness vertex out of range")
        if I & U:
            raise CertificateError("I and U intersect")
        for v in self.independent:
            if G.adj[v] & I:
                raise CertificateError(f"I is not independent at vertex {v}")
            if G.adj[v] & ~U:
                raise CertificateError(f"vertex {v} of I has a neighbour outside U")
        if len(self.independent) <= len(self.blocker):
            raise CertificateError(f"|I| = {len(self.independent)} is not larger than |U| = {len(self.blocker)}")

    def relabel(self, ids: Sequence[int]) -> "DeficiencyWitness":
        return DeficiencyWitness(tuple(sorted(ids[v] for v in self.independent)), tuple(sorted(ids[v] for v in self.blocker)))

    def to_json(self) -> dict:
        return {"I": list(self.independent), "U": list(self.blocker)}

    @classmethod
    def from_json(cls, data: dict | str) -> "DeficiencyWitness":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["I"]), tuple(data["U"]))


class NotExtendable(Exception):
    """No fractional perfect matching uses the forced edges; carries the witness for ``G - V(forced)``."""

    def __init__(self, witness: DeficiencyWitness, forced: MatchingSpec):
        super().__init__(f"forced edges {forced.edges} do not extend: {witness.to_json()}")
        self.witness = witness
        self.forced = forced


@dataclass(frozen=True)
class FpmCertificate:
    factor: EdgeOddCycleFactor
    assignment: HalfIntegralAssignment

    def to_json(self) -> dict:
        return {"factor": self.factor.to_json(), "assignment": self.assignment.to_json()}


# -- bipartite matching ------------------------------------------------------


def max_bipartite_matching(B: BipartiteGraph) -> tuple[list[int], int]:
    """Hopcroft-Karp.  Returns ``(match_left, size)``; ``match_left[i]`` is a right vertex or -1."""
    match_l = [-1] * B.n_left
    match_r = [-1] * B.n_right
    inf = B.n_left + B.n_right + 1
    dist = [0] * B.n_left

    def bfs() -> bool:
        queue = deque()
        for i in range(B.n_left):
            if match_l[i] == -1:
                dist[i] = 0
                queue.append(i)
            else:
                dist[i] = inf
        found = False
        while queue:
            i = queue.popleft()
            for j in bits(B.adj[i]):
                k = match_r[j]
                if k == -1:
                    found = True
                elif dist[k] == inf:
                    dist[k] = dist[i] + 1
                    queue.append(k)
        return found

    def dfs(i: int) -> bool:
        for j in bits(B.adj[i]):
            k = match_r[j]
            if k == -1 or (dist[k] == dist[i] + 1 and dfs(k)):
                match_l[i] = j
                match_r[j] = i
                return True
        dist[i] = inf
        return False

    size = 0
    while bfs():
        for i in range(B.n_left):
            if match_l[i] == -1 and dfs(i):
                size += 1
    return match_l, size


def koenig_cover(B: BipartiteGraph, match_left: Sequence[int]) -> tuple[list[int], list[int]]:
    """Minimum vertex cover ``(left, right)`` from a maximum matching.

    ``Z`` = vertices reachable from exposed left vertices by alternating paths;
    the cover is ``(L - Z) + (R & Z)``.
    """
    match_r = [-1] * B.n_right
    for i, j in enumerate(match_left):
        if j != -1:
            match_r[j] = i
    seen_l = [match_left[i] == -1 for i in range(B.n_left)]
    seen_r = [False] * B.n_right
    queue = deque(i for i in range(B.n_left) if seen_l[i])
    while queue:
        i = queue.popleft()
        for j in bits(B.adj[i]):
            if seen_r[j] or match_left[i] == j:
                continue
            seen_r[j] = True
            k = match_r[j]
            if k != -1 and not seen_l[k]:
                seen_l[k] = True
                queue.append(k)
    left = [i for i in range(B.n_left) if not seen_l[i]]
    right = [j for j in range(B.n_right) if seen_r[j]]
    return left, right


def check_vertex_cover(B: BipartiteGraph, left: Iterable[int], right: Iterable[int]) -> bool:
    L = mask_of(left)
    R = mask_of(right)
    return all(L >> i & 1 or not (row & ~R) for i, row in enumerate(B.adj))


# -- fractional perfect matching ---------------------------------------------


def has_fpm(G: Graph) -> bool:
    return kernels.fpm_exists(G.adj, G.full_mask)


def nu_fractional(G: Graph) -> Fraction:
    """Fractional matching number: half the maximum matching size of the double cover."""
    _, size = max_bipartite_matching(bipartite_double_cover(G))
    return Fraction(size, 2)


def _factor_from_permutation(succ: Sequence[int]) -> tuple[list[Edge], list[tuple[int, ...]]]:
    n = len(succ)
    done = [False] * n
    edges: list[Edge] = []
    cycles: list[tuple[int, ...]] = []
    for start in range(n):
        if done[start]:
            continue
        orbit = [start]
        done[start] = True
        v = succ[start]
        while v != start:
            orbit.append(v)
            done[v] = True
            v = succ[v]
        # start is the least vertex of its orbit since we scan in increasing order
        if len(orbit) % 2 == 0:
            edges.extend(_edge(orbit[i], orbit[i + 1]) for i in range(0, len(orbit), 2))
        else:
            if orbit[1] > orbit[-1]:
                orbit = [orbit[0]] + orbit[1:][::-1]
            cycles.append(tuple(orbit))
    return edges, cycles


def fpm_yes_witness(G: Graph, forced: MatchingSpec | Iterable[Sequence[int]] = ()) -> FpmCertificate:
    """Edge / odd-cycle factor of ``G`` containing every forced edge, plus its half-integral assignment.

    Raises :class:`NotExtendable` (with a validated :class:`DeficiencyWitness`
    of ``G - V(forced)`` in original labels) when no such factor exists.
    """
    forced = forced if isinstance(forced, MatchingSpec) else MatchingSpec(tuple(tuple(e) for e in forced))
    forced.validate(G)
    H, ids = delete_vertices(G, forced.vertices)
    match_l, size = max_bipartite_matching(bipartite_double_cover(H))
    if size < H.n:
        witness = _witness_from_cover(H, match_l).relabel(ids)
        witness.validate(_minus(G, forced.vertices))
        raise NotExtendable(witness, forced)
    edges, cycles = _factor_from_permutation(match_l)
    edges = sorted(list(forced.edges) + [_edge(ids[u], ids[v]) for u, v in edges])
    cycles = sorted(tuple(ids[v] for v in c) for c in cycles)
    factor = EdgeOddCycleFactor(tuple(edges), tuple(cycles))
    factor.validate(G, forced.edges)
    return FpmCertificate(factor, factor.assignment(G))


def _minus(G: Graph, W: Iterable[int]) -> Graph:
    """``G`` with every edge at ``W`` removed but vertex ids kept (for validating relabelled witnesses)."""
    drop = mask_of(W)
    return Graph(G.n, tuple(0 if drop >> v & 1 else row & ~drop for v, row in enumerate(G.adj)))


def _witness_from_cover(G: Graph, match_l: Sequence[int]) -> DeficiencyWitness:
    B = bipartite_double_cover(G)
    left, right = koenig_cover(B, match_l)
    in_left = mask_of(left)
    in_right = mask_of(right)
    U = tuple(v for v in range(G.n) if in_left >> v & 1 and in_right >> v & 1)
    I = tuple(v for v in range(G.n) if not in_left >> v & 1 and not in_right >> v & 1)
    return DeficiencyWitness(I, U)


def fpm_no_witness(G: Graph) -> DeficiencyWitness:
    """Validated deficiency witness; raises :class:`ContractViolation` if ``G`` has a fractional perfect matching."""
    match_l, size = max_bipartite_matching(bipartite_double_cover(G))
    if size == G.n:
        raise ContractViolation("graph has a fractional perfect matching; no deficiency witness exists")
    witness = _witness_from_cover(G, match_l)
    witness.validate(G)
    return witness


def fpm_oracle(G: Graph, max_n: int = ORACLE_MAX_N) -> bool:
    """Ground truth by scanning every ``U``: ``G - U`` may have at most ``|U|`` isolated vertices."""
    if G.n > max_n:
        raise BudgetExceeded(f"fpm_oracle limited to {max_n} vertices, got {G.n}")
    n = G.n
    adj = G.adj
    full = (1 << n) - 1
    for U in range(1 << n):
        size = U.bit_count()
        isolated = 0
        rest = full & ~U
        while rest:
            low = rest & -rest
            rest ^= low
            if not adj[low.bit_length() - 1] & ~U:
                isolated += 1
        if isolated > size:
            return False
    return True


# -- perfect matching ----------------------------------------------------------


def maximum_matching(G: Graph) -> MatchingSpec:
    mate = kernels.max_matching(G.adj, G.full_mask)
    return MatchingSpec(tuple((v, mate[v]) for v in range(G.n) if mate[v] > v))


def has_perfect_matching(G: Graph) -> MatchingSpec | None:
    """A perfect matching (blossom algorithm) or ``None``."""
    if G.n % 2:
        return None
    M = maximum_matching(G)
    if 2 * len(M) != G.n:
        return None
    M.validate(G)
    return M


def pm_oracle(G: Graph, max_n: int = ORACLE_MAX_N) -> bool:
    """Exhaustive search: match the least uncovered vertex every possible way."""
    if G.n > max_n:
        raise BudgetExceeded(f"pm_oracle limited to {max_n} vertices, got {G.n}")
    adj = G.adj
    memo: dict[int, bool] = {}

    def rec(alive: int) -> bool:
        if not alive:
            return True
        if alive in memo:
            return memo[alive]
        low = alive & -alive
        v = low.bit_length() - 1
        rest = alive ^ low
        ok = False
        cand = adj[v] & rest
        while cand and not ok:
            b = cand & -cand
            cand ^= b
            ok = rec(rest ^ b)
        memo[alive] = ok
        return ok

    return rec(G.full_mask)
