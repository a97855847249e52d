"""Fractional, classical and near (t + 1/2) extendability of matchings.

The heavy loop (enumerate size-``t`` matchings, delete their endpoints, test
the rest) runs in the kernels.  Python only builds edge lists, picks the
symmetry reduction and turns a failing matching into a certificate.

For Cayley graphs of Abelian groups, translations and inversion ``x -> -x``
are automorphisms, so every matching of size ``t`` is equivalent to one whose
first edge is ``{0, s}`` with ``s`` taken from one element of each ``{s, -s}``
pair.  That is the only symmetry used.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Iterator

from . import kernels
from .graphs import Graph, delete_vertices
from .matching import (
    CertificateError,
    DeficiencyWitness,
    MatchingSpec,
    fpm_no_witness,
    has_perfect_matching,
)

DEFAULT_T_CAP = 3


class Mode(str, enum.Enum):
    FRACTIONAL = "fractional"
    CLASSICAL = "classical"
    NEAR_HALF = "near_half"


@dataclass
class Counterexample:
    matching: MatchingSpec
    witness: DeficiencyWitness | None = None  # for fractional failures
    deleted_vertex: int | None = None  # for near-extendability failures
    failure: str = "no_fpm"  # "no_fpm" | "no_pm"

    def to_json(self) -> dict:
        out: dict = {"matching": self.matching.to_json(), "failure": self.failure}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.deleted_vertex is not None:
            out["deleted_vertex"] = self.deleted_vertex
        return out


@dataclass
class ExtendabilityReport:
    graph: Graph
    t: int
    mode: Mode
    verdict: bool
    reason: str | None = None
    counterexample: Counterexample | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "graph": self.graph.to_json(),
            "t": self.t,
            "mode": self.mode.value,
            "verdict": self.verdict,
        }
        if self.reason:
            out["reason"] = self.reason
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        stats = {k: v for k, v in self.stats.items() if k != "elapsed_s"}
        if timing and "elapsed_s" in self.stats:
            stats["elapsed_s"] = self.stats["elapsed_s"]
        out["stats"] = stats
        return out

    def revalidate(self) -> None:
        """Re-check a negative verdict's counterexample from scratch."""
        if self.verdict or self.counterexample is None:
            return
        ce = self.counterexample
        G = self.graph
        if ce.deleted_vertex is not None:
            G, ids = delete_vertices(G, [ce.deleted_vertex])
            back = {v: i for i, v in enumerate(ids)}
            M = MatchingSpec(tuple((back[u], back[v]) for u, v in ce.matching))
        else:
            M = ce.matching
        M.validate(G)
        if len(M) != self.t:
            raise CertificateError(f"counterexample has {len(M)} edges, expected {self.t}")
        H, ids = delete_vertices(G, M.vertices)
        if ce.failure == "no_fpm":
            if ce.witness is None:
                raise CertificateError("fractional counterexample without witness")
            ce.witness.relabel(_inverse(ids, G.n)).validate(H)
        elif has_perfect_matching(H) is not None:
            raise CertificateError("claimed non-extendable matching extends to a perfect matching")


def _inverse(ids: list[int], n: int) -> list[int]:
    inv = [-1] * n
    for i, v in enumerate(ids):
        inv[v] = i
    return inv


# -- enumeration ---------------------------------------------------------------


@dataclass
class MatchingStream:
    """Iterable of size-``t`` matchings; ``order_too_small`` flags ``2t > n``."""

    graph: Graph
    t: int
    symmetry: str
    order_too_small: bool

    def __iter__(self) -> Iterator[MatchingSpec]:
        if self.order_too_small:
            return
        edges, first, tail_from_zero = _search_plan(self.graph, self.graph.full_mask, self.symmetry)
        if self.t == 0:
            yield MatchingSpec(())
            return
        m = len(edges)

        def rec(depth, start, used, chosen):
            if depth == self.t:
                yield MatchingSpec(tuple(edges[j] for j in chosen))
                return
            for j in range(start, m):
                u, v = edges[j]
                bit = (1 << u) | (1 << v)
                if used & bit:
                    continue
                yield from rec(depth + 1, j + 1, used | bit, chosen + [j])

        for i in first:
            u, v = edges[i]
            yield from rec(1, 0 if tail_from_zero else i + 1, (1 << u) | (1 << v), [i])


def _resolve_symmetry(G: Graph, symmetry: str) -> str:
    if symmetry == "auto":
        return "cayley" if G.cayley is not None else "none"
    if symmetry not in ("none", "cayley"):
        raise ValueError(f"unknown symmetry {symmetry!r}")
    if symmetry == "cayley" and G.cayley is None:
        raise ValueError("cayley symmetry requires a graph with Cayley provenance")
    return symmetry


def _search_plan(G: Graph, alive: int, symmetry: str) -> tuple[list[tuple[int, int]], list[int], bool]:
    """Edges inside ``alive``, indices of admissible first edges, and the tail mode."""
    edges = [(u, v) for u, v in G.edges() if alive >> u & 1 and alive >> v & 1]
    if symmetry == "cayley":
        spec = G.cayley
        A = spec.group
        reps = sorted(A.index(s) for s in spec.connection_set.pair_representatives())
        position = {e: i for i, e in enumerate(edges)}
        first = [position[(0, s)] for s in reps if (0, s) in position]
        return edges, first, True
    return edges, list(range(len(edges))), False


def enumerate_t_matchings(G: Graph, t: int, symmetry: str = "none") -> MatchingStream:
    """All matchings of size ``t`` (``symmetry="none"``), or Cayley orbit representatives.

    With ``symmetry="cayley"`` the first edge is ``{0, s}`` for one ``s`` per
    inverse pair, and the remaining ``t - 1`` edges range over all disjoint edges.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    return MatchingStream(G, t, _resolve_symmetry(G, symmetry), 2 * t > G.n)


# -- checkers --------------------------------------------------------------------


def _check_t(t: int, t_cap: int) -> None:
    if t < 0:
        raise ValueError("t must be non-negative")
    if t > t_cap:
        raise ValueError(f"t = {t} exceeds the configured cap {t_cap}")


def _run(G: Graph, alive: int, t: int, symmetry: str, kind: int):
    edges, first, tail_from_zero = _search_plan(G, alive, symmetry)
    eu = [u for u, _ in edges]
    ev = [v for _, v in edges]
    count, bad = kernels.find_unextendable(G.adj, alive, eu, ev, first, tail_from_zero, t, kind)
    matching = None if bad is None else MatchingSpec(tuple(edges[j] for j in bad))
    stats = {
        "matchings_enumerated": count,
        "symmetry": symmetry,
        "symmetry_reduction": round(len(edges) / len(first), 6) if first else 1.0,
    }
    return matching, stats


def _has_t_matching(G: Graph, alive: int, t: int) -> bool:
    mate = kernels.max_matching(G.adj, alive)
    return sum(1 for m in mate if m >= 0) // 2 >= t


def is_fractional_t_extendable(G: Graph, t: int, symmetry: str = "auto", t_cap: int = DEFAULT_T_CAP) -> ExtendabilityReport:
    """Every size-``t`` matching extends to a fractional perfect matching (order >= 2t+1, some t-matching exists)."""
    _check_t(t, t_cap)
    symmetry = _resolve_symmetry(G, symmetry)
    start = time.perf_counter()
    if G.n < 2 * t + 1:
        return ExtendabilityReport(G, t, Mode.FRACTIONAL, False, f"order {G.n} < 2t+1 = {2 * t + 1}",
                                   stats={"matchings_enumerated": 0})
    if not _has_t_matching(G, G.full_mask, t):
        return ExtendabilityReport(G, t, Mode.FRACTIONAL, False, f"no matching of size {t}",
                                   stats={"matchings_enumerated": 0})
    matching, stats = _run(G, G.full_mask, t, symmetry, kernels.KIND_FPM)
    stats["elapsed_s"] = time.perf_counter() - start
    if matching is None:
        return ExtendabilityReport(G, t, Mode.FRACTIONAL, True, stats=stats)
    H, ids = delete_vertices(G, matching.vertices)
    witness = fpm_no_witness(H).relabel(ids)
    report = ExtendabilityReport(G, t, Mode.FRACTIONAL, False, "matching does not extend",
                                 Counterexample(matching, witness), stats)
    report.revalidate()
    return report


def _classical(G: Graph, alive: int, t: int, symmetry: str):
    """(verdict, reason, matching, stats) for the subgraph induced by ``alive``."""
    size = alive.bit_count()
    if size % 2:
        return False, f"odd order {size}", None, {"matchings_enumerated": 0}
    if size < 2 * t + 2:
        return False, f"order {size} < 2t+2 = {2 * t + 2}", None, {"matchings_enumerated": 0}
    if not _has_t_matching(G, alive, t):
        return False, f"no matching of size {t}", None, {"matchings_enumerated": 0}
    matching, stats = _run(G, alive, t, symmetry, kernels.KIND_PM)
    if matching is None:
        return True, None, None, stats
    return False, "matching does not extend to a perfect matching", matching, stats


def is_t_extendable_classical(G: Graph, t: int, symmetry: str = "auto", t_cap: int = DEFAULT_T_CAP) -> ExtendabilityReport:
    """Every size-``t`` matching extends to a perfect matching (even order >= 2t+2, some t-matching exists)."""
    _check_t(t, t_cap)
    symmetry = _resolve_symmetry(G, symmetry)
    start = time.perf_counter()
    verdict, reason, matching, stats = _classical(G, G.full_mask, t, symmetry)
    stats["elapsed_s"] = time.perf_counter() - start
    ce = None if matching is None else Counterexample(matching, failure="no_pm")
    report = ExtendabilityReport(G, t, Mode.CLASSICAL, verdict, reason, ce, stats)
    report.revalidate()
    return report


def is_t_near_extendable(G: Graph, t: int, symmetry: str = "auto", t_cap: int = DEFAULT_T_CAP) -> ExtendabilityReport:
    """``G - v`` is classically ``t``-extendable for every vertex ``v`` (odd order >= 2t+3).

    For Cayley graphs only ``v = 0`` is checked (vertex-transitivity).
    """
    _check_t(t, t_cap)
    symmetry = _resolve_symmetry(G, symmetry)
    start = time.perf_counter()
    if G.n % 2 == 0 or G.n < 2 * t + 3:
        return ExtendabilityReport(G, t, Mode.NEAR_HALF, False, f"order {G.n} is not odd and >= 2t+3",
                                   stats={"matchings_enumerated": 0})
    vertices = [0] if symmetry == "cayley" else range(G.n)
    total = 0
    for v in vertices:
        alive = G.full_mask & ~(1 << v)
        verdict, reason, matching, stats = _classical(G, alive, t, "none")
        total += stats["matchings_enumerated"]
        if not verdict:
            ce = None if matching is None else Counterexample(matching, deleted_vertex=v, failure="no_pm")
            report = ExtendabilityReport(
                G, t, Mode.NEAR_HALF, False, f"G - {v}: {reason}", ce,
                {"matchings_enumerated": total, "vertices_checked": len(vertices), "symmetry": symmetry,
                 "elapsed_s": time.perf_counter() - start},
            )
            if ce is not None:
                report.revalidate()
            return report
    return ExtendabilityReport(G, t, Mode.NEAR_HALF, True, None, None,
                               {"matchings_enumerated": total, "vertices_checked": len(vertices),
                                "symmetry": symmetry, "elapsed_s": time.perf_counter() - start})


@dataclass(frozen=True)
class ImplicationProbe:
    near_half: bool
    fractional: bool

    @property
    def consistent(self) -> bool:
        return not (self.near_half and not self.fractional)

    def to_json(self) -> dict:
        return {"near_half": self.near_half, "fractional": self.fractional, "consistent": self.consistent}


def implication_probe(G: Graph, t: int, symmetry: str = "auto") -> ImplicationProbe:
    """Both verdicts for an odd-order graph; near-extendable must imply fractional-extendable."""
    if G.n % 2 == 0:
        raise ValueError("implication probe needs a graph of odd order")
    frac = is_fractional_t_extendable(G, t, symmetry).verdict
    near = is_t_near_extendable(G, t, symmetry).verdict
    return ImplicationProbe(near, frac)
