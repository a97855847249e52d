"""Exceptional families of the fractional 2-extendability classification and scans against them.

Three theorem-level predictions are checked by exhaustive scan over connected
Cayley graphs of Abelian groups:

* ``f1e``: fractional 1-extendable iff not an odd cycle;
* ``f2e`` (even order >= 6): fractional 2-extendable iff not isomorphic to
  one of the ``Even_*`` circulants;
* ``f2e`` (order >= 5): fractional 2-extendable iff not isomorphic to one of
  the ``Main_*`` graphs.

Family membership is decided by exact isomorphism against the family members
of the same order; for cyclic groups a multiplier check runs first.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .extendability import is_fractional_t_extendable, is_t_near_extendable
from .graphs import FamilySpec, Graph, cayley_graph, circulant, is_connected
from .groups import (
    AbelianGroup,
    ConnectionSet,
    GroupError,
    connection_set_orbit_reps,
    enumerate_abelian_groups,
    generates,
    inverse_classes,
    product_isomorphism,
)
from .isomorphism import are_isomorphic, multiplier_equivalent


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class _Family:
    name: str
    param: str  # "n" or "m"
    range_text: str
    valid: Callable[[int], bool]
    order: Callable[[int], int]
    residues: Callable[[int], list[int]] | None  # circulant families
    from_order: Callable[[int], int | None]


def _by_n(name, range_text, valid, residues):
    return _Family(name, "n", range_text, valid, lambda n: n, residues, lambda n: n if valid(n) else None)


def _by_m(name, range_text, valid, order, residues, inverse):
    def from_order(n):
        m = inverse(n)
        return m if m is not None and valid(m) else None

    return _Family(name, "m", range_text, valid, order, residues, from_order)


def _div(n, k, r=0):
    return (n - r) // k if n >= r and (n - r) % k == 0 else None


_odd_m3 = lambda m: m >= 3 and m % 2 == 1  # noqa: E731

FAMILIES: dict[str, _Family] = {
    f.name: f
    for f in [
        _by_n("F1e_OddCycle", "n odd, n >= 3", lambda n: n >= 3 and n % 2 == 1, lambda n: [1]),
        _by_m("Even_i", "Circ(2m; {±1}), m >= 3", lambda m: m >= 3, lambda m: 2 * m,
              lambda m: [1], lambda n: _div(n, 2)),
        _by_m("Even_ii", "Circ(4m; {±1, 2m}), m >= 2", lambda m: m >= 2, lambda m: 4 * m,
              lambda m: [1, 2 * m], lambda n: _div(n, 4)),
        _by_m("Even_iii", "Circ(4m+2; {±2, 2m+1}), m >= 1", lambda m: m >= 1, lambda m: 4 * m + 2,
              lambda m: [2, 2 * m + 1], lambda n: _div(n, 4, 2)),
        _by_m("Even_iv", "Circ(4m+2; {±1, ±2m}), m >= 1", lambda m: m >= 1, lambda m: 4 * m + 2,
              lambda m: [1, 2 * m], lambda n: _div(n, 4, 2)),
        _by_m("Even_v", "Circ(2m; {±1, ±2}), m >= 3", lambda m: m >= 3, lambda m: 2 * m,
              lambda m: [1, 2], lambda n: _div(n, 2)),
        _by_n("Main_i", "Circ(n; {±1}), n >= 5", lambda n: n >= 5, lambda n: [1]),
        _by_n("Main_ii", "Circ(n; {±1, 2m}), n = 4m >= 8", lambda n: n >= 8 and n % 4 == 0,
              lambda n: [1, n // 2]),
        _by_n("Main_iii", "Circ(n; {±2, 2m+1}), n = 4m+2 >= 6", lambda n: n >= 6 and n % 4 == 2,
              lambda n: [2, n // 2]),
        _by_n("Main_iv", "Circ(n; {±1, ±2}), n >= 5", lambda n: n >= 5, lambda n: [1, 2]),
        _by_n("Main_v", "Circ(n; {±1, ±3}), n odd, n >= 5", lambda n: n >= 5 and n % 2 == 1, lambda n: [1, 3]),
        _by_n("Main_vi", "Circ(n; {±1, ±2m}), n = 4m+2 >= 6", lambda n: n >= 6 and n % 4 == 2,
              lambda n: [1, (n - 2) // 2]),
        _by_m("Main_vii", "Circ(n; {±1, ±(m-1)}), n = 3m >= 9, m odd", _odd_m3, lambda m: 3 * m,
              lambda m: [1, m - 1], lambda n: _div(n, 3)),
        _by_m("Main_viii", "Circ(n; {±1, ±(m+1)}), n = 3m >= 9, m odd", _odd_m3, lambda m: 3 * m,
              lambda m: [1, m + 1], lambda n: _div(n, 3)),
        _by_m("Main_ix", "Circ(n; {±1, ±(m-1), ±(m+1)}), n = 3m >= 9, m odd", _odd_m3, lambda m: 3 * m,
              lambda m: [1, m - 1, m + 1], lambda n: _div(n, 3)),
        _by_m("Main_x", "Cay(Z_m x Z_3; {±(1,0), ±(1,1)}), n = 3m >= 9, m odd", _odd_m3, lambda m: 3 * m,
              None, lambda n: _div(n, 3)),
    ]
}

FAMILY_ORDER = list(FAMILIES)
EVEN_FAMILIES = [f for f in FAMILY_ORDER if f.startswith("Even_")]
MAIN_FAMILIES = [f for f in FAMILY_ORDER if f.startswith("Main_")]


@dataclass(frozen=True, order=True)
class FamilyId:
    rank: int = field(init=False, repr=False, compare=True)
    name: str = field(compare=False)
    param: int = field(compare=True)

    def __init__(self, name: str, param: int):
        if name not in FAMILIES:
            raise FamilyError(f"unknown family {name!r}; known: {', '.join(FAMILY_ORDER)}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "param", int(param))
        object.__setattr__(self, "rank", FAMILY_ORDER.index(name))

    @property
    def family(self) -> _Family:
        return FAMILIES[self.name]

    @property
    def order(self) -> int:
        return self.family.order(self.param)

    def __str__(self) -> str:
        return f"{self.name}({self.family.param}={self.param})"

    def to_json(self) -> dict:
        return {"family": self.name, self.family.param: self.param, "order": self.order}

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        """``"Main_x:3"`` or ``"Main_x,m=3"``."""
        for sep in (":", ",", "="):
            if sep in text:
                name, value = text.split(sep, 1)
                value = value.split("=")[-1]
                try:
                    return cls(name.strip(), int(value))
                except ValueError:
                    raise FamilyError(f"bad family parameter in {text!r}") from None
        raise FamilyError(f"expected FAMILY:PARAM, got {text!r}")


def construct_family(fid: FamilyId) -> Graph:
    fam = fid.family
    if not fam.valid(fid.param):
        raise FamilyError(f"{fid.name} requires {fam.range_text}; got {fam.param} = {fid.param}")
    n = fam.order(fid.param)
    if fam.residues is not None:
        G = circulant(n, fam.residues(fid.param))
        base = G.provenance
    else:
        m = fid.param
        A, to_canonical = product_isomorphism([m, 3])
        S = ConnectionSet.closed(A, [to_canonical((1, 0)), to_canonical((1, 1))])
        G = cayley_graph(A, S)
        base = G.provenance
    return Graph(G.n, G.adj, FamilySpec(fid.name, fid.param, base))


def family_members(n: int, names: Iterable[str] = FAMILY_ORDER) -> list[FamilyId]:
    out = []
    for name in names:
        p = FAMILIES[name].from_order(n)
        if p is not None:
            out.append(FamilyId(name, p))
    return sorted(out)


_member_cache: dict[FamilyId, Graph] = {}


def _member(fid: FamilyId) -> Graph:
    G = _member_cache.get(fid)
    if G is None:
        G = _member_cache[fid] = construct_family(fid)
    return G


def recognize(G: Graph, names: Iterable[str]) -> FamilyId | None:
    """Least family id among ``names`` whose member of order ``G.n`` is isomorphic to ``G``."""
    degrees = set(G.degrees())
    if len(degrees) != 1:
        return None
    (deg,) = degrees
    spec = G.cayley
    for fid in family_members(G.n, names):
        H = _member(fid)
        if H.degree(0) != deg:
            continue
        fam = fid.family
        if spec is not None and spec.group.is_cyclic and fam.residues is not None:
            S = {s[0] for s in spec.connection_set.elements}
            T = set(H.provenance.base.residues)
            if multiplier_equivalent(G.n, S, T) is not None:
                return fid
        if are_isomorphic(G, H) is not None:
            return fid
    return None


def theorem_f2e_verdict(A: AbelianGroup, S: ConnectionSet, families: str = "main") -> bool:
    """Predicted fractional 2-extendability of a connected ``Cay(A; S)`` with ``|A| >= 5``.

    ``families="even"`` uses the even-order list (orders >= 6 only).
    """
    G = cayley_graph(A, S)
    if not is_connected(G):
        raise GroupError("theorem applies to connected Cayley graphs only")
    if A.order < 5:
        raise GroupError("theorem applies to groups of order at least 5")
    return recognize(G, _family_names(families)) is None


def theorem_f1e_verdict(G: Graph) -> bool:
    """Fractional 1-extendable iff not an odd cycle (connected Cayley graphs of order >= 3)."""
    return not (G.n % 2 == 1 and G.is_regular() and G.degree(0) == 2)


def _family_names(families: str) -> list[str]:
    if families == "main":
        return MAIN_FAMILIES
    if families == "even":
        return EVEN_FAMILIES
    raise ValueError(f"unknown family list {families!r}")


# -- scans -------------------------------------------------------------------------


@dataclass
class Discrepancy:
    group: str
    connection_set: str
    engine_verdict: bool
    theorem_verdict: bool
    family: str | None
    certificate: dict | None

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "connection_set": self.connection_set,
            "engine_verdict": self.engine_verdict,
            "theorem_verdict": self.theorem_verdict,
            "family": self.family,
            "certificate": self.certificate,
        }


@dataclass
class OrderSummary:
    order: int
    groups: int
    instances: int
    candidates: int
    dedup: bool
    non_extendable: int
    discrepancies: int

    @property
    def dedup_factor(self) -> float:
        return self.candidates / self.instances if self.instances else 1.0

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "groups": self.groups,
            "instances": self.instances,
            "candidates": self.candidates,
            "dedup": self.dedup,
            "dedup_factor": round(self.dedup_factor, 4),
            "non_extendable": self.non_extendable,
            "discrepancies": self.discrepancies,
        }


@dataclass
class ScanReport:
    mode: str
    orders: list[int]
    parity: str
    deg_cap: int | None
    dedup: bool
    per_order: list[OrderSummary]
    discrepancies: list[Discrepancy]
    coverage: list[str]
    elapsed_s: float = 0.0

    @property
    def instances(self) -> int:
        return sum(o.instances for o in self.per_order)

    @property
    def dedup_factor(self) -> float:
        cands = sum(o.candidates for o in self.per_order)
        return cands / self.instances if self.instances else 1.0

    @property
    def verified(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "orders": self.orders,
            "parity": self.parity,
            "deg_cap": self.deg_cap,
            "dedup": self.dedup,
            "instances": self.instances,
            "dedup_factor": round(self.dedup_factor, 4),
            "verified": self.verified,
            "per_order": [o.to_json() for o in self.per_order],
            "discrepancies": [d.to_json() for d in self.discrepancies],
            "coverage": self.coverage,
        }


@dataclass(frozen=True)
class ScanTask:
    mode: str
    factors: tuple[int, ...]
    elements: tuple[tuple[int, ...], ...]


@dataclass
class ScanOutcome:
    engine: bool
    theorem: bool
    family: str | None
    certificate: dict | None


def _t_for(mode: str) -> int:
    return {"f1e": 1, "f2e": 2}[mode]


def run_instance(task: ScanTask) -> ScanOutcome:
    """Engine verdict versus predicted verdict for one ``(group, connection set)``."""
    A = AbelianGroup(task.factors)
    S = ConnectionSet(A, frozenset(task.elements))
    G = cayley_graph(A, S)
    report = is_fractional_t_extendable(G, _t_for(task.mode), symmetry="cayley")
    if task.mode == "f1e":
        theorem = theorem_f1e_verdict(G)
        family = None if theorem else str(FamilyId("F1e_OddCycle", G.n))
    else:
        names = EVEN_FAMILIES if A.order % 2 == 0 else MAIN_FAMILIES
        fid = recognize(G, names)
        theorem = fid is None
        family = None if fid is None else str(fid)
    certificate = None
    if report.verdict != theorem:
        certificate = report.to_json()
    return ScanOutcome(report.verdict, theorem, family, certificate)


def scan_instances(order: int, deg_cap: int | None = None, dedup: bool = True):
    """``(group, [connection sets], candidates, deduplicated)`` per group of this order."""
    out = []
    for A in enumerate_abelian_groups(order):
        def pred(S, A=A):
            return (deg_cap is None or len(S) <= deg_cap) and generates(A, S.elements)

        reps = connection_set_orbit_reps(A, pred, dedup=dedup)
        out.append((A, reps.sets, reps.candidates, reps.deduplicated, reps.status))
    return out


def default_workers() -> int:
    env = os.environ.get("FRACEXT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _orders_for(orders: Iterable[int], parity: str) -> list[int]:
    keep = {"odd": lambda n: n % 2 == 1, "even": lambda n: n % 2 == 0, "all": lambda n: True}[parity]
    return [n for n in sorted(set(orders)) if keep(n)]


def verify_theorem(
    mode: str,
    orders: Iterable[int],
    parity: str = "all",
    deg_cap: int | None = None,
    dedup: bool = True,
    workers: int = 1,
) -> ScanReport:
    """Compare the extendability engine with the predicted verdict on every scanned instance.

    ``mode`` is ``"f1e"`` (orders >= 3) or ``"f2e"`` (orders >= 5; even orders
    use the even-order family list and need order >= 6).
    """
    if mode not in ("f1e", "f2e"):
        raise ValueError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    min_order = 3 if mode == "f1e" else 5
    selected = _orders_for(orders, parity)
    coverage = []
    skipped = [n for n in selected if n < min_order]
    if skipped:
        coverage.append(f"orders {skipped} are outside the theorem's range and were skipped")
    selected = [n for n in selected if n not in skipped]

    tasks: list[ScanTask] = []
    index: list[tuple[int, str, str]] = []
    per_order_meta = {}
    for n in selected:
        groups = scan_instances(n, deg_cap, dedup)
        count = 0
        cands = 0
        deduped = True
        for A, sets, candidates, was_deduped, status in groups:
            deduped &= was_deduped
            cands += candidates
            if status != "ok":
                coverage.append(f"{A}: {status}")
            for S in sets:
                tasks.append(ScanTask(mode, A.invariant_factors, tuple(S.sorted())))
                index.append((n, str(A), str(S)))
                count += 1
        per_order_meta[n] = (len(groups), count, cands, deduped)

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_instance, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        outcomes = [run_instance(task) for task in tasks]

    discrepancies = []
    non_ext = {n: 0 for n in selected}
    bad = {n: 0 for n in selected}
    for (n, group, cs), res in zip(index, outcomes):
        if not res.engine:
            non_ext[n] += 1
        if res.engine != res.theorem:
            bad[n] += 1
            discrepancies.append(Discrepancy(group, cs, res.engine, res.theorem, res.family, res.certificate))
    per_order = [
        OrderSummary(n, g, c, k, d, non_ext[n], bad[n]) for n, (g, c, k, d) in sorted(per_order_meta.items())
    ]
    return ScanReport(mode, selected, parity, deg_cap, dedup, per_order, discrepancies, coverage,
                      time.perf_counter() - start)


# -- census ------------------------------------------------------------------------


@dataclass
class CensusRow:
    order: int
    members: list[FamilyId]
    overlaps: list[tuple[FamilyId, FamilyId]]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "members": [str(f) for f in self.members],
            "overlaps": [[str(a), str(b)] for a, b in self.overlaps],
        }


def family_census(orders: Iterable[int], names: Iterable[str] = FAMILY_ORDER) -> list[CensusRow]:
    """Family members present at each order and every isomorphic pair among them."""
    names = [n for n in names if n != "F1e_OddCycle"]
    rows = []
    for n in sorted(set(orders)):
        members = family_members(n, names)
        overlaps = []
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if are_isomorphic(_member(a), _member(b)) is not None:
                    overlaps.append((a, b))
        rows.append(CensusRow(n, members, overlaps))
    return rows


# -- supplementary checks ------------------------------------------------------------


def random_generating_sets(A: AbelianGroup, count: int, seed: int, exclude_families: bool = True,
                           names: Iterable[str] = MAIN_FAMILIES) -> list[ConnectionSet]:
    """Seeded random generating connection sets, optionally skipping family members."""
    rng = random.Random(seed)
    classes = inverse_classes(A)
    names = list(names)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError(f"could not draw {count} connection sets for {A}")
        mask = rng.getrandbits(len(classes))
        elts = [A.element(v) for j, cls in enumerate(classes) if mask >> j & 1 for v in cls]
        if not elts or not generates(A, elts):
            continue
        S = ConnectionSet(A, frozenset(elts))
        if exclude_families and recognize(cayley_graph(A, S), names) is not None:
            continue
        out.append(S)
    return out


@dataclass
class NearProbeRow:
    group: str
    connection_set: str
    t: int
    fractional: bool
    near_half: bool

    @property
    def consistent(self) -> bool:
        return not (self.near_half and not self.fractional)


def near_extendability_scan(orders: Iterable[int], t_values: Iterable[int] = (1, 2), dedup: bool = True) -> list[NearProbeRow]:
    """Fractional and near extendability side by side on odd-order connected Cayley graphs."""
    rows = []
    for n in _orders_for(orders, "odd"):
        for A, sets, _, _, _ in scan_instances(n, None, dedup):
            for S in sets:
                G = cayley_graph(A, S)
                for t in t_values:
                    if n < 2 * t + 3:
                        continue
                    frac = is_fractional_t_extendable(G, t, symmetry="cayley").verdict
                    near = is_t_near_extendable(G, t, symmetry="cayley").verdict
                    rows.append(NearProbeRow(str(A), str(S), t, frac, near))
    return rows
