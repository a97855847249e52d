"""Finite Abelian groups in invariant-factor form and their connection sets.

Groups are additive.  An element is a tuple of residues, one per invariant
factor, and the elements of a group are ordered lexicographically; that order
fixes the vertex numbering of every Cayley graph built from the group.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

Element = tuple[int, ...]

# above this group order connection-set dedup is switched off (with a flag)
DEFAULT_DEDUP_CAP = 64
# hard stop for automorphism enumeration
DEFAULT_MAX_AUTOMORPHISMS = 250_000


class GroupError(ValueError):
    """Malformed group, element or connection set."""


class AutomorphismBudgetExceeded(RuntimeError):
    pass


def _prime_factorization(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Integer partitions of ``n`` as non-increasing tuples, lexicographically descending."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _invariant_factors_from_prime_powers(powers: dict[int, list[int]]) -> tuple[int, ...]:
    """Combine elementary divisors ``{p: [e1, e2, ...]}`` into a divisor chain."""
    length = max((len(v) for v in powers.values()), default=0)
    factors = [1] * length
    for p, exps in powers.items():
        exps = sorted(exps)
        # the largest exponents go to the largest (last) invariant factors
        for i, e in enumerate(reversed(exps)):
            factors[length - 1 - i] *= p**e
    return tuple(factors)


def canonical_factors(moduli: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of ``Z_m1 x Z_m2 x ...`` (moduli of 1 are dropped)."""
    powers: dict[int, list[int]] = {}
    for m in moduli:
        if m < 1:
            raise GroupError(f"cyclic factor must be positive, got {m}")
        for p, e in _prime_factorization(m).items():
            powers.setdefault(p, []).append(e)
    return _invariant_factors_from_prime_powers(powers)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z_d1 x ... x Z_dk`` with ``d1 | d2 | ... | dk``; the empty tuple is the trivial group."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for d in factors:
            if d < 2:
                raise GroupError(f"invariant factors must be >= 2, got {factors}")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise GroupError(f"invariant factors must form a divisor chain, got {factors}")

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls(() if n == 1 else (n,))

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Parse ``"Z9"`` or ``"Z3xZ3"``; the factors must already be canonical.

        Use :func:`parse_product` for products such as ``"Z5xZ3"``.
        """
        moduli = _parse_moduli(text)
        factors = tuple(m for m in moduli if m != 1)
        return cls(factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "Z1"
        return "x".join(f"Z{d}" for d in self.invariant_factors)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    @cached_property
    def _radix(self) -> tuple[int, ...]:
        weights = []
        w = 1
        for d in reversed(self.invariant_factors):
            weights.append(w)
            w *= d
        return tuple(reversed(weights))

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(d) for d in self.invariant_factors)))

    def index(self, x: Element) -> int:
        """Position of ``x`` in the lexicographic element order."""
        self.validate(x)
        return sum(c * w for c, w in zip(x, self._radix))

    def element(self, i: int) -> Element:
        return self.elements[i]

    def validate(self, x: Sequence[int]) -> Element:
        if len(x) != self.rank:
            raise GroupError(f"element {tuple(x)} has {len(x)} coordinates, {self} needs {self.rank}")
        for c, d in zip(x, self.invariant_factors):
            if not 0 <= c < d:
                raise GroupError(f"coordinate {c} of {tuple(x)} out of range for Z{d}")
        return tuple(x)

    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != self.rank:
            raise GroupError(f"element {tuple(x)} has {len(x)} coordinates, {self} needs {self.rank}")
        return tuple(c % d for c, d in zip(x, self.invariant_factors))

    def add(self, x: Element, y: Element) -> Element:
        if len(x) != self.rank or len(y) != self.rank:
            raise GroupError(f"coordinate length mismatch for {self}: {x}, {y}")
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        if len(x) != self.rank:
            raise GroupError(f"coordinate length mismatch for {self}: {x}")
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def order_of(self, x: Element) -> int:
        self.validate(x)
        m = 1
        for a, d in zip(x, self.invariant_factors):
            m = math.lcm(m, d // math.gcd(a, d))
        return m

    def format_element(self, x: Element) -> str:
        if self.rank == 1:
            return str(x[0])
        return "(" + ",".join(str(c) for c in x) + ")"

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        """``add_table[i][j]`` is the index of ``element(i) + element(j)``."""
        elts = self.elements
        idx = {x: i for i, x in enumerate(elts)}
        return tuple(tuple(idx[self.add(x, y)] for y in elts) for x in elts)

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(self.index(self.neg(x)) for x in self.elements)


def elt_add(A: AbelianGroup, x: Element, y: Element) -> Element:
    return A.add(tuple(x), tuple(y))


def elt_neg(A: AbelianGroup, x: Element) -> Element:
    return A.neg(tuple(x))


def elt_order(A: AbelianGroup, x: Element) -> int:
    return A.order_of(tuple(x))


def enumerate_abelian_groups(n: int) -> list[AbelianGroup]:
    """One group per isomorphism class of Abelian groups of order ``n``.

    Groups are sorted by their invariant-factor tuples, so the cyclic group
    (a single factor ``n``) comes first.
    """
    if n < 1:
        raise GroupError(f"group order must be positive, got {n}")
    primes = _prime_factorization(n)
    choices = [[(p, part) for part in _partitions(e)] for p, e in sorted(primes.items())]
    groups = []
    for combo in itertools.product(*choices):
        groups.append(AbelianGroup(_invariant_factors_from_prime_powers({p: list(part) for p, part in combo})))
    return sorted(groups, key=lambda g: (len(g.invariant_factors), g.invariant_factors))


@dataclass(frozen=True)
class ConnectionSet:
    """An inverse-closed, identity-free set of elements of ``group``."""

    group: AbelianGroup
    elements: frozenset[Element]

    def __post_init__(self):
        A = self.group
        elts = frozenset(A.validate(tuple(x)) for x in self.elements)
        object.__setattr__(self, "elements", elts)
        if A.zero in elts:
            raise GroupError("connection set must not contain the identity")
        for x in elts:
            if A.neg(x) not in elts:
                raise GroupError(f"connection set is not inverse-closed: {A.format_element(A.neg(x))} missing")

    @classmethod
    def closed(cls, group: AbelianGroup, elements: Iterable[Sequence[int]]) -> "ConnectionSet":
        """Build from generators of the set, adding inverses; rejects the identity."""
        out = set()
        for x in elements:
            x = group.reduce(tuple(x))
            if x == group.zero:
                raise GroupError("connection set must not contain the identity")
            out.add(x)
            out.add(group.neg(x))
        return cls(group, frozenset(out))

    @classmethod
    def parse(cls, group: AbelianGroup, text: str) -> "ConnectionSet":
        """Parse ``"{1,-1,3}"`` (cyclic) or ``"{(1,0),(1,1)}"``; inverses are implied."""
        return cls.closed(group, _parse_elements(text, group.rank))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.sorted())

    def __contains__(self, x) -> bool:
        return tuple(x) in self.elements

    def sorted(self) -> list[Element]:
        return sorted(self.elements)

    def indices(self) -> list[int]:
        return sorted(self.group.index(x) for x in self.elements)

    def pair_representatives(self) -> list[Element]:
        """One element of each ``{s, -s}`` pair (the lexicographically smaller)."""
        A = self.group
        return sorted(x for x in self.elements if x <= A.neg(x))

    def __str__(self) -> str:
        return "{" + ",".join(self.group.format_element(x) for x in self.sorted()) + "}"


def generates(A: AbelianGroup, S: Iterable[Element]) -> bool:
    """True iff the subgroup generated by ``S`` is all of ``A``."""
    table = A.add_table
    gens = {A.index(tuple(x)) for x in S}
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            row = table[v]
            for s in gens:
                w = row[s]
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen) == A.order


# -- homomorphisms and automorphisms ---------------------------------------


def _cyclic_span(A: AbelianGroup, g: int, m: int) -> list[int] | None:
    """Indices of ``0, g, 2g, ..., (m-1)g`` if ``g`` has order exactly ``m``."""
    table = A.add_table
    out = [0]
    x = g
    for _ in range(1, m):
        if x == 0:
            return None
        out.append(x)
        x = table[x][g]
    return out if x == 0 else None


def iter_isomorphisms(moduli: Sequence[int], target: AbelianGroup) -> Iterator[tuple[int, ...]]:
    """Bijective homomorphisms ``Z_m1 x ... x Z_mk -> target``.

    Each result is the tuple of element indices of the images of the standard
    generators.  Images are chosen one generator at a time and a branch is cut
    as soon as the partial images stop generating a subgroup of the right size.
    """
    if math.prod(moduli) != target.order:
        return
    table = target.add_table
    n = target.order

    def extend(i: int, subgroup: list[int], images: tuple[int, ...]):
        if i == len(moduli):
            if len(subgroup) == n:
                yield images
            return
        m = moduli[i]
        members = set(subgroup)
        for g in range(n):
            span = _cyclic_span(target, g, m)
            if span is None:
                continue
            if any(x in members for x in span[1:]):
                continue
            grown = [table[h][x] for x in span for h in subgroup]
            yield from extend(i + 1, grown, images + (g,))

    yield from extend(0, [0], ())


def _images_to_permutation(moduli: Sequence[int], target: AbelianGroup, images: Sequence[int]) -> tuple[int, ...]:
    """Permutation of target indices induced by generator images (source in lexicographic order)."""
    table = target.add_table
    perm = []
    for coords in itertools.product(*(range(m) for m in moduli)):
        v = 0
        for c, g in zip(coords, images):
            for _ in range(c):
                v = table[v][g]
        perm.append(v)
    return tuple(perm)


def automorphisms(A: AbelianGroup, limit: int = DEFAULT_MAX_AUTOMORPHISMS) -> list[tuple[int, ...]]:
    """All automorphisms of ``A`` as permutations of element indices.

    Candidate images of the invariant-factor generators are enumerated and
    filtered to bijective homomorphisms.  Raises
    :class:`AutomorphismBudgetExceeded` once more than ``limit`` are found.
    """
    out = []
    for images in iter_isomorphisms(A.invariant_factors, A):
        out.append(_images_to_permutation(A.invariant_factors, A, images))
        if len(out) > limit:
            raise AutomorphismBudgetExceeded(f"{A} has more than {limit} automorphisms")
    return out


def product_isomorphism(moduli: Sequence[int]) -> tuple[AbelianGroup, Callable[[Sequence[int]], Element]]:
    """Canonical form of ``Z_m1 x ... x Z_mk`` and a map from product coordinates into it."""
    target = AbelianGroup(canonical_factors(moduli))
    images = next(iter_isomorphisms(tuple(moduli), target), None)
    if images is None:  # pragma: no cover - the canonical form always exists
        raise GroupError(f"no isomorphism found for moduli {tuple(moduli)}")
    table = target.add_table

    def to_canonical(x: Sequence[int]) -> Element:
        v = 0
        for c, m, g in zip(x, moduli, images):
            for _ in range(c % m):
                v = table[v][g]
        return target.element(v)

    return target, to_canonical


def _generating_set(perms: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """A small subset of ``perms`` generating the same permutation group."""
    if not perms:
        return []
    n = len(perms[0])
    identity = tuple(range(n))
    closure = {identity}
    gens: list[tuple[int, ...]] = []
    for p in perms:
        if p in closure:
            continue
        gens.append(p)
        frontier = list(closure)
        while frontier:
            nxt = []
            for q in frontier:
                for g in gens:
                    r = tuple(g[q[i]] for i in range(n))
                    if r not in closure:
                        closure.add(r)
                        nxt.append(r)
            frontier = nxt
        if len(closure) == len(perms):
            break
    return gens


@dataclass(frozen=True)
class OrbitReps:
    """Result of :func:`connection_set_orbit_reps`."""

    sets: list[ConnectionSet]
    deduplicated: bool
    status: str
    candidates: int

    @property
    def dedup_factor(self) -> float:
        return self.candidates / len(self.sets) if self.sets else 1.0


def inverse_classes(A: AbelianGroup) -> list[tuple[int, ...]]:
    """Non-identity element indices grouped as ``{x, -x}`` classes, sorted by least member."""
    neg = A.neg_table
    classes = []
    seen = set()
    for i in range(1, A.order):
        if i in seen:
            continue
        j = neg[i]
        cls = (i,) if i == j else (min(i, j), max(i, j))
        seen.update(cls)
        classes.append(cls)
    return classes


def connection_set_orbit_reps(
    A: AbelianGroup,
    predicate: Callable[[ConnectionSet], bool] | None = None,
    *,
    dedup: bool = True,
    dedup_cap: int = DEFAULT_DEDUP_CAP,
    max_automorphisms: int = DEFAULT_MAX_AUTOMORPHISMS,
) -> OrbitReps:
    """One connection set per ``Aut(A)``-orbit of sets satisfying ``predicate``.

    ``predicate`` must be invariant under automorphisms (being generating and
    size bounds are).  The representative of an orbit is the member whose
    sorted index tuple is lexicographically least.  When dedup is disabled, or
    impossible because ``A`` exceeds ``dedup_cap`` or the automorphism budget,
    every qualifying set is returned and ``status`` says why.
    """
    classes = inverse_classes(A)
    c = len(classes)

    def make(mask: int) -> ConnectionSet:
        elts = [A.element(v) for j in range(c) if mask >> j & 1 for v in classes[j]]
        return ConnectionSet(A, frozenset(elts))

    def key(mask: int) -> tuple[int, ...]:
        return tuple(sorted(v for j in range(c) if mask >> j & 1 for v in classes[j]))

    status = "ok"
    perms = None
    if not dedup:
        status = "dedup disabled, returning all sets"
    elif A.order > dedup_cap:
        status = f"dedup unavailable (order {A.order} > cap {dedup_cap}), returning all sets"
    else:
        try:
            perms = automorphisms(A, max_automorphisms)
        except AutomorphismBudgetExceeded:
            status = "dedup unavailable (automorphism budget exceeded), returning all sets"

    pred = predicate or (lambda S: True)
    if perms is None:
        sets = []
        for mask in sorted(range(1, 1 << c), key=key):
            S = make(mask)
            if pred(S):
                sets.append(S)
        return OrbitReps(sets, False, status, len(sets))

    class_of = {}
    for j, cls in enumerate(classes):
        for v in cls:
            class_of[v] = j
    gens = [tuple(class_of[p[cls[0]]] for cls in classes) for p in _generating_set(perms)]

    def act(g: tuple[int, ...], mask: int) -> int:
        out = 0
        j = 0
        while mask:
            if mask & 1:
                out |= 1 << g[j]
            mask >>= 1
            j += 1
        return out

    seen = bytearray(1 << c)
    reps = []
    candidates = 0
    for start in range(1, 1 << c):
        if seen[start]:
            continue
        seen[start] = 1
        orbit = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    img = act(g, m)
                    if not seen[img]:
                        seen[img] = 1
                        orbit.append(img)
                        nxt.append(img)
            frontier = nxt
        rep = min(orbit, key=key)
        S = make(rep)
        if pred(S):
            reps.append((key(rep), S))
            candidates += len(orbit)
    reps.sort(key=lambda kv: kv[0])
    return OrbitReps([S for _, S in reps], True, status, candidates)


# -- text syntax -----------------------------------------------------------

_GROUP_RE = re.compile(r"^\s*Z\s*(\d+)(\s*[xX*]\s*Z\s*(\d+))*\s*$")


def _parse_moduli(text: str) -> list[int]:
    if not _GROUP_RE.match(text):
        raise GroupError(f"cannot parse group {text!r}; expected e.g. 'Z9' or 'Z3xZ3'")
    return [int(m) for m in re.findall(r"Z\s*(\d+)", text)]


def parse_product(text: str) -> tuple[AbelianGroup, Callable[[Sequence[int]], Element]]:
    """Parse any product ``"Z5xZ3"``; returns the canonical group and a coordinate map."""
    moduli = _parse_moduli(text)
    if any(m < 1 for m in moduli):
        raise GroupError(f"cyclic factors must be positive in {text!r}")
    return product_isomorphism(moduli)


def _parse_elements(text: str, rank: int) -> list[tuple[int, ...]]:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    body = body.strip()
    if not body:
        return []
    out = []
    if "(" in body:
        for m in re.finditer(r"(-?)\(([^()]*)\)|([^,\s()]+)", body):
            if m.group(3) is not None:
                raise GroupError(f"unexpected token {m.group(3)!r} in {text!r}")
            sign = -1 if m.group(1) else 1
            coords = [c.strip() for c in m.group(2).split(",")]
            try:
                out.append(tuple(sign * int(c) for c in coords))
            except ValueError:
                raise GroupError(f"bad element ({m.group(2)}) in {text!r}") from None
    else:
        for tok in body.split(","):
            tok = tok.strip().replace("±", "")
            try:
                out.append((int(tok),))
            except ValueError:
                raise GroupError(f"bad element {tok!r} in {text!r}") from None
    for x in out:
        if len(x) != rank:
            raise GroupError(f"element {x} has {len(x)} coordinates, expected {rank}")
    return out


def parse_element(A: AbelianGroup, text: str) -> Element:
    (x,) = _parse_elements(text, A.rank)
    return A.reduce(x)


def parse_cayley_spec(text: str) -> tuple[AbelianGroup, ConnectionSet]:
    """Parse ``"Z3xZ3:{(1,0),(1,1)}"`` into the canonical group and a closed connection set.

    Elements are written in the coordinates of the product as typed, so
    ``"Z5xZ3:{(1,0),(1,1)}"`` lands in Z15 through the product isomorphism.
    """
    if ":" not in text:
        raise GroupError(f"cayley spec {text!r} must look like 'GROUP:{{elements}}'")
    group_text, set_text = text.split(":", 1)
    moduli = _parse_moduli(group_text)
    A, to_canonical = parse_product(group_text)
    raw = _parse_elements(set_text, len(moduli))
    return A, ConnectionSet.closed(A, [to_canonical(x) for x in raw])
