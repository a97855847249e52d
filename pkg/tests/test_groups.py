import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from fracext.groups import (
    AbelianGroup,
    AutomorphismBudgetExceeded,
    ConnectionSet,
    GroupError,
    automorphisms,
    connection_set_orbit_reps,
    enumerate_abelian_groups,
    generates,
    inverse_classes,
    parse_cayley_spec,
    parse_product,
)


def partitions(k):
    # p(k) by the textbook dynamic program over part sizes
    table = [1] + [0] * k
    for part in range(1, k + 1):
        for total in range(part, k + 1):
            table[total] += table[total - part]
    return table[k]


def prime_exponents(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@settings(max_examples=64, deadline=None)
@given(st.integers(min_value=1, max_value=64))
def test_group_count_matches_partition_product(n):
    expected = math.prod(partitions(e) for e in prime_exponents(n).values())
    groups = enumerate_abelian_groups(n)
    assert len(groups) == expected
    assert len(set(groups)) == len(groups)
    for A in groups:
        assert A.order == n
        f = A.invariant_factors
        assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))


def test_small_orders_listed_cyclic_first():
    assert [str(A) for A in enumerate_abelian_groups(12)] == ["Z12", "Z2xZ6"]
    assert [str(A) for A in enumerate_abelian_groups(9)] == ["Z9", "Z3xZ3"]
    assert [str(A) for A in enumerate_abelian_groups(16)][0] == "Z16"
    assert str(enumerate_abelian_groups(1)[0]) == "Z1"


def test_invariant_factor_validation():
    with pytest.raises(GroupError):
        AbelianGroup((2, 3))
    with pytest.raises(GroupError):
        AbelianGroup.parse("Q8")
    assert AbelianGroup.parse("Z3xZ3").invariant_factors == (3, 3)


def test_element_arithmetic_and_indexing():
    A = AbelianGroup((2, 4))
    assert A.elements[A.index((1, 3))] == (1, 3)
    assert A.add((1, 3), (1, 2)) == (0, 1)
    assert A.neg((1, 1)) == (1, 3)
    assert A.order_of((1, 2)) == 2
    assert A.order_of((0, 1)) == 4
    with pytest.raises(GroupError):
        A.validate((2, 0))


def test_connection_set_rules():
    A = AbelianGroup.cyclic(9)
    with pytest.raises(GroupError):
        ConnectionSet(A, frozenset({(1,)}))
    with pytest.raises(GroupError):
        ConnectionSet.closed(A, [(0,)])
    S = ConnectionSet.parse(A, "{1,3}")
    assert S.indices() == [1, 3, 6, 8]
    assert str(S) == "{1,3,6,8}"
    assert S.pair_representatives() == [(1,), (3,)]


def test_product_parsing_goes_to_invariant_factors():
    A, phi = parse_product("Z5xZ3")
    assert A.invariant_factors == (15,)
    assert phi((1, 0)) != phi((0, 1))
    # phi is a homomorphism onto Z15
    for x, y in itertools.product(itertools.product(range(5), range(3)), repeat=2):
        s = ((x[0] + y[0]) % 5, (x[1] + y[1]) % 3)
        assert phi(s) == A.add(phi(x), phi(y))
    B, S = parse_cayley_spec("Z3xZ3:{(1,0),(1,1)}")
    assert B.invariant_factors == (3, 3)
    assert len(S) == 4
    with pytest.raises(GroupError):
        parse_cayley_spec("Z3xZ3:{(1,0,1)}")


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@pytest.mark.parametrize("n", [1, 2, 5, 9, 12, 16, 27])
def test_cyclic_automorphism_count(n):
    assert len(automorphisms(AbelianGroup.cyclic(n))) == euler_phi(n)


@pytest.mark.parametrize("factors,count", [((2, 2), 6), ((3, 3), 48), ((2, 4), 8), ((2, 2, 2), 168)])
def test_noncyclic_automorphism_count(factors, count):
    assert len(automorphisms(AbelianGroup(factors))) == count


def test_automorphism_budget():
    with pytest.raises(AutomorphismBudgetExceeded):
        automorphisms(AbelianGroup((2, 2, 2, 2)), limit=100)


def brute_automorphisms(A):
    """Every bijective homomorphism, found by trying all images of the standard generators."""
    out = []
    for images in itertools.product(A.elements, repeat=A.rank):
        if any(A.invariant_factors[i] % A.order_of(img) for i, img in enumerate(images)):
            continue

        def f(x):
            y = A.zero
            for c, img in zip(x, images):
                y = A.add(y, A.scale(c, img))
            return y

        perm = [A.index(f(x)) for x in A.elements]
        if len(set(perm)) == A.order:
            out.append(perm)
    return out


SMALL_GROUPS = [A for n in range(1, 17) for A in enumerate_abelian_groups(n)]


def closure_generators(perms):
    """Greedily pick permutations from ``perms`` until the group they generate is all of ``perms``."""
    target = {tuple(p) for p in perms}
    gens = []
    group = {tuple(range(len(perms[0])))}
    for p in perms:
        if len(group) == len(target):
            break
        if tuple(p) in group:
            continue
        gens.append(tuple(p))
        frontier = list(group)
        while frontier:
            g = frontier.pop()
            for h in gens:
                gh = tuple(h[i] for i in g)
                if gh not in group:
                    group.add(gh)
                    frontier.append(gh)
    assert group == target
    return gens


@pytest.mark.parametrize("A", SMALL_GROUPS, ids=str)
def test_orbit_reps_match_brute_force(A):
    auts = brute_automorphisms(A)
    assert sorted(map(tuple, auts)) == sorted(automorphisms(A))
    classes = inverse_classes(A)
    if not classes:
        return
    class_of = {v: j for j, cls in enumerate(classes) for v in cls}
    gens = closure_generators([[class_of[p[cls[0]]] for cls in classes] for p in auts])

    def members(mask):
        return tuple(sorted(v for j, cls in enumerate(classes) if mask >> j & 1 for v in cls))

    seen = set()
    canon = set()
    total = 0
    for mask in range(1, 1 << len(classes)):
        if mask in seen:
            continue
        orbit = {mask}
        frontier = [mask]
        while frontier:
            m = frontier.pop()
            for cp in gens:
                img = sum(1 << cp[j] for j in range(len(classes)) if m >> j & 1)
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        seen |= orbit
        if generates(A, [A.element(v) for v in members(mask)]):
            total += len(orbit)
            canon.add(min(members(m) for m in orbit))
    reps = connection_set_orbit_reps(A, lambda S: generates(A, S.elements))
    assert reps.deduplicated
    assert sorted(tuple(S.indices()) for S in reps.sets) == sorted(canon)
    assert reps.candidates == total
    flat = connection_set_orbit_reps(A, lambda S: generates(A, S.elements), dedup=False)
    assert len(flat.sets) == total and "disabled" in flat.status


def test_z3xz3_orbit_count_via_all_48_automorphisms():
    A = AbelianGroup((3, 3))
    auts = automorphisms(A)
    assert len(auts) == 48
    classes = inverse_classes(A)
    seen, orbits = set(), 0
    for mask in range(1, 1 << len(classes)):
        idx = tuple(sorted(v for j, cls in enumerate(classes) if mask >> j & 1 for v in cls))
        if idx in seen:
            continue
        orbits += 1
        for p in auts:
            seen.add(tuple(sorted(p[v] for v in idx)))
    # 4 inverse classes (the 4 lines through the origin); GL(2,3) acts as S4 on them,
    # so orbits of non-empty subsets are determined by size: 4 orbits
    assert orbits == 4
    assert len(connection_set_orbit_reps(A).sets) == 4


def test_dedup_cap_falls_back():
    A = AbelianGroup.cyclic(10)
    reps = connection_set_orbit_reps(A, dedup_cap=8)
    assert not reps.deduplicated
    assert "cap" in reps.status
    assert len(reps.sets) == (1 << len(inverse_classes(A))) - 1
