import itertools
import json
import random

import pytest

from fracext.classification import scan_instances
from fracext.extendability import (
    enumerate_t_matchings,
    implication_probe,
    is_fractional_t_extendable,
    is_t_extendable_classical,
    is_t_near_extendable,
)
from fracext.graphs import Graph, cayley_graph, circulant, delete_vertices, k4_bridge
from fracext.matching import fpm_oracle, pm_oracle

from conftest import random_graph


def t_matchings(G, t):
    for combo in itertools.combinations(G.edges(), t):
        if len({v for e in combo for v in e}) == 2 * t:
            yield combo


def brute_fractional(G, t):
    if G.n < 2 * t + 1:
        return False
    found = False
    for combo in t_matchings(G, t):
        found = True
        H, _ = delete_vertices(G, [v for e in combo for v in e])
        if not fpm_oracle(H):
            return False
    return found


def brute_classical(G, t):
    if G.n % 2 or G.n < 2 * t + 2:
        return False
    found = False
    for combo in t_matchings(G, t):
        found = True
        H, _ = delete_vertices(G, [v for e in combo for v in e])
        if not pm_oracle(H):
            return False
    return found


def test_odd_cycle_not_fractional_one_extendable():
    r = is_fractional_t_extendable(circulant(7, [1]), 1)
    assert not r.verdict
    r.revalidate()


def test_bridge_of_two_k4s():
    G = k4_bridge()
    frac = is_fractional_t_extendable(G, 1)
    classical = is_t_extendable_classical(G, 1)
    assert frac.verdict and not classical.verdict
    assert classical.counterexample.matching.edges == ((3, 4),)
    classical.revalidate()


def test_family_member_fails_with_certificate():
    r = is_fractional_t_extendable(circulant(15, [1, 4]), 2)
    assert not r.verdict
    assert r.counterexample.witness is not None
    r.revalidate()
    data = json.loads(json.dumps(r.to_json()))
    assert data["verdict"] is False and "elapsed_s" not in data["stats"]


def test_order_and_matching_preconditions():
    assert is_fractional_t_extendable(Graph.complete(4), 2).reason
    star = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    r = is_fractional_t_extendable(star, 2)
    assert not r.verdict and "matching" in r.reason
    assert not is_t_extendable_classical(circulant(7, [1, 2]), 1).verdict
    assert not is_t_near_extendable(circulant(8, [1, 2]), 1).verdict


def test_t_cap():
    with pytest.raises(ValueError):
        is_fractional_t_extendable(Graph.complete(12), 4)
    assert is_fractional_t_extendable(Graph.complete(12), 4, t_cap=4).verdict


def test_near_extendability_examples():
    assert is_t_near_extendable(circulant(9, [1, 2, 4]), 1).verdict
    assert is_t_near_extendable(Graph.complete(5), 1).verdict
    r = is_t_near_extendable(circulant(7, [1]), 1)
    assert not r.verdict and r.counterexample.deleted_vertex is not None
    r.revalidate()


def test_cayley_enumeration_representatives():
    G = circulant(9, [1, 2, 4])
    # first edge {0, s} for s in {1, 2, 4}; tail edges: 2-matchings through 0 avoid 2 vertices, 16 edges remain
    assert len(list(enumerate_t_matchings(G, 2, symmetry="cayley"))) == 48
    assert len(list(enumerate_t_matchings(circulant(5, [1]), 1))) == 5
    assert len(list(enumerate_t_matchings(Graph.complete(6), 2))) == 45
    assert list(enumerate_t_matchings(Graph.complete(3), 2)) == []


@pytest.mark.parametrize("seed", range(40))
def test_matches_brute_force_on_random_graphs(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 9)
    G = random_graph(n, rng.choice([0.4, 0.6, 0.8]), seed)
    for t in (1, 2):
        r = is_fractional_t_extendable(G, t)
        assert r.verdict == brute_fractional(G, t)
        r.revalidate()
        c = is_t_extendable_classical(G, t)
        assert c.verdict == brute_classical(G, t)
        c.revalidate()


def cayley_corpus(max_order, parity):
    for n in range(3, max_order + 1):
        if parity == "odd" and n % 2 == 0:
            continue
        for A, sets, *_ in scan_instances(n):
            for S in sets:
                yield cayley_graph(A, S)


@pytest.mark.slow
def test_symmetry_reduction_agrees_with_full_enumeration():
    checked = 0
    for G in cayley_corpus(21, "all"):
        for t in (1, 2):
            if G.n < 2 * t + 1:
                continue
            a = is_fractional_t_extendable(G, t, symmetry="cayley")
            b = is_fractional_t_extendable(G, t, symmetry="none")
            assert a.verdict == b.verdict, (G.provenance, t)
            if not a.verdict:
                a.revalidate()
            checked += 1
    assert checked > 1500


def test_symmetry_reduction_small_orders():
    for G in cayley_corpus(12, "all"):
        for t in (1, 2):
            if G.n >= 2 * t + 1:
                a = is_fractional_t_extendable(G, t, symmetry="cayley")
                b = is_fractional_t_extendable(G, t, symmetry="none")
                assert a.verdict == b.verdict
                if G.n % 2 == 0:
                    assert (is_t_extendable_classical(G, t, symmetry="cayley").verdict
                            == is_t_extendable_classical(G, t, symmetry="none").verdict)
                else:
                    assert (is_t_near_extendable(G, t, symmetry="cayley").verdict
                            == is_t_near_extendable(G, t, symmetry="none").verdict)


def test_one_sided_implications_on_cayley_corpus():
    for G in cayley_corpus(16, "all"):
        for t in (1, 2):
            if G.n % 2 == 0:
                if is_t_extendable_classical(G, t).verdict:
                    assert is_fractional_t_extendable(G, t).verdict
            elif G.n >= 2 * t + 3:
                assert implication_probe(G, t).consistent


def test_monotonicity_in_t():
    # fractional (t+1)-extendable implies fractional t-extendable wherever both are defined
    graphs = list(cayley_corpus(15, "all"))
    rng = random.Random(3)
    graphs += [random_graph(rng.randint(5, 10), rng.choice([0.5, 0.7, 0.9]), rng.random()) for _ in range(400)]
    findings = []
    for G in graphs:
        for t in (1, 2):
            if G.n < 2 * t + 3:
                continue
            upper = is_fractional_t_extendable(G, t + 1)
            if upper.verdict and not is_fractional_t_extendable(G, t).verdict:
                findings.append((G.edges(), t))
    assert findings == []


def test_implication_probe_examples():
    p = implication_probe(circulant(15, [1, 4]), 2)
    assert not p.fractional and not p.near_half and p.consistent
    p = implication_probe(circulant(9, [1, 2, 4]), 2)
    assert not p.fractional and not p.near_half and p.consistent
