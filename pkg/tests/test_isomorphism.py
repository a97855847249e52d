import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from fracext.graphs import Graph, cayley_graph, circulant, petersen
from fracext.groups import ConnectionSet, parse_product
from fracext.isomorphism import IsoBudgetExceeded, are_isomorphic, check_isomorphism, multiplier_equivalent

from conftest import random_graph


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return H


def product_cayley(m, elements):
    A, phi = parse_product(f"Z{m}xZ3")
    return cayley_graph(A, ConnectionSet.closed(A, [phi(x) for x in elements]))


def test_three_generator_product_matches_circulant_n5():
    G = product_cayley(5, [(1, 0), (1, 1), (1, -1)])
    H = circulant(15, [1, 4, 6])
    phi = are_isomorphic(G, H)
    assert phi is not None and check_isomorphism(G, H, phi)


def test_nonisomorphic_circulants_of_order_nine():
    G, H = circulant(9, [1, 2]), circulant(9, [1, 3])
    assert are_isomorphic(G, H) is None
    assert not nx.is_isomorphic(to_nx(G), to_nx(H))


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=3, max_value=20), st.data())
def test_multiplier_images_are_isomorphic(n, data):
    size = data.draw(st.integers(min_value=1, max_value=max(1, n // 2)))
    residues = data.draw(st.lists(st.integers(min_value=1, max_value=n - 1), min_size=1, max_size=size))
    units = [k for k in range(1, n) if math.gcd(k, n) == 1]
    k = data.draw(st.sampled_from(units))
    G = circulant(n, residues)
    H = circulant(n, [k * r for r in residues])
    phi = are_isomorphic(G, H)
    assert phi is not None and check_isomorphism(G, H, phi)
    S = {r % n for r in residues} | {-r % n for r in residues}
    T = {k * s % n for s in S}
    found = multiplier_equivalent(n, S, T)
    assert found is not None and {found * s % n for s in S} == T


@pytest.mark.parametrize("seed", range(150))
def test_agrees_with_networkx_on_random_pairs(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 9)
    p = rng.choice([0.3, 0.5, 0.7])
    G = random_graph(n, p, rng.random())
    if rng.random() < 0.5:
        perm = list(range(n))
        rng.shuffle(perm)
        H = G.relabel(perm)
    else:
        H = random_graph(n, p, rng.random())
        # same degree sequence is where refinement has to work
        if sorted(G.degrees()) != sorted(H.degrees()):
            H = G.relabel(list(reversed(range(n))))
    phi = are_isomorphic(G, H)
    assert (phi is not None) == nx.is_isomorphic(to_nx(G), to_nx(H))
    if phi is not None:
        assert check_isomorphism(G, H, phi)


def test_regular_graphs_with_equal_parameters():
    # Petersen and the pentagonal prism are both cubic on 10 vertices
    prism = Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)]
                             + [(5 + i, 5 + (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)])
    assert are_isomorphic(petersen(), prism) is None
    # all cubic circulants of order 12 against networkx
    for a in range(1, 6):
        G, H = circulant(12, [a, 6]), circulant(12, [1, 6])
        assert (are_isomorphic(G, H) is not None) == nx.is_isomorphic(to_nx(G), to_nx(H))


def test_check_isomorphism_rejects_bad_maps():
    G = circulant(5, [1])
    assert not check_isomorphism(G, G, [0, 2, 1, 3, 4])
    assert not check_isomorphism(G, G, [0, 0, 1, 2, 3])


def test_cap():
    with pytest.raises(IsoBudgetExceeded):
        are_isomorphic(circulant(70, [1]), circulant(70, [1]))
