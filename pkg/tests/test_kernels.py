import itertools
import random

import pytest

from fracext import kernels
from fracext import _kernels_py
from fracext.graphs import circulant
from fracext.matching import fpm_oracle, pm_oracle

from conftest import random_graph

BACKENDS = kernels.available_backends()
needs_c = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def test_python_backend_always_available():
    assert "python" in BACKENDS
    with kernels.use_backend("python"):
        assert kernels.backend_name() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        with kernels.use_backend("fortran"):
            pass


@pytest.mark.parametrize("backend", BACKENDS)
def test_kernels_match_oracles_on_random_subgraphs(backend):
    rng = random.Random(7)
    with kernels.use_backend(backend):
        for _ in range(600):
            n = rng.randint(1, 10)
            G = random_graph(n, rng.choice([0.3, 0.5, 0.7]), rng.random())
            alive = rng.getrandbits(n) | (1 if rng.random() < 0.2 else 0)
            keep = [v for v in range(n) if alive >> v & 1]
            sub = G.__class__.from_edges(len(keep), [(keep.index(u), keep.index(v)) for u, v in G.edges()
                                                      if u in keep and v in keep])
            assert kernels.fpm_exists(G.adj, alive) == fpm_oracle(sub)
            assert kernels.pm_exists(G.adj, alive) == pm_oracle(sub)
            mate = kernels.max_matching(G.adj, alive)
            for v in range(n):
                if mate[v] >= 0:
                    assert alive >> v & 1 and mate[mate[v]] == v and G.has_edge(v, mate[v])


@needs_c
def test_backends_agree_on_enumeration():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(4, 12)
        G = random_graph(n, rng.choice([0.4, 0.6, 0.8]), rng.random())
        edges = G.edges()
        eu = [u for u, _ in edges]
        ev = [v for _, v in edges]
        for t, kind in itertools.product((0, 1, 2), (kernels.KIND_FPM, kernels.KIND_PM)):
            args = (G.adj, G.full_mask, eu, ev, list(range(len(edges))), False, t, kind)
            with kernels.use_backend("python"):
                py = kernels.find_unextendable(*args)
            with kernels.use_backend("cython"):
                c = kernels.find_unextendable(*args)
            assert py == c


@needs_c
def test_compiled_kernels_refuse_large_graphs():
    from fracext import _kernels_c

    G = circulant(70, [1])
    with pytest.raises(ValueError):
        _kernels_c.fpm_exists(G.adj, 0b11)
    # the dispatcher falls back to Python above 64 vertices
    assert kernels.fpm_exists(G.adj, G.full_mask)


def test_enumeration_counts_all_matchings_when_extendable():
    G = circulant(6, [1, 2, 3])  # K6
    edges = G.edges()
    eu = [u for u, _ in edges]
    ev = [v for _, v in edges]
    count, bad = _kernels_py.find_unextendable(G.adj, G.full_mask, eu, ev, list(range(15)), False, 2, 1)
    assert bad is None and count == 45  # 2-matchings of K6


def test_environment_forces_python_at_import():
    import os
    import subprocess
    import sys

    env = dict(os.environ, FRACEXT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from fracext import kernels; print(kernels.backend_name())"],
                         capture_output=True, text=True, env=env, check=True).stdout.strip()
    assert out == "python"
