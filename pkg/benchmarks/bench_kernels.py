"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each workload runs under both backends (when the compiled one is built) and
the best-of-``repeat`` wall time is reported, together with the speedup.
"""

import argparse
import json
import random
import sys
import time

from fracext import kernels
from fracext.classification import verify_theorem
from fracext.extendability import is_fractional_t_extendable, is_t_near_extendable
from fracext.graphs import Graph, circulant


def random_graphs(count, lo, hi, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(lo, hi)
        p = rng.choice([0.2, 0.35, 0.5])
        out.append(Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]))
    return out


def workloads():
    small = random_graphs(3000, 8, 16, 1)
    mid = random_graphs(300, 30, 60, 2)
    dense = circulant(31, [1, 2, 4, 8, 15])
    return [
        ("fpm_exists x3000 (n 8-16)", lambda: [kernels.fpm_exists(G.adj, G.full_mask) for G in small]),
        ("pm_exists x3000 (n 8-16)", lambda: [kernels.pm_exists(G.adj, G.full_mask) for G in small]),
        ("pm_exists x300 (n 30-60)", lambda: [kernels.pm_exists(G.adj, G.full_mask) for G in mid]),
        ("frac 2-ext Circ(31), no symmetry", lambda: is_fractional_t_extendable(dense, 2, symmetry="none")),
        ("near 2-ext Circ(31), Cayley symmetry", lambda: is_t_near_extendable(dense, 2, symmetry="cayley")),
        ("f2e scan, odd orders 5..19", lambda: verify_theorem("f2e", range(5, 20), parity="odd")),
    ]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", metavar="FILE")
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only timing the Python kernels", file=sys.stderr)
    rows = []
    for name, fn in workloads():
        row = {"workload": name}
        for backend in backends:
            with kernels.use_backend(backend):
                row[backend] = best_of(fn, args.repeat)
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)

    width = max(len(r["workload"]) for r in rows)
    print(f"{'workload':<{width}}  {'python s':>9}  {'cython s':>9}  {'speedup':>8}")
    for r in rows:
        c = f"{r['cython']:9.4f}" if "cython" in r else f"{'-':>9}"
        s = f"{r['speedup']:7.1f}x" if "speedup" in r else f"{'-':>8}"
        print(f"{r['workload']:<{width}}  {r['python']:9.4f}  {c}  {s}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
