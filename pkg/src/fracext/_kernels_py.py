"""Pure-Python matching kernels.

Every function takes the adjacency of a graph as a sequence of bitsets plus an
``alive`` bitset and works on the subgraph induced by the alive vertices.  The
compiled module ``_kernels_c`` exposes the same functions.
"""

from __future__ import annotations

import sys

KIND_FPM = 0
KIND_PM = 1

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def fpm_exists(adj, alive):
    """Fractional perfect matching of the alive subgraph, via a perfect matching of its double cover."""
    if not alive:
        return True
    for v in _bits(alive):
        if not adj[v] & alive:
            return False
    match_r = [-1] * len(adj)
    free_r = alive
    pending = []
    for v in _bits(alive):
        cand = adj[v] & free_r
        if cand:
            low = cand & -cand
            match_r[low.bit_length() - 1] = v
            free_r ^= low
        else:
            pending.append(v)

    visited = 0

    def augment(v):
        nonlocal visited, free_r
        cand = adj[v] & alive
        free = cand & free_r
        if free:
            low = free & -free
            match_r[low.bit_length() - 1] = v
            free_r ^= low
            return True
        cand &= ~visited
        while cand:
            low = cand & -cand
            cand ^= low
            if visited & low:
                continue
            visited |= low
            u = low.bit_length() - 1
            if augment(match_r[u]):
                match_r[u] = v
                return True
        return False

    for v in pending:
        visited = 0
        if not augment(v):
            return False
    return True


def _find_augmenting(adj, alive, match, root):
    """Edmonds' search from an exposed ``root``; returns (end vertex or -1, parent array)."""
    n = len(adj)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    queue = [root]
    qi = 0

    def lca(a, b):
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v, b, child, blossom):
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for to in _bits(adj[v] & alive):
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in _bits(alive):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    return to, parent
                used[match[to]] = True
                queue.append(match[to])
    return -1, parent


def _augment(match, parent, end):
    v = end
    while v != -1:
        pv = parent[v]
        ppv = match[pv]
        match[v] = pv
        match[pv] = v
        v = ppv


def _greedy(adj, alive, match):
    for v in _bits(alive):
        if match[v] == -1:
            for u in _bits(adj[v] & alive):
                if match[u] == -1:
                    match[u] = v
                    match[v] = u
                    break


def max_matching(adj, alive):
    """Maximum matching of the alive subgraph as a mate list (-1 = exposed)."""
    match = [-1] * len(adj)
    _greedy(adj, alive, match)
    for root in _bits(alive):
        if match[root] == -1:
            end, parent = _find_augmenting(adj, alive, match, root)
            if end != -1:
                _augment(match, parent, end)
    return match


def pm_exists(adj, alive):
    if alive.bit_count() % 2:
        return False
    match = [-1] * len(adj)
    _greedy(adj, alive, match)
    for root in _bits(alive):
        if match[root] == -1:
            # an exposed vertex without an augmenting path stays exposed forever
            end, parent = _find_augmenting(adj, alive, match, root)
            if end == -1:
                return False
            _augment(match, parent, end)
    return True


def find_unextendable(adj, alive, eu, ev, first, tail_from_zero, t, kind):
    """Search size-``t`` matchings for one whose removal kills the target property.

    The first edge runs over the edge indices in ``first``.  Later edges have
    increasing indices, starting after the first edge, or from 0 when
    ``tail_from_zero`` is set.  Each matching's endpoints are removed from
    ``alive`` and the rest is tested for a fractional perfect matching
    (``kind == KIND_FPM``) or a perfect matching (``KIND_PM``).

    Returns ``(matchings_checked, bad)`` where ``bad`` is the tuple of edge
    indices of the first failing matching, or ``None``.
    """
    test = fpm_exists if kind == KIND_FPM else pm_exists
    m = len(eu)
    chosen = []
    count = 0

    def rec(depth, start, used):
        nonlocal count
        if depth == t:
            count += 1
            return not test(adj, alive & ~used)
        for j in range(start, m):
            bit = (1 << eu[j]) | (1 << ev[j])
            if used & bit:
                continue
            chosen.append(j)
            if rec(depth + 1, j + 1, used | bit):
                return True
            chosen.pop()
        return False

    if t == 0:
        count = 1
        return count, (None if test(adj, alive) else ())
    for i in first:
        bit = (1 << eu[i]) | (1 << ev[i])
        chosen.append(i)
        if rec(1, 0 if tail_from_zero else i + 1, bit):
            return count, tuple(chosen)
        chosen.pop()
    return count, None
