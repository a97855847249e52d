# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled matching kernels for graphs on at most 64 vertices.

Same contracts as ``_kernels_py``; bitsets are ``uint64_t``.
"""

from libc.stdint cimport uint64_t
from libc.string cimport memset

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil

cdef enum:
    MAXN = 64

KIND_FPM = 0
KIND_PM = 1
MAX_VERTICES = MAXN


cdef inline int ctz(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef inline uint64_t bit(int i) noexcept nogil:
    return (<uint64_t>1) << i


cdef int load(object adj, uint64_t* out) except -1:
    cdef Py_ssize_t n = len(adj)
    if n > MAXN:
        raise ValueError("compiled kernels handle at most 64 vertices")
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = <uint64_t>adj[i]
    return <int>n


# -- fractional perfect matching (double cover, Kuhn) -----------------------

cdef struct Kuhn:
    const uint64_t* adj
    uint64_t alive
    uint64_t visited
    uint64_t free_r
    int match_r[MAXN]


cdef bint kuhn_augment(Kuhn* k, int v) noexcept nogil:
    cdef uint64_t cand = k.adj[v] & k.alive
    cdef uint64_t f = cand & k.free_r
    cdef int u
    if f:
        u = ctz(f)
        k.free_r &= ~bit(u)
        k.match_r[u] = v
        return True
    cand &= ~k.visited
    while cand:
        u = ctz(cand)
        cand &= cand - 1
        if k.visited & bit(u):
            continue
        k.visited |= bit(u)
        if kuhn_augment(k, k.match_r[u]):
            k.match_r[u] = v
            return True
    return False


cdef bint c_fpm(const uint64_t* adj, uint64_t alive) noexcept nogil:
    cdef Kuhn k
    cdef int pending[MAXN]
    cdef int npend = 0
    cdef int v, u, i
    cdef uint64_t x, cand
    if alive == 0:
        return True
    x = alive
    while x:
        v = ctz(x)
        x &= x - 1
        if (adj[v] & alive) == 0:
            return False
    k.adj = adj
    k.alive = alive
    k.free_r = alive
    x = alive
    while x:
        v = ctz(x)
        x &= x - 1
        cand = adj[v] & k.free_r
        if cand:
            u = ctz(cand)
            k.free_r &= ~bit(u)
            k.match_r[u] = v
        else:
            pending[npend] = v
            npend += 1
    for i in range(npend):
        k.visited = 0
        if not kuhn_augment(&k, pending[i]):
            return False
    return True


# -- general matching (Edmonds) ---------------------------------------------

cdef struct Blossom:
    const uint64_t* adj
    uint64_t alive
    int match[MAXN]
    int parent[MAXN]
    int base[MAXN]
    bint used[MAXN]
    bint blossom[MAXN]
    int queue[MAXN]


cdef int lca(Blossom* s, int a, int b) noexcept nogil:
    cdef bint seen[MAXN]
    memset(seen, 0, sizeof(seen))
    while True:
        a = s.base[a]
        seen[a] = True
        if s.match[a] == -1:
            break
        a = s.parent[s.match[a]]
    while True:
        b = s.base[b]
        if seen[b]:
            return b
        b = s.parent[s.match[b]]


cdef void mark_path(Blossom* s, int v, int b, int child) noexcept nogil:
    while s.base[v] != b:
        s.blossom[s.base[v]] = True
        s.blossom[s.base[s.match[v]]] = True
        s.parent[v] = child
        child = s.match[v]
        v = s.parent[s.match[v]]


cdef int find_augmenting(Blossom* s, int root) noexcept nogil:
    cdef int i, v, to, cur, head = 0, tail = 0
    cdef uint64_t x, nb
    for i in range(MAXN):
        s.used[i] = False
        s.parent[i] = -1
        s.base[i] = i
    s.used[root] = True
    s.queue[tail] = root
    tail += 1
    while head < tail:
        v = s.queue[head]
        head += 1
        nb = s.adj[v] & s.alive
        while nb:
            to = ctz(nb)
            nb &= nb - 1
            if s.base[v] == s.base[to] or s.match[v] == to:
                continue
            if to == root or (s.match[to] != -1 and s.parent[s.match[to]] != -1):
                cur = lca(s, v, to)
                memset(s.blossom, 0, sizeof(s.blossom))
                mark_path(s, v, cur, to)
                mark_path(s, to, cur, v)
                x = s.alive
                while x:
                    i = ctz(x)
                    x &= x - 1
                    if s.blossom[s.base[i]]:
                        s.base[i] = cur
                        if not s.used[i]:
                            s.used[i] = True
                            s.queue[tail] = i
                            tail += 1
            elif s.parent[to] == -1:
                s.parent[to] = v
                if s.match[to] == -1:
                    return to
                s.used[s.match[to]] = True
                s.queue[tail] = s.match[to]
                tail += 1
    return -1


cdef void augment(Blossom* s, int end) noexcept nogil:
    cdef int v = end, pv, ppv
    while v != -1:
        pv = s.parent[v]
        ppv = s.match[pv]
        s.match[v] = pv
        s.match[pv] = v
        v = ppv


cdef void greedy(Blossom* s) noexcept nogil:
    cdef uint64_t x = s.alive, nb
    cdef int v, u
    while x:
        v = ctz(x)
        x &= x - 1
        if s.match[v] != -1:
            continue
        nb = s.adj[v] & s.alive
        while nb:
            u = ctz(nb)
            nb &= nb - 1
            if s.match[u] == -1:
                s.match[u] = v
                s.match[v] = u
                break


cdef bint c_pm(const uint64_t* adj, uint64_t alive) noexcept nogil:
    cdef Blossom s
    cdef int i, root, end
    cdef uint64_t x
    if __builtin_popcountll(alive) % 2:
        return False
    s.adj = adj
    s.alive = alive
    for i in range(MAXN):
        s.match[i] = -1
    greedy(&s)
    x = alive
    while x:
        root = ctz(x)
        x &= x - 1
        if s.match[root] == -1:
            end = find_augmenting(&s, root)
            if end == -1:
                return False
            augment(&s, end)
    return True


# -- matching enumeration ----------------------------------------------------

cdef struct Search:
    const uint64_t* adj
    uint64_t alive
    const int* eu
    const int* ev
    int m
    int t
    int kind
    long long count
    int chosen[MAXN]


cdef bint search_rec(Search* s, int depth, int start, uint64_t used) noexcept nogil:
    cdef int j
    cdef uint64_t b
    cdef bint ok
    if depth == s.t:
        s.count += 1
        if s.kind == 0:
            ok = c_fpm(s.adj, s.alive & ~used)
        else:
            ok = c_pm(s.adj, s.alive & ~used)
        return not ok
    for j in range(start, s.m):
        b = bit(s.eu[j]) | bit(s.ev[j])
        if used & b:
            continue
        s.chosen[depth] = j
        if search_rec(s, depth + 1, j + 1, used | b):
            return True
    return False


def fpm_exists(adj, uint64_t alive):
    cdef uint64_t a[MAXN]
    load(adj, a)
    return bool(c_fpm(a, alive))


def pm_exists(adj, uint64_t alive):
    cdef uint64_t a[MAXN]
    load(adj, a)
    return bool(c_pm(a, alive))


def max_matching(adj, uint64_t alive):
    cdef uint64_t a[MAXN]
    cdef Blossom s
    cdef int i, root, end
    cdef uint64_t x
    cdef int n = load(adj, a)
    s.adj = a
    s.alive = alive
    for i in range(MAXN):
        s.match[i] = -1
    greedy(&s)
    x = alive
    while x:
        root = ctz(x)
        x &= x - 1
        if s.match[root] == -1:
            end = find_augmenting(&s, root)
            if end != -1:
                augment(&s, end)
    return [s.match[i] for i in range(n)]


def find_unextendable(adj, uint64_t alive, eu, ev, first, bint tail_from_zero, int t, int kind):
    cdef uint64_t a[MAXN]
    load(adj, a)
    if t > MAXN // 2:
        raise ValueError("t too large")
    cdef Py_ssize_t m = len(eu)
    cdef int[::1] eu_arr = _int_array(eu)
    cdef int[::1] ev_arr = _int_array(ev)
    cdef Search s
    cdef int i, k
    cdef uint64_t b
    cdef bint bad
    s.adj = a
    s.alive = alive
    s.m = <int>m
    s.t = t
    s.kind = kind
    s.count = 0
    if m:
        s.eu = &eu_arr[0]
        s.ev = &ev_arr[0]
    if t == 0:
        s.count = 1
        ok = c_fpm(a, alive) if kind == 0 else c_pm(a, alive)
        return 1, (None if ok else ())
    for i in first:
        b = bit(s.eu[i]) | bit(s.ev[i])
        s.chosen[0] = i
        with nogil:
            bad = search_rec(&s, 1, 0 if tail_from_zero else i + 1, b)
        if bad:
            return s.count, tuple(s.chosen[k] for k in range(t))
    return s.count, None


def _int_array(values):
    import array
    return array.array("i", values)
