# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: cycle search, canonical forms, DP bitset transitions.

Mirrors cyclab._pure exactly (same argument conventions, same deterministic
traversal orders). cyclab._kernels picks whichever is importable.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t

cnp.import_array()

BACKEND = "compiled"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef struct Ctx:
    uint64_t adj[64]
    uint64_t required
    uint64_t live
    uint64_t abit
    int anchor
    int n
    long steps
    long step_limit
    bint budget_hit
    int path[66]
    int depth


cdef bint _viable(Ctx* c, uint64_t mask, int endpoint, uint64_t rem) nogil:
    cdef uint64_t free = c.live & ~mask
    cdef uint64_t ebit = (<uint64_t>1) << endpoint
    cdef uint64_t r, avail, reach, frontier, nxt, w
    cdef int v
    if mask != c.abit and not (c.adj[c.anchor] & (free | ebit)):
        return False
    if rem:
        r = rem
        while r:
            v = __builtin_ctzll(r)
            r &= r - 1
            avail = c.adj[v] & (free | ebit | c.abit)
            if avail == 0 or (avail & (avail - 1)) == 0:
                return False
        reach = ebit
        frontier = ebit
        while frontier and (rem & ~reach):
            nxt = 0
            w = frontier
            while w:
                v = __builtin_ctzll(w)
                w &= w - 1
                nxt |= c.adj[v]
            nxt &= (free | rem) & ~reach
            reach |= nxt
            frontier = nxt
        if rem & ~reach:
            return False
    return True


cdef int _rec(Ctx* c, int x, uint64_t mask) nogil:
    # returns 1 when a witness is complete (path[0..depth-1]), 0 otherwise
    cdef uint64_t rem, cand
    cdef int y
    c.steps += 1
    if c.step_limit and c.steps > c.step_limit:
        c.budget_hit = True
        return 0
    rem = c.required & ~mask
    if c.depth >= 3 and ((c.adj[x] >> c.anchor) & 1) and rem == 0:
        return 1
    if not _viable(c, mask, x, rem):
        return 0
    cand = c.adj[x] & c.live & ~mask
    while cand:
        y = __builtin_ctzll(cand)
        cand &= cand - 1
        c.path[c.depth] = y
        c.depth += 1
        if _rec(c, y, mask | ((<uint64_t>1) << y)):
            return 1
        c.depth -= 1
        if c.budget_hit:
            return 0
    return 0


cdef int _search(Ctx* c, uint64_t allowed, int first_u, int first_v):
    # returns 0 found / 1 exhausted / 2 budget; path in c on success
    cdef int anchor
    cdef uint64_t mask
    c.budget_hit = False
    if first_u >= 0:
        if not ((c.adj[first_u] >> first_v) & 1):
            return 1
        c.anchor = first_u
        c.abit = (<uint64_t>1) << first_u
        c.live = allowed
        c.path[0] = first_u
        c.path[1] = first_v
        c.depth = 2
        mask = c.abit | ((<uint64_t>1) << first_v)
        if _rec(c, first_v, mask):
            return 0
        return 2 if c.budget_hit else 1
    if c.required:
        anchor = __builtin_ctzll(c.required)
        if not ((allowed >> anchor) & 1):
            return 1
        c.anchor = anchor
        c.abit = (<uint64_t>1) << anchor
        c.live = allowed
        c.path[0] = anchor
        c.depth = 1
        if _rec(c, anchor, c.abit):
            return 0
        return 2 if c.budget_hit else 1
    for anchor in range(c.n):
        if not ((allowed >> anchor) & 1):
            continue
        c.anchor = anchor
        c.abit = (<uint64_t>1) << anchor
        c.live = allowed & ~(c.abit - 1)
        c.path[0] = anchor
        c.depth = 1
        if _rec(c, anchor, c.abit):
            return 0
        if c.budget_hit:
            return 2
    return 1


cdef void _load(Ctx* c, adj, int n, long step_limit):
    cdef int i
    c.n = n
    c.steps = 0
    c.step_limit = step_limit
    for i in range(n):
        c.adj[i] = adj[i]


def find_cycle(adj, int n, required, allowed, int first_u=-1, int first_v=-1,
               long step_limit=0):
    """See cyclab._pure.find_cycle; identical contract and witness order."""
    cdef Ctx c
    cdef int st, i
    if n > 64:
        raise ValueError("compiled kernel handles n <= 64")
    _load(&c, adj, n, step_limit)
    c.required = required
    st = _search(&c, allowed, first_u, first_v)
    if st == 0:
        return (0, [c.path[i] for i in range(c.depth)])
    return (st, None)


def yes_pac_scan(adj, int n, r_vertices, int k, long step_limit=0,
                 long max_subsets=0):
    """See cyclab._pure.yes_pac_scan; identical contract."""
    cdef Ctx c
    cdef int nr, i, j, st
    cdef long checked = 0
    cdef int idx[64]
    cdef int rv[64]
    cdef uint64_t req, full
    if n > 64:
        raise ValueError("compiled kernel handles n <= 64")
    if k < 1:
        raise ValueError("k must be >= 1 here; k = 0 is the caller's case")
    rs = sorted(r_vertices)
    nr = len(rs)
    if k > nr:
        return (0, 0, 0)
    for i in range(nr):
        rv[i] = rs[i]
    for i in range(k):
        idx[i] = i
    full = ((<uint64_t>1) << n) - 1 if n < 64 else <uint64_t>0 - 1
    _load(&c, adj, n, step_limit)
    while True:
        if max_subsets and checked >= max_subsets:
            return (2, 0, checked)
        checked += 1
        req = 0
        for i in range(k):
            req |= (<uint64_t>1) << rv[idx[i]]
        c.required = req
        c.steps = 0
        st = _search(&c, full, -1, -1)
        if st == 2:
            return (2, 0, checked)
        if st == 1:
            return (1, req, checked)
        # next k-combination in lex order
        i = k - 1
        while i >= 0 and idx[i] == nr - k + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1
    return (0, 0, checked)


# -- canonical form -------------------------------------------------------


cdef struct CanonCtx:
    uint64_t adj[12]
    int degs[12]
    int target[12]
    int perm[12]
    bint used[12]
    int tail[13]
    int n
    uint64_t best
    bint have


cdef void _canon_rec(CanonCtx* c, int i, uint64_t val) nogil:
    cdef int v, j
    cdef uint64_t chunk, nval
    if i == c.n:
        c.best = val
        c.have = True
        return
    for v in range(c.n):
        if c.used[v] or c.degs[v] != c.target[i]:
            continue
        chunk = 0
        for j in range(i):
            chunk = (chunk << 1) | ((c.adj[c.perm[j]] >> v) & 1)
        nval = (val << i) | chunk
        if c.have and nval > (c.best >> c.tail[i + 1]):
            continue
        c.used[v] = True
        c.perm[i] = v
        _canon_rec(c, i + 1, nval)
        c.used[v] = False


def canonical_form(int n, adj):
    """See cyclab._pure.canonical_form; this version handles n <= 11."""
    cdef CanonCtx c
    cdef int i
    if n == 0:
        return 0
    if n > 11:
        raise ValueError("compiled canonical_form handles n <= 11")
    c.n = n
    c.have = False
    for i in range(n):
        c.adj[i] = adj[i]
        c.degs[i] = __builtin_popcountll(adj[i])
        c.used[i] = False
    tgt = sorted([c.degs[i] for i in range(n)])
    for i in range(n):
        c.target[i] = tgt[i]
    c.tail[n] = 0
    for i in range(n - 1, -1, -1):
        c.tail[i] = c.tail[i + 1] + i
    _canon_rec(&c, 0, 0)
    return int(c.best)


# -- DP bitset transitions -------------------------------------------------
#
# Signatures travel as little-endian uint64 word arrays; the Python wrapper
# in cyclab._kernels converts to and from arbitrary-size ints.


def or_images_arr(cnp.uint64_t[::1] sig, cnp.uint64_t[:, ::1] images,
                  cnp.uint64_t[::1] out):
    cdef Py_ssize_t w, ow, nw = sig.shape[0], words_out = out.shape[0]
    cdef uint64_t x
    cdef Py_ssize_t b
    for ow in range(words_out):
        out[ow] = 0
    for w in range(nw):
        x = sig[w]
        while x:
            b = w * 64 + __builtin_ctzll(x)
            x &= x - 1
            for ow in range(words_out):
                out[ow] |= images[b, ow]


def map_bits_arr(cnp.uint64_t[::1] sig, cnp.int32_t[::1] mapping,
                 cnp.uint64_t[::1] out):
    cdef Py_ssize_t w, nw = sig.shape[0], words_out = out.shape[0]
    cdef uint64_t x
    cdef Py_ssize_t b
    cdef int32_t t
    for w in range(words_out):
        out[w] = 0
    for w in range(nw):
        x = sig[w]
        while x:
            b = w * 64 + __builtin_ctzll(x)
            x &= x - 1
            t = mapping[b]
            if t >= 0:
                out[t >> 6] |= (<uint64_t>1) << (t & 63)


def join_rows_arr(cnp.uint64_t[::1] sig1, cnp.uint64_t[::1] sig2,
                  cnp.int64_t[::1] offs, cnp.int32_t[::1] cols,
                  cnp.int32_t[::1] pars, cnp.uint64_t[::1] out):
    cdef Py_ssize_t w, nw = sig1.shape[0], words_out = out.shape[0]
    cdef uint64_t x
    cdef Py_ssize_t a, idx
    cdef int32_t b, p
    for w in range(words_out):
        out[w] = 0
    for w in range(nw):
        x = sig1[w]
        while x:
            a = w * 64 + __builtin_ctzll(x)
            x &= x - 1
            for idx in range(offs[a], offs[a + 1]):
                b = cols[idx]
                if (sig2[b >> 6] >> (b & 63)) & 1:
                    p = pars[idx]
                    out[p >> 6] |= (<uint64_t>1) << (p & 63)
