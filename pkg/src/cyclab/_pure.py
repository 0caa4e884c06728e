"""Pure-Python kernels.

Same contract as the compiled module (cyclab._speedups); this is both the
fallback when the extension is missing and the reference the benchmark
compares against. Everything here works on plain ints used as bitsets.

Conventions shared with the compiled side:
  * graphs enter as adjacency bitmasks (n <= 64),
  * find_cycle returns (status, witness) with status 0 found / 1 exhausted /
    2 step budget hit,
  * canonical_form uses ascending-degree position targets and packs the
    relabeled adjacency as MSB-first chunks, chunk i holding the i bits
    (p_j, p_i) for j < i.
"""

from __future__ import annotations

import itertools

BACKEND = "pure"


def _bits(x):
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


class _Budget(Exception):
    pass


# -- cycle search --------------------------------------------------------


def find_cycle(adj, n, required, allowed, first_u=-1, first_v=-1, step_limit=0):
    """Depth-first search for a cycle of length >= 3 inside ``allowed``.

    The cycle must contain every vertex of ``required`` (a bitmask). With
    first_u/first_v >= 0 the search roots at the path [first_u, first_v], so
    any witness traverses that edge. Otherwise, if required is non-empty the
    anchor is its lowest vertex; if empty, anchors sweep ascending and the
    search below anchor a is restricted to vertices >= a so each cycle is
    tried once. Extension order is ascending, first closure wins, which makes
    the witness deterministic.
    """
    state = {"steps": 0}

    def rec(x, mask, path, anchor, live):
        state["steps"] += 1
        if step_limit and state["steps"] > step_limit:
            raise _Budget
        rem = required & ~mask
        if len(path) >= 3 and (adj[x] >> anchor) & 1 and rem == 0:
            return path
        if not _viable(adj, anchor, live, mask, x, rem):
            return None
        for y in _bits(adj[x] & live & ~mask):
            found = rec(y, mask | (1 << y), path + [y], anchor, live)
            if found is not None:
                return found
        return None

    try:
        if first_u >= 0:
            if not (adj[first_u] >> first_v) & 1:
                return (1, None)
            start_mask = (1 << first_u) | (1 << first_v)
            found = rec(first_v, start_mask, [first_u, first_v], first_u, allowed)
            return (0, found) if found is not None else (1, None)
        if required:
            anchor = (required & -required).bit_length() - 1
            if not (allowed >> anchor) & 1:
                return (1, None)
            found = rec(anchor, 1 << anchor, [anchor], anchor, allowed)
            return (0, found) if found is not None else (1, None)
        for anchor in range(n):
            if not (allowed >> anchor) & 1:
                continue
            live = allowed & ~((1 << anchor) - 1)
            found = rec(anchor, 1 << anchor, [anchor], anchor, live)
            if found is not None:
                return (0, found)
        return (1, None)
    except _Budget:
        return (2, None)


def _viable(adj, anchor, live, mask, endpoint, rem):
    """Cheap pruning: can the current path still become a required cycle?"""
    free = live & ~mask
    ebit = 1 << endpoint
    abit = 1 << anchor
    # anchor must keep an edge into free-or-endpoint territory to close
    if mask != abit and not adj[anchor] & (free | ebit):
        return False
    if rem:
        # every missing terminal still needs two usable edge slots
        r = rem
        while r:
            b = r & -r
            v = b.bit_length() - 1
            r ^= b
            avail = adj[v] & (free | ebit | abit)
            if avail == 0 or avail & (avail - 1) == 0:
                return False
        # and must be reachable from the endpoint through free vertices
        reach = ebit
        frontier = ebit
        while frontier and rem & ~reach:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            nxt &= (free | rem) & ~reach
            reach |= nxt
            frontier = nxt
        if rem & ~reach:
            return False
    return True


def yes_pac_scan(adj, n, r_vertices, k, step_limit=0, max_subsets=0):
    """First failing k-subset of r_vertices, ascending lex order.

    Returns (status, subset_mask, checked): status 0 every subset has its
    cycle / 1 some subset fails (mask returned) / 2 budget hit.
    """
    full = (1 << n) - 1
    checked = 0
    for combo in itertools.combinations(sorted(r_vertices), k):
        if max_subsets and checked >= max_subsets:
            return (2, 0, checked)
        checked += 1
        req = 0
        for v in combo:
            req |= 1 << v
        st, _ = find_cycle(adj, n, req, full, step_limit=step_limit)
        if st == 2:
            return (2, 0, checked)
        if st == 1:
            return (1, req, checked)
    return (0, 0, checked)


# -- canonical form -------------------------------------------------------


def _tail_bits(n, i):
    # bits contributed by positions i..n-1 (the chunk at position p has p bits)
    return sum(range(i, n))


def canonical_form(n, adj):
    """Minimum packed adjacency over degree-preserving relabelings.

    Valid as a canonical form because isomorphisms preserve degrees, so the
    minimum over degree-class-respecting bijections equals the minimum over
    all bijections.
    """
    if n == 0:
        return 0
    degs = [adj[v].bit_count() for v in range(n)]
    target = sorted(degs)
    best: list = [None]
    perm = [-1] * n
    used = [False] * n

    # Invariant: along any surviving branch the running prefix is <= the
    # matching prefix of best, so reaching a leaf always improves (or ties).
    def rec(i, val):
        if i == n:
            best[0] = val
            return
        for v in range(n):
            if used[v] or degs[v] != target[i]:
                continue
            chunk = 0
            for j in range(i):
                chunk = (chunk << 1) | ((adj[perm[j]] >> v) & 1)
            nval = (val << i) | chunk
            if best[0] is not None and nval > (best[0] >> _tail_bits(n, i + 1)):
                continue
            used[v] = True
            perm[i] = v
            rec(i + 1, nval)
            used[v] = False

    rec(0, 0)
    return best[0]


# -- DP bitset transitions -------------------------------------------------


def or_images(sig, images):
    """OR together images[b] for every set bit b of sig."""
    out = 0
    for b in _bits(sig):
        out |= images[b]
    return out


def map_bits(sig, mapping):
    """Set bit mapping[b] for every set bit b of sig; negative targets drop."""
    out = 0
    for b in _bits(sig):
        t = mapping[b]
        if t >= 0:
            out |= 1 << t
    return out


def join_rows(sig1, sig2, offs, cols, masks):
    """CSR-shaped join: for every set bit a of sig1 and row entry (b, m)
    with b set in sig2, OR m into the result."""
    out = 0
    for a in _bits(sig1):
        for idx in range(offs[a], offs[a + 1]):
            if (sig2 >> cols[idx]) & 1:
                out |= masks[idx]
    return out
