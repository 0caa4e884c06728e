"""Dynamic programming over nice tree decompositions.

solve_pac(g, r, k) decides whether every k terminals of r lie on a common
cycle of g. Table entries are triples (i, committed, signature): i terminals
charged so far, those still in the bag (committed, always active in every
signature pairing), and the signature, a set of pairings describing every
way a witness subgraph can meet the bag.

Transitions:
  * insert v: glue v with any subset of the edges designated to this node
    (the committing branch additionally charges v and keeps only pairings
    with v active);
  * forget v: dissolve v out of every pairing, closing triangles into
    2-end cycle markers; pairings where v has an open end die;
  * join: glue signatures pairwise, multiplicities adding.

Every graph edge is designated to exactly one insert node (the first one in
post-order where both ends share the bag), which is what makes the
multiplicity-adding glue at joins count each edge once.

An entry whose signature empties is dropped and raises a failure flag: some
concrete terminal subset just lost its last witness, so the overall answer
is False. At the (empty) root bag the answer is True iff the flag never
fired and, for every i in 1..k, each entry holds the vertex-less loop.

Two implementations agree: an object-level one built straight on the pairing
algebra (the reference, also the hook for the alternative transition
variants), and an integer-coded engine where signatures are bitsets over a
per-bag-size alphabet and transitions are cached tables applied by the
compiled kernels. solve_pac uses the engine.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from . import _kernels
from .decomp import (
    NiceTreeDecomposition,
    TreeDecomposition,
    exact_treewidth,
    make_nice,
    validate,
)
from .errors import InvalidDecomposition, ParameterError, WidthError
from .graph import Graph
from .pairings import (
    Pairing,
    dissolve_pairing,
    empty_pairing,
    enumerate_pairings,
    loop_pairing,
    oplus,
    union_pairings,
)

WIDTH_CAP = 5


class DpEntry(NamedTuple):
    i: int
    committed: frozenset
    signature: frozenset


# -- object-level table operations (reference semantics) ---------------------


def leaf_table() -> frozenset:
    return frozenset({DpEntry(0, frozenset(), frozenset({empty_pairing()}))})


def _aux_attachments(v, ends):
    """What may glue on when v enters: nothing, or v with 0..2 of its edges."""
    ends = sorted(set(ends))
    yield None
    for r in range(min(2, len(ends)) + 1):
        for combo in itertools.combinations(ends, r):
            yield combo


def insert_table(child, v, v_annotated, bag, k, edge_ends, lift_closure=None):
    """Tables after v enters the bag.

    edge_ends are the neighbors of v whose edges are designated to this
    node. lift_closure is the experimental printed-transition variant: an
    iterable of vertices, or "printed" for bag-minus-committed, closing each
    glued pairing under lifts; the default (None) is the sound plain glue.
    Entries with empty signatures are kept; the solver turns them into its
    failure flag.
    """
    if v not in bag:
        raise ParameterError(f"insert vertex {v} not in bag")
    out = set()
    for e in child:
        if lift_closure is None:
            lifts = ()
        elif lift_closure == "printed":
            lifts = frozenset(bag) - e.committed - {v}
        else:
            lifts = frozenset(lift_closure)
        sigs = set()
        for p in e.signature:
            for aux in _aux_attachments(v, edge_ends):
                if aux is None:
                    glue = ((), ())
                else:
                    glue = (
                        (v,) + aux,
                        tuple((v, u) if v <= u else (u, v) for u in aux),
                    )
                sigs |= oplus(p, glue, lifts)
        out.add(DpEntry(e.i, e.committed, frozenset(sigs)))
        if v_annotated and e.i < k:
            out.add(
                DpEntry(
                    e.i + 1,
                    e.committed | {v},
                    frozenset(q for q in sigs if v in q.vertices),
                )
            )
    return frozenset(out)


def forget_table(child, v, bag=None):
    if bag is not None and v in bag:
        raise ParameterError(f"forgotten vertex {v} still in bag")
    out = set()
    for e in child:
        sigs = set()
        for p in e.signature:
            q = dissolve_pairing(p, v)
            if q is not None:
                sigs.add(q)
        out.add(DpEntry(e.i, e.committed - {v}, frozenset(sigs)))
    return frozenset(out)


def join_table(left, right, k):
    out = set()
    for a in left:
        for b in right:
            i = a.i + b.i - len(a.committed & b.committed)
            if i > k:
                continue
            sigs = set()
            for p1 in a.signature:
                for p2 in b.signature:
                    u = union_pairings(p1, p2)
                    if u is not None:
                        sigs.add(u)
            out.add(DpEntry(i, a.committed | b.committed, frozenset(sigs)))
    return frozenset(out)


# -- edge designation ----------------------------------------------------------


def designate_edges(g: Graph, nd: NiceTreeDecomposition) -> dict:
    """node id -> neighbors u such that edge {vertex(node), u} enters there.

    Each graph edge lands on exactly one insert node: the first in post-order
    whose inserted vertex sees the other end in the bag. Such a node always
    exists because the lowest bags containing both ends are inserts of one of
    them.
    """
    assigned = {}
    per_node: dict = {}
    for t in nd.post_order():
        node = nd.nodes[t]
        if node.kind != "insert":
            continue
        v = node.vertex
        for u in sorted(node.bag - {v}):
            e = (u, v) if u < v else (v, u)
            if g.has_edge(*e) and e not in assigned:
                assigned[e] = t
                per_node.setdefault(t, []).append(u)
    missing = set(g.edges) - set(assigned)
    if missing:
        raise InvalidDecomposition(
            f"edges never co-resident at an insert node: {sorted(missing)}"
        )
    return per_node


# -- shared solver scaffolding ---------------------------------------------------


@dataclass
class DpTrace:
    width: int = 0
    nodes: list = field(default_factory=list)  # (id, kind, bag size, entries)
    flags: list = field(default_factory=list)  # (node id, kind) where a signature died
    root: dict = field(default_factory=dict)   # i -> (entry count, all have loop)
    answer: bool | None = None
    elapsed_ms: float = 0.0
    note: str = ""


def _prepare(g: Graph, r, k, decomposition, width_cap):
    if not isinstance(k, int) or k < 0:
        raise ParameterError("k must be a non-negative integer")
    r = frozenset(r)
    if not r <= set(g.vertices):
        raise ParameterError("r is not a vertex subset")
    if not g.is_simple():
        raise ParameterError("the DP needs a simple graph; the oracle handles the rest")
    if k == 0 or len(r) < k:
        return r, None  # vacuously true
    if decomposition is None:
        _, decomposition = exact_treewidth(g)
    else:
        problems = validate(g, decomposition)
        if problems:
            raise InvalidDecomposition("; ".join(problems))
    if decomposition.width > width_cap:
        raise WidthError(
            f"decomposition width {decomposition.width} above cap {width_cap}"
        )
    return r, make_nice(g, decomposition)


def _check_root(entries, k, loop_test, trace):
    ok = True
    for i in range(1, k + 1):
        sigs = [s for (ii, _, s) in entries if ii == i]
        good = bool(sigs) and all(loop_test(s) for s in sigs)
        if trace is not None:
            trace.root[i] = (len(sigs), good)
        ok = ok and good
    return ok


# -- reference driver (pairing objects) -------------------------------------------


def solve_pac_reference(g, r, k, decomposition=None, *, width_cap=WIDTH_CAP,
                        printed_lift_closure=False) -> bool:
    """Object-level twin of solve_pac, kept deliberately close to the table
    operation definitions; slow, for cross-checking."""
    r, nd = _prepare(g, r, k, decomposition, width_cap)
    if nd is None:
        return True
    per_node = designate_edges(g, nd)
    closure = "printed" if printed_lift_closure else None
    tabs = {}
    flag = False
    for t in nd.post_order():
        node = nd.nodes[t]
        if node.kind == "leaf":
            tab = leaf_table()
        elif node.kind == "insert":
            (c,) = node.children
            tab = insert_table(
                tabs.pop(c), node.vertex, node.vertex in r, node.bag, k,
                per_node.get(t, ()), lift_closure=closure,
            )
        elif node.kind == "forget":
            (c,) = node.children
            tab = forget_table(tabs.pop(c), node.vertex, node.bag)
        else:
            a, b = node.children
            tab = join_table(tabs.pop(a), tabs.pop(b), k)
        clean = set()
        for e in tab:
            if not e.signature:
                flag = True  # an i = 0 entry can never empty, so this is a death
                continue
            assert e.committed <= node.bag
            assert all(set(e.committed) <= set(p.vertices) for p in e.signature)
            clean.add(e)
        tabs[t] = frozenset(clean)
    root = tabs[nd.post_order()[-1]]
    if flag:
        return False
    lp = loop_pairing()
    return _check_root(
        [(e.i, e.committed, e.signature) for e in root], k, lambda s: lp in s, None
    )


# -- integer-coded engine -----------------------------------------------------------


@lru_cache(maxsize=None)
def _alphabet(b: int):
    ps = enumerate_pairings(tuple(range(b)))
    return ps, {p: i for i, p in enumerate(ps)}


@lru_cache(maxsize=None)
def _active_mask(b: int, slot: int) -> int:
    ps, _ = _alphabet(b)
    m = 0
    for i, p in enumerate(ps):
        if slot in p.vertices:
            m |= 1 << i
    return m


def _relabel(p: Pairing, up) -> Pairing:
    return Pairing(
        tuple(up[x] for x in p.vertices),
        tuple((up[u], up[w]) for u, w in p.edges),
        p.loop,
    )


# Bag sizes up to this build insert tables by forward enumeration and join
# tables in full; bigger bags build inserts from a reverse pass over the
# parent alphabet (one row per parent instead of child x aux-combo per key)
# and evaluate joins lazily, since a full 300k x 300k join relation is the
# difference between seconds and hours on the dense end of the catalog.
# Forget tables are cheap at every size: one dissolve pass over the alphabet.
_EAGER_MAX_B = 5


def _insert_image_of(base: Pairing, vpos: int, ends, index) -> int:
    """Mask of parent ids one relabeled child pairing can become."""
    m = 1 << index[base]
    for r in range(min(2, len(ends)) + 1):
        for combo in itertools.combinations(ends, r):
            try:
                q = Pairing(
                    base.vertices + (vpos,),
                    base.edges + tuple(
                        (vpos, u) if vpos <= u else (u, vpos) for u in combo
                    ),
                    base.loop,
                )
            except Exception:
                continue
            m |= 1 << index[q]
    return m


@lru_cache(maxsize=None)
def _insert_images(b: int, vpos: int, allowed: frozenset):
    """Child pairing id -> mask of parent ids over all aux attachments."""
    child_ps, _ = _alphabet(b - 1)
    ps, index = _alphabet(b)
    up = {s: (s if s < vpos else s + 1) for s in range(b - 1)}
    ends = sorted(allowed)
    images = [_insert_image_of(_relabel(cp, up), vpos, ends, index) for cp in child_ps]
    return _kernels.InsertTable(images, len(ps))


@lru_cache(maxsize=None)
def _insert_rows(b: int, vpos: int):
    """One reverse pass over the parent alphabet: each parent pairing has a
    unique base child (drop vpos), so a row is (child id, parent id, mask of
    slots vpos's edges need). Filtering rows by an allowed-slot mask then
    yields the same images as the forward construction without iterating
    child x aux-combo for every key."""
    ps, _ = _alphabet(b)
    _, child_index = _alphabet(b - 1)
    down = {s: (s if s < vpos else s - 1) for s in range(b) if s != vpos}
    rows = []
    for pid, q in enumerate(ps):
        if vpos in q.vertices:
            ends = [w if u == vpos else u for (u, w) in q.edges if vpos in (u, w)]
            if len(set(ends)) != len(ends):
                continue  # both cycle-edges at vpos to one end: needs a parallel edge
            try:
                base = Pairing(
                    tuple(x for x in q.vertices if x != vpos),
                    tuple(e for e in q.edges if vpos not in e),
                    q.loop,
                )
            except Exception:
                continue
            em = 0
            for u in ends:
                em |= 1 << u
        else:
            base = q
            em = 0
        rows.append((child_index[_relabel(base, down)], pid, em))
    return tuple(rows)


class _MaskedInsertTable:
    """Full insert images restricted to parents whose attachment stays inside
    an allowed end set. Exact, not an approximation: each parent pairing has a
    unique preimage row, so masking parents equals rebuilding per key."""

    __slots__ = ("_full", "_vmask")

    def __init__(self, full, vmask: int):
        self._full = full
        self._vmask = vmask

    def apply(self, sig: int) -> int:
        return self._full.apply(sig) & self._vmask


@lru_cache(maxsize=None)
def _big_insert_full(b: int, vpos: int):
    """Insert images with every end allowed; shared across allowed sets."""
    child_ps, _ = _alphabet(b - 1)
    ps, _ = _alphabet(b)
    images = [0] * len(child_ps)
    for cid, pid, _ in _insert_rows(b, vpos):
        images[cid] |= 1 << pid
    return _kernels.InsertTable(images, len(ps))


@lru_cache(maxsize=None)
def _insert_valid_mask(b: int, vpos: int, allowed: frozenset) -> int:
    """Mask of parents whose attachment edges all land in allowed slots."""
    ps, _ = _alphabet(b)
    amask = 0
    for u in allowed:
        amask |= 1 << u
    buf = bytearray((len(ps) + 7) >> 3)
    for _, pid, em in _insert_rows(b, vpos):
        if em & ~amask == 0:
            buf[pid >> 3] |= 1 << (pid & 7)
    return int.from_bytes(buf, "little")


def _big_insert_images(b: int, vpos: int, allowed: frozenset):
    """Insert table for bags past the eager cutoff. The heavy full-image
    table amortizes over every allowed set seen at (b, vpos); per-key work is
    one linear mask pass instead of per-child image construction."""
    return _MaskedInsertTable(
        _big_insert_full(b, vpos), _insert_valid_mask(b, vpos, allowed)
    )


class _LazyJoinTable:
    def __init__(self, b: int):
        self._ps, self._index = _alphabet(b)
        self._memo: dict[tuple[int, int], int] = {}

    def apply(self, sig1: int, sig2: int) -> int:
        ids2 = []
        s = sig2
        while s:
            low = s & -s
            s ^= low
            ids2.append(low.bit_length() - 1)
        out = 0
        memo = self._memo
        ps = self._ps
        while sig1:
            low = sig1 & -sig1
            sig1 ^= low
            ia = low.bit_length() - 1
            a = ps[ia]
            for ib in ids2:
                key = (ia, ib)
                img = memo.get(key)
                if img is None:
                    u = union_pairings(a, ps[ib])
                    img = 0 if u is None else 1 << self._index[u]
                    memo[key] = img
                out |= img
        return out


@lru_cache(maxsize=None)
def _lazy_join(b: int) -> _LazyJoinTable:
    return _LazyJoinTable(b)


@lru_cache(maxsize=None)
def _forget_mapping(b: int, vpos: int):
    """Pairing id over b slots -> id over b-1 slots after dissolving vpos."""
    ps, _ = _alphabet(b)
    child_ps, child_index = _alphabet(b - 1)
    down = {s: (s if s < vpos else s - 1) for s in range(b) if s != vpos}
    mapping = []
    for p in ps:
        q = dissolve_pairing(p, vpos)
        mapping.append(-1 if q is None else child_index[_relabel(q, down)])
    return _kernels.ForgetTable(mapping, len(child_ps))


@lru_cache(maxsize=None)
def _join_pairs(b: int):
    """All (left id, right id, glued id) triples; the quadratic sweep runs
    once per bag size and is cached for the process lifetime."""
    ps, index = _alphabet(b)
    pairs = []
    for ia, a in enumerate(ps):
        for ib, bb in enumerate(ps):
            u = union_pairings(a, bb)
            if u is not None:
                pairs.append((ia, ib, index[u]))
    return _kernels.JoinTable(len(ps), pairs, len(ps))


def _prune_dominated(entries):
    """Per (i, K), keep only inclusion-minimal signatures.

    Every transition is monotone in the signature: table images, the commit
    mask and joins all map subsets to subsets. A superset signature therefore
    never empties earlier than a kept subset, and at the root it contains the
    loop whenever the subset does, so dropping it cannot change the verdict.
    On symmetric dense graphs this collapses tables by orders of magnitude.
    """
    by_key = {}
    for i, com, sig in entries:
        by_key.setdefault((i, com), []).append(sig)
    out = set()
    for (i, com), sigs in by_key.items():
        if len(sigs) > 1:
            sigs.sort(key=int.bit_count)
            kept = []
            for s in sigs:
                if not any(s & t == t for t in kept):
                    kept.append(s)
            sigs = kept
        out.update((i, com, s) for s in sigs)
    return out


def _run_engine(g, r, k, nd, trace=None):
    per_node = designate_edges(g, nd)
    tabs = {}
    flag = False
    post = nd.post_order()
    for t in post:
        node = nd.nodes[t]
        bag = tuple(sorted(node.bag))
        b = len(bag)
        if node.kind == "leaf":
            entries = {(0, frozenset(), 1)}  # alphabet(0): bit 0 empty, bit 1 loop
        elif node.kind == "insert":
            (c,) = node.children
            v = node.vertex
            vpos = bag.index(v)
            allowed = frozenset(bag.index(u) for u in per_node.get(t, ()))
            if b <= _EAGER_MAX_B:
                table = _insert_images(b, vpos, allowed)
            else:
                table = _big_insert_images(b, vpos, allowed)
            amask = _active_mask(b, vpos)
            annotated = v in r
            entries = set()
            for i, com, sig in tabs.pop(c):
                ns = table.apply(sig)
                entries.add((i, com, ns))
                if annotated and i < k:
                    cs = ns & amask
                    if cs:
                        entries.add((i + 1, com | {v}, cs))
                    else:
                        flag = True
                        if trace is not None:
                            trace.flags.append((t, "insert"))
        elif node.kind == "forget":
            (c,) = node.children
            v = node.vertex
            child_bag = tuple(sorted(node.bag | {v}))
            table = _forget_mapping(len(child_bag), child_bag.index(v))
            entries = set()
            for i, com, sig in tabs.pop(c):
                ns = table.apply(sig)
                if ns:
                    entries.add((i, com - {v}, ns))
                else:
                    flag = True  # i = 0 never empties: the idle pairing survives
                    if trace is not None:
                        trace.flags.append((t, "forget"))
        else:
            ca, cb = node.children
            table = _join_pairs(b) if b <= _EAGER_MAX_B else _lazy_join(b)
            entries = set()
            left, right = tabs.pop(ca), tabs.pop(cb)
            for i1, k1, s1 in left:
                for i2, k2, s2 in right:
                    i = i1 + i2 - len(k1 & k2)
                    if i > k:
                        continue
                    ns = table.apply(s1, s2)
                    if ns:
                        entries.add((i, k1 | k2, ns))
                    else:
                        flag = True
                        if trace is not None:
                            trace.flags.append((t, "join"))
        tabs[t] = entries = _prune_dominated(entries)
        if trace is not None:
            trace.nodes.append((t, node.kind, b, len(entries)))
    root = tabs[post[-1]]
    ok = _check_root(root, k, lambda s: bool(s & 2), trace)
    return (not flag) and ok


def solve_pac(g: Graph, r, k: int, decomposition: TreeDecomposition | None = None,
              *, width_cap: int = WIDTH_CAP) -> bool:
    """True iff every k-subset of r lies on a cycle of g.

    Uses the supplied decomposition or computes an exact one; refuses widths
    above width_cap. k = 0 and |r| < k are vacuously true.
    """
    r, nd = _prepare(g, r, k, decomposition, width_cap)
    if nd is None:
        return True
    return _run_engine(g, r, k, nd)


def solve_pac_traced(g: Graph, r, k: int, decomposition=None,
                     *, width_cap: int = WIDTH_CAP):
    """solve_pac plus a DpTrace of table sizes, signature deaths and the
    per-i root verdicts."""
    t0 = time.perf_counter()
    trace = DpTrace()
    r, nd = _prepare(g, r, k, decomposition, width_cap)
    if nd is None:
        trace.answer = True
        trace.note = "vacuous: k = 0 or fewer than k terminals"
        trace.elapsed_ms = (time.perf_counter() - t0) * 1000
        return True, trace
    trace.width = nd.width
    answer = _run_engine(g, r, k, nd, trace)
    trace.answer = answer
    trace.elapsed_ms = (time.perf_counter() - t0) * 1000
    return answer, trace
