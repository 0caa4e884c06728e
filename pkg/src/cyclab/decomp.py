"""Tree decompositions: exact treewidth, nice form, validation, file io.

Treewidth is computed exactly: a Held-Karp style subset DP over elimination
prefixes up to n = 13, an elimination-order branch and bound with a min-fill
upper bound beyond that, hard-capped at n = 32. Both return a witness
decomposition built from the optimal elimination order, and results are
memoized per graph since the acceptance sweeps ask for the same
decompositions repeatedly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .errors import (
    BagMismatch,
    FormatError,
    InvalidDecomposition,
    SizeError,
)
from .graph import Graph

MAX_EXACT_N = 32
_SUBSET_DP_N = 13


class TreeDecomposition:
    """Bags indexed 0..len-1 plus tree edges over those indices."""

    __slots__ = ("bags", "tree_edges")

    def __init__(self, bags, tree_edges=()):
        self.bags = tuple(frozenset(b) for b in bags)
        self.tree_edges = tuple(
            (a, b) if a < b else (b, a) for a, b in tree_edges
        )
        t = len(self.bags)
        if t == 0:
            raise InvalidDecomposition("a decomposition needs at least one bag")
        if len(self.tree_edges) != t - 1:
            raise InvalidDecomposition(
                f"{t} bags need {t - 1} tree edges, got {len(self.tree_edges)}"
            )
        seen = {0}
        adj = {i: [] for i in range(t)}
        for a, b in self.tree_edges:
            if not (0 <= a < t and 0 <= b < t) or a == b:
                raise InvalidDecomposition(f"bad tree edge ({a},{b})")
            adj[a].append(b)
            adj[b].append(a)
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != t:
            raise InvalidDecomposition("tree edges do not connect all bags")

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def neighbors(self, i):
        out = []
        for a, b in self.tree_edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def __repr__(self):
        return f"TreeDecomposition(bags={len(self.bags)}, width={self.width})"


def validate(g: Graph, td: TreeDecomposition) -> list[str]:
    """All the ways td fails to be a tree decomposition of g; empty if none."""
    problems = []
    vs = set(g.vertices)
    everything = set().union(*td.bags) if td.bags else set()
    for x in sorted(everything - vs):
        problems.append(f"bag vertex {x} is not a graph vertex")
    for v in sorted(vs - everything):
        problems.append(f"vertex {v} is in no bag")
    for u, w in set(g.edges):
        if u == w:
            continue
        if not any(u in b and w in b for b in td.bags):
            problems.append(f"edge ({u},{w}) is covered by no bag")
    for v in sorted(vs & everything):
        nodes = {i for i, b in enumerate(td.bags) if v in b}
        root = next(iter(nodes))
        seen = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in td.neighbors(x):
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != nodes:
            problems.append(f"bags containing {v} are not connected in the tree")
    return problems


def is_valid_decomposition(g: Graph, td: TreeDecomposition) -> bool:
    return not validate(g, td)


# -- exact treewidth --------------------------------------------------------

_tw_cache: dict = {}


def _simple_adj_masks(g: Graph):
    idx = {v: i for i, v in enumerate(g.vertices)}
    adj = [0] * g.n
    for u, w in set(g.edges):
        if u == w:
            continue
        adj[idx[u]] |= 1 << idx[w]
        adj[idx[w]] |= 1 << idx[u]
    return adj, idx


def _q_size_mask(adj, s_mask, v):
    """Vertices outside s+{v} seeing the component of v inside s, as a mask."""
    vbit = 1 << v
    seen = vbit
    frontier = vbit
    outside = 0
    while frontier:
        nxt = 0
        f = frontier
        while f:
            b = f & -f
            f ^= b
            nxt |= adj[b.bit_length() - 1]
        outside |= nxt & ~s_mask & ~vbit
        nxt &= s_mask & ~seen
        seen |= nxt
        frontier = nxt
    return outside


def _order_by_subset_dp(adj, n):
    """Optimal elimination order via f(S) = best width eliminating S first."""
    full = (1 << n) - 1
    f = {0: -1}
    subsets_by_size = [[] for _ in range(n + 1)]
    for s in range(1 << n):
        subsets_by_size[s.bit_count()].append(s)
    for size in range(1, n + 1):
        for s in subsets_by_size[size]:
            best = n + 1
            t = s
            while t:
                b = t & -t
                t ^= b
                v = b.bit_length() - 1
                q = _q_size_mask(adj, s ^ b, v).bit_count()
                cand = max(f[s ^ b], q)
                if cand < best:
                    best = cand
            f[s] = best
    order = [0] * n
    s = full
    while s:
        pick = None
        best = n + 1
        t = s
        while t:
            b = t & -t
            t ^= b
            v = b.bit_length() - 1
            cand = max(f[s ^ b], _q_size_mask(adj, s ^ b, v).bit_count())
            if cand < best:
                best = cand
                pick = v
        order[s.bit_count() - 1] = pick
        s ^= 1 << pick
    return f[full], order


def _min_fill_order(adj, n):
    """Greedy upper bound: repeatedly eliminate the vertex adding fewest fill
    edges (ties to the smaller degree, then id)."""
    work = list(adj)
    alive = (1 << n) - 1
    order = []
    width = -1
    for _ in range(n):
        best = None
        for v in range(n):
            if not (alive >> v) & 1:
                continue
            nb = work[v] & alive
            fill = 0
            t = nb
            while t:
                b = t & -t
                t ^= b
                u = b.bit_length() - 1
                fill += (nb & ~work[u] & ~b).bit_count()
            key = (fill, nb.bit_count(), v)
            if best is None or key < best[0]:
                best = (key, v, nb)
        _, v, nb = best
        width = max(width, nb.bit_count())
        t = nb
        while t:
            b = t & -t
            t ^= b
            u = b.bit_length() - 1
            work[u] |= nb & ~b
        alive ^= 1 << v
        order.append(v)
    return width, order


def _order_by_branch_and_bound(adj, n):
    """Exact elimination-order search; min-fill seeds the upper bound."""
    ub, ub_order = _min_fill_order(adj, n)
    # degeneracy-style lower bound
    lb = 0
    alive = (1 << n) - 1
    work = list(adj)
    for _ in range(n):
        v = min(
            (x for x in range(n) if (alive >> x) & 1),
            key=lambda x: (work[x] & alive).bit_count(),
        )
        lb = max(lb, (work[v] & alive).bit_count())
        alive ^= 1 << v
    if lb >= ub:
        return ub, ub_order
    best = {"w": ub, "order": ub_order}
    seen: dict[int, int] = {}

    def rec(s_mask, cur, prefix):
        # s_mask: already eliminated; cur: max fill degree so far
        if cur >= best["w"]:
            return
        old = seen.get(s_mask)
        if old is not None and old <= cur:
            return
        if len(seen) > 2_000_000:
            seen.clear()
        seen[s_mask] = cur
        if s_mask == (1 << n) - 1:
            best["w"] = cur
            best["order"] = list(prefix)
            return
        qmask = {}
        cands = []
        for v in range(n):
            if (s_mask >> v) & 1:
                continue
            qmask[v] = _q_size_mask(adj, s_mask, v)
            cands.append((qmask[v].bit_count(), v))
        cands.sort()
        for q, v in cands:
            prefix.append(v)
            rec(s_mask | (1 << v), max(cur, q), prefix)
            prefix.pop()
            # classic safe eliminations: once one is taken, siblings are moot
            if q <= 1 or (q == 2 and lb >= 2) or _is_fill_clique(qmask[v], qmask):
                break

    def _is_fill_clique(mask, qmask):
        t = mask
        while t:
            b = t & -t
            t ^= b
            a = b.bit_length() - 1
            if mask & ~b & ~qmask[a]:
                return False
        return True

    rec(0, -1 if n else 0, [])
    return best["w"], best["order"]


def _decomposition_from_order(g: Graph, order_dense, idx):
    """Bags from eliminating along the order in the fill graph."""
    back = {i: v for v, i in idx.items()}
    n = g.n
    adj, _ = _simple_adj_masks(g)
    work = list(adj)
    alive = (1 << n) - 1
    pos = {v: i for i, v in enumerate(order_dense)}
    bags = []
    parents = []
    for v in order_dense:
        nb = work[v] & alive & ~(1 << v)
        bags.append(frozenset({back[v]} | {back[u] for u in _bit_list(nb)}))
        if nb:
            nxt = min(_bit_list(nb), key=lambda u: pos[u])
            parents.append(nxt)
        else:
            parents.append(None)
        t = nb
        while t:
            b = t & -t
            t ^= b
            u = b.bit_length() - 1
            work[u] |= nb & ~b
        alive ^= 1 << v
    edges = []
    bag_of = {v: i for i, v in enumerate(order_dense)}
    for i, v in enumerate(order_dense):
        if parents[i] is not None:
            edges.append((i, bag_of[parents[i]]))
        elif i != n - 1:
            # isolated end of a component: hang it off the next elimination
            edges.append((i, i + 1))
    return TreeDecomposition(bags, edges)


def _bit_list(x):
    out = []
    while x:
        b = x & -x
        x ^= b
        out.append(b.bit_length() - 1)
    return out


def exact_treewidth(g: Graph) -> tuple[int, TreeDecomposition]:
    """Exact treewidth and a witness decomposition.

    Width convention: a single-vertex graph has width 0, the empty graph -1
    (one empty bag). Parallel edges and self-loops do not change treewidth
    and are ignored.
    """
    key = g
    hit = _tw_cache.get(key)
    if hit is not None:
        return hit
    if g.n > MAX_EXACT_N:
        raise SizeError(f"exact treewidth capped at n = {MAX_EXACT_N}, got {g.n}")
    if g.n == 0:
        result = (-1, TreeDecomposition([frozenset()]))
        _tw_cache[key] = result
        return result
    adj, idx = _simple_adj_masks(g)
    n = g.n
    if n <= _SUBSET_DP_N:
        width, order = _order_by_subset_dp(adj, n)
    else:
        width, order = _order_by_branch_and_bound(adj, n)
    td = _decomposition_from_order(g, order, idx)
    assert td.width == width, "witness decomposition disagrees with computed width"
    assert not validate(g, td)
    result = (width, td)
    _tw_cache[key] = result
    return result


def greedy_treewidth(g: Graph) -> tuple[int, TreeDecomposition]:
    """Min-fill upper bound with a witness decomposition.

    Usable far beyond the exact_treewidth size cap; the returned width is
    only an upper bound, but the decomposition is valid, which is all a
    width-capped DP run needs.
    """
    if g.n == 0:
        return -1, TreeDecomposition([frozenset()])
    adj, idx = _simple_adj_masks(g)
    _, order = _min_fill_order(adj, g.n)
    td = _decomposition_from_order(g, order, idx)
    assert not validate(g, td)
    return td.width, td


_pw_cache: dict = {}


def exact_pathwidth(g: Graph) -> tuple[int, TreeDecomposition]:
    """Exact pathwidth and a witness path decomposition.

    Vertex separation subset DP, so hard-capped at n = 13 like the treewidth
    one. A path has no join nodes, which keeps the pairing engine on its
    linear insert/forget tables; on dense graphs that is worth the occasional
    +1 of width next to the tree optimum, since the quadratic join sweep over
    fat signatures costs far more than one extra bag slot.
    """
    hit = _pw_cache.get(g)
    if hit is not None:
        return hit
    if g.n > _SUBSET_DP_N:
        raise SizeError(f"exact pathwidth capped at n = {_SUBSET_DP_N}, got {g.n}")
    if g.n == 0:
        result = (-1, TreeDecomposition([frozenset()]))
        _pw_cache[g] = result
        return result
    adj, idx = _simple_adj_masks(g)
    n = g.n
    f = [n + 1] * (1 << n)
    f[0] = 0
    choice = [-1] * (1 << n)
    for s in range(1, 1 << n):
        cut = 0
        t = s
        while t:
            b = t & -t
            t ^= b
            if adj[b.bit_length() - 1] & ~s:
                cut += 1
        best = n + 1
        pick = -1
        t = s
        while t:
            b = t & -t
            t ^= b
            prev = f[s ^ b]
            if prev < best:
                best = prev
                pick = b.bit_length() - 1
        f[s] = max(best, cut)
        choice[s] = pick
    back = {i: v for v, i in idx.items()}
    order = []
    s = (1 << n) - 1
    while s:
        v = choice[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()
    # bag i: the i-th vertex plus every earlier one with a neighbor at or past i
    bags = []
    later = (1 << n) - 1
    for i in range(n):
        bag = {back[order[i]]}
        for j in range(i):
            if adj[order[j]] & later:
                bag.add(back[order[j]])
        bags.append(frozenset(bag))
        later ^= 1 << order[i]
    td = TreeDecomposition(bags, [(i, i + 1) for i in range(n - 1)])
    assert td.width == f[(1 << n) - 1], "witness path disagrees with computed width"
    assert not validate(g, td)
    result = (td.width, td)
    _pw_cache[g] = result
    return result


# -- nice decompositions -----------------------------------------------------


@dataclass(frozen=True)
class NiceNode:
    kind: str  # leaf | insert | forget | join
    bag: frozenset
    vertex: int | None = None
    children: tuple = ()


class NiceTreeDecomposition:
    """Rooted binary shape: empty leaves and an empty root; insert and forget
    nodes change one vertex; join children repeat the join bag."""

    __slots__ = ("nodes", "root")

    def __init__(self, nodes, root):
        self.nodes = tuple(nodes)
        self.root = root
        self._audit()

    @property
    def width(self):
        return max(len(nd.bag) for nd in self.nodes) - 1

    def post_order(self):
        out = []
        stack = [(self.root, False)]
        while stack:
            i, expanded = stack.pop()
            if expanded:
                out.append(i)
                continue
            stack.append((i, True))
            for c in reversed(self.nodes[i].children):
                stack.append((c, False))
        return tuple(out)

    def _audit(self):
        if self.nodes[self.root].bag:
            raise InvalidDecomposition("root bag must be empty")
        for i, nd in enumerate(self.nodes):
            if nd.kind == "leaf":
                if nd.children or nd.bag:
                    raise InvalidDecomposition(f"node {i}: bad leaf")
            elif nd.kind == "insert":
                (c,) = nd.children
                if nd.vertex not in nd.bag or self.nodes[c].bag != nd.bag - {nd.vertex}:
                    raise InvalidDecomposition(f"node {i}: bad insert")
            elif nd.kind == "forget":
                (c,) = nd.children
                if nd.vertex in nd.bag or self.nodes[c].bag != nd.bag | {nd.vertex}:
                    raise InvalidDecomposition(f"node {i}: bad forget")
            elif nd.kind == "join":
                a, b = nd.children
                if self.nodes[a].bag != nd.bag or self.nodes[b].bag != nd.bag:
                    raise BagMismatch(f"node {i}: join children bags differ from bag")
            else:
                raise InvalidDecomposition(f"node {i}: unknown kind {nd.kind!r}")

    def to_tree_decomposition(self) -> TreeDecomposition:
        edges = []
        for i, nd in enumerate(self.nodes):
            for c in nd.children:
                edges.append((c, i))
        return TreeDecomposition([nd.bag for nd in self.nodes], edges)


def make_nice(g: Graph, td: TreeDecomposition) -> NiceTreeDecomposition:
    """Turn a valid decomposition into the nice shape the DP consumes.

    Deterministic: children are processed in index order and insert/forget
    chains add or drop vertices in ascending order. The width never grows.
    """
    problems = validate(g, td)
    if problems:
        raise InvalidDecomposition("; ".join(problems))

    children: dict[int, list[int]] = {i: [] for i in range(len(td.bags))}
    parent = {0: None}
    onbag = [0]
    while onbag:
        x = onbag.pop()
        for y in td.neighbors(x):
            if y not in parent:
                parent[y] = x
                children[x].append(y)
                onbag.append(y)

    nodes: list[NiceNode] = []

    def emit(kind, bag, vertex=None, kids=()):
        nodes.append(NiceNode(kind, frozenset(bag), vertex, tuple(kids)))
        return len(nodes) - 1

    def chain(top_id, frm, to):
        """Forgets then inserts turning bag `frm` (at top_id) into bag `to`."""
        cur = set(frm)
        for v in sorted(frm - to):
            cur.discard(v)
            top_id = emit("forget", set(cur), v, (top_id,))
        for v in sorted(to - frm):
            cur.add(v)
            top_id = emit("insert", set(cur), v, (top_id,))
        return top_id

    def build(i):
        bag = td.bags[i]
        kids = children[i]
        if not kids:
            leaf = emit("leaf", ())
            return chain(leaf, frozenset(), bag)
        tops = [chain(build(c), td.bags[c], bag) for c in kids]
        acc = tops[0]
        for t in tops[1:]:
            acc = emit("join", bag, None, (acc, t))
        return acc

    top = build(0)
    root = chain(top, td.bags[0], frozenset())
    return NiceTreeDecomposition(nodes, root)


# -- PACE-style text io ------------------------------------------------------
#
#   s td <bags> <max_bag_size> <n>
#   b <bag_id> <v> ...      (bag ids 1-based)
#   <id> <id>               (tree edges between bag ids)
#
# Vertex ids stay 0-based, matching the graph format.


def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise FormatError(f"line {lineno}: second s line")
            if len(parts) != 5 or parts[1] != "td":
                raise FormatError(f"line {lineno}: expected 's td <bags> <size> <n>'")
            try:
                header = tuple(int(x) for x in parts[2:])
            except ValueError:
                raise FormatError(f"line {lineno}: bad s line numbers") from None
        elif parts[0] == "b":
            if header is None:
                raise FormatError(f"line {lineno}: b line before s line")
            try:
                bid = int(parts[1])
                vs = [int(x) for x in parts[2:]]
            except (ValueError, IndexError):
                raise FormatError(f"line {lineno}: bad b line") from None
            if not 1 <= bid <= header[0]:
                raise FormatError(f"line {lineno}: bag id {bid} out of range")
            if bid in bags:
                raise FormatError(f"line {lineno}: duplicate bag {bid}")
            if any(not 0 <= v < header[2] for v in vs):
                raise FormatError(f"line {lineno}: vertex id out of range")
            bags[bid] = frozenset(vs)
        else:
            if header is None:
                raise FormatError(f"line {lineno}: edge before s line")
            try:
                a, b = (int(x) for x in parts)
            except ValueError:
                raise FormatError(f"line {lineno}: expected 'b ...' or two bag ids") from None
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise FormatError(f"line {lineno}: edge id out of range")
            edges.append((a - 1, b - 1))
    if header is None:
        raise FormatError("missing s line")
    for bid in range(1, header[0] + 1):
        bags.setdefault(bid, frozenset())
    if any(len(b) > header[1] for b in bags.values()):
        raise FormatError("a bag exceeds the declared maximum size")
    try:
        return TreeDecomposition([bags[i] for i in range(1, header[0] + 1)], edges)
    except InvalidDecomposition as exc:
        raise FormatError(str(exc)) from None


def serialize_td(td: TreeDecomposition, n: int) -> str:
    out = [f"s td {len(td.bags)} {max(len(b) for b in td.bags)} {n}"]
    for i, b in enumerate(td.bags, start=1):
        out.append("b " + " ".join([str(i)] + [str(v) for v in sorted(b)]))
    for a, b in td.tree_edges:
        out.append(f"{a + 1} {b + 1}")
    return "\n".join(out) + "\n"
