"""The pairing alphabet: DP states describing how a partial witness subgraph
meets a bag.

A pairing over a bag records which bag vertices the witness touches (the
active set) and how its pieces connect them:

  * a single edge (u, w) is a path through forgotten territory with ends u, w;
  * the same pair twice is a completed cycle meeting the bag at exactly u, w;
  * (u, u) is a completed cycle meeting the bag at u alone;
  * the loop flag is a completed cycle avoiding the bag entirely.

Validity: edge ends are active, every active vertex has degree at most 2,
there is at most one cycle in total (counting the loop flag), and once a
cycle exists nothing else may carry edges; actives of degree 0 may ride
along. The alphabet deliberately contains the cycle + idle-active pairings
even though no witness realizes them; they are cheap and die on their own at
forget nodes.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache

from .errors import PairingError, SizeError

MAX_BAG = 12


class Pairing:
    __slots__ = ("vertices", "edges", "loop", "_hash")

    def __init__(self, vertices, edges=(), loop=False):
        vs = tuple(sorted(set(vertices)))
        es = tuple(sorted((u, w) if u <= w else (w, u) for u, w in edges))
        problem = _invalid_reason(vs, es, loop)
        if problem:
            raise PairingError(problem)
        self.vertices = vs
        self.edges = es
        self.loop = bool(loop)
        self._hash = hash((vs, es, self.loop))

    def __eq__(self, other):
        return (
            isinstance(other, Pairing)
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.loop == other.loop
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (len(self.vertices), self.vertices, len(self.edges), self.edges, self.loop)

    def degree(self, v) -> int:
        d = 0
        for u, w in self.edges:
            if u == v:
                d += 1
            if w == v:
                d += 1
        return d

    def has_cycle(self) -> bool:
        """Any completed cycle: flag, self-loop, doubled pair, or polygon."""
        return self.loop or _count_cycles(self.edges) > 0

    def debug(self) -> str:
        vs = " ".join(str(v) for v in self.vertices)
        es = " ".join(f"{u}-{w}" for u, w in self.edges)
        return f"[{vs} | {es} | {'L' if self.loop else ''}]"

    __repr__ = debug


def _count_cycles(edges) -> int:
    mult = Counter(edges)
    cycles = 0
    simple = []
    for (u, w), m in mult.items():
        if u == w:
            cycles += 1
        elif m >= 2:
            cycles += 1
        else:
            simple.append((u, w))
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for u, w in simple:
        ru, rw = find(u), find(w)
        if ru == rw:
            cycles += 1
        else:
            parent[ru] = rw
    return cycles


def _invalid_reason(vs, es, loop):
    vset = set(vs)
    deg = Counter()
    mult = Counter(es)
    for (u, w), m in mult.items():
        if u not in vset or w not in vset:
            return f"edge ({u},{w}) touches an inactive vertex"
        if m > 2:
            return f"edge ({u},{w}) has multiplicity {m}"
        if u == w and m > 1:
            return f"self edge ({u},{u}) repeated"
        deg[u] += m
        if u != w:
            deg[w] += m
        else:
            deg[u] += m
    for v, d in deg.items():
        if d > 2:
            return f"vertex {v} has degree {d}"
    cycles = _count_cycles(es) + (1 if loop else 0)
    if cycles > 1:
        return f"{cycles} cycles in one pairing"
    if cycles == 1 and any(deg[v] == 1 for v in vs):
        return "a completed cycle cannot coexist with open path ends"
    return None


def empty_pairing() -> Pairing:
    return Pairing((), (), False)


def loop_pairing() -> Pairing:
    return Pairing((), (), True)


# -- enumeration -------------------------------------------------------------


def _linear_forests(active):
    """Edge sets over `active` forming vertex-disjoint paths (possibly none)."""
    pairs = list(itertools.combinations(active, 2))
    deg = {v: 0 for v in active}
    parent = {v: v for v in active}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    chosen = []
    out = []

    def rec(i):
        if i == len(pairs):
            out.append(tuple(chosen))
            return
        rec(i + 1)
        u, w = pairs[i]
        if deg[u] < 2 and deg[w] < 2:
            ru, rw = find(u), find(w)
            if ru != rw:
                parent[ru] = rw
                deg[u] += 1
                deg[w] += 1
                chosen.append((u, w))
                rec(i + 1)
                chosen.pop()
                deg[u] -= 1
                deg[w] -= 1
                parent[ru] = ru
        return

    rec(0)
    return out


def _cycle_edge_sets(support):
    """Edge multisets forming a single cycle visiting exactly `support`."""
    if len(support) == 1:
        return [((support[0], support[0]),)]
    if len(support) == 2:
        e = (support[0], support[1])
        return [(e, e)]
    first, rest = support[0], support[1:]
    out = []
    for perm in itertools.permutations(rest):
        if perm[0] > perm[-1]:
            continue  # reversal duplicate
        walk = (first,) + perm
        es = []
        for i in range(len(walk)):
            u, w = walk[i], walk[(i + 1) % len(walk)]
            es.append((u, w) if u <= w else (w, u))
        out.append(tuple(sorted(es)))
    return out


@lru_cache(maxsize=None)
def _enumerate_cached(bag: tuple) -> tuple:
    out = []
    for r in range(len(bag) + 1):
        for active in itertools.combinations(bag, r):
            for es in _linear_forests(active):
                out.append(Pairing(active, es, False))
            out.append(Pairing(active, (), True))
            for size in range(1, len(active) + 1):
                for support in itertools.combinations(active, size):
                    for es in _cycle_edge_sets(support):
                        out.append(Pairing(active, es, False))
    out.sort(key=Pairing.sort_key)
    return tuple(out)


def enumerate_pairings(bag) -> tuple:
    """Every valid pairing over the bag, canonically ordered."""
    bag = tuple(sorted(set(bag)))
    if len(bag) > MAX_BAG:
        raise SizeError(f"pairing alphabets capped at bag size {MAX_BAG}")
    return _enumerate_cached(bag)


# -- single-vertex eliminations ----------------------------------------------


def _edges_at(p: Pairing, v):
    return [e for e in p.edges if v in e]


def lift_pairing(p: Pairing, v):
    """Remove v, shortcutting its two path ends; None when undefined.

    Undefined when v has degree 0 or 1, or when the shortcut would double an
    existing edge. A self-loop at v turns into the vertex-less loop, a
    doubled edge at v into a self-loop at the other end.
    """
    if v not in p.vertices:
        return p
    at = _edges_at(p, v)
    rest_v = tuple(x for x in p.vertices if x != v)
    rest_e = tuple(e for e in p.edges if v not in e)
    if at == [(v, v)]:
        return Pairing(rest_v, rest_e, True)
    if len(at) < 2:
        return None
    if at[0] == at[1]:
        u = at[0][0] if at[0][1] == v else at[0][1]
        return Pairing(rest_v, rest_e + ((u, u),), p.loop)
    ends = [e[0] if e[1] == v else e[1] for e in at]
    u, w = sorted(ends)
    if (u, w) in rest_e:
        return None
    return Pairing(rest_v, rest_e + ((u, w),), p.loop)


def dissolve_pairing(p: Pairing, v):
    """Like lift_pairing, but closing a triangle is allowed: when the two
    ends are already connected the shortcut lands as the second copy, i.e.
    the pairing records a completed 2-end cycle instead of dying."""
    if v not in p.vertices:
        return p
    at = _edges_at(p, v)
    if at == [(v, v)]:
        return lift_pairing(p, v)
    if len(at) < 2:
        return None
    if at[0] == at[1]:
        return lift_pairing(p, v)
    rest_v = tuple(x for x in p.vertices if x != v)
    rest_e = tuple(e for e in p.edges if v not in e)
    ends = [e[0] if e[1] == v else e[1] for e in at]
    u, w = sorted(ends)
    try:
        return Pairing(rest_v, rest_e + ((u, w),), p.loop)
    except PairingError:
        # only reachable from alphabet junk (e.g. a third copy of an edge)
        return None


# -- gluing -------------------------------------------------------------------


def union_pairings(a: Pairing, b: Pairing):
    """Glue two pairings: actives unite, edge multiplicities add, at most one
    side may carry the loop. None when the result breaks validity (degree
    above 2, a second cycle, a cycle next to open ends...)."""
    if a.loop and b.loop:
        return None
    try:
        return Pairing(
            a.vertices + b.vertices, a.edges + b.edges, a.loop or b.loop
        )
    except PairingError:
        return None


def aux_universe(v, neighborhood):
    """Auxiliary attachments available when v enters a bag: nothing at all,
    or v activated together with any subset of its bag edges (and possibly
    further isolated activations of its neighbors)."""
    nb = tuple(sorted(set(neighborhood)))
    out = [((), ())]
    for r in range(len(nb) + 1):
        for ends in itertools.combinations(nb, r):
            es = tuple((v, u) if v <= u else (u, v) for u in ends)
            others = [u for u in nb if u not in ends]
            for extra_r in range(len(others) + 1):
                for extra in itertools.combinations(others, extra_r):
                    out.append((tuple(sorted((v,) + ends + extra)), es))
    return tuple(out)


def oplus(p: Pairing, aux, lifts=()):
    """Glue an auxiliary graph onto p and close under lifting `lifts`.

    aux is a Pairing or a raw (vertices, edges) pair. Returns the frozenset
    of every defined pairing reachable by gluing and then lifting vertices
    of `lifts` in any order, the glued pairing included.
    """
    if isinstance(aux, Pairing):
        glued = union_pairings(p, aux)
    else:
        av, ae = aux
        try:
            glued = Pairing(p.vertices + tuple(av), p.edges + tuple(ae), p.loop)
        except PairingError:
            glued = None
    if glued is None:
        return frozenset()
    lifts = frozenset(lifts)
    seen = {glued}
    frontier = [glued]
    while frontier:
        q = frontier.pop()
        for v in lifts:
            if v not in q.vertices:
                continue
            r = lift_pairing(q, v)
            if r is not None and r not in seen:
                seen.add(r)
                frontier.append(r)
    return frozenset(seen)


def zeta(p_prime: Pairing, v, child_bag, neighborhood, lifts=()):
    """Adjoint of oplus: the child pairings that can become p_prime when v
    enters with some auxiliary attachment over `neighborhood`."""
    out = set()
    for p in enumerate_pairings(child_bag):
        for aux in aux_universe(v, neighborhood):
            if p_prime in oplus(p, aux, lifts):
                out.add(p)
                break
    return frozenset(out)


def xi(p: Pairing):
    """Every ordered pair (a, b) with union_pairings(a, b) == p.

    Actives split into left / right / both, each edge copy picks a side, the
    loop picks exactly one side; splits where either side is not a valid
    pairing are discarded.
    """
    actives = p.vertices
    mult = Counter(p.edges)
    distinct = sorted(mult)
    out = []
    active_choices = itertools.product((0, 1, 2), repeat=len(actives))  # L, R, both
    for assign in active_choices:
        left_v = tuple(x for x, c in zip(actives, assign) if c in (0, 2))
        right_v = tuple(x for x, c in zip(actives, assign) if c in (1, 2))
        edge_opts = []
        for e in distinct:
            m = mult[e]
            edge_opts.append([(l, m - l) for l in range(m + 1)])
        for dist in itertools.product(*edge_opts):
            left_e = []
            right_e = []
            for e, (l, r) in zip(distinct, dist):
                left_e.extend([e] * l)
                right_e.extend([e] * r)
            loop_sides = ((False, False),) if not p.loop else ((True, False), (False, True))
            for llo, rlo in loop_sides:
                try:
                    a = Pairing(left_v, left_e, llo)
                    b = Pairing(right_v, right_e, rlo)
                except PairingError:
                    continue
                out.append((a, b))
    out.sort(key=lambda ab: (ab[0].sort_key(), ab[1].sort_key()))
    return tuple(out)
