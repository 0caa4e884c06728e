"""Undirected multigraphs and the handful of surgeries the rest of the
package is built on.

Graphs are immutable. Vertices are non-negative integers, edges an unordered
multiset of pairs; parallel edges matter (a doubled edge carries a 2-cycle)
and self-loops are representable but only ever produced by explicit
operations, never accepted from input files.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator

from .errors import DegreeError, EdgeNotFound, FormatError, LoopError, ParameterError


def _norm_edge(u, w):
    return (u, w) if u <= w else (w, u)


class Graph:
    """Immutable undirected multigraph.

    ``edges`` is kept as a sorted tuple of normalized pairs, with parallel
    edges repeated. Two graphs compare equal iff they have the same vertex
    set and the same edge multiset.
    """

    __slots__ = ("_vertices", "_edges", "_adj", "_hash")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        vs = frozenset(vertices)
        for v in vs:
            if not isinstance(v, int) or v < 0:
                raise ParameterError(f"vertex ids must be non-negative ints, got {v!r}")
        es = sorted(_norm_edge(u, w) for u, w in edges)
        for u, w in es:
            if u not in vs or w not in vs:
                raise ParameterError(f"edge ({u},{w}) uses a vertex outside the graph")
        self._vertices = tuple(sorted(vs))
        self._edges = tuple(es)
        adj: dict[int, Counter] = {v: Counter() for v in self._vertices}
        for u, w in self._edges:
            adj[u][w] += 1
            if u != w:
                adj[w][u] += 1
        self._adj = adj
        self._hash = hash((self._vertices, self._edges))

    # -- basic queries -------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def degree(self, v: int) -> int:
        """Multiset degree; a self-loop contributes 2."""
        c = self._adj[v]
        return sum(c.values()) + c.get(v, 0)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._adj[v]))

    def multiplicity(self, u: int, w: int) -> int:
        if u not in self._adj:
            return 0
        return self._adj[u].get(w, 0)

    def has_edge(self, u: int, w: int) -> bool:
        return self.multiplicity(u, w) > 0

    def is_simple(self) -> bool:
        return all(u != w for u, w in self._edges) and all(
            m == 1 for c in self._adj.values() for m in c.values()
        )

    # -- derived graphs ------------------------------------------------

    def without_vertices(self, drop: Iterable[int]) -> "Graph":
        ds = set(drop)
        return Graph(
            (v for v in self._vertices if v not in ds),
            (e for e in self._edges if e[0] not in ds and e[1] not in ds),
        )

    def induced(self, keep: Iterable[int]) -> "Graph":
        ks = set(keep)
        if not ks <= set(self._vertices):
            raise ParameterError("induced set is not a vertex subset")
        return Graph(ks, (e for e in self._edges if e[0] in ks and e[1] in ks))

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self._vertices, list(self._edges) + [tuple(e) for e in extra])

    def relabeled(self, mapping: dict) -> "Graph":
        """Apply an injective vertex relabeling."""
        if len(set(mapping.values())) != len(mapping):
            raise ParameterError("relabeling is not injective")
        return Graph(
            (mapping[v] for v in self._vertices),
            ((mapping[u], mapping[w]) for u, w in self._edges),
        )

    def connected_components(self) -> list[frozenset]:
        seen: set[int] = set()
        comps = []
        for root in self._vertices:
            if root in seen:
                continue
            comp = {root}
            stack = [root]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.connected_components()) == 1


# -- surgeries ----------------------------------------------------------


def dissolve(g: Graph, v: int) -> Graph:
    """Remove a degree-2 vertex and join its two edge ends.

    The replacement edge is added on top of whatever already runs between the
    two neighbors, so dissolving a triangle corner leaves a doubled edge.
    Raises DegreeError unless deg(v) == 2, LoopError if both edges at v go to
    the same neighbor.
    """
    if v not in g:
        raise ParameterError(f"vertex {v} not in graph")
    if g.degree(v) != 2:
        raise DegreeError(f"dissolve needs deg({v}) == 2, got {g.degree(v)}")
    ends = []
    for u, w in g.edges:
        if u == v or w == v:
            ends.append(w if u == v else u)
    u, w = ends
    if u == w:
        raise LoopError(f"both edges at {v} meet {u}")
    kept = [e for e in g.edges if v not in e]
    kept.append(_norm_edge(u, w))
    return Graph((x for x in g.vertices if x != v), kept)


def lift(g: Graph, v: int) -> Graph:
    """Detach both edges of a degree-2 vertex and shortcut them.

    Unlike dissolve the vertex itself stays behind, isolated, and the
    shortcut edge is only added when the two neighbors are not already
    adjacent (no parallel edge is ever created by a lift).
    """
    if v not in g:
        raise ParameterError(f"vertex {v} not in graph")
    if g.degree(v) != 2:
        raise DegreeError(f"lift needs deg({v}) == 2, got {g.degree(v)}")
    ends = []
    for u, w in g.edges:
        if u == v or w == v:
            ends.append(w if u == v else u)
    u, w = ends
    if u == w:
        raise LoopError(f"both edges at {v} meet {u}")
    kept = [e for e in g.edges if v not in e]
    if g.multiplicity(u, w) == 0:
        kept.append(_norm_edge(u, w))
    return Graph(g.vertices, kept)


# -- cycles -------------------------------------------------------------


def is_cycle(g: Graph, cycle) -> bool:
    """Is the vertex sequence a cycle of g?

    A cycle is a non-empty sequence of distinct vertices, consecutive ones
    adjacent and the ends adjacent too. Length 1 needs a self-loop, length 2
    needs a doubled edge; from length 3 on plain adjacency is enough.
    """
    seq = tuple(cycle)
    if not seq or len(set(seq)) != len(seq):
        return False
    if any(v not in g for v in seq):
        return False
    if len(seq) == 1:
        return g.multiplicity(seq[0], seq[0]) >= 1
    if len(seq) == 2:
        return g.multiplicity(seq[0], seq[1]) >= 2
    return all(
        g.has_edge(seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq))
    )


def is_cycle_through(g: Graph, cycle, terminals) -> bool:
    return is_cycle(g, cycle) and set(terminals) <= set(cycle)


def vertex_connectivity(g: Graph) -> int:
    """Minimum number of vertex deletions disconnecting g (n-1 for complete
    graphs). Needs a simple graph on at least 2 vertices."""
    if g.n < 2:
        raise ParameterError("vertex connectivity needs n >= 2")
    if not g.is_simple():
        raise ParameterError("vertex connectivity is defined here for simple graphs")
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return nx.node_connectivity(h)


# -- text format ---------------------------------------------------------
#
#   c free-form comment
#   p cyc <n> <m>
#   e <u> <v>          (repeated line = parallel edge)
#   r <v1> <v2> ...    (annotated terminals, may repeat/accumulate)
#
# Vertex ids are 0-based and must lie in [0, n).


def parse_graph(text: str) -> tuple[Graph, frozenset]:
    n = m = None
    edges: list[tuple[int, int]] = []
    terminals: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise FormatError(f"line {lineno}: second p line")
            if len(parts) != 4 or parts[1] != "cyc":
                raise FormatError(f"line {lineno}: expected 'p cyc <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"line {lineno}: n and m must be integers") from None
            if n < 0 or m < 0:
                raise FormatError(f"line {lineno}: negative n or m")
        elif parts[0] == "e":
            if n is None:
                raise FormatError(f"line {lineno}: e line before p line")
            if len(parts) != 3:
                raise FormatError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                u, w = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError(f"line {lineno}: endpoints must be integers") from None
            if not (0 <= u < n and 0 <= w < n):
                raise FormatError(f"line {lineno}: vertex id out of range")
            if u == w:
                raise FormatError(f"line {lineno}: self-loops not accepted in files")
            edges.append((u, w))
        elif parts[0] == "r":
            if n is None:
                raise FormatError(f"line {lineno}: r line before p line")
            try:
                ids = [int(x) for x in parts[1:]]
            except ValueError:
                raise FormatError(f"line {lineno}: terminal ids must be integers") from None
            for v in ids:
                if not 0 <= v < n:
                    raise FormatError(f"line {lineno}: terminal {v} out of range")
            terminals.update(ids)
        else:
            raise FormatError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise FormatError("missing p line")
    if len(edges) != m:
        raise FormatError(f"p line promises {m} edges, found {len(edges)}")
    return Graph(range(n), edges), frozenset(terminals)


def serialize_graph(g: Graph, terminals: Iterable[int] = ()) -> str:
    """Inverse of parse_graph. Requires dense 0..n-1 vertex ids."""
    if g.vertices != tuple(range(g.n)):
        raise ParameterError("serialization needs dense vertex ids 0..n-1")
    terms = sorted(set(terminals))
    for v in terms:
        if v not in g:
            raise ParameterError(f"terminal {v} not in graph")
    out = [f"p cyc {g.n} {g.m}"]
    out.extend(f"e {u} {w}" for u, w in g.edges)
    if terms:
        out.append("r " + " ".join(str(v) for v in terms))
    return "\n".join(out) + "\n"


def densify(g: Graph) -> tuple[Graph, dict]:
    """Relabel to 0..n-1 keeping order; returns (graph, old->new map)."""
    mapping = {v: i for i, v in enumerate(g.vertices)}
    return g.relabeled(mapping), mapping
