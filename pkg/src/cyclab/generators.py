"""Deterministic instance builders: the named catalog, hardness-reduction
constructions, walls with their layer certificates, and the exhaustive
connected-graph enumeration the acceptance sweeps run on.

Everything here is seed-deterministic; the randomized builders take an
explicit seed and never touch global RNG state. Planar builders lay vertices
out with real coordinates and derive the rotation system from the drawing,
so the embeddings agree with what the face machinery expects by construction.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import NamedTuple

from . import _kernels
from .errors import (
    EdgeNotFound,
    GenerationError,
    NotCubicPlanar,
    ParameterError,
    ParityError,
    UnknownName,
)
from .graph import Graph, vertex_connectivity
from .planar import (
    ConcentricCertificate,
    Embedding,
    RailedAnnulusCertificate,
    _face_structure,
    _interior_vertices,
    compute_faces,
    induced_embedded,
)


# -- drawings to embeddings ---------------------------------------------------


def embedding_from_positions(g: Graph, pos) -> Embedding:
    """Rotation system of a straight-line plane drawing.

    Rotations are the incident edges sorted counterclockwise. The outer face
    is found at the lowest (then leftmost) vertex: every neighbor sits
    strictly above it, so the wedge clockwise of its minimum-angle outgoing
    dart contains straight-down and is unbounded. Face walks keep their face
    on the right, hence the face of that dart is the outer one.
    """
    if not g.is_simple():
        raise ParameterError("position embeddings need a simple graph")
    eid = {e: i for i, e in enumerate(g.edges)}
    rotation = {}
    for v in g.vertices:
        x, y = pos[v]
        inc = []
        for u in g.neighbors(v):
            ux, uy = pos[u]
            e = (v, u) if v <= u else (u, v)
            inc.append((math.atan2(uy - y, ux - x), eid[e]))
        inc.sort()
        rotation[v] = tuple(i for _, i in inc)
    anchor = min(g.vertices, key=lambda v: (pos[v][1], pos[v][0]))
    ax, ay = pos[anchor]
    best = None
    for u in g.neighbors(anchor):
        ang = math.atan2(pos[u][1] - ay, pos[u][0] - ax)
        if best is None or ang < best[0]:
            best = (ang, u)
    if best is None:
        raise ParameterError("anchor vertex has no incident edge")
    e = eid[(anchor, best[1]) if anchor <= best[1] else (best[1], anchor)]
    d = 0 if g.edges[e][0] == anchor else 1
    emb = Embedding(rotation, 0)
    fs = _face_structure(g, emb)
    return Embedding(rotation, fs.face_of[(e, d)])


# -- named catalog ------------------------------------------------------------


def petersen() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(range(10), edges)


def cycle(n: int):
    if n < 3:
        raise ParameterError(f"a cycle needs n >= 3, got {n}")
    g = Graph(range(n), [(i, (i + 1) % n) for i in range(n)])
    pos = {i: _polar(1.0, i, n) for i in range(n)}
    return g, embedding_from_positions(g, pos)


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ParameterError(f"a complete graph needs n >= 1, got {n}")
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid(rows: int, cols: int):
    if rows < 1 or cols < 1:
        raise ParameterError("grid dimensions must be positive")
    if rows * cols < 2:
        raise ParameterError("a one-vertex grid has no embedding")
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    g = Graph(range(rows * cols), edges)
    pos = {i * cols + j: (float(j), float(i)) for i in range(rows) for j in range(cols)}
    return g, embedding_from_positions(g, pos)


def prism(n: int):
    """Two concentric n-cycles joined by spokes; cubic and planar."""
    if n < 3:
        raise ParameterError(f"a prism needs n >= 3, got {n}")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    g = Graph(range(2 * n), edges)
    pos = {i: _polar(1.0, i, n) for i in range(n)}
    pos.update({n + i: _polar(2.0, i, n) for i in range(n)})
    return g, embedding_from_positions(g, pos)


def star(n: int):
    """K_{1,n}: hub 0 plus n leaves."""
    if n < 1:
        raise ParameterError(f"a star needs n >= 1 leaves, got {n}")
    g = Graph(range(n + 1), [(0, i) for i in range(1, n + 1)])
    pos = {0: (0.0, 0.0)}
    pos.update({i: _polar(1.0, i - 1, n) for i in range(1, n + 1)})
    return g, embedding_from_positions(g, pos)


def _polar(radius, step, steps):
    # fixed offset so no two layout vertices tie on y; the anchor that the
    # outer-face rule keys on must be a strict (y, x) minimum
    ang = 2 * math.pi * step / steps + 0.5
    return (radius * math.cos(ang), radius * math.sin(ang))


def random_connected(n: int, m: int, seed: int) -> Graph:
    """Uniform-ish connected graph: random recursive tree plus extra edges."""
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    if not n - 1 <= m <= n * (n - 1) // 2:
        raise ParameterError(f"m = {m} impossible for a simple connected graph on {n}")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        edges.add(_norm(order[i], order[rng.randrange(i)]))
    rest = [e for e in itertools.combinations(range(n), 2) if e not in edges]
    edges.update(rng.sample(rest, m - len(edges)))
    return Graph(range(n), sorted(edges))


def random_k_connected(n: int, k: int, seed: int, attempts: int = 400) -> Graph:
    """Seeded k-connected graph; densifies gradually until connectivity holds."""
    if not 1 <= k < n:
        raise ParameterError(f"k-connected needs 1 <= k < n, got k={k}, n={n}")
    rng = random.Random(seed)
    base = max(n - 1, (n * k + 1) // 2)
    cap = n * (n - 1) // 2
    for attempt in range(attempts):
        m = min(cap, base + attempt // 3 + rng.randrange(n))
        g = random_connected(n, m, rng.randrange(1 << 30))
        if vertex_connectivity(g) >= k:
            return g
    raise GenerationError(
        f"no {k}-connected graph on {n} vertices within {attempts} attempts"
    )


class RingOfRings(NamedTuple):
    graph: Graph
    embedding: Embedding
    concentric: ConcentricCertificate
    railed: RailedAnnulusCertificate


def ring_of_rings(rings: int, length: int) -> RingOfRings:
    """Nested cycles joined by full spokes (a polar grid), certificates included.

    Ring i occupies ids i*length .. i*length+length-1, innermost first. The
    concentric certificate lists the rings innermost-first; the rails of the
    railed certificate are the radial paths, one per spoke position.
    """
    if rings < 2:
        raise ParameterError(f"need at least 2 rings, got {rings}")
    if length < 3:
        raise ParameterError(f"rings need length >= 3, got {length}")
    edges = []
    for i in range(rings):
        for j in range(length):
            v = i * length + j
            edges.append((v, i * length + (j + 1) % length))
            if i + 1 < rings:
                edges.append((v, v + length))
    g = Graph(range(rings * length), edges)
    pos = {}
    for i in range(rings):
        for j in range(length):
            pos[i * length + j] = _polar(float(i + 1), j, length)
    emb = embedding_from_positions(g, pos)
    cycles = tuple(
        tuple(range(i * length, (i + 1) * length)) for i in range(rings)
    )
    disks = tuple(frozenset(range(i * length)) for i in range(rings))
    concentric = ConcentricCertificate(cycles, disks)
    rails = tuple(
        tuple(i * length + j for i in range(rings)) for j in range(length)
    )
    return RingOfRings(g, emb, concentric, RailedAnnulusCertificate(concentric, rails))


# -- walls --------------------------------------------------------------------


class WallOutput(NamedTuple):
    graph: Graph
    embedding: Embedding
    layers: tuple  # vertex cycles, perimeter first
    certificate: ConcentricCertificate | None  # needs >= 2 layers


def wall(h: int, subdivisions=None) -> WallOutput:
    """The h-wall: an (h+1) x (2h+2) grid with every other vertical removed
    and degree-1 stubs pruned.

    Layers are peeled structurally: the perimeter, then the perimeter of what
    survives deleting it (re-pruning stubs), and so on while the boundary
    stays a single cycle. The count can exceed the floor(h/2) one would guess
    from halving: h=3 already has a hexagonal core inside its perimeter.
    subdivisions maps base-wall edges to how many new vertices to splice in;
    layer cycles are re-threaded through them.
    """
    if h < 1:
        raise ParameterError(f"walls need h >= 1, got {h}")
    cols = 2 * h + 2
    vid = lambda x, y: y * cols + x
    edges = set()
    for y in range(h + 1):
        for x in range(cols - 1):
            edges.add(_norm(vid(x, y), vid(x + 1, y)))
    for y in range(h):
        for x in range(cols):
            if (x + y) % 2 == 0:
                edges.add(_norm(vid(x, y), vid(x, y + 1)))
    alive = {vid(x, y) for y in range(h + 1) for x in range(cols)}
    deg = {v: 0 for v in alive}
    adj = {v: set() for v in alive}
    for u, w in edges:
        adj[u].add(w)
        adj[w].add(u)
    while True:
        drop = {v for v in alive if len(adj[v] & alive) <= 1}
        if not drop:
            break
        alive -= drop
    base_edges = sorted(
        e for e in edges if e[0] in alive and e[1] in alive
    )
    pos = {v: (float(v % cols), float(v // cols)) for v in alive}

    # apply subdivisions to edges and positions before any embedding exists
    chains = {}
    if subdivisions:
        nxt = max(alive) + 1
        final_edges = []
        edgeset = set(base_edges)
        for e in sorted(subdivisions):
            if _norm(*e) not in edgeset:
                raise EdgeNotFound(f"subdivision names a non-edge {e}")
        for e in base_edges:
            c = subdivisions.get(e, subdivisions.get((e[1], e[0]), 0))
            if c < 0:
                raise ParameterError("subdivision counts must be >= 0")
            if c == 0:
                final_edges.append(e)
                continue
            u, w = e
            chain = list(range(nxt, nxt + c))
            nxt += c
            ux, uy = pos[u]
            wx, wy = pos[w]
            for t, s in enumerate(chain, start=1):
                f = t / (c + 1)
                pos[s] = (ux + f * (wx - ux), uy + f * (wy - uy))
            path = [u] + chain + [w]
            final_edges.extend(_norm(a, b) for a, b in zip(path, path[1:]))
            chains[e] = chain
    else:
        final_edges = base_edges

    g = Graph(pos, final_edges)
    emb = embedding_from_positions(g, pos)

    layers = []
    cur_g, cur_emb = g, emb
    while True:
        walk = compute_faces(cur_g, cur_emb)[cur_emb.outer_face]
        if len(walk) < 3 or len(set(walk)) != len(walk):
            break
        layers.append(tuple(walk))
        keep = set(cur_g.vertices) - set(walk)
        while True:
            drop = {
                v for v in keep
                if sum(1 for u in cur_g.neighbors(v) if u in keep) <= 1
            }
            if not drop:
                break
            keep -= drop
        if not keep:
            break
        cur_g, cur_emb = induced_embedded(cur_g, cur_emb, keep)

    cert = None
    if len(layers) >= 2:
        inner_first = tuple(reversed(layers))
        fs = _face_structure(g, emb)
        disks = []
        for cyc in inner_first:
            inside, problems = _interior_vertices(g, fs, emb.outer_face, cyc)
            assert not problems, problems
            disks.append(frozenset(inside))
        cert = ConcentricCertificate(inner_first, tuple(disks))
    return WallOutput(g, emb, tuple(layers), cert)


def _norm(u, w):
    return (u, w) if u <= w else (w, u)


# -- hardness constructions ---------------------------------------------------


class CliqueReductionOutput(NamedTuple):
    graph: Graph
    k_prime: int
    roles: dict  # id -> ("cliquePart", x, i) | ("hub",) | ("edgeVertex", x, y)


def clique_reduction(g: Graph, k: int) -> CliqueReductionOutput:
    """Clique-to-cyclability reduction.

    s = (k-1)/2 copies v_x^i of every vertex form one big clique, a hub w is
    adjacent to all of them, and each input edge {x,y} becomes an independent
    vertex u_xy adjacent to every copy of x and y. The output asks for
    k' = k(k-1)/2 + 1. The yes-direction (a planted clique makes
    Z = {u_xy} + {w} non-cyclable) holds at any odd k; the converse is only
    promised for k far beyond desk scale, which tests respect.
    """
    if k % 2 == 0:
        raise ParityError(f"k must be odd, got {k}")
    if k < 3:
        raise ParameterError(f"k must be at least 3, got {k}")
    s = (k - 1) // 2
    vs = sorted(g.vertices)
    ids = {}
    roles = {}
    nxt = 0
    for x in vs:
        for i in range(s):
            ids[("v", x, i)] = nxt
            roles[nxt] = ("cliquePart", x, i)
            nxt += 1
    hub = nxt
    roles[hub] = ("hub",)
    nxt += 1
    simple_edges = sorted({_norm(u, w) for u, w in g.edges if u != w})
    for x, y in simple_edges:
        ids[("u", x, y)] = nxt
        roles[nxt] = ("edgeVertex", x, y)
        nxt += 1
    clique = [ids[("v", x, i)] for x in vs for i in range(s)]
    edges = [(a, b) for a, b in itertools.combinations(clique, 2)]
    edges += [(c, hub) for c in clique]
    for x, y in simple_edges:
        u = ids[("u", x, y)]
        edges += [(ids[("v", x, i)], u) for i in range(s)]
        edges += [(ids[("v", y, i)], u) for i in range(s)]
    return CliqueReductionOutput(
        Graph(range(nxt), edges), k * (k - 1) // 2 + 1, roles
    )


class CrossCompositionOutput(NamedTuple):
    graph: Graph
    k: int
    link_vertices: tuple  # per instance (u_i, v_i)


def cross_composition(instances, require_cubic_planar: bool = False):
    """Chain Hamiltonicity-through-an-edge instances into one cyclability ask.

    Every (G_i, e_i) is copied disjointly, e_i is subdivided twice into
    a - u_i - v_i - b, and consecutive copies are linked by {v_i, u_{i+1}},
    cyclically. The composition is (max n_i + 2)-cyclable iff every instance
    has a Hamiltonian cycle through its edge: a copy touches the rest of the
    graph only through its two link vertices, so any cycle through the copy,
    u_i and v_i induces a Hamiltonian path between the subdivided edge's
    ends, whatever the other copies look like. With a single instance the
    cyclic link edge coincides with the subdivision edge {u_1, v_1} and is
    skipped to keep the output simple.
    """
    instances = list(instances)
    if not instances:
        raise ParameterError("need at least one instance")
    t = len(instances)
    edges = []
    links = []
    base = sum(gi.n for gi, _ in instances)
    offset = 0
    for j, (gi, e) in enumerate(instances):
        u, w = e
        if not gi.has_edge(u, w):
            raise EdgeNotFound(f"instance {j} has no edge {e}")
        lab = {v: offset + i for i, v in enumerate(sorted(gi.vertices))}
        offset += gi.n
        cut = _norm(lab[u], lab[w])
        copied = sorted(_norm(lab[a], lab[b]) for a, b in gi.edges)
        copied.remove(cut)
        edges += copied
        uj, vj = base + 2 * j, base + 2 * j + 1
        edges += [(cut[0], uj), (uj, vj), (vj, cut[1])]
        links.append((uj, vj))
    for j in range(t):
        a = links[j][1]
        b = links[(j + 1) % t][0]
        if t > 1:
            edges.append(_norm(a, b))
    out = Graph(range(base + 2 * t), edges)
    if require_cubic_planar:
        bad = [v for v in out.vertices if out.degree(v) != 3]
        if bad:
            raise NotCubicPlanar(f"vertices of degree != 3: {bad[:4]}")
        import networkx as nx

        ok, _ = nx.check_planarity(nx.Graph(list(out.edges)))
        if not ok:
            raise NotCubicPlanar("composition is not planar")
    k = max(gi.n for gi, _ in instances) + 2
    return CrossCompositionOutput(out, k, tuple(links))


# -- catalog dispatch ---------------------------------------------------------


class CatalogItem(NamedTuple):
    graph: Graph
    embedding: Embedding | None
    extras: dict


def catalog(name: str, *params) -> CatalogItem:
    """Named deterministic instances, embedding included where one exists."""
    p = list(params)
    try:
        if name == "petersen":
            return CatalogItem(petersen(), None, {})
        if name == "grid":
            g, emb = grid(int(p[0]), int(p[1]))
            return CatalogItem(g, emb, {})
        if name == "cycle":
            g, emb = cycle(int(p[0]))
            return CatalogItem(g, emb, {})
        if name == "completeGraph":
            n = int(p[0])
            g = complete_graph(n)
            if 2 <= n <= 4:
                rim = min(n, 3)
                pos = {i: _polar(1.0, i, max(rim, 2)) for i in range(rim)}
                if n == 4:
                    pos[3] = (0.0, 0.0)
                return CatalogItem(g, embedding_from_positions(g, pos), {})
            return CatalogItem(g, None, {})
        if name == "prism":
            g, emb = prism(int(p[0]))
            return CatalogItem(g, emb, {})
        if name == "star":
            g, emb = star(int(p[0]))
            return CatalogItem(g, emb, {})
        if name == "randomConnected":
            return CatalogItem(random_connected(int(p[0]), int(p[1]), int(p[2])), None, {})
        if name == "randomKConnected":
            return CatalogItem(random_k_connected(int(p[0]), int(p[1]), int(p[2])), None, {})
        if name == "ringOfRings":
            rr = ring_of_rings(int(p[0]), int(p[1]))
            return CatalogItem(
                rr.graph, rr.embedding,
                {"concentric": rr.concentric, "railed": rr.railed},
            )
    except IndexError:
        raise ParameterError(f"catalog entry {name!r} wants more parameters") from None
    raise UnknownName(f"no catalog entry named {name!r}")


# -- exhaustive connected enumeration ------------------------------------------

_connected_cache: dict[int, tuple] = {}


def _connected_masks(n: int) -> tuple:
    if n in _connected_cache:
        return _connected_cache[n]
    if n == 1:
        reps = ((0,),)
    else:
        reps = []
        seen = set()
        bit = 1 << (n - 1)
        for smaller in _connected_masks(n - 1):
            for sub in range(1, bit):
                adj = [m | (bit if (sub >> i) & 1 else 0) for i, m in enumerate(smaller)]
                adj.append(sub)
                c = _kernels.canonical_form(n, adj)
                if c not in seen:
                    seen.add(c)
                    reps.append(tuple(adj))
        reps = tuple(reps)
    _connected_cache[n] = reps
    return reps


def connected_graphs(n: int) -> list[Graph]:
    """Every connected graph on n vertices, one per isomorphism class.

    Grown by attaching vertex n-1 to each nonempty neighborhood of each
    (n-1)-vertex class and deduplicating canonically; every connected graph
    has a non-cut vertex, so nothing is missed. Deterministic order.
    """
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    if n > 9:
        raise ParameterError("exhaustive enumeration is capped at n = 9")
    out = []
    for adj in _connected_masks(n):
        edges = [
            (i, j) for i in range(n) for j in range(i + 1, n) if (adj[i] >> j) & 1
        ]
        out.append(Graph(range(n), edges))
    return out
