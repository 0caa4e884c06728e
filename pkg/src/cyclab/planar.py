"""Planar embeddings and the certificate-driven irrelevant-vertex rules.

An Embedding is a rotation system: per vertex, the cyclic order of incident
edge ids (ids index into g.edges). Faces come from the usual dart traversal
(follow an edge, turn to the next edge in the head's rotation); a designated
outer face turns the sphere picture into a plane one.

On top of that live two certificate types. A ConcentricCertificate names r
nested cycles C_1 ... C_r (innermost first) together with the vertex set
strictly inside each; ring indices are 1-based throughout to keep the
annulus arithmetic readable. A RailedAnnulusCertificate adds q rails
crossing all the rings. Verifiers recompute everything against the
embedding: interiors by dual-graph reachability from the outer face,
nesting by vertex containment, rail/cycle intersections by contiguity.

The two reduction rules consume verified certificates:

  * problem_irrelevant_by_annulus: enough nested rings whose outermost disk
    avoids R make everything inside the innermost ring deletable.
  * color_irrelevant_step: a railed annulus whose first ring holds an
    annotated vertex either exposes a no-instance via cropped DP runs or
    certifies that vertex's annotation can be dropped.

pipeline_solve chains them: DP when the width is small, otherwise delete /
un-annotate and recurse, with a brute-force fallback that reports which
steps were skipped. Ring thresholds and window offsets default to the
published constants but are parameters, so small mechanism tests can drive
the same code paths the full-size constants never reach on desk-scale
inputs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import NamedTuple

from .decomp import exact_pathwidth, exact_treewidth, greedy_treewidth
from .dp import WIDTH_CAP, solve_pac
from .errors import (
    BackendError,
    BudgetExceeded,
    CertificateError,
    CyclabError,
    EmbeddingError,
    FormatError,
    NotPlanar,
    ParameterError,
    PreconditionError,
    SizeError,
)
from .graph import Graph, is_cycle
from .oracle import OracleBudget, is_yes_pac


class Embedding:
    """Rotation system plus the index of the outer face.

    rotation maps every vertex to the cyclic tuple of its incident edge ids;
    outer_face indexes into compute_faces(g, emb) output order.
    """

    __slots__ = ("rotation", "outer_face")

    def __init__(self, rotation, outer_face: int = 0):
        self.rotation = {v: tuple(es) for v, es in rotation.items()}
        self.outer_face = int(outer_face)

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return self.rotation == other.rotation and self.outer_face == other.outer_face

    def __repr__(self):
        return f"Embedding({len(self.rotation)} vertices, outer={self.outer_face})"


class _FaceStructure(NamedTuple):
    faces: tuple          # tuple of faces, each a tuple of darts (edge id, dir)
    face_of: dict         # dart -> face index
    vertex_faces: dict    # vertex -> frozenset of incident face indices


def _face_structure(g: Graph, emb: Embedding) -> _FaceStructure:
    edges = g.edges
    if any(u == w for u, w in edges):
        raise EmbeddingError("self-loops have no rotation-system support here")
    if set(emb.rotation) != set(g.vertices):
        raise EmbeddingError("rotation keys differ from the vertex set")
    incident = {v: [] for v in g.vertices}
    for e, (u, w) in enumerate(edges):
        incident[u].append(e)
        incident[w].append(e)
    pos = {}
    for v in g.vertices:
        if sorted(emb.rotation[v]) != sorted(incident[v]):
            raise EmbeddingError(f"rotation at vertex {v} does not list its edges")
        pos[v] = {e: i for i, e in enumerate(emb.rotation[v])}

    face_of = {}
    faces = []
    for e0 in range(len(edges)):
        for d0 in (0, 1):
            if (e0, d0) in face_of:
                continue
            walk = []
            e, d = e0, d0
            while (e, d) not in face_of:
                face_of[(e, d)] = len(faces)
                walk.append((e, d))
                head = edges[e][1 - d]
                lst = emb.rotation[head]
                e = lst[(pos[head][e] + 1) % len(lst)]
                d = 0 if edges[e][0] == head else 1
            if (e, d) != (e0, d0):
                raise EmbeddingError("face traversal does not close")
            faces.append(tuple(walk))

    # Euler per component: n - m + f = 2 on the sphere
    comp_of = {}
    for ci, comp in enumerate(g.connected_components()):
        for v in comp:
            comp_of[v] = ci
    counts = {}
    for fi, walk in enumerate(faces):
        ci = comp_of[g.edges[walk[0][0]][0]]
        counts[ci] = counts.get(ci, 0) + 1
    for ci, comp in enumerate(g.connected_components()):
        mc = sum(1 for u, w in edges if u in comp)
        if mc == 0:
            continue
        if len(comp) - mc + counts.get(ci, 0) != 2:
            raise EmbeddingError("Euler check failed: not a sphere embedding")

    vertex_faces = {v: set() for v in g.vertices}
    for (e, d), fi in face_of.items():
        vertex_faces[edges[e][d]].add(fi)
    vertex_faces = {v: frozenset(fs) for v, fs in vertex_faces.items()}

    if faces and not 0 <= emb.outer_face < len(faces):
        raise EmbeddingError(f"outer face {emb.outer_face} out of range")
    return _FaceStructure(tuple(faces), face_of, vertex_faces)


def compute_faces(g: Graph, emb: Embedding):
    """Face boundary walks as vertex tuples, in deterministic order."""
    fs = _face_structure(g, emb)
    return tuple(
        tuple(g.edges[e][d] for e, d in walk) for walk in fs.faces
    )


# -- embedding io ---------------------------------------------------------------


def parse_rotation(text: str, g: Graph) -> Embedding:
    rotation = {}
    outer = 0
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "outer":
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError(f"line {ln}: expected 'outer <faceIndex>'")
            outer = int(parts[1])
        elif parts[0] == "rot":
            if len(parts) < 2 or not parts[1].endswith(":"):
                raise FormatError(f"line {ln}: expected 'rot <v>: <edge ids>'")
            vtxt = parts[1][:-1]
            if not vtxt.isdigit():
                raise FormatError(f"line {ln}: bad vertex id {vtxt!r}")
            v = int(vtxt)
            if v not in g:
                raise FormatError(f"line {ln}: vertex {v} not in graph")
            if v in rotation:
                raise FormatError(f"line {ln}: duplicate rotation for vertex {v}")
            try:
                es = tuple(int(t) for t in parts[2:])
            except ValueError:
                raise FormatError(f"line {ln}: bad edge id") from None
            if any(not 0 <= e < g.m for e in es):
                raise FormatError(f"line {ln}: edge id out of range")
            rotation[v] = es
        else:
            raise FormatError(f"line {ln}: unknown directive {parts[0]!r}")
    for v in g.vertices:
        rotation.setdefault(v, ())
    return Embedding(rotation, outer)


def serialize_rotation(emb: Embedding) -> str:
    lines = [
        "rot {}: {}".format(v, " ".join(str(e) for e in emb.rotation[v])).rstrip()
        for v in sorted(emb.rotation)
    ]
    lines.append(f"outer {emb.outer_face}")
    return "\n".join(lines) + "\n"


# -- certificates ----------------------------------------------------------------


class ConcentricCertificate:
    """r nested cycles, innermost first, with their strict interiors.

    Ring indices in closed_disk/interior/annulus are 1-based, matching the
    A_{i,j} arithmetic everywhere these certificates are consumed.
    """

    __slots__ = ("cycles", "disk_membership")

    def __init__(self, cycles, disk_membership):
        cycles = tuple(tuple(int(v) for v in c) for c in cycles)
        disk = tuple(frozenset(int(v) for v in d) for d in disk_membership)
        if len(cycles) < 2:
            raise CertificateError("a concentric certificate needs at least 2 cycles")
        if len(disk) != len(cycles):
            raise CertificateError("need one disk membership set per cycle")
        for c, d in zip(cycles, disk):
            if len(c) < 3:
                raise CertificateError("cycles must have length >= 3")
            if d & set(c):
                raise CertificateError("disk interior overlaps its own cycle")
        self.cycles = cycles
        self.disk_membership = disk

    @property
    def r(self) -> int:
        return len(self.cycles)

    def interior(self, i: int) -> frozenset:
        if not 1 <= i <= self.r:
            raise ParameterError(f"ring index {i} out of 1..{self.r}")
        return self.disk_membership[i - 1]

    def closed_disk(self, i: int) -> frozenset:
        return self.interior(i) | frozenset(self.cycles[i - 1])

    def annulus(self, i: int, j: int) -> frozenset:
        """Vertices of the closed disk of ring j minus the open interior of ring i."""
        if i > j:
            raise ParameterError(f"annulus needs i <= j, got {i} > {j}")
        return self.closed_disk(j) - self.interior(i)

    def __eq__(self, other):
        if not isinstance(other, ConcentricCertificate):
            return NotImplemented
        return (self.cycles, self.disk_membership) == (other.cycles, other.disk_membership)

    def __repr__(self):
        return f"ConcentricCertificate(r={self.r})"


class RailedAnnulusCertificate:
    __slots__ = ("concentric", "rails")

    def __init__(self, concentric: ConcentricCertificate, rails):
        rails = tuple(tuple(int(v) for v in p) for p in rails)
        if not rails or any(not p for p in rails):
            raise CertificateError("rails must be non-empty paths")
        self.concentric = concentric
        self.rails = rails

    @property
    def r(self) -> int:
        return self.concentric.r

    @property
    def q(self) -> int:
        return len(self.rails)

    def __eq__(self, other):
        if not isinstance(other, RailedAnnulusCertificate):
            return NotImplemented
        return (self.concentric, self.rails) == (other.concentric, other.rails)

    def __repr__(self):
        return f"RailedAnnulusCertificate(r={self.r}, q={self.q})"


def parse_certificate(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"certificate is not valid JSON: {e}") from None
    if not isinstance(data, dict) or "cycles" not in data or "disk_membership" not in data:
        raise FormatError("certificate JSON needs 'cycles' and 'disk_membership'")
    cert = ConcentricCertificate(data["cycles"], data["disk_membership"])
    if "rails" in data:
        return RailedAnnulusCertificate(cert, data["rails"])
    return cert


def serialize_certificate(cert) -> str:
    if isinstance(cert, RailedAnnulusCertificate):
        inner = cert.concentric
        data = {
            "cycles": [list(c) for c in inner.cycles],
            "disk_membership": [sorted(d) for d in inner.disk_membership],
            "rails": [list(p) for p in cert.rails],
        }
    else:
        data = {
            "cycles": [list(c) for c in cert.cycles],
            "disk_membership": [sorted(d) for d in cert.disk_membership],
        }
    return json.dumps(data, indent=1) + "\n"


# -- interiors and verification ---------------------------------------------------


def _edge_ids(g: Graph):
    ids = {}
    for e, (u, w) in enumerate(g.edges):
        ids[(u, w)] = e
    return ids


def _cycle_edge_ids(g, ids, cycle):
    out = set()
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        out.add(ids[(a, b) if a < b else (b, a)])
    return out


def _interior_vertices(g, fs: _FaceStructure, outer: int, cycle):
    """(strictly-inside vertex set, problems). Inside = every incident face
    unreachable from the outer face when cycle edges cannot be crossed."""
    ids = _edge_ids(g)
    cyc_edges = _cycle_edge_ids(g, ids, cycle)
    adj = {fi: set() for fi in range(len(fs.faces))}
    for e in range(g.m):
        if e in cyc_edges:
            continue
        f1, f2 = fs.face_of[(e, 0)], fs.face_of[(e, 1)]
        adj[f1].add(f2)
        adj[f2].add(f1)
    reach = {outer}
    queue = [outer]
    while queue:
        f = queue.pop()
        for f2 in adj[f]:
            if f2 not in reach:
                reach.add(f2)
                queue.append(f2)
    inside = set()
    problems = []
    on_cycle = set(cycle)
    for v in g.vertices:
        if v in on_cycle:
            continue
        vf = fs.vertex_faces[v]
        if not vf:
            problems.append(f"vertex {v} is isolated; interior undefined")
        elif vf & reach:
            if not vf <= reach:
                problems.append(f"vertex {v} touches both sides of cycle {cycle}")
        else:
            inside.add(v)
    return frozenset(inside), problems


def concentric_problems(g: Graph, emb: Embedding, cert: ConcentricCertificate):
    """Every way the certificate fails to describe nested disjoint cycles."""
    if not g.is_simple():
        return ["certificate verification needs a simple graph"]
    try:
        fs = _face_structure(g, emb)
    except EmbeddingError as e:
        return [f"embedding: {e}"]
    problems = []
    for i, cyc in enumerate(cert.cycles, 1):
        if any(v not in g for v in cyc):
            problems.append(f"ring {i} mentions vertices outside the graph")
        elif not is_cycle(g, cyc):
            problems.append(f"ring {i} is not a cycle of the graph")
    seen = {}
    for i, cyc in enumerate(cert.cycles, 1):
        for v in cyc:
            if v in seen and seen[v] != i:
                problems.append(f"rings {seen[v]} and {i} share vertex {v}")
            seen[v] = i
    if problems:
        return problems
    insides = []
    for i, cyc in enumerate(cert.cycles, 1):
        inside, sub = _interior_vertices(g, fs, emb.outer_face, cyc)
        problems.extend(f"ring {i}: {p}" for p in sub)
        if not sub and inside != cert.disk_membership[i - 1]:
            problems.append(f"ring {i}: claimed interior does not match the embedding")
        insides.append(inside)
    if problems:
        return problems
    for i in range(len(cert.cycles) - 1):
        disk = insides[i] | set(cert.cycles[i])
        if not disk <= insides[i + 1]:
            problems.append(f"ring {i + 1} is not strictly inside ring {i + 2}")
    return problems


def verify_concentric(g: Graph, emb: Embedding, cert: ConcentricCertificate) -> bool:
    return not concentric_problems(g, emb, cert)


def railed_annulus_problems(g: Graph, emb: Embedding, cert: RailedAnnulusCertificate):
    problems = concentric_problems(g, emb, cert.concentric)
    if problems:
        return problems
    inner = cert.concentric
    zone = inner.annulus(1, inner.r)
    seen = {}
    for ri, rail in enumerate(cert.rails, 1):
        if len(set(rail)) != len(rail):
            problems.append(f"rail {ri} repeats a vertex")
            continue
        if any(v not in g for v in rail):
            problems.append(f"rail {ri} mentions vertices outside the graph")
            continue
        if any(not g.has_edge(a, b) for a, b in zip(rail, rail[1:])):
            problems.append(f"rail {ri} is not a path of the graph")
            continue
        if any(v not in zone for v in rail):
            problems.append(f"rail {ri} leaves the annulus")
        for v in rail:
            if v in seen:
                problems.append(f"rails {seen[v]} and {ri} share vertex {v}")
            seen[v] = ri
        for ci, cyc in enumerate(inner.cycles, 1):
            on = [p for p, v in enumerate(rail) if v in set(cyc)]
            if not on:
                problems.append(f"rail {ri} misses ring {ci}")
            elif on != list(range(on[0], on[-1] + 1)):
                problems.append(f"rail {ri} meets ring {ci} in separate pieces")
            else:
                cyc_ids = _cycle_edge_ids(g, _edge_ids(g), cyc)
                ids = _edge_ids(g)
                for p in range(on[0], on[-1]):
                    a, b = rail[p], rail[p + 1]
                    if ids[(a, b) if a < b else (b, a)] not in cyc_ids:
                        problems.append(
                            f"rail {ri} crosses ring {ci} on a chord between {a} and {b}"
                        )
                        break
    return problems


def verify_railed_annulus(g, emb, cert: RailedAnnulusCertificate) -> bool:
    return not railed_annulus_problems(g, emb, cert)


def is_q_dense(r_set, cert: ConcentricCertificate, q: int) -> bool:
    """Does every q-ring window of the certificate contain an annotated vertex?"""
    if q < 1:
        raise ParameterError("density window must be >= 1")
    if cert.r < q:
        raise ParameterError(f"window {q} exceeds the {cert.r} rings")
    r_set = frozenset(r_set)
    return all(
        cert.annulus(i, i + q - 1) & r_set for i in range(1, cert.r - q + 2)
    )


# -- the two reduction rules ------------------------------------------------------


def problem_irrelevant_by_annulus(g: Graph, r_set, k: int, cert: ConcentricCertificate,
                                  *, rings_needed: int | None = None) -> frozenset:
    """Vertices certified deletable: everything in the innermost closed disk.

    Guards (PreconditionError): the certificate must carry at least 16k rings
    (override via rings_needed for reduced-constant runs) and the outermost
    closed disk must avoid the annotated set. The certificate is assumed
    verified against the embedding by the caller.
    """
    r_set = frozenset(r_set)
    need = 16 * k if rings_needed is None else rings_needed
    if cert.r < need:
        raise PreconditionError(
            f"rule needs {need} nested annotation-free rings, certificate has {cert.r}"
        )
    stray = [v for v in cert.closed_disk(cert.r) if v not in g]
    if stray:
        raise PreconditionError(f"certificate mentions unknown vertices {sorted(stray)}")
    hit = cert.closed_disk(cert.r) & r_set
    if hit:
        raise PreconditionError(
            f"annotated vertices {sorted(hit)} inside the outermost ring's disk"
        )
    return cert.closed_disk(1)


class NoInstance(NamedTuple):
    failing_index: int  # 1-based crop index whose DP said no


class ColorIrrelevant(NamedTuple):
    vertex: int


def color_irrelevant_step(g: Graph, r_set, k: int, railed: RailedAnnulusCertificate,
                          dp_backend, *, b: int | None = None,
                          w_lo: int | None = None, w_hi: int | None = None,
                          density: int | None = None):
    """Run the cropped-instance sweep of the annotation-dropping rule.

    For each i up to r-b, crops the graph to the closed disk of ring i+b,
    keeps the annotations inside ring i plus one witness w_i from the window
    annulus [i+w_lo, i+w_hi], and asks dp_backend. Any no answer condemns
    the whole instance (NoInstance); all yes answers certify the lowest
    annotated vertex inside ring 1 as droppable (ColorIrrelevant).

    Defaults are the published constants b = 98k+2, window offsets k+1 and
    33k+1, density 32k; all overridable for reduced-constant mechanism tests.
    """
    if k < 1:
        raise PreconditionError("the rule needs k >= 1")
    r_set = frozenset(r_set)
    cert = railed.concentric
    r = cert.r
    b = 98 * k + 2 if b is None else b
    w_lo = k + 1 if w_lo is None else w_lo
    w_hi = 33 * k + 1 if w_hi is None else w_hi
    density = 32 * k if density is None else density
    if r < b + 1:
        raise PreconditionError(f"rule needs at least {b + 1} rings, certificate has {r}")
    if railed.q < 2 * k + 1:
        raise PreconditionError(f"rule needs {2 * k + 1} rails, certificate has {railed.q}")
    if w_hi > b:
        raise PreconditionError(f"witness window end {w_hi} outside crop offset {b}")
    try:
        dense = is_q_dense(r_set, cert, density)
    except ParameterError as e:
        raise PreconditionError(f"density window unusable: {e}") from None
    if not dense:
        raise PreconditionError(f"annotated set is not {density}-dense in the rings")
    first = cert.closed_disk(1) & r_set
    if not first:
        raise PreconditionError("no annotated vertex inside the first ring")
    v = min(first)
    for i in range(1, r - b + 1):
        lo, hi = i + w_lo, i + w_hi
        if hi > r:
            raise PreconditionError(f"witness window [{lo},{hi}] exceeds {r} rings")
        window = cert.annulus(lo, hi) & r_set
        if not window:
            raise PreconditionError(f"no annotated vertex in rings [{lo},{hi}]")
        w_i = min(window)
        crop = g.induced(cert.closed_disk(i + b))
        r_i = (r_set & cert.closed_disk(i)) | {w_i}
        try:
            ok = dp_backend(crop, r_i, k)
        except CyclabError as e:
            raise BackendError(f"crop {i} ({crop.n} vertices): {e}") from e
        if not ok:
            return NoInstance(i)
    return ColorIrrelevant(v)


# -- ring search -----------------------------------------------------------------


class RingSearchBudget(NamedTuple):
    max_regions: int = 50_000
    time_limit_ms: float | None = None


def _single_cycle(g: Graph, edge_ids) -> tuple | None:
    """The edge set as one simple cycle (deterministic start), else None."""
    if not edge_ids:
        return None
    adj = {}
    for e in edge_ids:
        u, w = g.edges[e]
        adj.setdefault(u, []).append(w)
        adj.setdefault(w, []).append(u)
    if any(len(ns) != 2 for ns in adj.values()):
        return None
    start = min(adj)
    walk = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        nxt = a if a != prev else b
        if prev is None:
            nxt = min(a, b)
        if nxt == start:
            break
        walk.append(nxt)
        prev, cur = cur, nxt
        if len(walk) > len(adj):
            return None
    return tuple(walk) if len(walk) == len(adj) else None


def find_concentric_r_free(g: Graph, emb: Embedding, r_set, y: int,
                           budget: RingSearchBudget | None = None):
    """Search y nested cycles whose outermost closed disk avoids r_set.

    Desk-scale stand-in for the wall-based extraction: grow face regions
    outward from every seed face (vertex closure per step, so consecutive
    region boundaries are vertex-disjoint) and keep boundaries that form
    single cycles. Returns a verified ConcentricCertificate or None.
    """
    if y < 2:
        raise ParameterError("need y >= 2 nested cycles")
    budget = budget or RingSearchBudget()
    r_set = frozenset(r_set)
    t0 = time.perf_counter()
    fs = _face_structure(g, emb)
    if len(fs.faces) <= 1:
        return None
    faces_at = fs.vertex_faces
    face_verts = [frozenset(g.edges[e][d] for e, d in walk) for walk in fs.faces]
    spent = 0
    for seed in range(len(fs.faces)):
        if seed == emb.outer_face:
            continue
        region = {seed}
        rings = []
        while True:
            spent += 1
            if spent > budget.max_regions:
                raise BudgetExceeded(f"ring search exceeded {budget.max_regions} regions")
            if budget.time_limit_ms is not None:
                if (time.perf_counter() - t0) * 1000 > budget.time_limit_ms:
                    raise BudgetExceeded("ring search ran out of time")
            boundary = [
                e for e in range(g.m)
                if (fs.face_of[(e, 0)] in region) != (fs.face_of[(e, 1)] in region)
            ]
            cycle = _single_cycle(g, boundary)
            if cycle is not None:
                inside = frozenset(v for v in g.vertices if faces_at[v] and faces_at[v] <= region)
                if not (inside | set(cycle)) & r_set:
                    rings.append((cycle, inside))
                else:
                    break  # regions only grow; once hit, always hit
            touched = {v for v in g.vertices if faces_at[v] & region}
            grown = set(region)
            for v in touched:
                grown |= faces_at[v]
            if emb.outer_face in grown or grown == region:
                break
            region = grown
        if len(rings) >= y:
            chain = rings[-y:]
            cert = ConcentricCertificate(
                [c for c, _ in chain], [i for _, i in chain]
            )
            leftover = concentric_problems(g, emb, cert)
            if leftover:
                raise CertificateError(
                    "ring search built a certificate that fails verification: "
                    + "; ".join(leftover)
                )
            return cert
    return None


# -- embedded surgery --------------------------------------------------------------


def induced_embedded(g: Graph, emb: Embedding, keep) -> tuple[Graph, Embedding]:
    """Induced subgraph with its restricted rotation system.

    The new outer face is the face inheriting a surviving dart of the old
    one; if the whole outer walk disappears, the longest remaining walk is
    used (best effort, fine for the sparse instances the pipeline handles).
    """
    keep = set(keep)
    remap = {}
    for e, (u, w) in enumerate(g.edges):
        if u in keep and w in keep:
            remap[e] = len(remap)
    old_fs = _face_structure(g, emb)
    g2 = g.induced(keep)
    rot2 = {
        v: tuple(remap[e] for e in emb.rotation[v] if e in remap)
        for v in g2.vertices
    }
    emb2 = Embedding(rot2, 0)
    if g2.m == 0:
        return g2, emb2
    new_fs = _face_structure(g2, emb2)
    outer = None
    if len(old_fs.faces) > emb.outer_face:
        for e, d in old_fs.faces[emb.outer_face]:
            if e in remap:
                outer = new_fs.face_of[(remap[e], d)]
                break
    if outer is None:
        outer = max(range(len(new_fs.faces)), key=lambda f: len(new_fs.faces[f]))
    return g2, Embedding(rot2, outer)


# -- the pipeline -------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineConfig:
    """Constants for the four-step loop; None means the published default.

    width_cap is the practical DP bound. step1_cap is the theoretical
    step-1 threshold (default 18q); instances between the two caps record a
    skipped step 1 and continue down the pipeline. Exact treewidth is only
    attempted up to step1_exact_n vertices; beyond that the greedy bound
    decides whether step 1 fires.
    """

    width_cap: int = WIDTH_CAP
    crop_width_cap: int = WIDTH_CAP
    step1_exact_n: int = 18
    r: int | None = None
    y: int | None = None
    q: int | None = None
    b: int | None = None
    step1_cap: int | None = None
    rings_needed: int | None = None
    density: int | None = None
    w_lo: int | None = None
    w_hi: int | None = None
    ring_budget: RingSearchBudget = RingSearchBudget()
    oracle_budget: OracleBudget | None = None
    max_rounds: int = 64

    def constants(self, k: int) -> dict:
        r = 98 * k * k + 2 * k if self.r is None else self.r
        y = 16 * k if self.y is None else self.y
        q = 2 * y + 4 * r if self.q is None else self.q
        return {
            "r": r,
            "y": y,
            "q": q,
            "b": 98 * k + 2 if self.b is None else self.b,
            "step1_cap": 18 * q if self.step1_cap is None else self.step1_cap,
            "rings_needed": 16 * k if self.rings_needed is None else self.rings_needed,
            "density": 32 * k if self.density is None else self.density,
            "w_lo": k + 1 if self.w_lo is None else self.w_lo,
            "w_hi": 33 * k + 1 if self.w_hi is None else self.w_hi,
        }


@dataclass
class PipelineTrace:
    rounds: list = field(default_factory=list)
    answer: bool | None = None

    def log(self, **kv):
        self.rounds.append(kv)


def _induce(g, emb, keep):
    if emb is None:
        return g.induced(keep), None
    return induced_embedded(g, emb, keep)


def _pipeline(g, emb, r_set, k, cfg, certs, trace, depth=0):
    for _ in range(cfg.max_rounds):
        if k == 0 or len(r_set) < k:
            trace.log(depth=depth, step="vacuous", answer=True)
            return True
        comps = g.connected_components()
        if len(comps) > 1:
            occupied = [c for c in comps if c & r_set]
            if k >= 2:
                if len(occupied) > 1:
                    trace.log(depth=depth, step="split",
                              note="terminals in several components", answer=False)
                    return False
                trace.log(depth=depth, step="split", kept=len(occupied[0]))
                g, emb = _induce(g, emb, occupied[0])
                continue
            trace.log(depth=depth, step="split", parts=len(occupied))
            for comp in occupied:
                sub_g, sub_emb = _induce(g, emb, comp)
                if not _pipeline(sub_g, sub_emb, r_set & comp, k, cfg, certs,
                                 trace, depth + 1):
                    return False
            return True

        consts = cfg.constants(k)
        # Step 1: decide outright when the width allows it. The DP only
        # needs some decomposition of width <= cap, so try the cheap
        # greedy bound first and pay for exactness only at small sizes.
        cap = min(cfg.width_cap, consts["step1_cap"])
        width, td = greedy_treewidth(g)
        if width > cap and g.n <= cfg.step1_exact_n:
            try:
                width, td = exact_treewidth(g)
            except SizeError:
                pass
        if width <= cap:
            if width >= 5:
                # Fat bags make join nodes the dominant cost, so trade the
                # tree optimum for a join-free path decomposition when one
                # fits under the cap.
                try:
                    pw, pd = exact_pathwidth(g)
                except SizeError:
                    pass
                else:
                    if pw <= cap:
                        width, td = pw, pd
            ans = solve_pac(g, r_set, k, td, width_cap=cfg.width_cap)
            trace.log(depth=depth, step=1, width=width, answer=ans)
            return ans
        if width <= consts["step1_cap"]:
            trace.log(depth=depth, step=1, width=width,
                      skipped="width above the practical DP cap")
        else:
            trace.log(depth=depth, step=1, width=width, skipped="width above 18q")

        # Step 2: delete a certified problem-irrelevant vertex
        cert2 = None
        if emb is None:
            trace.log(depth=depth, step=2, skipped="no embedding given")
        else:
            try:
                cert2 = find_concentric_r_free(g, emb, r_set, consts["y"],
                                               cfg.ring_budget)
            except BudgetExceeded as e:
                trace.log(depth=depth, step=2, skipped=str(e))
        if cert2 is not None:
            try:
                deletable = problem_irrelevant_by_annulus(
                    g, r_set, k, cert2, rings_needed=consts["rings_needed"]
                )
            except PreconditionError as e:
                trace.log(depth=depth, step=2, skipped=str(e))
            else:
                v = min(deletable)
                trace.log(depth=depth, step=2, deleted=v, rings=cert2.r)
                g, emb = _induce(g, emb, set(g.vertices) - {v})
                r_set = r_set - {v}
                continue
        elif emb is not None:
            trace.log(depth=depth, step=2, skipped="no annotation-free ring chain")

        # Steps 3-4: drop an annotation via a railed annulus
        progressed = False
        for ci, cert in enumerate(certs):
            if not isinstance(cert, RailedAnnulusCertificate):
                continue
            if emb is None:
                trace.log(depth=depth, step=3, cert=ci, skipped="no embedding given")
                continue
            if not verify_railed_annulus(g, emb, cert):
                trace.log(depth=depth, step=3, cert=ci, skipped="certificate does not verify")
                continue

            def backend(cg, cr, ck):
                return solve_pac(cg, cr, ck, width_cap=cfg.crop_width_cap)

            try:
                res = color_irrelevant_step(
                    g, r_set, k, cert, backend,
                    b=consts["b"], w_lo=consts["w_lo"], w_hi=consts["w_hi"],
                    density=consts["density"],
                )
            except (PreconditionError, BackendError) as e:
                trace.log(depth=depth, step=3, cert=ci, skipped=str(e))
                continue
            trace.log(depth=depth, step=3, cert=ci, crops_solved=True)
            if isinstance(res, NoInstance):
                trace.log(depth=depth, step=4, cert=ci,
                          failing_crop=res.failing_index, answer=False)
                return False
            trace.log(depth=depth, step=4, cert=ci, unannotated=res.vertex)
            r_set = r_set - {res.vertex}
            progressed = True
            break
        if progressed:
            continue

        # nothing fired: desk-scale fallback
        ans = is_yes_pac(g, r_set, k, cfg.oracle_budget)
        trace.log(depth=depth, step="fallback", answer=ans,
                  note="no reduction rule applied; brute force decided")
        return ans
    raise BudgetExceeded(
        f"pipeline made no decision in {cfg.max_rounds} rounds; "
        f"trace: {trace.rounds[-5:]}"
    )


def pipeline_solve(g: Graph, emb: Embedding | None, r_set, k: int,
                   config: PipelineConfig | None = None, *, certificates=()) -> bool:
    ans, _ = pipeline_solve_traced(g, emb, r_set, k, config, certificates=certificates)
    return ans


def pipeline_solve_traced(g: Graph, emb: Embedding | None, r_set, k: int,
                          config: PipelineConfig | None = None, *, certificates=()):
    """Run the reduction loop; emb=None skips the embedding-based steps.

    Without an embedding only step 1 and the fallback can fire, which is
    still the complete solver on anything below the width cap.
    """
    if not isinstance(k, int) or k < 0:
        raise ParameterError("k must be a non-negative integer")
    r_set = frozenset(r_set)
    if not r_set <= set(g.vertices):
        raise ParameterError("annotated set is not a vertex subset")
    if emb is not None:
        try:
            _face_structure(g, emb)
        except EmbeddingError as e:
            raise NotPlanar(str(e)) from e
    cfg = config or PipelineConfig()
    trace = PipelineTrace()
    ans = _pipeline(g, emb, r_set, k, cfg, tuple(certificates), trace)
    trace.answer = ans
    return ans, trace
