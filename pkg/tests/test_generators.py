"""Instance builders: drawings, reductions, and the connected census."""

import pytest

from cyclab.errors import (
    EdgeNotFound,
    ParameterError,
    ParityError,
    UnknownName,
)
from cyclab.generators import (
    catalog,
    clique_reduction,
    complete_graph,
    connected_graphs,
    cross_composition,
    cycle,
    embedding_from_positions,
    grid,
    petersen,
    prism,
    random_connected,
    random_k_connected,
    ring_of_rings,
    star,
    wall,
)
from cyclab.graph import Graph, vertex_connectivity
from cyclab.oracle import OracleBudget, is_yes_pac
from cyclab.planar import compute_faces, verify_concentric, verify_railed_annulus

BIG = OracleBudget(max_vertices=64)


# -- named graphs ----------------------------------------------------------------


def test_petersen_shape():
    g = petersen()
    assert g.n == 10 and g.m == 15
    assert all(g.degree(v) == 3 for v in g.vertices)


def test_simple_drawings():
    g, _ = cycle(5)
    assert g.n == 5 and g.m == 5
    g, _ = grid(3, 4)
    assert g.n == 12 and g.m == 17
    g, _ = prism(4)
    assert all(g.degree(v) == 3 for v in g.vertices)
    g, _ = star(5)
    assert g.degree(0) == 5 and g.m == 5


def test_grid_outer_face_is_the_boundary():
    g, emb = grid(3, 3)
    walk = compute_faces(g, emb)[emb.outer_face]
    assert set(walk) == {v for v in g.vertices if g.degree(v) < 4}


def test_position_embedding_rejects_multigraphs():
    g = Graph(range(2), [(0, 1), (0, 1)])
    with pytest.raises(ParameterError):
        embedding_from_positions(g, {0: (0, 0), 1: (1, 0)})


# -- rings ------------------------------------------------------------------------


@pytest.mark.parametrize("rings,length", [(2, 3), (3, 6), (16, 8)])
def test_ring_of_rings_certificates_verify(rings, length):
    rr = ring_of_rings(rings, length)
    assert rr.graph.n == rings * length
    assert verify_concentric(rr.graph, rr.embedding, rr.concentric)
    assert verify_railed_annulus(rr.graph, rr.embedding, rr.railed)
    assert rr.railed.q == length


def test_ring_of_rings_bounds():
    with pytest.raises(ParameterError):
        ring_of_rings(1, 5)
    with pytest.raises(ParameterError):
        ring_of_rings(3, 2)


# -- walls ------------------------------------------------------------------------


def test_wall_layers():
    assert len(wall(1).layers) == 1
    assert len(wall(2).layers) == 1
    assert wall(2).certificate is None
    w = wall(3)
    assert len(w.layers) == 2
    assert verify_concentric(w.graph, w.embedding, w.certificate)
    w = wall(5)
    assert len(w.layers) == 3
    assert verify_concentric(w.graph, w.embedding, w.certificate)


def test_wall_rejects_flat_height():
    with pytest.raises(ParameterError):
        wall(0)


def test_subdivided_wall_keeps_its_layers():
    w = wall(3)
    perim = w.layers[0]
    subs = {}
    for a, b in zip(perim, perim[1:] + perim[:1]):
        key = (a, b) if a <= b else (b, a)
        if w.graph.has_edge(a, b):
            subs[key] = 2
    ws = wall(3, subs)
    assert ws.graph.n == w.graph.n + 2 * len(subs)
    assert len(ws.layers) == 2
    assert verify_concentric(ws.graph, ws.embedding, ws.certificate)


def test_wall_subdivision_validation():
    with pytest.raises(EdgeNotFound):
        wall(3, {(0, 999): 1})
    w = wall(3)
    e = w.graph.edges[0]
    with pytest.raises(ParameterError):
        wall(3, {e: -1})


# -- reductions --------------------------------------------------------------------


def test_clique_reduction_arithmetic():
    out = clique_reduction(complete_graph(5), 5)
    assert out.graph.n == 5 * 2 + 1 + 10
    assert out.k_prime == 11
    cliq = [v for v, role in out.roles.items() if role[0] == "cliquePart"]
    edge_vs = [v for v, role in out.roles.items() if role[0] == "edgeVertex"]
    (hub,) = [v for v, role in out.roles.items() if role[0] == "hub"]
    assert all(out.graph.has_edge(a, b) for a in cliq for b in cliq if a < b)
    assert not any(out.graph.has_edge(a, b) for a in edge_vs for b in edge_vs if a < b)
    assert all(out.graph.has_edge(hub, v) for v in cliq)
    assert not any(out.graph.has_edge(hub, v) for v in edge_vs)
    assert all(out.graph.degree(v) == 2 * 2 for v in edge_vs)


def test_clique_reduction_rejects_bad_k():
    with pytest.raises(ParityError):
        clique_reduction(complete_graph(4), 4)
    with pytest.raises(ParameterError):
        clique_reduction(complete_graph(4), 1)


def test_cross_composition_two_positives():
    out = cross_composition([(complete_graph(4), (0, 1)), (complete_graph(4), (1, 2))],
                            require_cubic_planar=False)
    assert out.graph.n == 12 and out.k == 6
    assert out.graph.is_simple()
    assert is_yes_pac(out.graph, set(out.graph.vertices), 6, BIG)


def test_cross_composition_single_instance_is_simple():
    out = cross_composition([(complete_graph(4), (0, 1))])
    assert out.graph.n == 6
    assert out.graph.is_simple()


def test_cross_composition_validation():
    with pytest.raises(EdgeNotFound):
        cross_composition([(Graph(range(4), [(0, 1), (1, 2), (2, 3)]), (0, 3))])


def test_cross_composition_mixed_sizes():
    from cyclab.generators import prism
    from cyclab.oracle import cycle_through

    p, _ = prism(3)
    out = cross_composition([(complete_graph(4), (0, 1)), (p, (0, 1))])
    assert out.graph.n == 4 + 6 + 4
    assert out.k == 8
    # both instances are Hamiltonian through their edge, so one cycle
    # carries every vertex of the composition
    assert cycle_through(out.graph, set(out.graph.vertices), BIG)


# -- randomized builders --------------------------------------------------------------


def test_random_connected_is_seed_deterministic():
    g = random_connected(10, 14, 3)
    assert g == random_connected(10, 14, 3)
    assert g.is_connected() and g.n == 10 and g.m == 14
    assert g != random_connected(10, 14, 4)


def test_random_connected_rejects_impossible_m():
    with pytest.raises(ParameterError):
        random_connected(4, 2, 0)
    with pytest.raises(ParameterError):
        random_connected(4, 7, 0)


@pytest.mark.parametrize("k", [2, 3])
def test_random_k_connected(k):
    g = random_k_connected(9, k, 11)
    assert vertex_connectivity(g) >= k
    assert g == random_k_connected(9, k, 11)


# -- connected census ------------------------------------------------------------------


def test_connected_graph_counts():
    assert [len(connected_graphs(n)) for n in range(1, 8)] == [1, 1, 2, 6, 21, 112, 853]


def test_census_members_are_connected_and_distinct():
    gs = connected_graphs(5)
    assert all(g.is_connected() for g in gs)
    assert len({tuple(g.edges) for g in gs}) == len(gs)


def test_census_bounds():
    with pytest.raises(ParameterError):
        connected_graphs(0)
    with pytest.raises(ParameterError):
        connected_graphs(10)


# -- catalog dispatch -------------------------------------------------------------------


def test_catalog_names():
    assert catalog("petersen").graph.n == 10
    assert catalog("completeGraph", 4).embedding is not None
    assert catalog("grid", 3, 3).graph.m == 12
    item = catalog("ringOfRings", 3, 6)
    assert {"concentric", "railed"} <= set(item.extras)


def test_catalog_rejects_unknown_and_malformed():
    with pytest.raises(UnknownName):
        catalog("dodecahedron")
    with pytest.raises(ParameterError):
        catalog("grid", 3)
