import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclab.errors import DegreeError, FormatError, LoopError, ParameterError
from cyclab.graph import (
    Graph,
    densify,
    dissolve,
    is_cycle,
    is_cycle_through,
    lift,
    parse_graph,
    serialize_graph,
    vertex_connectivity,
)


def path(n):
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def cyc(n):
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def test_basic_accessors():
    g = Graph([2, 0, 1], [(1, 0), (1, 2), (1, 2)])
    assert g.vertices == (0, 1, 2)
    assert g.edges == ((0, 1), (1, 2), (1, 2))
    assert g.n == 3 and g.m == 3
    assert g.degree(1) == 3
    assert g.multiplicity(2, 1) == 2
    assert g.neighbors(1) == (0, 2)
    assert not g.is_simple()
    assert path(3).is_simple()


def test_rejects_bad_vertices_and_edges():
    with pytest.raises(ParameterError):
        Graph([-1])
    with pytest.raises(ParameterError):
        Graph([0, 1], [(0, 2)])


def test_equality_is_structural():
    assert cyc(4) == Graph(range(4), [(3, 0), (2, 3), (1, 2), (0, 1)])
    assert cyc(4) != cyc(5)
    assert hash(cyc(4)) == hash(Graph(range(4), [(3, 0), (2, 3), (1, 2), (0, 1)]))


def test_dissolve_path_vertex():
    g = dissolve(path(3), 1)
    assert g.vertices == (0, 2)
    assert g.edges == ((0, 2),)


def test_dissolve_triangle_leaves_doubled_edge():
    g = dissolve(cyc(3), 2)
    assert g.edges == ((0, 1), (0, 1))
    assert g.multiplicity(0, 1) == 2


def test_dissolve_preconditions():
    with pytest.raises(DegreeError):
        dissolve(path(3), 0)
    doubled = Graph(range(2), [(0, 1), (0, 1)])
    with pytest.raises(LoopError):
        dissolve(doubled, 0)
    with pytest.raises(ParameterError):
        dissolve(path(3), 9)


def test_lift_keeps_vertex_and_avoids_parallel_edges():
    g = lift(path(3), 1)
    assert g.vertices == (0, 1, 2)
    assert g.edges == ((0, 2),)
    assert g.degree(1) == 0
    # neighbors already adjacent: no second copy appears
    h = lift(cyc(3), 2)
    assert h.edges == ((0, 1),)
    assert h.degree(2) == 0


def test_cycle_predicate():
    g = cyc(5)
    assert is_cycle(g, (0, 1, 2, 3, 4))
    assert is_cycle(g, (2, 3, 4, 0, 1))
    assert is_cycle(g, (0, 4, 3, 2, 1))
    assert not is_cycle(g, (0, 1, 2))
    assert not is_cycle(g, (0, 1, 2, 3, 4, 0))
    assert not is_cycle(g, ())
    assert is_cycle(Graph([0], [(0, 0)]), (0,))
    assert is_cycle(Graph([0, 1], [(0, 1), (0, 1)]), (0, 1))
    assert not is_cycle(path(2), (0, 1))


def test_cycle_through_predicate():
    g = cyc(5)
    assert is_cycle_through(g, (0, 1, 2, 3, 4), {1, 3})
    assert not is_cycle_through(g, (0, 1, 2), {1})
    assert not is_cycle_through(g, (0, 1, 2, 3, 4), {7})


def test_vertex_connectivity():
    assert vertex_connectivity(Graph(range(4), [(i, j) for i in range(4) for j in range(i + 1, 4)])) == 3
    assert vertex_connectivity(cyc(5)) == 2
    assert vertex_connectivity(path(4)) == 1
    assert vertex_connectivity(Graph(range(4), [(0, 1), (0, 2), (0, 3)])) == 1
    with pytest.raises(ParameterError):
        vertex_connectivity(Graph([0]))
    with pytest.raises(ParameterError):
        vertex_connectivity(Graph(range(2), [(0, 1), (0, 1)]))


def test_parse_basic():
    g, r = parse_graph("c hello\np cyc 4 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\nr 0 2\n")
    assert g == cyc(4)
    assert r == frozenset({0, 2})


def test_parse_parallel_edges_accumulate():
    g, r = parse_graph("p cyc 2 2\ne 0 1\ne 0 1\n")
    assert g.multiplicity(0, 1) == 2
    assert r == frozenset()


@pytest.mark.parametrize(
    "text",
    [
        "e 0 1\n",                       # edge before p
        "p cyc 2 1\n",                   # promised edge missing
        "p cyc 2 0\ne 0 1\n",            # extra edge
        "p cyc 2 1\ne 0 2\n",            # id out of range
        "p cyc 2 1\ne 0 0\n",            # self-loop in file
        "p cyc 2 0\nr 5\n",              # terminal out of range
        "p cyc 2 0\np cyc 2 0\n",        # duplicate p line
        "p cyc 2 0\nq 1\n",              # unknown line
        "p cyc a b\n",
        "",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(FormatError):
        parse_graph(text)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_serialize_round_trip(data):
    n = data.draw(st.integers(0, 9))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = []
    if pairs:
        edges = data.draw(
            st.lists(st.tuples(st.sampled_from(pairs), st.integers(1, 2)), max_size=8)
        )
    flat = [p for p, mult in edges for _ in range(mult)]
    terms = data.draw(st.sets(st.integers(0, n - 1), max_size=n)) if n else set()
    g = Graph(range(n), flat)
    g2, r2 = parse_graph(serialize_graph(g, terms))
    assert g2 == g
    assert r2 == frozenset(terms)


def test_serialize_needs_dense_ids():
    with pytest.raises(ParameterError):
        serialize_graph(Graph([1, 2], [(1, 2)]))


def test_densify_and_induced():
    g = Graph([3, 5, 9], [(3, 5), (5, 9)])
    d, m = densify(g)
    assert d.vertices == (0, 1, 2)
    assert d.edges == ((0, 1), (1, 2))
    assert m == {3: 0, 5: 1, 9: 2}
    sub = g.induced({3, 5})
    assert sub.edges == ((3, 5),)


def test_components():
    g = Graph(range(5), [(0, 1), (2, 3)])
    comps = g.connected_components()
    assert sorted(sorted(c) for c in comps) == [[0, 1], [2, 3], [4]]
    assert not g.is_connected()
    assert cyc(4).is_connected()
