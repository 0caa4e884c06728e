"""Faces, annulus certificates, the two reduction rules, and the pipeline."""

import pytest

from cyclab.generators import grid
from cyclab.graph import Graph
from cyclab.oracle import OracleBudget, is_yes_pac
from cyclab.planar import (
    ColorIrrelevant,
    ConcentricCertificate,
    Embedding,
    NoInstance,
    PipelineConfig,
    RailedAnnulusCertificate,
    RingSearchBudget,
    color_irrelevant_step,
    compute_faces,
    concentric_problems,
    find_concentric_r_free,
    induced_embedded,
    is_q_dense,
    parse_certificate,
    parse_rotation,
    pipeline_solve_traced,
    problem_irrelevant_by_annulus,
    railed_annulus_problems,
    serialize_certificate,
    serialize_rotation,
    verify_concentric,
    verify_railed_annulus,
)

BIG = OracleBudget(max_vertices=64)

K4 = Graph(range(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
EMB_K4 = Embedding({0: (0, 2, 1), 1: (3, 4, 0), 2: (1, 5, 3), 3: (5, 2, 4)})

C5 = Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
EMB_C5 = Embedding({0: (0, 1), 1: (0, 2), 2: (2, 3), 3: (3, 4), 4: (4, 1)})

CUBE = Graph(range(8), [(0, 1), (0, 3), (0, 4), (1, 2), (1, 5), (2, 3),
                        (2, 6), (3, 7), (4, 5), (4, 7), (5, 6), (6, 7)])
ROT_CUBE = {
    0: (0, 2, 1), 1: (3, 4, 0), 2: (5, 6, 3), 3: (1, 7, 5),
    4: (8, 9, 2), 5: (10, 8, 4), 6: (11, 10, 6), 7: (9, 11, 7),
}


def cube_embedding():
    walks = compute_faces(CUBE, Embedding(ROT_CUBE))
    outer = next(i for i, w in enumerate(walks) if sorted(set(w)) == [0, 1, 2, 3])
    return Embedding(ROT_CUBE, outer)


NESTED = ConcentricCertificate([(4, 5, 6, 7), (0, 1, 2, 3)],
                               [frozenset(), frozenset({4, 5, 6, 7})])


# -- faces ---------------------------------------------------------------------


def test_face_counts_match_euler():
    assert len(compute_faces(K4, EMB_K4)) == 4
    assert len(compute_faces(C5, EMB_C5)) == 2
    assert len(compute_faces(CUBE, Embedding(ROT_CUBE))) == 6


# -- concentric certificates ---------------------------------------------------


def test_nested_squares_verify():
    assert verify_concentric(CUBE, cube_embedding(), NESTED)


def test_swapped_rings_rejected():
    bad = ConcentricCertificate([(0, 1, 2, 3), (4, 5, 6, 7)],
                                [frozenset({4, 5, 6, 7}), frozenset()])
    assert not verify_concentric(CUBE, cube_embedding(), bad)


def test_crossing_ring_rejected():
    crossing = ConcentricCertificate([(0, 1, 5, 4), (0, 1, 2, 3)],
                                     [frozenset(), frozenset({4, 5, 6, 7})])
    probs = concentric_problems(CUBE, cube_embedding(), crossing)
    assert probs


# -- railed annuli ---------------------------------------------------------------


def test_cube_spokes_are_rails():
    railed = RailedAnnulusCertificate(NESTED, [(4, 0), (5, 1), (6, 2), (7, 3)])
    assert verify_railed_annulus(CUBE, cube_embedding(), railed)


def test_rail_meeting_ring_twice_rejected():
    two_piece = RailedAnnulusCertificate(NESTED, [(4, 0, 1, 5)])
    probs = railed_annulus_problems(CUBE, cube_embedding(), two_piece)
    assert any("separate pieces" in p for p in probs)


def test_rail_may_end_along_a_ring():
    ok_rail = RailedAnnulusCertificate(NESTED, [(5, 1, 2)])
    assert verify_railed_annulus(CUBE, cube_embedding(), ok_rail)


def test_rail_leaving_annulus_rejected():
    cube9 = Graph(range(9), list(CUBE.edges) + [(4, 8)])
    rot9 = {
        0: (0, 2, 1), 1: (3, 4, 0), 2: (5, 6, 3), 3: (1, 7, 5),
        4: (8, 10, 9, 2), 5: (11, 8, 4), 6: (12, 11, 6), 7: (9, 12, 7), 8: (10,),
    }
    walks = compute_faces(cube9, Embedding(rot9))
    outer = next(i for i, w in enumerate(walks) if sorted(set(w)) == [0, 1, 2, 3])
    emb9 = Embedding(rot9, outer)
    cert9 = ConcentricCertificate([(4, 5, 6, 7), (0, 1, 2, 3)],
                                  [frozenset({8}), frozenset({4, 5, 6, 7, 8})])
    assert verify_concentric(cube9, emb9, cert9)
    leaving = RailedAnnulusCertificate(cert9, [(8, 4, 0)])
    probs = railed_annulus_problems(cube9, emb9, leaving)
    assert any("leaves the annulus" in p for p in probs)


def test_density_counts_ring_hits():
    assert is_q_dense({0, 4}, NESTED, 1)
    assert is_q_dense({0}, NESTED, 2)
    assert not is_q_dense(set(), NESTED, 2)


# -- ring search -----------------------------------------------------------------


def test_grid_boundary_leaves_two_rings():
    g, emb = grid(7, 7)
    boundary = {v for v in g.vertices if g.degree(v) < 4}
    found = find_concentric_r_free(g, emb, boundary, 2)
    assert found is not None and found.r == 2
    assert verify_concentric(g, emb, found)


def test_fully_annotated_grid_has_no_free_rings():
    g, emb = grid(7, 7)
    assert find_concentric_r_free(g, emb, set(g.vertices), 2) is None


def test_forest_has_no_rings():
    path = Graph(range(4), [(0, 1), (1, 2), (2, 3)])
    emb = Embedding({0: (0,), 1: (0, 1), 2: (1, 2), 3: (2,)})
    assert find_concentric_r_free(path, emb, set(), 2) is None


def test_nine_grid_carries_four_rings():
    g, emb = grid(9, 9)
    found = find_concentric_r_free(g, emb, set(), 4, RingSearchBudget(200000))
    assert found is not None and found.r == 4


# -- problem-irrelevant deletion ---------------------------------------------------


def test_annulus_deletion_is_oracle_invariant():
    g, emb = grid(7, 7)
    boundary = {v for v in g.vertices if g.degree(v) < 4}
    found = find_concentric_r_free(g, emb, boundary, 2)
    deletable = problem_irrelevant_by_annulus(g, boundary, 1, found, rings_needed=2)
    assert deletable
    before = is_yes_pac(g, boundary, 1, BIG)
    g2, _ = induced_embedded(g, emb, set(g.vertices) - deletable)
    assert is_yes_pac(g2, boundary, 1, BIG) == before


# -- annotation dropping -----------------------------------------------------------


def _rr_and_backend():
    from cyclab.generators import ring_of_rings

    rr = ring_of_rings(4, 6)
    backend = lambda cg, cr, ck: is_yes_pac(cg, cr, ck, BIG)
    return rr, backend


def test_color_step_certifies_a_droppable_annotation():
    rr, backend = _rr_and_backend()
    res = color_irrelevant_step(rr.graph, set(rr.graph.vertices), 1, rr.railed,
                                backend, b=2, w_lo=1, w_hi=2, density=1)
    assert isinstance(res, ColorIrrelevant)
    assert res.vertex == 0
    before = is_yes_pac(rr.graph, set(rr.graph.vertices), 1, BIG)
    after = is_yes_pac(rr.graph, set(rr.graph.vertices) - {0}, 1, BIG)
    assert before == after


def test_color_step_reports_the_failing_crop():
    rr, _ = _rr_and_backend()
    res = color_irrelevant_step(rr.graph, set(rr.graph.vertices), 1, rr.railed,
                                lambda *_: False, b=2, w_lo=1, w_hi=2, density=1)
    assert isinstance(res, NoInstance)
    assert res.failing_index == 1


def test_color_step_preconditions():
    from cyclab.errors import PreconditionError

    rr, backend = _rr_and_backend()
    with pytest.raises(PreconditionError):  # default b needs 101 rings
        color_irrelevant_step(rr.graph, set(rr.graph.vertices), 1, rr.railed, backend)
    outer_only = set(range(18, 24))
    with pytest.raises(PreconditionError):  # inner windows have no annotation
        color_irrelevant_step(rr.graph, outer_only, 1, rr.railed, backend,
                              b=2, w_lo=1, w_hi=2, density=1)


# -- the pipeline ------------------------------------------------------------------


def test_pipeline_on_cycle():
    ok, trace = pipeline_solve_traced(C5, EMB_C5, set(C5.vertices), 2)
    assert ok is True
    assert trace.rounds[-1]["step"] == 1


@pytest.mark.parametrize("k", [2, 3, 4])
def test_pipeline_cube_matches_oracle_at_step_one(k):
    emb = cube_embedding()
    ok, trace = pipeline_solve_traced(CUBE, emb, set(CUBE.vertices), k)
    assert ok == is_yes_pac(CUBE, set(CUBE.vertices), k)
    assert trace.rounds[-1]["step"] == 1


def test_pipeline_without_embedding_still_decides():
    g, _ = grid(3, 3)
    ok, trace = pipeline_solve_traced(g, None, set(g.vertices), 2)
    assert ok == is_yes_pac(g, set(g.vertices), 2)
    assert trace.rounds[-1]["step"] == 1


def test_reduced_constants_reach_the_deletion_rule():
    g, emb = grid(5, 5)
    boundary = {v for v in g.vertices if g.degree(v) < 4}
    want = is_yes_pac(g, boundary, 2, BIG)
    cfg = PipelineConfig(width_cap=2, y=2, rings_needed=2, oracle_budget=BIG)
    ok, trace = pipeline_solve_traced(g, emb, boundary, 2, cfg)
    assert ok == want
    assert 2 in [r.get("step") for r in trace.rounds]


# -- io ---------------------------------------------------------------------------


def test_rotation_round_trip():
    g, emb = grid(9, 9)
    assert parse_rotation(serialize_rotation(emb), g) == emb


def test_certificate_round_trips():
    assert parse_certificate(serialize_certificate(NESTED)) == NESTED
    railed = RailedAnnulusCertificate(NESTED, [(4, 0), (5, 1), (6, 2), (7, 3)])
    assert parse_certificate(serialize_certificate(railed)) == railed
