"""Alphabet tests. The brute enumerator below rebuilds the alphabet from raw
multiplicity vectors and circuit-rank counting, deliberately sharing no logic
with the package, and the enumeration tests compare against it exactly."""

import itertools
from collections import Counter

import pytest

from cyclab.errors import PairingError, SizeError
from cyclab.pairings import (
    Pairing,
    aux_universe,
    dissolve_pairing,
    empty_pairing,
    enumerate_pairings,
    lift_pairing,
    loop_pairing,
    oplus,
    union_pairings,
    xi,
    zeta,
)


def brute_valid(actives, edges, loop):
    """Independent validity check: degree caps plus circuit rank."""
    actives = set(actives)
    deg = Counter()
    for u, w in edges:
        if u not in actives or w not in actives:
            return False
        deg[u] += 1
        deg[w] += 1  # self-loop counts twice at its vertex
    if any(d > 2 for d in deg.values()):
        return False
    if Counter(edges).most_common(0 if not edges else 1) and max(Counter(edges).values()) > 2:
        return False
    if any(u == w and m > 1 for (u, w), m in Counter(edges).items()):
        return False
    touched = {v for e in edges for v in e}
    comp = {v: v for v in touched}

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    for u, w in set(edges):
        if u != w:
            comp[find(u)] = find(w)
    components = len({find(v) for v in touched})
    rank = len(edges) - len(touched) + components
    cycles = rank + (1 if loop else 0)
    if cycles > 1:
        return False
    if cycles == 1 and any(deg[v] == 1 for v in actives):
        return False
    return True


def brute_pairings(bag):
    bag = sorted(bag)
    out = set()
    for r in range(len(bag) + 1):
        for actives in itertools.combinations(bag, r):
            slots = [
                (u, w)
                for i, u in enumerate(actives)
                for w in actives[i:]
            ]
            for counts in itertools.product((0, 1, 2), repeat=len(slots)):
                edges = tuple(
                    sorted(e for e, c in zip(slots, counts) for _ in range(c))
                )
                for loop in (False, True):
                    if brute_valid(actives, edges, loop):
                        out.add((tuple(actives), edges, loop))
    return out


# -- enumeration --------------------------------------------------------------


def test_empty_and_singleton_alphabets():
    assert len(enumerate_pairings(())) == 2
    assert len(enumerate_pairings((7,))) == 5
    assert empty_pairing() in enumerate_pairings(())
    assert loop_pairing() in enumerate_pairings(())


@pytest.mark.parametrize("b", [0, 1, 2, 3, 4])
def test_enumeration_matches_brute_force(b):
    bag = tuple(range(b))
    fast = {(p.vertices, p.edges, p.loop) for p in enumerate_pairings(bag)}
    assert fast == brute_pairings(bag)


def test_alphabet_sizes_frozen():
    # 0..4 are pinned by the brute enumerator above; 5 and 6 are regression
    # values so an enumeration change cannot slip through silently
    assert [len(enumerate_pairings(range(b))) for b in range(7)] == [
        2, 5, 14, 44, 162, 746, 4449,
    ]


def test_enumeration_is_sorted_and_cached():
    a = enumerate_pairings((0, 1, 2))
    assert a is enumerate_pairings((2, 1, 0))
    assert list(a) == sorted(a, key=Pairing.sort_key)


def test_enumeration_size_cap():
    with pytest.raises(SizeError):
        enumerate_pairings(range(13))


# -- validity ------------------------------------------------------------------


def test_invalid_pairings_rejected():
    with pytest.raises(PairingError):
        Pairing((0, 1), ((0, 2),))                      # inactive endpoint
    with pytest.raises(PairingError):
        Pairing((0, 1, 2), ((0, 1), (0, 2), (0, 1)))    # degree 3 at 0
    with pytest.raises(PairingError):
        Pairing((0,), ((0, 0), (0, 0)))                 # repeated self edge
    with pytest.raises(PairingError):
        Pairing((0, 1, 2, 3), ((0, 1), (0, 1), (2, 3)))  # cycle + open path
    with pytest.raises(PairingError):
        Pairing((0, 1), ((0, 0), (1, 1)))               # two cycles
    with pytest.raises(PairingError):
        Pairing((0, 1), ((0, 1), (0, 1)), True)         # doubled pair + loop
    with pytest.raises(PairingError):
        Pairing((0, 1, 2), ((0, 1), (1, 2), (0, 2)), True)


def test_cycle_with_idle_actives_is_allowed():
    p = Pairing((0, 1, 2, 3), ((0, 1), (0, 1)))
    assert p.has_cycle()
    assert p.degree(2) == 0


# -- lift / dissolve -----------------------------------------------------------


def test_lift_path_middle():
    p = Pairing((0, 1, 2), ((0, 1), (1, 2)))
    assert lift_pairing(p, 1) == Pairing((0, 2), ((0, 2),))


def test_lift_inactive_is_identity():
    p = Pairing((0, 2), ((0, 2),))
    assert lift_pairing(p, 5) is p


def test_lift_dies_on_low_degree():
    assert lift_pairing(Pairing((0, 1), ((0, 1),)), 1) is None
    assert lift_pairing(Pairing((0, 1), ()), 1) is None


def test_lift_triangle_is_undefined_but_dissolve_closes_it():
    tri = Pairing((0, 1, 2), ((0, 1), (0, 2), (1, 2)))
    assert lift_pairing(tri, 1) is None
    assert dissolve_pairing(tri, 1) == Pairing((0, 2), ((0, 2), (0, 2)))


def test_lift_completed_cycle_markers():
    two = Pairing((0, 1), ((0, 1), (0, 1)))
    assert lift_pairing(two, 0) == Pairing((1,), ((1, 1),))
    one = Pairing((1,), ((1, 1),))
    assert lift_pairing(one, 1) == loop_pairing()
    assert dissolve_pairing(two, 0) == lift_pairing(two, 0)


def test_dissolve_agrees_with_lift_whenever_lift_is_defined():
    for p in enumerate_pairings((0, 1, 2, 3)):
        for v in p.vertices:
            lifted = lift_pairing(p, v)
            if lifted is not None:
                assert dissolve_pairing(p, v) == lifted


# -- union / oplus / zeta --------------------------------------------------------


def test_union_adds_multiplicities():
    e = Pairing((0, 1), ((0, 1),))
    assert union_pairings(e, e) == Pairing((0, 1), ((0, 1), (0, 1)))
    assert union_pairings(loop_pairing(), loop_pairing()) is None
    assert union_pairings(e, Pairing((0, 2), ((0, 2),))) == Pairing(
        (0, 1, 2), ((0, 1), (0, 2))
    )
    deg3 = Pairing((0, 1, 2), ((0, 1), (0, 2)))
    assert union_pairings(deg3, Pairing((0, 3), ((0, 3),))) is None


def test_union_commutative_on_small_alphabet():
    alpha = enumerate_pairings((0, 1))
    for a in alpha:
        for b in alpha:
            assert union_pairings(a, b) == union_pairings(b, a)


def test_oplus_closes_triangle():
    p = Pairing((0, 2), ((0, 2),))
    aux = ((0, 1, 2), ((0, 1), (1, 2)))
    tri = Pairing((0, 1, 2), ((0, 1), (0, 2), (1, 2)))
    assert oplus(p, aux) == frozenset({tri})
    # lifting 1 from the triangle is undefined, so the closure adds nothing
    assert oplus(p, aux, lifts={1}) == frozenset({tri})


def test_oplus_lift_closure_collects_shortcuts():
    p = Pairing((0, 1, 2), ((0, 1), (1, 2)))
    got = oplus(p, ((), ()), lifts={1})
    assert got == frozenset({p, Pairing((0, 2), ((0, 2),))})


def test_oplus_invalid_glue_is_empty():
    assert oplus(loop_pairing(), loop_pairing()) == frozenset()


def test_zeta_smallest_case():
    active_v = Pairing((9,), ())
    assert zeta(active_v, 9, (), ()) == frozenset({empty_pairing()})


def test_zeta_is_adjoint_to_oplus():
    child_bag = (0, 1)
    v = 2
    nbhd = (0, 1)
    for lifts in (frozenset(), frozenset({0})):
        for p in enumerate_pairings(child_bag):
            for aux in aux_universe(v, nbhd):
                for pp in oplus(p, aux, lifts):
                    assert p in zeta(pp, v, child_bag, nbhd, lifts)


# -- xi ---------------------------------------------------------------------------


def test_xi_counts():
    assert len(xi(Pairing((0, 1), ((0, 1),)))) == 8
    assert len(xi(loop_pairing())) == 2
    assert len(xi(Pairing((0, 1), ((0, 1), (0, 1))))) == 9
    assert len(xi(empty_pairing())) == 1


def test_xi_edge_multiplicities_add_up():
    doubled = Pairing((0, 1), ((0, 1), (0, 1)))
    e = Pairing((0, 1), ((0, 1),))
    assert (e, e) in xi(doubled)


def test_xi_is_exactly_the_fiber_of_union():
    for bag in [(0,), (0, 1), (0, 1, 2)]:
        alpha = enumerate_pairings(bag)
        fibers = {p: set(xi(p)) for p in alpha}
        for a in alpha:
            for b in alpha:
                u = union_pairings(a, b)
                if u is not None:
                    assert (a, b) in fibers[u]
        for p, fib in fibers.items():
            for a, b in fib:
                assert union_pairings(a, b) == p


# -- misc ---------------------------------------------------------------------------


def test_debug_rendering_is_stable():
    assert empty_pairing().debug() == "[ |  | ]"
    assert loop_pairing().debug() == "[ |  | L]"
    assert Pairing((0, 2), ((0, 2),)).debug() == "[0 2 | 0-2 | ]"
    assert Pairing((1,), ((1, 1),)).debug() == "[1 | 1-1 | ]"


def test_aux_universe_contents():
    u = aux_universe(5, (0, 1))
    assert ((), ()) in u
    assert ((5,), ()) in u
    assert ((0, 5), ((0, 5),)) in u
    assert ((0, 1, 5), ((0, 5), (1, 5))) in u
    assert ((0, 5), ()) in u  # isolated neighbor activation
    for vs, es in u:
        assert all(5 in e for e in es)
