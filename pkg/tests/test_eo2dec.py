"""Even orientation via line-graph matching, and the drivers built on it."""

from __future__ import annotations

from random import Random

import pytest

from pcorient import (
    ConflictKind,
    Instance,
    Multigraph,
    build_lprime,
    enumerate_best,
    solve_eo_2dec,
    solve_pco,
    solve_pco_2dec,
    solve_pco_dec,
    solve_pco_dsc,
    verify,
)
from pcorient.eo2dec import matching_to_orientation
from pcorient.errors import InvalidInstanceError, UnsupportedError
from pcorient.matching import Matching

from util import (
    cycle_edges,
    even_parity,
    exact,
    inst,
    path_edges,
    rand_disjoint_pairs,
    rand_graph,
    rand_parity,
    subset,
)

P3 = path_edges(3)
C4 = cycle_edges(4)


def lp_of(i: Instance):
    return build_lprime(i.graph, i.conflicts)


def test_lprime_path_without_conflicts():
    lp = build_lprime(Multigraph(3, tuple(P3)), ())
    assert len(lp.links) == 1
    assert lp.witnesses_of(0, 1) == frozenset({1})


def test_lprime_conflict_removes_the_link():
    lp = build_lprime(Multigraph(3, tuple(P3)), (exact(1, 0, 1),))
    assert lp.links == ()
    assert lp.witnesses_of(0, 1) == frozenset()


def test_lprime_parallel_pair_keeps_other_witness():
    g = Multigraph(2, ((0, 1), (0, 1)))
    lp = build_lprime(g, (exact(0, 0, 1),))
    assert len(lp.links) == 1
    assert lp.witnesses_of(0, 1) == frozenset({1})
    assert build_lprime(g, ()).witnesses_of(0, 1) == frozenset({0, 1})


def test_lprime_rejects_bad_conflicts():
    g = Multigraph(3, tuple(P3))
    with pytest.raises(InvalidInstanceError):
        build_lprime(g, (subset(1, 0, 1),))
    with pytest.raises(InvalidInstanceError):
        build_lprime(g, (exact(1, 0),))
    with pytest.raises(InvalidInstanceError):
        build_lprime(g, (exact(2, 0, 1),))
    g4 = Multigraph(4, ((0, 1), (1, 2), (1, 3), (1, 0)))
    with pytest.raises(InvalidInstanceError):
        build_lprime(g4, (exact(1, 0, 1), exact(1, 1, 2)))


def test_matching_to_orientation_perfect_on_c4():
    g = Multigraph(4, tuple(C4))
    lp = build_lprime(g, ())
    er = matching_to_orientation(g, lp, Matching((1, 0, 3, 2)))
    assert er.t == 0
    assert er.orientation.indegrees(g) == [0, 2, 0, 2]


def test_matching_to_orientation_empty_matching_spreads_heads():
    i = inst(3, P3, conflicts=(exact(1, 0, 1),))
    er = matching_to_orientation(i.graph, lp_of(i), Matching((-1, -1)))
    assert er.t == 2
    assert len(set(er.orientation.heads)) == 2
    assert verify(i, er.orientation).conflict_violations == ()


def test_matching_to_orientation_routes_around_two_conflicts():
    i = inst(4, C4, conflicts=(exact(0, 3, 0), exact(2, 1, 2)))
    lp = lp_of(i)
    assert {(l.e1, l.e2) for l in lp.links} == {(0, 1), (2, 3)}
    er = matching_to_orientation(i.graph, lp, Matching((1, 0, 3, 2)))
    assert er.t == 0
    assert er.orientation.incoming(i.graph, 0) == frozenset()
    assert er.orientation.incoming(i.graph, 2) == frozenset()


def test_solve_eo_2dec_c4():
    assert solve_eo_2dec(inst(4, C4)).t == 0


def test_solve_eo_2dec_single_edge():
    er = solve_eo_2dec(inst(2, [(0, 1)]))
    assert er.t == 1


def test_solve_eo_2dec_conflicted_path():
    assert solve_eo_2dec(inst(3, P3, conflicts=(exact(1, 0, 1),))).t == 2


def test_solve_eo_2dec_matches_oracle_min_odd():
    rng = Random(2025)
    for _ in range(120):
        g = rand_graph(rng, nmax=6, mmax=10)
        i = Instance(g, {}, rand_disjoint_pairs(rng, g))
        er = solve_eo_2dec(i)
        want = enumerate_best(i).min_odd_vertices
        assert er.t == want, f"t={er.t} oracle={want} on {i}"
        assert er.t % 2 == g.edge_count % 2
        assert verify(i, er.orientation).conflict_violations == ()
        assert sorted(er.odd_vertices) == [
            v for v, d in enumerate(er.orientation.indegrees(g)) if d % 2
        ]


def test_solve_pco_2dec_path_decision():
    er = solve_pco_2dec(inst(3, P3, parity={1: 1}))
    assert er is not None
    assert er.odd_vertices == ()
    assert er.satisfied == 1


def test_solve_pco_2dec_triangle_best_effort():
    er = solve_pco_2dec(inst(3, cycle_edges(3), even_parity(3)))
    assert er is not None
    assert er.satisfied == 2
    assert len(er.odd_vertices) == 1


def test_solve_pco_2dec_c4_with_pair_matches_oracle():
    i = inst(4, C4, even_parity(4), conflicts=(exact(0, 0, 3),))
    er = solve_pco_2dec(i)
    want = enumerate_best(i)
    assert er is not None
    assert (er.satisfied == 4) == want.feasible
    assert verify(i, er.orientation).conflict_violations == ()


def test_solve_pco_2dec_unavoidable_conflict_returns_none():
    i = inst(2, [(0, 1), (0, 1)], conflicts=(exact(0, 0, 1),), forced={0: 0, 1: 0})
    assert solve_pco_2dec(i) is None


def test_solve_pco_2dec_half_decided_pair_unsupported():
    i = inst(2, [(0, 1), (0, 1)], conflicts=(exact(0, 0, 1),), forced={0: 0})
    with pytest.raises(UnsupportedError):
        solve_pco_2dec(i)


def test_solve_pco_2dec_rejects_overlap_and_odd_sizes():
    g4 = [(0, 1), (1, 2), (1, 3), (1, 0)]
    with pytest.raises(InvalidInstanceError):
        solve_pco_2dec(inst(4, g4, conflicts=(exact(1, 0, 1), exact(1, 1, 2))))
    with pytest.raises(InvalidInstanceError):
        solve_pco_2dec(inst(4, g4, conflicts=(exact(1, 0, 1, 2),)))


def test_solve_pco_2dec_maximizes_satisfied_parities():
    rng = Random(515)
    for _ in range(120):
        g = rand_graph(rng, nmax=5, mmax=9)
        i = Instance(g, rand_parity(rng, g.vertex_count), rand_disjoint_pairs(rng, g, 2))
        er = solve_pco_2dec(i)
        want = enumerate_best(i)
        if er is None:
            assert not want.feasible and want.best_satisfied_parities is None
            continue
        assert er.satisfied == want.best_satisfied_parities, f"mismatch on {i}"
        rep = verify(i, er.orientation)
        assert rep.conflict_violations == ()
        assert er.satisfied == len(i.parity) - len(rep.parity_violations)


def test_solve_pco_dec_without_conflicts_matches_base_solver():
    rng = Random(61)
    for _ in range(40):
        g = rand_graph(rng, nmax=5, mmax=8)
        i = Instance(g, rand_parity(rng, g.vertex_count))
        assert solve_pco_dec(i).feasible == solve_pco(i).feasible


def test_solve_pco_dec_rejects_singleton_exact():
    i = inst(3, P3, parity={1: 1}, conflicts=(exact(1, 0),))
    with pytest.raises(UnsupportedError):
        solve_pco_dec(i)


def test_solve_pco_dec_matches_oracle_decision():
    rng = Random(3141)
    for _ in range(120):
        g = rand_graph(rng, nmax=5, mmax=9)
        conflicts = rand_disjoint_pairs(rng, g, 2)
        i = Instance(g, rand_parity(rng, g.vertex_count), conflicts)
        assert solve_pco_dec(i).feasible == enumerate_best(i).feasible, f"mismatch on {i}"


def test_solve_pco_dsc_matches_oracle_decision():
    rng = Random(2718)
    checked = 0
    for _ in range(160):
        g = rand_graph(rng, nmax=5, mmax=9)
        pairs = rand_disjoint_pairs(rng, g, 2)
        conflicts = tuple(
            type(c)(c.vertex, c.edges, ConflictKind.SUBSET) for c in pairs
        )
        i = Instance(g, rand_parity(rng, g.vertex_count), conflicts)
        got = solve_pco_dsc(i)
        assert got.feasible == enumerate_best(i).feasible, f"mismatch on {i}"
        if got.feasible:
            checked += 1
            assert verify(i, got.orientation).ok
    assert checked > 20


def test_solve_pco_dsc_rejects_exact_kind():
    with pytest.raises(InvalidInstanceError):
        solve_pco_dsc(inst(3, P3, conflicts=(exact(1, 0, 1),)))
