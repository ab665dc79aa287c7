import itertools
import random

import pytest

from lpa.graph import make_graph
from lpa.lattice import (
    BOTTOM,
    AdmissiblePair,
    LatticeError,
    breaking_vertices,
    check_admissible,
    enumerate_HE,
    enumerate_HE_bruteforce,
    enumerate_TE,
    hereditary_closure,
    hv,
    hv_by_intersection,
    is_hereditary_saturated,
    pair_join,
    pair_leq,
    s_saturation,
    saturated_closure,
)

from conftest import SEED, powerset, random_graphs

GRAPHS = random_graphs(inf_prob=0.2)


def P(H, S=()):
    return AdmissiblePair(frozenset(H), frozenset(S))


# -- independent definitions -------------------------------------------------------------


def _hereditary(g, xs):
    return all(e.dst in xs for v in xs for e in g.out_edges(v))


def _saturated(g, xs):
    for v in g.vertices:
        outs = g.out_edges(v)
        regular = outs and all(not e.infinite for e in outs)
        if v not in xs and regular and all(e.dst in xs for e in outs):
            return False
    return True


def _absorbs(g, xs, S):
    return all(v in xs for v in S if g.out_edges(v) and all(e.dst in xs for e in g.out_edges(v)))


def _least(g, xs, pred):
    cands = [y for y in powerset(g.vertices) if xs <= y and pred(y)]
    return frozenset.intersection(*cands)


def _breaking(g, h):
    out = set()
    for v in g.vertices:
        if v in h or not any(e.infinite for e in g.out_edges(v)):
            continue
        outside = sum(e.mult for e in g.out_edges(v) if e.dst not in h)
        if 0 < outside < float("inf"):
            out.add(v)
    return frozenset(out)


# -- closures ------------------------------------------------------------------------------


def test_closure_operators_are_closure_operators():
    rng = random.Random(SEED)
    checked = 0
    for g in GRAPHS:
        vs = list(g.vertices)
        for _ in range(3):
            a = frozenset(v for v in vs if rng.random() < 0.3)
            b = a | frozenset(v for v in vs if rng.random() < 0.3)
            for close in (lambda x: hereditary_closure(g, x), lambda x: saturated_closure(g, x)):
                ca, cb = close(a), close(b)
                assert a <= ca
                assert ca <= cb
                assert close(ca) == ca
                checked += 1
    assert checked >= 200


def test_closures_match_brute_force_least_fixed_points():
    rng = random.Random(SEED + 1)
    for g in GRAPHS:
        xs = frozenset(v for v in g.vertices if rng.random() < 0.3)
        assert hereditary_closure(g, xs) == _least(g, xs, lambda y: _hereditary(g, y))
        assert saturated_closure(g, xs) == _least(g, xs, lambda y: _hereditary(g, y) and _saturated(g, y))


def test_s_saturation_matches_brute_force():
    rng = random.Random(SEED + 2)
    checked = 0
    for g in GRAPHS:
        for h in enumerate_HE(g):
            b = sorted(_breaking(g, h))
            s = frozenset(v for v in b if rng.random() < 0.5)
            got = s_saturation(g, h, s)
            want = _least(g, h, lambda y: _saturated(g, y) and _absorbs(g, y, s))
            assert got == want
            assert is_hereditary_saturated(g, got)
            checked += 1
    assert checked >= 200


# -- H_E and T_E -------------------------------------------------------------------------------


def test_HE_matches_powerset_brute_force():
    for g in GRAPHS:
        want = sorted(
            (x for x in powerset(g.vertices) if _hereditary(g, x) and _saturated(g, x)),
            key=lambda x: (len(x), sorted(x)),
        )
        got = enumerate_HE(g)
        assert sorted(got, key=lambda x: (len(x), sorted(x))) == want
        assert set(got) == set(enumerate_HE_bruteforce(g))


def test_hv_two_ways():
    for g in GRAPHS:
        he = enumerate_HE(g)
        for v in g.vertices:
            assert hv(g, v) == hv_by_intersection(g, v, he)


def test_TE_matches_definition():
    for g in GRAPHS:
        lat = enumerate_TE(g)
        want = {
            P(h, s)
            for h in enumerate_HE(g)
            for s in powerset(_breaking(g, h))
        }
        assert set(lat.elements) == want
        for h in lat.hs_sets:
            assert breaking_vertices(g, h) == _breaking(g, h)


def _sample_pairs(lat, rng, limit=250):
    allp = list(itertools.product(lat.elements, repeat=2))
    return allp if len(allp) <= limit else rng.sample(allp, limit)


def test_join_formula_is_poset_lub():
    rng = random.Random(SEED + 3)
    count = 0
    for g in GRAPHS:
        lat = enumerate_TE(g)
        for p, q in _sample_pairs(lat, rng):
            j = lat.join(p, q)  # raises when the formula and the poset disagree
            assert j == lat.lub(p, q) == lat.join(q, p)
            assert lat.le(p, j) and lat.le(q, j)
            m = lat.meet(p, q)
            assert lat.le(m, p) and lat.le(m, q)
            count += 1
    assert count >= 200


def test_order_is_partial_order():
    for g in GRAPHS[:60]:
        lat = enumerate_TE(g)
        for p in lat:
            assert lat.le(p, p) and lat.le(BOTTOM, p) and lat.le(p, lat.top)
        for p, q in itertools.product(lat, repeat=2):
            if lat.le(p, q) and lat.le(q, p):
                assert p == q


# -- worked examples ------------------------------------------------------------------------


def test_larki_pairs(larki):
    lat = enumerate_TE(larki)
    assert lat.nonzero == [P("v"), P("v", "u"), P("uv")]
    assert lat.covers(lat.nonzero) == [(P("v"), P("v", "u")), (P("v", "u"), P("uv"))]
    assert breaking_vertices(larki, {"v"}) == {"u"}
    assert breaking_vertices(larki, set()) == set()


def test_larki_s_saturation_and_join(larki):
    lat = enumerate_TE(larki)
    # the literal least fixed point; u still emits infinitely many edges outside {v}
    assert s_saturation(larki, {"v"}, {"u"}) == {"v"}
    assert pair_join(lat, P("v"), P("v", "u")) == P("v", "u")
    assert lat.meet(P("v", "u"), P("uv")) == P("v", "u")


def test_toeplitz_pairs(toeplitz):
    lat = enumerate_TE(toeplitz)
    assert lat.nonzero == [P("v"), P("uv")]


def test_ex32_lattice(ex32):
    he = enumerate_HE(ex32)
    assert he == [frozenset(), {"v2"}, {"v3"}, {"u", "v1", "v2", "v3"}]


def test_admissibility_errors(larki):
    with pytest.raises(LatticeError):
        check_admissible(larki, P("u"))
    with pytest.raises(LatticeError):
        check_admissible(larki, P((), "u"))
    check_admissible(larki, P("v", "u"))
    lat = enumerate_TE(larki)
    with pytest.raises(LatticeError):
        lat.le(P("u"), P("uv"))


def test_pair_order():
    assert pair_leq(P("v"), P("v", "u"))
    assert not pair_leq(P("v", "u"), P("v"))
    assert pair_leq(P("v", "u"), P("uv"))


def test_admissible_pair_json_roundtrip():
    p = P("v", "u")
    assert AdmissiblePair.from_dict(p.to_dict()) == p
    assert str(p) == "({v},{u})"
    assert str(BOTTOM) == "(∅,∅)"


def test_lattice_of_graph_with_two_breaking_vertices():
    g = make_graph(
        ["a", "b", "w"],
        [("x", "a", "w", float("inf")), ("y", "a", "a"), ("z", "b", "w", float("inf")), ("t", "b", "b")],
    )
    lat = enumerate_TE(g)
    assert P("w", "ab") in lat
    assert len([p for p in lat if p.H == {"w"}]) == 4
