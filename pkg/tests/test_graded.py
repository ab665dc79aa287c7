import random

import pytest

from lpa.graded import (
    GradedIdealFn,
    InvalidFunction,
    Kind,
    PartialAssignment,
    SaturatedFn,
    XVertex,
    behaves_basically,
    classify,
    constant_f,
    extended_vertices,
    f_from_phi,
    graded_fn,
    max_basic_pair,
    membership,
    phi_from_f,
    random_basic,
    random_ibasic,
    random_saturated,
    saturated_fn,
    validate_phi,
    validate_saturated,
)
from lpa.graph import make_graph
from lpa.ideals import Z, Zn
from lpa.lattice import BOTTOM, AdmissiblePair, enumerate_TE

from conftest import SEED, random_graphs

Z12 = Zn(12)
GRAPHS = random_graphs(inf_prob=0.15)


def P(H, S=()):
    return AdmissiblePair(frozenset(H), frozenset(S))


@pytest.fixture
def larki_f(larki):
    lat = enumerate_TE(larki)
    return lat, saturated_fn(lat, Z, {P("v"): 1, P("v", "u"): 2, P("uv"): 0})


# -- worked example -------------------------------------------------------------------------


def test_larki_f_is_valid_and_general(larki_f):
    lat, f = larki_f
    assert validate_saturated(lat, f).ok
    c = classify(lat, f)
    assert c.kind is Kind.GENERAL
    assert c.render() == "GeneralGraded; Im(f) = {0Z, Z, 2Z}"


def test_larki_phi(larki_f):
    lat, f = larki_f
    phi = phi_from_f(lat, f)
    assert phi("v") == Z.unit
    assert phi("u") == Z.zero
    assert phi(XVertex("u", frozenset({"v"}))) == Z.ideal(2)
    assert validate_phi(lat, phi).ok
    assert f_from_phi(lat, phi) == f


def test_larki_membership(larki_f):
    lat, f = larki_f
    phi = phi_from_f(lat, f)
    uH = XVertex("u", frozenset({"v"}))
    assert membership(lat, phi, 2, uH)
    assert not membership(lat, phi, 1, uH)
    assert membership(lat, phi, 7, "v")
    assert not membership(lat, phi, 5, "u")
    assert membership(lat, phi, 0, "u")


def test_larki_max_basic(larki_f):
    lat, f = larki_f
    assert max_basic_pair(lat, f) == P("v")


def test_chain_must_reverse_order(larki):
    lat = enumerate_TE(larki)
    f = saturated_fn(lat, Z, {P("v"): 3, P("v", "u"): 2, P("uv"): 0})
    rep = validate_saturated(lat, f)
    assert not rep.ok
    assert any("6Z" in v.rhs and "2Z" in v.lhs for v in rep.violations)
    with pytest.raises(InvalidFunction):
        phi_from_f(lat, f)


def test_order_reversal_clause_a():
    # u a sink with v >= u; the second sink w keeps {u} saturated
    g = make_graph(["u", "v", "w"], [("e", "v", "u"), ("f", "v", "w")])
    lat = enumerate_TE(g)
    assert validate_phi(lat, graded_fn(lat, Z, {"u": 1, "v": 2, "w": 2})).ok
    rep = validate_phi(lat, graded_fn(lat, Z, {"u": 2, "v": 1, "w": 1}))
    assert not rep.ok
    assert "a" in {v.clause for v in rep.violations}


def test_partial_assignments(larki):
    lat = enumerate_TE(larki)
    with pytest.raises(PartialAssignment) as exc:
        saturated_fn(lat, Z, {P("v"): 1})
    assert exc.value.missing == [P("v", "u"), P("uv")]
    with pytest.raises(PartialAssignment) as exc:
        graded_fn(lat, Z, {"u": 0, "v": 1})
    assert exc.value.missing == [XVertex("u", frozenset({"v"}))]


def test_json_roundtrip(larki_f):
    lat, f = larki_f
    assert SaturatedFn.from_json(f.to_json()) == f
    phi = phi_from_f(lat, f)
    assert GradedIdealFn.from_json(phi.to_json()) == phi


def test_classification_kinds(toeplitz):
    lat = enumerate_TE(toeplitz)
    assert classify(lat, saturated_fn(lat, Z, {P("v"): 1, P("uv"): 0})).kind is Kind.BASIC
    c = classify(lat, saturated_fn(lat, Z, {P("v"): 1, P("uv"): 5}))
    assert c.kind is Kind.IBASIC and c.ideal == Z.ideal(5)
    c = classify(lat, constant_f(lat, Z.ideal(5)))
    assert c.kind is Kind.IBASIC
    assert classify(lat, constant_f(lat, Z.zero)).kind is Kind.BASIC


def test_max_basic_zero_part(toeplitz):
    lat = enumerate_TE(toeplitz)
    assert max_basic_pair(lat, constant_f(lat, Z.ideal(5))) == BOTTOM


# -- properties -----------------------------------------------------------------------------


@pytest.mark.parametrize("ring", [Z, Z12], ids=["Z", "Z12"])
def test_random_saturated_functions_are_valid(ring):
    rng = random.Random(SEED)
    for g in GRAPHS:
        lat = enumerate_TE(g)
        f = random_saturated(lat, ring, rng)
        assert validate_saturated(lat, f).ok


@pytest.mark.parametrize("ring", [Z, Z12], ids=["Z", "Z12"])
def test_f_phi_roundtrips(ring):
    rng = random.Random(SEED + 1)
    for g in GRAPHS:
        lat = enumerate_TE(g)
        f = random_saturated(lat, ring, rng)
        phi = phi_from_f(lat, f)
        assert validate_phi(lat, phi).ok
        assert f_from_phi(lat, phi) == f
        assert phi_from_f(lat, f_from_phi(lat, phi)) == phi


@pytest.mark.parametrize("ring", [Z, Z12], ids=["Z", "Z12"])
def test_f_phi_order_preserving(ring):
    rng = random.Random(SEED + 2)
    for g in GRAPHS:
        lat = enumerate_TE(g)
        f1 = random_saturated(lat, ring, rng)
        f2 = random_saturated(lat, ring, rng)
        f3 = SaturatedFn(ring, {p: f1(p) & f2(p) for p in lat.nonzero})
        assert validate_saturated(lat, f3).ok
        assert f3.leq(f1) and f3.leq(f2)
        p1, p3 = phi_from_f(lat, f1), phi_from_f(lat, f3)
        assert p3.leq(p1)
        assert f_from_phi(lat, p3).leq(f_from_phi(lat, p1))
        # and order is reflected: φ3 ≤ φ1 forces f3 ≤ f1
        assert p3.leq(p1) == f3.leq(f1)


def test_validate_phi_agrees_with_roundtrip():
    """Perturbed φ: valid exactly when it comes from a saturated f."""
    rng = random.Random(SEED + 3)
    seen = {True: 0, False: 0}
    for g in GRAPHS:
        lat = enumerate_TE(g)
        phi = phi_from_f(lat, random_saturated(lat, Z12, rng))
        x = rng.choice(extended_vertices(lat))
        vals = dict(phi.values)
        vals[x] = rng.choice(Z12.ideals())
        psi = GradedIdealFn(Z12, vals)
        ok = validate_phi(lat, psi).ok
        f = f_from_phi(lat, psi)
        comes_from_f = validate_saturated(lat, f).ok and phi_from_f(lat, f) == psi
        assert ok == comes_from_f
        seen[ok] += 1
    assert seen[True] and seen[False]


@pytest.mark.parametrize("ring", [Z, Z12], ids=["Z", "Z12"])
def test_basic_iff_behaves_basically(ring):
    rng = random.Random(SEED + 4)
    for g in GRAPHS:
        lat = enumerate_TE(g)
        f = random_saturated(lat, ring, rng)
        phi = phi_from_f(lat, f)
        assert (classify(lat, f).kind is Kind.BASIC) == behaves_basically(lat, phi)


@pytest.mark.parametrize("ring", [Z, Z12], ids=["Z", "Z12"])
def test_generators_produce_their_kind(ring):
    rng = random.Random(SEED + 5)
    for g in GRAPHS:
        lat = enumerate_TE(g)
        assert classify(lat, random_basic(lat, ring, rng)).kind is Kind.BASIC
        assert classify(lat, random_ibasic(lat, ring, rng)).kind in (Kind.BASIC, Kind.IBASIC)


@pytest.mark.parametrize("ring", [Z, Z12], ids=["Z", "Z12"])
def test_max_basic_pair_bounds_unit_values(ring):
    rng = random.Random(SEED + 6)
    for g in GRAPHS:
        lat = enumerate_TE(g)
        f = random_saturated(lat, ring, rng)
        m = max_basic_pair(lat, f)
        for p in lat.nonzero:
            assert (f(p) == ring.unit) == lat.le(p, m)
