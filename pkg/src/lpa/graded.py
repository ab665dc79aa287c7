"""Saturated functions on admissible pairs and graded ideal functions on
extended vertices, the two encodings of a graded ideal of ``L_R(E)``."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import Graph, tree
from .ideals import Ideal, IdealError, Ring, divisors, meet_all
from .lattice import (
    AdmissiblePair,
    PairLattice,
    breaking_vertices,
    check_admissible,
    fmt_set,
    hv,
    pair_leq,
)


class FunctionError(ValueError):
    """A function on T_E* or on extended vertices is malformed or invalid."""


class PartialAssignment(FunctionError):
    def __init__(self, missing: list, extra: list = ()):
        self.missing = list(missing)
        self.extra = list(extra)
        parts = []
        if self.missing:
            parts.append("missing " + ", ".join(map(str, self.missing)))
        if self.extra:
            parts.append("outside the domain " + ", ".join(map(str, self.extra)))
        super().__init__("partial assignment: " + "; ".join(parts))


class InvalidFunction(FunctionError):
    def __init__(self, report: "Report"):
        self.report = report
        super().__init__(f"{report.kind} function is invalid:\n" + "\n".join(report.lines()))


# -- extended vertices ---------------------------------------------------------------


@dataclass(frozen=True)
class XVertex:
    """A vertex ``v`` (``H is None``) or the element ``v^H`` for ``v`` in ``B_H``."""

    v: str
    H: frozenset[str] | None = None

    @property
    def broken(self) -> bool:
        return self.H is not None

    def sort_key(self) -> tuple:
        if self.H is None:
            return (0, self.v, 0, [])
        return (1, self.v, len(self.H), sorted(self.H))

    def __str__(self) -> str:
        return self.v if self.H is None else f"{self.v}^{fmt_set(self.H)}"

    def to_json(self) -> dict:
        if self.H is None:
            return {"vertex": self.v}
        return {"broken": {"v": self.v, "H": sorted(self.H)}}

    @classmethod
    def from_json(cls, raw) -> "XVertex":
        if isinstance(raw, Mapping) and "vertex" in raw:
            return cls(str(raw["vertex"]))
        if isinstance(raw, Mapping) and "broken" in raw:
            b = raw["broken"]
            try:
                return cls(str(b["v"]), frozenset(map(str, b["H"])))
            except (KeyError, TypeError) as exc:
                raise FunctionError(f"malformed broken vertex {raw!r}") from exc
        raise FunctionError(f"malformed extended vertex {raw!r}")


def Plain(v: str) -> XVertex:
    return XVertex(v)


def Broken(v: str, H: Iterable[str]) -> XVertex:
    return XVertex(v, frozenset(H))


def extended_vertices(lat: PairLattice) -> list[XVertex]:
    """``(Ê)^0``: all vertices, then every ``v^H`` with ``H`` in ``H_E`` and ``v`` in ``B_H``."""
    g = lat.graph
    out = [XVertex(v) for v in g.sorted_vertices()]
    broken = []
    for h in lat.hs_sets:
        for v in breaking_vertices(g, h, check=False):
            broken.append(XVertex(v, h))
    return out + sorted(broken, key=XVertex.sort_key)


def check_xvertex(lat: PairLattice, x: XVertex) -> None:
    g = lat.graph
    g.check_vertex(x.v)
    if x.broken:
        if x.H not in set(lat.hs_sets) or x.v not in breaking_vertices(g, x.H, check=False):
            raise FunctionError(f"{x} is not an extended vertex: {x.v} ∉ B_{fmt_set(x.H)}")


def xgeq(g: Graph, x: XVertex, y: XVertex) -> bool:
    """The path order extended by ``v >= v^H``; each ``v^H`` is below only itself."""
    if x.broken:
        return x == y
    return y.v in tree(g, x.v)


# -- the two function types ------------------------------------------------------------


def _ring_of(values: Iterable[Ideal], ring: Ring | None) -> Ring:
    rings = {i.ring for i in values}
    if ring is not None:
        rings.add(ring)
    if len(rings) != 1:
        raise IdealError(f"ideals from several rings: {sorted(map(str, rings))}")
    return rings.pop()


@dataclass(frozen=True)
class SaturatedFn:
    ring: Ring
    values: Mapping[AdmissiblePair, Ideal]

    def __call__(self, p: AdmissiblePair) -> Ideal:
        try:
            return self.values[p]
        except KeyError:
            raise FunctionError(f"f is undefined at {p}") from None

    @property
    def image(self) -> list[Ideal]:
        return sorted(set(self.values.values()), key=lambda i: i.gen)

    def leq(self, other: "SaturatedFn") -> bool:
        return all(self.values[p] <= other.values[p] for p in self.values)

    def to_json(self) -> list:
        return [
            {"pair": p.to_dict(), "ideal": self.values[p].to_json()}
            for p in sorted(self.values, key=AdmissiblePair.sort_key)
        ]

    @classmethod
    def from_json(cls, raw, ring: Ring | None = None) -> "SaturatedFn":
        if not isinstance(raw, list):
            raise FunctionError("f JSON must be a list of {pair, ideal} entries")
        vals = {}
        for item in raw:
            if not isinstance(item, Mapping) or "pair" not in item or "ideal" not in item:
                raise FunctionError(f"malformed f entry {item!r}")
            p = AdmissiblePair.from_dict(item["pair"])
            if p in vals:
                raise FunctionError(f"duplicate entry for {p}")
            vals[p] = Ideal.from_json(item["ideal"])
        return cls(_ring_of(vals.values(), ring), vals)


@dataclass(frozen=True)
class GradedIdealFn:
    ring: Ring
    values: Mapping[XVertex, Ideal]

    def __call__(self, x: XVertex | str) -> Ideal:
        if isinstance(x, str):
            x = XVertex(x)
        try:
            return self.values[x]
        except KeyError:
            raise FunctionError(f"φ is undefined at {x}") from None

    @property
    def image(self) -> list[Ideal]:
        return sorted(set(self.values.values()), key=lambda i: i.gen)

    def preimage(self, i: Ideal) -> list[XVertex]:
        return sorted((x for x, j in self.values.items() if j == i), key=XVertex.sort_key)

    def leq(self, other: "GradedIdealFn") -> bool:
        return all(self.values[x] <= other.values[x] for x in self.values)

    def to_json(self) -> list:
        return [
            {**x.to_json(), "ideal": self.values[x].to_json()}
            for x in sorted(self.values, key=XVertex.sort_key)
        ]

    @classmethod
    def from_json(cls, raw, ring: Ring | None = None) -> "GradedIdealFn":
        if not isinstance(raw, list):
            raise FunctionError("φ JSON must be a list of entries")
        vals = {}
        for item in raw:
            if not isinstance(item, Mapping) or "ideal" not in item:
                raise FunctionError(f"malformed φ entry {item!r}")
            x = XVertex.from_json(item)
            if x in vals:
                raise FunctionError(f"duplicate entry for {x}")
            vals[x] = Ideal.from_json(item["ideal"])
        return cls(_ring_of(vals.values(), ring), vals)


def saturated_fn(lat: PairLattice, ring: Ring, values: Mapping) -> SaturatedFn:
    """Build an ``f`` from ``{(H, S) or AdmissiblePair: Ideal or int}``."""
    out = {}
    for k, v in values.items():
        p = k if isinstance(k, AdmissiblePair) else AdmissiblePair(frozenset(k[0]), frozenset(k[1]))
        out[p] = v if isinstance(v, Ideal) else ring.ideal(v)
    f = SaturatedFn(ring, out)
    check_total_f(lat, f)
    return f


def graded_fn(lat: PairLattice, ring: Ring, values: Mapping) -> GradedIdealFn:
    """Build a ``φ`` from ``{vertex or XVertex: Ideal or int}``."""
    out = {}
    for k, v in values.items():
        x = k if isinstance(k, XVertex) else XVertex(k)
        out[x] = v if isinstance(v, Ideal) else ring.ideal(v)
    phi = GradedIdealFn(ring, out)
    check_total_phi(lat, phi)
    return phi


def constant_f(lat: PairLattice, i: Ideal) -> SaturatedFn:
    return SaturatedFn(i.ring, {p: i for p in lat.nonzero})


def constant_phi(lat: PairLattice, i: Ideal) -> GradedIdealFn:
    return GradedIdealFn(i.ring, {x: i for x in extended_vertices(lat)})


def check_total_f(lat: PairLattice, f: SaturatedFn) -> None:
    dom = set(lat.nonzero)
    have = set(f.values)
    if dom != have:
        raise PartialAssignment(
            sorted(dom - have, key=AdmissiblePair.sort_key),
            sorted(have - dom, key=AdmissiblePair.sort_key),
        )
    _ring_of(f.values.values(), f.ring)


def check_total_phi(lat: PairLattice, phi: GradedIdealFn) -> None:
    dom = set(extended_vertices(lat))
    have = set(phi.values)
    if dom != have:
        raise PartialAssignment(
            sorted(dom - have, key=XVertex.sort_key),
            sorted(have - dom, key=XVertex.sort_key),
        )
    _ring_of(phi.values.values(), phi.ring)


# -- validation ----------------------------------------------------------------------


@dataclass
class Violation:
    clause: str
    witness: str
    lhs: str
    rhs: str

    def __str__(self) -> str:
        return f"[{self.clause}] {self.witness}: {self.lhs} ≠ {self.rhs}"

    def to_json(self) -> dict:
        return {"clause": self.clause, "witness": self.witness, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class Report:
    kind: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        if self.ok:
            return [f"{self.kind}: valid"]
        return [f"{self.kind}: {len(self.violations)} violation(s)"] + [f"  {v}" for v in self.violations]

    def to_json(self) -> dict:
        return {"kind": self.kind, "valid": self.ok, "violations": [v.to_json() for v in self.violations]}


def validate_saturated(lat: PairLattice, f: SaturatedFn) -> Report:
    """Check ``f(p ∨ q) = f(p) ∩ f(q)`` on all pairs of ``T_E*``.

    Binary joins suffice: in a finite lattice every family join is an
    iterated binary join.
    """
    check_total_f(lat, f)
    rep = Report("saturated")
    ps = lat.nonzero
    for i, p in enumerate(ps):
        for q in ps[i:]:
            j = lat.join(p, q)
            lhs, rhs = f(j), f(p) & f(q)
            if lhs != rhs:
                rep.violations.append(
                    Violation("join", f"{p} ∨ {q} = {j}", f"f(join)={lhs}", f"f∩f={rhs}")
                )
    return rep


def _require_valid_f(lat: PairLattice, f: SaturatedFn) -> None:
    rep = validate_saturated(lat, f)
    if not rep.ok:
        raise InvalidFunction(rep)


def phi_from_f(lat: PairLattice, f: SaturatedFn, check: bool = True) -> GradedIdealFn:
    """``φ(u) = f((H_u, ∅))`` and ``φ(v^H) = f((H, {v}))``."""
    if check:
        _require_valid_f(lat, f)
    else:
        check_total_f(lat, f)
    g = lat.graph
    vals = {}
    for x in extended_vertices(lat):
        if x.broken:
            vals[x] = f(AdmissiblePair(x.H, frozenset({x.v})))
        else:
            vals[x] = f(AdmissiblePair(hv(g, x.v), frozenset()))
    return GradedIdealFn(f.ring, vals)


def f_from_phi(lat: PairLattice, phi: GradedIdealFn) -> SaturatedFn:
    """``f(H, S) = ∩_{u∈H} φ(u) ∩ ∩_{v∈S} φ(v^H)``."""
    check_total_phi(lat, phi)
    vals = {}
    for p in lat.nonzero:
        parts = [phi(XVertex(u)) for u in p.H] + [phi(XVertex(v, p.H)) for v in p.S]
        vals[p] = meet_all(phi.ring, parts)
    return SaturatedFn(phi.ring, vals)


def validate_phi(lat: PairLattice, phi: GradedIdealFn) -> Report:
    """Check that ``φ`` is a graded ideal function.

    Clauses, with ``φ(H) = ∩_{w∈H} φ(w)``:

    (a) order reversal, ``x ≥ y ⟹ φ(x) ⊆ φ(y)`` on vertices, and
        ``x ≥ v ⟹ φ(x) ∩ φ(H) ⊆ φ(v^H)`` for broken vertices;
    (b) ``φ(u) = ∩_{w∈H_u} φ(w)``;
    (c) ``φ(v) ∩ φ(H) ⊆ φ(v^H) ⊆ φ(H)``;
    (d) ``f_φ`` is saturated and maps back to ``φ``.

    The broken-vertex conditions carry the ``φ(H)`` factor because
    ``φ(v^H) = f((H, {v}))`` always lies inside ``φ(H)``; when ``H ⊆ H_v`` they
    reduce to the plain ``x ≥ v ≥ v^H`` and ``φ(v) ⊆ φ(v^H)``.
    """
    check_total_phi(lat, phi)
    g = lat.graph
    rep = Report("graded ideal function")
    xs = sorted(phi.values, key=XVertex.sort_key)
    plain = [x for x in xs if not x.broken]
    broken = [x for x in xs if x.broken]
    phi_h = {}
    for y in broken:
        if y.H not in phi_h:
            phi_h[y.H] = meet_all(phi.ring, (phi(w) for w in y.H))
    for x in plain:
        for y in plain:
            if x != y and xgeq(g, x, y) and not phi(x) <= phi(y):
                rep.violations.append(
                    Violation("a", f"{x} ≥ {y}", f"φ({x})={phi(x)}", f"not ⊆ φ({y})={phi(y)}")
                )
        for y in broken:
            lhs = phi(x) & phi_h[y.H]
            if xgeq(g, x, XVertex(y.v)) and not lhs <= phi(y):
                rep.violations.append(
                    Violation("a", f"{x} ≥ {y.v} ≥ {y}", f"φ({x})∩φ({fmt_set(y.H)})={lhs}",
                              f"not ⊆ φ({y})={phi(y)}")
                )
    for v in g.sorted_vertices():
        want = meet_all(phi.ring, (phi(w) for w in hv(g, v)))
        if phi(v) != want:
            rep.violations.append(
                Violation("b", f"H_{v}={fmt_set(hv(g, v))}", f"φ({v})={phi(v)}", f"∩φ={want}")
            )
    for y in broken:
        h = phi_h[y.H]
        if not phi(y) <= h:
            rep.violations.append(
                Violation("c", str(y), f"φ({y})={phi(y)}", f"not ⊆ φ({fmt_set(y.H)})={h}")
            )
        elif not phi(y.v) & h <= phi(y):
            rep.violations.append(
                Violation("c", str(y), f"φ({y.v})∩φ({fmt_set(y.H)})={phi(y.v) & h}",
                          f"not ⊆ φ({y})={phi(y)}")
            )
    f = f_from_phi(lat, phi)
    sat = validate_saturated(lat, f)
    for v in sat.violations:
        rep.violations.append(Violation("d", "f_φ " + v.witness, v.lhs, v.rhs))
    back = phi_from_f(lat, f, check=False)
    for x in xs:
        if back(x) != phi(x):
            rep.violations.append(Violation("d", f"φ_(f_φ) at {x}", str(back(x)), str(phi(x))))
    return rep


# -- classification ------------------------------------------------------------------


class Kind(enum.Enum):
    BASIC = "Basic"
    IBASIC = "IBasic"
    GENERAL = "GeneralGraded"


@dataclass(frozen=True)
class IdealClass:
    kind: Kind
    ideal: Ideal  # I for IBasic; {0} for Basic; f((E^0, ∅)) otherwise
    image: tuple[Ideal, ...]

    def render(self, symbols=None) -> str:
        img = "{" + ", ".join(i.render(symbols) for i in self.image) + "}"
        if self.kind is Kind.BASIC:
            return f"Basic (0-basic); Im(f) = {img}"
        if self.kind is Kind.IBASIC:
            return f"IBasic({self.ideal.render(symbols)}); Im(f) = {img}"
        return f"GeneralGraded; Im(f) = {img}"

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "ideal": self.ideal.to_json(),
            "image": [i.to_json() for i in self.image],
        }


def classify(lat: PairLattice, f: SaturatedFn) -> IdealClass:
    _require_valid_f(lat, f)
    image = tuple(f.image)
    r = f.ring
    if all(i.is_zero or i.is_unit for i in image):
        return IdealClass(Kind.BASIC, r.zero, image)
    bottom = f(lat.top)
    if set(image) <= {bottom, r.unit}:
        assert all(i in (bottom, r.unit) for i in image)
        return IdealClass(Kind.IBASIC, bottom, image)
    return IdealClass(Kind.GENERAL, bottom, image)


def membership(lat: PairLattice, phi: GradedIdealFn, k: int, x: XVertex | str) -> bool:
    """Whether ``k·x`` lies in the graded ideal described by ``φ``."""
    if isinstance(x, str):
        x = XVertex(x)
    check_xvertex(lat, x)
    if k not in phi(x):
        return False
    if x.broken:
        return all(k in phi(XVertex(u)) for u in x.H)
    return True


def max_basic_pair(lat: PairLattice, f: SaturatedFn) -> AdmissiblePair:
    """``(H, S)`` of the largest basic graded ideal inside ``A``; ``(∅, ∅)``
    means the basic part is zero."""
    phi = phi_from_f(lat, f)
    g = lat.graph
    unit = f.ring.unit
    h = frozenset(v for v in g.vertices if phi(v) == unit)
    s = frozenset(v for v in breaking_vertices(g, h, check=False) if phi(XVertex(v, h)) == unit)
    p = AdmissiblePair(h, s)
    check_admissible(g, p)
    for q in lat.nonzero:
        if f(q) == unit and not pair_leq(q, p):
            raise AssertionError(f"f({q}) = R but {q} is not below {p}")
    return p


def behaves_basically(lat: PairLattice, phi: GradedIdealFn) -> bool:
    """Probe ``k·x ∈ A ⟹ x ∈ A`` for nonzero ``k`` over a finite witness set.

    Divisibility decides membership, so divisors of the occurring generators
    plus one coprime integer are enough.
    """
    m = phi.ring.modulus
    gens = {i.gen for i in phi.image}
    probes = set()
    for g_ in gens:
        probes.update(divisors(g_) if g_ else ())
    if m:
        probes.update(divisors(m))
    top = math.prod(gens - {0}) or 1
    probes.add(top * (m or 1) + 1)
    xs = list(phi.values)
    for k in sorted(probes):
        if m and k % m == 0:
            continue
        for x in xs:
            if membership(lat, phi, k, x) and not membership(lat, phi, 1, x):
                return False
    return True


# -- random generation (tests, CLI self-checks) ---------------------------------------------


def random_saturated(
    lat: PairLattice, ring: Ring, rng: random.Random, gens: Iterable[int] | None = None
) -> SaturatedFn:
    """A random saturated function: arbitrary ideals on the join-irreducibles,
    extended to every pair by intersecting over the join-irreducibles below it."""
    pool = ring.ideals(gens) if gens is not None or ring.modulus else ring.ideals([0, 1, 2, 3, 4, 6, 12])
    jis = lat.join_irreducibles()
    base = {j: rng.choice(pool) for j in jis}
    vals = {}
    for p in lat.nonzero:
        vals[p] = meet_all(ring, (base[j] for j in jis if lat.le(j, p)))
    return SaturatedFn(ring, vals)


def random_basic(lat: PairLattice, ring: Ring, rng: random.Random) -> SaturatedFn:
    return random_saturated(lat, ring, rng, gens=[0, 1] if ring.modulus == 0 else [ring.modulus, 1])


def random_ibasic(lat: PairLattice, ring: Ring, rng: random.Random) -> SaturatedFn:
    """Random ``f`` with image inside ``{I, R}`` for a random ideal ``I``."""
    pool = [0, 2, 3, 6] if ring.modulus == 0 else divisors(ring.modulus)
    return random_saturated(lat, ring, rng, gens=[rng.choice(pool), 1])


__all__ = [
    "Broken",
    "FunctionError",
    "GradedIdealFn",
    "IdealClass",
    "InvalidFunction",
    "Kind",
    "PartialAssignment",
    "Plain",
    "Report",
    "SaturatedFn",
    "Violation",
    "XVertex",
    "behaves_basically",
    "check_xvertex",
    "classify",
    "constant_f",
    "constant_phi",
    "extended_vertices",
    "f_from_phi",
    "graded_fn",
    "max_basic_pair",
    "membership",
    "phi_from_f",
    "random_basic",
    "random_ibasic",
    "random_saturated",
    "saturated_fn",
    "validate_phi",
    "validate_saturated",
    "xgeq",
]
