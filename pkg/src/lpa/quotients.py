"""Symbolic descriptions of ``L_R(E)/A`` for a graded ideal ``A``.

Two routes are available:

* an ``I``-basic ideal (image of ``f`` inside ``{I, R}``) gives
  ``L_R(E)/A ≅ L_{R/I}(E \\ (H, S))``;
* on a row-finite graph any graded ideal gives
  ``L_R(E)/A ≅ ⊕_{I ∈ Im φ} L_{R/I}(_{φ^{-1}(I)} E)``.

Every printed isomorphism carries a ``licence`` naming which of the two
statements it rests on; a general graded ideal on the first route only
yields an epimorphism onto the quotient and is labeled as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .constructions import (
    AlgebraDescriptor,
    NamedLPA,
    PorcupineGraph,
    QuotientGraph,
    find_isomorphism,
    porcupine,
    quotient_graph,
    recognize,
)
from .graded import (
    GradedIdealFn,
    IdealClass,
    Kind,
    SaturatedFn,
    classify,
    max_basic_pair,
    phi_from_f,
    validate_phi,
    InvalidFunction,
)
from .graph import Graph, GraphError
from .ideals import Ideal, Ring, quotient_ring
from .lattice import AdmissiblePair, PairLattice, fmt_set

LICENCE_IBASIC = "I-basic quotient (quotient graph)"
LICENCE_DECOMP = "row-finite decomposition (porcupine graphs)"
LICENCE_EPI = "epimorphism only, not isomorphism"


class NotRowFinite(GraphError):
    pass


class NotIBasic(ValueError):
    """Raised by :func:`quotient_ibasic` for a general graded ideal; carries the
    epimorphism data that still applies."""

    def __init__(self, klass: IdealClass, epi: "IBasicResult"):
        self.klass = klass
        self.epi = epi
        super().__init__(
            f"ideal is {klass.kind.value}, not I-basic; use decompose for row-finite graphs "
            f"(only an epimorphism L_{{R/I}}(E\\(H,S)) -> L_R(E)/A is available)"
        )


def header(ring: Ring, name: str = "E", symbols=None) -> str:
    r = ring.render(symbols)
    r = r if len(r) == 1 else "{" + r + "}"
    return f"L_{r}({name})/A"


@dataclass
class IBasicResult:
    klass: IdealClass
    pair: AdmissiblePair
    ideal: Ideal
    ring: Ring  # R / I
    quotient: QuotientGraph
    algebra: AlgebraDescriptor
    licence: str
    base_ring: Ring
    name: str = "E"

    def render(self, symbols=None) -> str:
        head = header(self.base_ring, self.name, symbols)
        if self.licence == LICENCE_EPI:
            return f"{self.algebra.render(symbols)} ->> {head}    [{self.licence}]"
        return f"{head} ≅ {self.algebra.render(symbols)}    [{self.licence}]"

    def to_json(self) -> dict:
        return {
            "classification": self.klass.to_json(),
            "H": sorted(self.pair.H),
            "S": sorted(self.pair.S),
            "I": self.ideal.to_json(),
            "quotient_ring": self.ring.to_json(),
            "quotient_graph": self.quotient.to_json(),
            "algebra": self.algebra.to_json(),
            "licence": self.licence,
            "text": self.render(),
        }


def _quotient_label(g: Graph, q: QuotientGraph, name: str) -> str:
    if q.graph == g:
        return name
    return f"{name}\\{q.pair}"


def _ibasic_data(g: Graph, lat: PairLattice, f: SaturatedFn, klass: IdealClass, licence: str, name: str) -> IBasicResult:
    pair = max_basic_pair(lat, f)
    i = f(lat.top)
    rr = quotient_ring(f.ring, i)
    q = quotient_graph(g, pair)
    label = _quotient_label(g, q, name)
    if rr.is_zero:
        alg = AlgebraDescriptor()
    elif q.graph.row_finite:
        alg = recognize(q.graph, rr, label)
    else:
        alg = AlgebraDescriptor((NamedLPA(label, rr),))
    return IBasicResult(klass, pair, i, rr, q, alg, licence, f.ring, name)


def epimorphism_data(g: Graph, lat: PairLattice, f: SaturatedFn, name: str = "E") -> IBasicResult:
    """``R/I`` and ``E \\ (H, S)`` for any graded ideal; an isomorphism only
    when the ideal is I-basic."""
    klass = classify(lat, f)
    licence = LICENCE_EPI if klass.kind is Kind.GENERAL else LICENCE_IBASIC
    return _ibasic_data(g, lat, f, klass, licence, name)


def quotient_ibasic(g: Graph, lat: PairLattice, f: SaturatedFn, name: str = "E") -> IBasicResult:
    res = epimorphism_data(g, lat, f, name)
    if res.klass.kind is Kind.GENERAL:
        raise NotIBasic(res.klass, res)
    return res


# -- decomposition ---------------------------------------------------------------------


@dataclass
class Summand:
    ideal: Ideal
    ring: Ring
    X: frozenset[str]
    porcupine: PorcupineGraph
    algebra: AlgebraDescriptor | None  # None when the porcupine is infinite
    vanishing: bool

    def render(self, symbols=None) -> str:
        if self.vanishing:
            return "0"
        if self.algebra is not None:
            return self.algebra.render(symbols)
        r = self.ring.render(symbols)
        r = r if len(r) == 1 else "{" + r + "}"
        return f"L_{r}(_{fmt_set(self.X)}E) [infinite porcupine, truncated at depth {self.porcupine.depth}]"

    def to_json(self) -> dict:
        return {
            "I": self.ideal.to_json(),
            "quotient_ring": self.ring.to_json(),
            "X": sorted(self.X),
            "vanishing": self.vanishing,
            "porcupine": self.porcupine.to_json(),
            "algebra": None if self.algebra is None else self.algebra.to_json(),
            "text": self.render(),
        }


@dataclass
class Decomposition:
    base_ring: Ring
    summands: list[Summand]
    name: str = "E"
    licence: str = LICENCE_DECOMP

    @property
    def live(self) -> list[Summand]:
        return [s for s in self.summands if not s.vanishing]

    def render(self, symbols=None) -> str:
        body = " (+) ".join(s.render(symbols) for s in self.live) or "0"
        return f"{header(self.base_ring, self.name, symbols)} ≅ {body}    [{self.licence}]"

    def to_json(self) -> dict:
        return {
            "summands": [s.to_json() for s in self.summands],
            "licence": self.licence,
            "text": self.render(),
        }


def decompose(
    g: Graph, lat: PairLattice, phi: GradedIdealFn, depth_bound: int | None = None, name: str = "E"
) -> Decomposition:
    if not g.row_finite:
        bad = sorted(e.id for e in g.edges if e.infinite)
        raise NotRowFinite(
            f"the decomposition needs a row-finite graph; infinite bundles: {', '.join(bad)}"
        )
    rep = validate_phi(lat, phi)
    if not rep.ok:
        raise InvalidFunction(rep)
    summands = []
    for i in phi.image:
        rr = quotient_ring(phi.ring, i)
        X = frozenset(x.v for x in phi.preimage(i) if not x.broken)
        # a vanishing summand only needs its finiteness flag
        pg = porcupine(g, X, 0 if rr.is_zero else depth_bound)
        label = f"_{fmt_set(X)}E"
        if rr.is_zero:
            alg = AlgebraDescriptor()
        elif pg.infinite:
            alg = None
        else:
            alg = recognize(pg.graph, rr, label)
        summands.append(Summand(i, rr, X, pg, alg, rr.is_zero))
    return Decomposition(phi.ring, summands, name)


def decompose_f(g: Graph, lat: PairLattice, f: SaturatedFn, depth_bound: int | None = None, name: str = "E") -> Decomposition:
    return decompose(g, lat, phi_from_f(lat, f), depth_bound, name)


# -- cross-check -------------------------------------------------------------------------


@dataclass
class CrossCheck:
    ok: bool
    reason: str
    ibasic: IBasicResult
    decomposition: Decomposition
    isomorphism: Mapping[str, str] | None = field(default=None)

    def render(self, symbols=None) -> str:
        verdict = "consistent" if self.ok else "INCONSISTENT"
        lines = [
            f"cross-check: {verdict} ({self.reason})",
            "  " + self.ibasic.render(symbols),
            "  " + self.decomposition.render(symbols),
        ]
        if self.isomorphism is not None:
            lines.append("  isomorphism: " + ", ".join(f"{a}->{b}" for a, b in self.isomorphism.items()))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "consistent": self.ok,
            "reason": self.reason,
            "isomorphism": self.isomorphism,
            "ibasic": self.ibasic.to_json(),
            "decomposition": self.decomposition.to_json(),
        }


def cross_check(g: Graph, lat: PairLattice, f: SaturatedFn, name: str = "E") -> CrossCheck:
    """Both routes must agree for an I-basic ideal on a row-finite graph: one
    live summand whose porcupine graph is isomorphic to ``E \\ (H, ∅)``."""
    ib = quotient_ibasic(g, lat, f, name)
    dec = decompose_f(g, lat, f, name=name)
    live = dec.live
    if ib.ring.is_zero or not ib.quotient.graph.vertices:
        ok = not live
        return CrossCheck(ok, "both sides vanish" if ok else "quotient vanishes but summands remain", ib, dec)
    if len(live) != 1:
        return CrossCheck(False, f"expected one live summand, found {len(live)}", ib, dec)
    s = live[0]
    if s.ideal != ib.ideal:
        return CrossCheck(False, f"summand ideal {s.ideal} differs from I = {ib.ideal}", ib, dec)
    iso = find_isomorphism(s.porcupine.graph, ib.quotient.graph)
    if iso is None:
        return CrossCheck(False, "porcupine graph and quotient graph are not isomorphic", ib, dec)
    return CrossCheck(True, "one live summand; graphs isomorphic", ib, dec, iso)
