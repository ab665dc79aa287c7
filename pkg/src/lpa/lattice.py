"""Hereditary saturated sets, breaking vertices and the admissible-pair lattice."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .graph import INF, Graph, GraphError, is_regular, tree

VSet = frozenset  # frozenset[str]


class LatticeError(ValueError):
    pass


def fmt_set(xs: Iterable[str]) -> str:
    return "{" + ",".join(sorted(xs)) + "}"


def set_key(xs: Iterable[str]) -> tuple:
    xs = sorted(xs)
    return (len(xs), xs)


# -- closures -----------------------------------------------------------------


def hereditary_closure(g: Graph, xs: Iterable[str]) -> frozenset[str]:
    xs = g.check_vertices(xs)
    out: set[str] = set()
    for v in xs:
        if v not in out:
            out |= tree(g, v)
    return frozenset(out)


def is_hereditary(g: Graph, xs: Iterable[str]) -> bool:
    xs = g.check_vertices(xs)
    return all(w in xs for v in xs for w in g.successors(v))


def is_saturated(g: Graph, xs: Iterable[str]) -> bool:
    """Saturation rule only (heredity is checked separately)."""
    xs = g.check_vertices(xs)
    for v in g.vertices:
        if v not in xs and is_regular(g, v) and all(w in xs for w in g.successors(v)):
            return False
    return True


def is_hereditary_saturated(g: Graph, xs: Iterable[str]) -> bool:
    return is_hereditary(g, xs) and is_saturated(g, xs)


def _close(g: Graph, xs: Iterable[str], extra: frozenset[str] = frozenset()) -> frozenset[str]:
    # least fixed point of heredity + saturation + the S-rule for vertices in ``extra``
    h = set(hereditary_closure(g, xs))
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            if v in h:
                continue
            succ = g.successors(v)
            if (is_regular(g, v) or v in extra) and succ and all(w in h for w in succ):
                h |= tree(g, v)
                changed = True
    return frozenset(h)


def saturated_closure(g: Graph, xs: Iterable[str]) -> frozenset[str]:
    """Smallest hereditary saturated set containing ``xs``."""
    return _close(g, xs)


def s_saturation(g: Graph, h: Iterable[str], s: Iterable[str]) -> frozenset[str]:
    """The S-saturation of ``h``: hereditary saturated, and also absorbs every
    ``v`` in ``s`` whose edge ranges all lie inside (an infinite bundle counts
    as its single range vertex)."""
    h = g.check_vertices(h)
    s = g.check_vertices(s)
    hh = hereditary_closure(g, h)
    # B_H membership, widened to emitters whose edges already all land in H:
    # those arise inside joins and are absorbed by the S-rule straight away
    bad = sorted(
        v for v in s
        if v not in hh and not (g.out_mult(v) == INF and edges_outside(g, v, hh) < INF)
    )
    if bad:
        raise LatticeError(f"S must lie in H ∪ B_H; offending vertices {bad}")
    return _close(g, h, s)


def hv(g: Graph, v: str) -> frozenset[str]:
    """Smallest hereditary saturated set containing ``v``."""
    g.check_vertex(v)
    return saturated_closure(g, {v})


def hv_by_intersection(g: Graph, v: str, he: Sequence[frozenset[str]] | None = None) -> frozenset[str]:
    g.check_vertex(v)
    out = g.vertex_set
    for h in enumerate_HE(g) if he is None else he:
        if v in h:
            out = out & h
    return out


# -- H_E ------------------------------------------------------------------------


def enumerate_HE(g: Graph) -> list[frozenset[str]]:
    """All hereditary saturated subsets, by size then lexicographically.

    Every such set is the join of the ``hv(v)`` it contains, so closing
    ``{∅} ∪ {hv(v)}`` under joins produces the whole lattice.
    """
    gens = {hv(g, v) for v in g.vertices}
    elems = {frozenset()} | gens
    frontier = list(elems)
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = saturated_closure(g, a | b)
                if c not in elems:
                    elems.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(elems, key=set_key)


def enumerate_HE_bruteforce(g: Graph) -> list[frozenset[str]]:
    vs = g.sorted_vertices()
    out = []
    for k in range(len(vs) + 1):
        for combo in itertools.combinations(vs, k):
            if is_hereditary_saturated(g, combo):
                out.append(frozenset(combo))
    return sorted(out, key=set_key)


# -- breaking vertices ------------------------------------------------------------


def edges_outside(g: Graph, v: str, h: frozenset[str]) -> int | float:
    """Multiplicity-weighted number of edges from ``v`` into ``E^0 \\ h``."""
    return sum((e.mult for e in g.out_edges(v) if e.dst not in h), 0)


def breaking_vertices(g: Graph, h: Iterable[str], check: bool = True) -> frozenset[str]:
    h = g.check_vertices(h)
    if check and not is_hereditary_saturated(g, h):
        raise LatticeError(f"{fmt_set(h)} is not hereditary saturated")
    out = set()
    for v in g.vertices:
        if v in h or g.out_mult(v) != INF:
            continue
        n = edges_outside(g, v, h)
        if 0 < n < INF:
            out.add(v)
    return frozenset(out)


# -- admissible pairs ------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissiblePair:
    H: frozenset[str]
    S: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "H", frozenset(self.H))
        object.__setattr__(self, "S", frozenset(self.S))

    def sort_key(self) -> tuple:
        return (len(self.H), sorted(self.H), len(self.S), sorted(self.S))

    def __str__(self) -> str:
        s = fmt_set(self.S) if self.S else "∅"
        h = fmt_set(self.H) if self.H else "∅"
        return f"({h},{s})"

    def to_dict(self) -> dict:
        return {"H": sorted(self.H), "S": sorted(self.S)}

    @classmethod
    def from_dict(cls, d) -> "AdmissiblePair":
        try:
            return cls(frozenset(map(str, d["H"])), frozenset(map(str, d.get("S", []))))
        except (KeyError, TypeError, AttributeError) as exc:
            raise LatticeError(f"malformed pair {d!r}") from exc


BOTTOM = AdmissiblePair(frozenset(), frozenset())


def pair_leq(p: AdmissiblePair, q: AdmissiblePair) -> bool:
    return p.H <= q.H and p.S <= (q.H | q.S)


def check_admissible(g: Graph, p: AdmissiblePair) -> None:
    g.check_vertices(p.H | p.S)
    if not is_hereditary_saturated(g, p.H):
        raise LatticeError(f"{p}: H is not hereditary saturated")
    extra = sorted(p.S - breaking_vertices(g, p.H))
    if extra:
        raise LatticeError(f"{p}: S contains non-breaking vertices {extra}")


def _join_formula(g: Graph, p: AdmissiblePair, q: AdmissiblePair) -> AdmissiblePair:
    s = p.S | q.S
    h = s_saturation(g, p.H | q.H, s)
    return AdmissiblePair(h, s - h)


@dataclass
class PairLattice:
    """All admissible pairs of a graph with the order materialized."""

    graph: Graph
    elements: list[AdmissiblePair]
    index: dict[AdmissiblePair, int] = field(init=False)
    leq: list[list[bool]] = field(init=False)

    def __post_init__(self):
        self.index = {p: i for i, p in enumerate(self.elements)}
        self._joins: dict = {}
        n = len(self.elements)
        self.leq = [[pair_leq(self.elements[i], self.elements[j]) for j in range(n)] for i in range(n)]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p) -> bool:
        return p in self.index

    @property
    def bottom(self) -> AdmissiblePair:
        return BOTTOM

    @cached_property
    def top(self) -> AdmissiblePair:
        return AdmissiblePair(self.graph.vertex_set, frozenset())

    @property
    def nonzero(self) -> list[AdmissiblePair]:
        """``T_E*``: every pair except ``(∅, ∅)``."""
        return [p for p in self.elements if p != BOTTOM]

    @cached_property
    def hs_sets(self) -> list[frozenset[str]]:
        return sorted({p.H for p in self.elements}, key=set_key)

    def _idx(self, p: AdmissiblePair) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise LatticeError(f"{p} is not an admissible pair of this graph") from None

    def le(self, p: AdmissiblePair, q: AdmissiblePair) -> bool:
        return self.leq[self._idx(p)][self._idx(q)]

    @cached_property
    def _down_count(self) -> list[int]:
        return [sum(row[i] for row in self.leq) for i in range(len(self))]

    @cached_property
    def _up_count(self) -> list[int]:
        return [sum(row) for row in self.leq]

    def lub(self, p: AdmissiblePair, q: AdmissiblePair) -> AdmissiblePair:
        i, j = self._idx(p), self._idx(q)
        ups = [k for k in range(len(self)) if self.leq[i][k] and self.leq[j][k]]
        # a least element has the smallest down-set among the upper bounds
        k = min(ups, key=lambda k: self._down_count[k])
        if not all(self.leq[k][m] for m in ups):
            raise LatticeError(f"no least upper bound for {p}, {q}")
        return self.elements[k]

    def glb(self, p: AdmissiblePair, q: AdmissiblePair) -> AdmissiblePair:
        i, j = self._idx(p), self._idx(q)
        downs = [k for k in range(len(self)) if self.leq[k][i] and self.leq[k][j]]
        k = min(downs, key=lambda k: self._up_count[k])
        if not all(self.leq[m][k] for m in downs):
            raise LatticeError(f"no greatest lower bound for {p}, {q}")
        return self.elements[k]

    def join(self, p: AdmissiblePair, q: AdmissiblePair) -> AdmissiblePair:
        """Join via the S-saturation formula, cross-checked against the poset."""
        key = (p, q) if p.sort_key() <= q.sort_key() else (q, p)
        if key not in self._joins:
            formula = _join_formula(self.graph, p, q)
            order = self.lub(p, q)
            if formula != order:
                raise LatticeError(f"join mismatch for {p} ∨ {q}: formula {formula}, poset {order}")
            self._joins[key] = formula
        return self._joins[key]

    def meet(self, p: AdmissiblePair, q: AdmissiblePair) -> AdmissiblePair:
        return self.glb(p, q)

    def join_all(self, ps: Iterable[AdmissiblePair]) -> AdmissiblePair:
        acc = BOTTOM
        for p in ps:
            acc = self.join(acc, p)
        return acc

    def covers(self, elements: Sequence[AdmissiblePair] | None = None) -> list[tuple[AdmissiblePair, AdmissiblePair]]:
        """Hasse diagram edges ``(lower, upper)`` among ``elements``."""
        els = list(self.elements if elements is None else elements)
        idx = [self._idx(p) for p in els]
        out = []
        for a, i in zip(els, idx):
            for b, j in zip(els, idx):
                if i == j or not self.leq[i][j]:
                    continue
                if not any(k not in (i, j) and self.leq[i][k] and self.leq[k][j] for k in idx):
                    out.append((a, b))
        return out

    def join_irreducibles(self) -> list[AdmissiblePair]:
        """Nonzero elements with exactly one lower cover."""
        lower = {p: 0 for p in self.elements}
        for a, b in self.covers():
            lower[b] += 1
        return [p for p in self.elements if p != BOTTOM and lower[p] == 1]


def enumerate_TE(g: Graph) -> PairLattice:
    elements = []
    for h in enumerate_HE(g):
        b = sorted(breaking_vertices(g, h, check=False))
        for k in range(len(b) + 1):
            for s in itertools.combinations(b, k):
                elements.append(AdmissiblePair(h, frozenset(s)))
    elements.sort(key=AdmissiblePair.sort_key)
    return PairLattice(g, elements)


def pair_join(lat: PairLattice, p: AdmissiblePair, q: AdmissiblePair) -> AdmissiblePair:
    return lat.join(p, q)


def pair_meet(lat: PairLattice, p: AdmissiblePair, q: AdmissiblePair) -> AdmissiblePair:
    return lat.meet(p, q)


# -- H_E as a plain lattice ------------------------------------------------------------


def he_covers(sets: Sequence[frozenset[str]]) -> list[tuple[frozenset[str], frozenset[str]]]:
    out = []
    for a in sets:
        for b in sets:
            if a < b and not any(a < c < b for c in sets):
                out.append((a, b))
    return out


def he_join(g: Graph, a: Iterable[str], b: Iterable[str]) -> frozenset[str]:
    return saturated_closure(g, frozenset(a) | frozenset(b))


def he_meet(a: Iterable[str], b: Iterable[str]) -> frozenset[str]:
    return frozenset(a) & frozenset(b)


__all__ = [
    "AdmissiblePair",
    "BOTTOM",
    "GraphError",
    "LatticeError",
    "PairLattice",
    "breaking_vertices",
    "check_admissible",
    "edges_outside",
    "enumerate_HE",
    "enumerate_HE_bruteforce",
    "enumerate_TE",
    "fmt_set",
    "he_covers",
    "he_join",
    "he_meet",
    "hereditary_closure",
    "hv",
    "hv_by_intersection",
    "is_hereditary",
    "is_hereditary_saturated",
    "is_saturated",
    "pair_join",
    "pair_leq",
    "pair_meet",
    "s_saturation",
    "saturated_closure",
]
