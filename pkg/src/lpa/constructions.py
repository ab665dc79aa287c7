"""Quotient graphs, porcupine graphs and symbolic recognition of small
Leavitt path algebras."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import EdgeBundle, Graph, GraphError, enumerate_cycles, has_exit, weak_components
from .ideals import Ring
from .lattice import AdmissiblePair, breaking_vertices, check_admissible, fmt_set

DEFAULT_DEPTH_FACTOR = 3
# cap on materialized paths; a level that would exceed it is not built
PATH_BUDGET = 20000


# -- quotient graph ------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientGraph:
    graph: Graph
    pair: AdmissiblePair
    vertex_origin: Mapping[str, str]
    edge_origin: Mapping[str, str]

    def to_json(self) -> dict:
        return {
            "pair": self.pair.to_dict(),
            "graph": self.graph.to_dict(),
            "provenance": {
                "vertices": dict(sorted(self.vertex_origin.items())),
                "edges": dict(sorted(self.edge_origin.items())),
            },
        }


def prime(name: str) -> str:
    return name + "'"


def quotient_graph(g: Graph, p: AdmissiblePair) -> QuotientGraph:
    """``E \\ (H, S)``: drop ``H``, keep edges landing outside ``H``, and add a
    primed copy ``v'`` (with primed incoming edges) for each ``v`` in ``B_H \\ S``."""
    check_admissible(g, p)
    h = p.H
    unsel = breaking_vertices(g, h) - p.S
    verts = [v for v in g.vertices if v not in h]
    vorig = {v: v for v in verts}
    for v in g.vertices:
        if v in unsel:
            verts.append(prime(v))
            vorig[prime(v)] = v
    edges = []
    eorig = {}
    for e in g.edges:
        if e.dst in h:
            continue
        edges.append(e)
        eorig[e.id] = e.id
    for e in g.edges:
        if e.dst in unsel:
            b = EdgeBundle(prime(e.id), e.src, prime(e.dst), e.mult)
            edges.append(b)
            eorig[b.id] = e.id
    return QuotientGraph(Graph(verts, edges), p, vorig, eorig)


# -- porcupine graph --------------------------------------------------------------------


def _copies(e: EdgeBundle) -> list[str]:
    if e.mult == 1:
        return [e.id]
    return [f"{e.id}#{k}" for k in range(1, int(e.mult) + 1)]


@dataclass(frozen=True)
class PathSet:
    """``F(X)`` enumerated up to ``depth`` edges; ``infinite`` is exact.

    ``depth`` is lowered to the last complete level when the next one would
    push the path count past ``PATH_BUDGET``.
    """

    X: frozenset[str]
    paths: tuple[tuple[str, ...], ...]
    infinite: bool
    depth: int

    @property
    def truncated(self) -> bool:
        return self.infinite


def default_depth(g: Graph) -> int:
    return DEFAULT_DEPTH_FACTOR * max(len(g), 1)


def f_of_x(g: Graph, X: Iterable[str], depth_bound: int | None = None) -> PathSet:
    """Paths ``e_1…e_n`` starting outside ``X``, staying outside until the last
    edge, and ending in ``X``.  Parallel copies of a bundle are named ``e#k``."""
    X = g.check_vertices(X)
    depth = default_depth(g) if depth_bound is None else depth_bound
    if depth < 0:
        raise GraphError("depth bound must be nonnegative")
    outside = [v for v in g.vertices if v not in X]
    for v in outside:
        for e in g.out_edges(v):
            if e.infinite and (e.dst in X or e.dst in _feeds(g, X)):
                raise GraphError(
                    f"infinite bundle {e.id!r} lies on paths into X; porcupine graphs need these edges row-finite"
                )
    infinite = _f_infinite(g, X)
    # paths grow backwards from their last edge
    layer: list[tuple[tuple[str, ...], str]] = []  # (path, source vertex)
    for v in outside:
        for e in g.out_edges(v):
            if e.dst in X:
                layer.extend(((c,), v) for c in _copies(e))
    found: list[tuple[str, ...]] = []
    n = 1
    while layer and n <= depth:
        if len(found) + len(layer) > PATH_BUDGET:
            depth = n - 1
            break
        found.extend(p for p, _ in layer)
        nxt = []
        for path, s in layer:
            for e in g.in_edges(s):
                if e.src not in X:
                    nxt.extend(((c,) + path, e.src) for c in _copies(e))
        layer = nxt
        n += 1
    found.sort(key=lambda p: (len(p), p))
    return PathSet(X, tuple(found), infinite, depth)


def _feeds(g: Graph, X: frozenset[str]) -> frozenset[str]:
    # vertices outside X that reach X through vertices outside X
    seen = set()
    todo = deque(v for x in X for v in g.predecessors(x) if v not in X)
    seen.update(todo)
    while todo:
        x = todo.popleft()
        for y in g.predecessors(x):
            if y not in X and y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def _f_infinite(g: Graph, X: frozenset[str]) -> bool:
    feeds = _feeds(g, X)
    rest = g.induced(v for v in g.vertices if v not in X)
    for c in enumerate_cycles(rest):
        if any(v in feeds for v in c.vertices):
            return True
    return False


def path_name(path: Iterable[str]) -> str:
    return "".join(path)


@dataclass(frozen=True)
class PorcupineGraph:
    graph: Graph
    X: frozenset[str]
    paths: tuple[tuple[str, ...], ...]
    infinite: bool
    depth: int
    vertex_origin: Mapping[str, str] = field(default_factory=dict)
    edge_origin: Mapping[str, str] = field(default_factory=dict)

    @property
    def spine(self) -> list[str]:
        return [v for v in self.graph.vertices if v not in self.X]

    def to_json(self) -> dict:
        return {
            "X": sorted(self.X),
            "infinite": self.infinite,
            "depth": self.depth,
            "paths": [path_name(p) for p in self.paths],
            "graph": self.graph.to_dict(),
            "provenance": {
                "vertices": dict(sorted(self.vertex_origin.items())),
                "edges": dict(sorted(self.edge_origin.items())),
            },
        }


def porcupine(g: Graph, X: Iterable[str], depth_bound: int | None = None) -> PorcupineGraph:
    """The graph ``_X E``: ``X`` with its internal edges plus a new vertex
    ``w^{α}`` and edge ``f^{α}`` for every path ``α`` in ``F(X)``.

    When ``F(X)`` is infinite only paths of length at most ``depth_bound``
    are materialized and ``infinite`` is set.
    """
    fx = f_of_x(g, X, depth_bound)
    X = fx.X
    verts = [v for v in g.vertices if v in X]
    vorig = {v: v for v in verts}
    edges = [e for e in g.edges if e.src in X and e.dst in X]
    eorig = {e.id: e.id for e in edges}
    lookup = {}
    for e in g.edges:
        if e.src in X or e.infinite:
            continue
        for c in _copies(e):
            lookup[c] = e
    for alpha in fx.paths:
        w = f"w^{{{path_name(alpha)}}}"
        verts.append(w)
        vorig[w] = path_name(alpha)
    for alpha in fx.paths:
        src = f"w^{{{path_name(alpha)}}}"
        dst = lookup[alpha[0]].dst if len(alpha) == 1 else f"w^{{{path_name(alpha[1:])}}}"
        fid = f"f^{{{path_name(alpha)}}}"
        edges.append(EdgeBundle(fid, src, dst, 1))
        eorig[fid] = path_name(alpha)
    return PorcupineGraph(Graph(verts, edges), X, fx.paths, fx.infinite, fx.depth, vorig, eorig)


# -- algebra descriptors -------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixAlg:
    size: int
    ring: Ring

    def render(self, symbols=None) -> str:
        r = self.ring.render(symbols)
        return r if self.size == 1 else f"M_{self.size}({r})"


@dataclass(frozen=True)
class MatrixLaurent:
    size: int
    ring: Ring

    def render(self, symbols=None) -> str:
        r = self.ring.render(symbols) + "[x,x^-1]"
        return r if self.size == 1 else f"M_{self.size}({r})"


@dataclass(frozen=True)
class NamedLPA:
    label: str
    ring: Ring

    def render(self, symbols=None) -> str:
        r = self.ring.render(symbols)
        r = r if len(r) == 1 else "{" + r + "}"
        return f"L_{r}({self.label})"


Term = MatrixAlg | MatrixLaurent | NamedLPA


def term_json(t: Term) -> dict:
    if isinstance(t, NamedLPA):
        return {"type": "NamedLPA", "label": t.label, "ring": t.ring.to_json()}
    return {"type": type(t).__name__, "size": t.size, "ring": t.ring.to_json()}


@dataclass(frozen=True)
class AlgebraDescriptor:
    """A formal direct sum; zero-ring terms never appear."""

    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(t for t in self.terms if not t.ring.is_zero))

    def __add__(self, other: "AlgebraDescriptor") -> "AlgebraDescriptor":
        return AlgebraDescriptor(self.terms + other.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def render(self, symbols=None) -> str:
        if not self.terms:
            return "0"
        return " (+) ".join(t.render(symbols) for t in self.terms)

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> dict:
        return {"terms": [term_json(t) for t in self.terms], "text": self.render()}


def count_paths_into(g: Graph, w: str) -> int | float:
    """Number of paths (trivial one included) ending at ``w``; ``g`` acyclic."""
    memo: dict[str, int | float] = {}

    def n(x: str):
        if x not in memo:
            memo[x] = 1 + sum((e.mult * n(e.src) for e in g.in_edges(x)), 0)
        return memo[x]

    return n(w)


def is_toeplitz(g: Graph) -> bool:
    """Two vertices: one loop at ``u`` and one edge ``u -> v``, all simple."""
    if len(g) != 2 or len(g.edges) != 2 or any(e.mult != 1 for e in g.edges):
        return False
    loops = [e for e in g.edges if e.src == e.dst]
    others = [e for e in g.edges if e.src != e.dst]
    return len(loops) == 1 and len(others) == 1 and others[0].src == loops[0].src


def recognize(g: Graph, r: Ring, name: str = "E") -> AlgebraDescriptor:
    """Closed forms for components whose structure is forced; everything else
    stays a named Leavitt path algebra.

    * no cycle has an exit: ``⊕_w M_{n_w}(R) ⊕ ⊕_c M_{n_c}(R[x,x^-1])`` over
      sinks ``w`` and cycles ``c``, where ``n_w`` counts paths ending at ``w``
      and ``n_c`` counts paths ending at the base of ``c`` that do not run
      around the whole cycle
    * the Toeplitz graph: ``L_R(T)``
    """
    if not g.row_finite:
        raise GraphError("recognition needs finite multiplicities")
    if r.is_zero:
        return AlgebraDescriptor()
    comps = weak_components(g)
    terms: list[Term] = []
    for comp in comps:
        sub = g.induced(comp)
        label = name if len(comps) == 1 else f"{name}|{fmt_set(comp)}"
        terms.extend(_recognize_component(sub, r, label))
    return AlgebraDescriptor(tuple(terms))


def _recognize_component(g: Graph, r: Ring, label: str) -> list[Term]:
    cycles = enumerate_cycles(g)
    if not any(has_exit(g, c) for c in cycles):
        # paths into a base that skip the full cycle are exactly the paths
        # of the graph with the cycle's first edge removed
        cut_ids = {c.edges[0] for c in cycles}
        cut = Graph(g.vertices, [e for e in g.edges if e.id not in cut_ids])
        sinks = [v for v in g.sorted_vertices() if not g.out_edges(v)]
        terms: list[Term] = [MatrixAlg(int(count_paths_into(cut, w)), r) for w in sinks]
        terms += [MatrixLaurent(int(count_paths_into(cut, c.base)), r) for c in cycles]
        return terms
    if is_toeplitz(g):
        return [NamedLPA("T", r)]
    return [NamedLPA(label, r)]


# -- isomorphism ----------------------------------------------------------------------


def _signature(g: Graph, v: str) -> tuple:
    out = sorted((e.mult for e in g.out_edges(v) if e.dst != v), key=float)
    inc = sorted((e.mult for e in g.in_edges(v) if e.src != v), key=float)
    loop = g.bundle(v, v)
    return (tuple(out), tuple(inc), loop.mult if loop else 0)


def find_isomorphism(g1: Graph, g2: Graph) -> dict[str, str] | None:
    """An exact vertex bijection preserving every bundle and multiplicity.

    Candidates are pruned by degree signature, then extended by backtracking
    in order of fewest candidates.
    """
    if len(g1) != len(g2) or len(g1.edges) != len(g2.edges):
        return None
    sig1 = {v: _signature(g1, v) for v in g1.vertices}
    sig2 = {v: _signature(g2, v) for v in g2.vertices}
    if sorted(map(repr, sig1.values())) != sorted(map(repr, sig2.values())):
        return None
    cands = {v: [w for w in g2.sorted_vertices() if sig2[w] == sig1[v]] for v in g1.vertices}
    order = sorted(g1.vertices, key=lambda v: (len(cands[v]), v))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v: str, w: str) -> bool:
        for a, b in mapping.items():
            e1, e2 = g1.bundle(v, a), g2.bundle(w, b)
            if (e1 and e1.mult) != (e2 and e2.mult):
                return False
            e1, e2 = g1.bundle(a, v), g2.bundle(b, w)
            if (e1 and e1.mult) != (e2 and e2.mult):
                return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in cands[v]:
            if w not in used and consistent(v, w):
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return dict(sorted(mapping.items())) if extend(0) else None


def isomorphic(g1: Graph, g2: Graph) -> bool:
    return find_isomorphism(g1, g2) is not None
