"""Finite directed multigraphs with edge multiplicities.

Parallel edges between the same pair of vertices are stored as a single
:class:`EdgeBundle` carrying a multiplicity; the multiplicity may be
:data:`INF` to model an infinite emitter while the vertex set stays finite.

Vertex sets are always finite. Graphs with infinitely many vertices, such as
the infinite clock ``C_ℕ`` (one hub with an edge to each of countably many
sinks), have no input encoding: a bundle of multiplicity ``INF`` has a single
range vertex, so it cannot stand in for infinitely many distinct sinks.
"""

from __future__ import annotations

import enum
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

INF = math.inf


class GraphError(ValueError):
    """Raised for malformed graphs or references to unknown vertices/edges."""


def _check_mult(m) -> int | float:
    if m == INF:
        return INF
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise GraphError(f"multiplicity must be a positive integer or INF, got {m!r}")
    return m


@dataclass(frozen=True, order=True)
class EdgeBundle:
    id: str
    src: str
    dst: str
    mult: int | float = 1

    def __post_init__(self):
        object.__setattr__(self, "mult", _check_mult(self.mult))

    @property
    def infinite(self) -> bool:
        return self.mult == INF


class VertexClass(enum.Enum):
    SINK = "Sink"
    REGULAR = "Regular"
    INFINITE_EMITTER = "InfiniteEmitter"


class Graph:
    """Immutable finite graph ``(E^0, E^1, r, s)`` with bundled parallel edges."""

    __slots__ = ("vertices", "edges", "_vset", "_out", "_in", "_by_id", "_pair")

    def __init__(self, vertices: Iterable[str], edges: Iterable[EdgeBundle] = ()):
        vertices = tuple(vertices)
        edges = tuple(edges)
        vset = frozenset(vertices)
        if len(vset) != len(vertices):
            raise GraphError("duplicate vertex identifiers")
        for v in vertices:
            if not isinstance(v, str) or not v:
                raise GraphError(f"vertex identifiers must be non-empty strings: {v!r}")
        out: dict[str, list[EdgeBundle]] = {v: [] for v in vertices}
        inc: dict[str, list[EdgeBundle]] = {v: [] for v in vertices}
        by_id: dict[str, EdgeBundle] = {}
        pair: dict[tuple[str, str], EdgeBundle] = {}
        for e in edges:
            if e.src not in vset or e.dst not in vset:
                raise GraphError(f"edge {e.id!r} references an undeclared vertex")
            if e.id in by_id:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if (e.src, e.dst) in pair:
                raise GraphError(
                    f"two bundles {pair[e.src, e.dst].id!r}, {e.id!r} share ({e.src}, {e.dst}); "
                    "use a multiplicity instead"
                )
            by_id[e.id] = e
            pair[e.src, e.dst] = e
            out[e.src].append(e)
            inc[e.dst].append(e)
        self.vertices = vertices
        self.edges = edges
        self._vset = vset
        self._out = {v: tuple(sorted(es, key=lambda b: (b.dst, b.id))) for v, es in out.items()}
        self._in = {v: tuple(sorted(es, key=lambda b: (b.src, b.id))) for v, es in inc.items()}
        self._by_id = by_id
        self._pair = pair

    # -- basic accessors -------------------------------------------------

    def __contains__(self, v) -> bool:
        return v in self._vset

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"Graph(vertices={list(self.vertices)!r}, edges={list(self.edges)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vset == other._vset and set(self.edges) == set(other.edges)

    def __hash__(self) -> int:
        return hash((self._vset, frozenset(self.edges)))

    @property
    def vertex_set(self) -> frozenset[str]:
        return self._vset

    def check_vertex(self, v: str) -> None:
        if v not in self._vset:
            raise GraphError(f"unknown vertex {v!r}")

    def check_vertices(self, xs: Iterable[str]) -> frozenset[str]:
        xs = frozenset(xs)
        bad = sorted(xs - self._vset)
        if bad:
            raise GraphError(f"unknown vertices {bad}")
        return xs

    def edge(self, eid: str) -> EdgeBundle:
        try:
            return self._by_id[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def bundle(self, src: str, dst: str) -> EdgeBundle | None:
        return self._pair.get((src, dst))

    def out_edges(self, v: str) -> tuple[EdgeBundle, ...]:
        self.check_vertex(v)
        return self._out[v]

    def in_edges(self, v: str) -> tuple[EdgeBundle, ...]:
        self.check_vertex(v)
        return self._in[v]

    def successors(self, v: str) -> list[str]:
        return [e.dst for e in self.out_edges(v)]

    def predecessors(self, v: str) -> list[str]:
        return [e.src for e in self.in_edges(v)]

    def out_mult(self, v: str) -> int | float:
        return sum((e.mult for e in self.out_edges(v)), 0)

    @property
    def row_finite(self) -> bool:
        return not any(e.infinite for e in self.edges)

    def induced(self, xs: Iterable[str]) -> "Graph":
        """Full subgraph on ``xs`` (edges with both ends in ``xs``)."""
        xs = self.check_vertices(xs)
        return Graph(
            [v for v in self.vertices if v in xs],
            [e for e in self.edges if e.src in xs and e.dst in xs],
        )

    def sorted_vertices(self, xs: Iterable[str] | None = None) -> list[str]:
        return sorted(self.vertices if xs is None else xs)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "src": e.src, "dst": e.dst, "mult": "inf" if e.infinite else e.mult}
                for e in self.edges
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Graph":
        if not isinstance(data, Mapping) or "vertices" not in data:
            raise GraphError("graph JSON must be an object with a 'vertices' list")
        edges = []
        for i, raw in enumerate(data.get("edges", [])):
            try:
                mult = raw.get("mult", 1)
                if isinstance(mult, str):
                    if mult.lower() not in ("inf", "infinity", "∞"):
                        raise GraphError(f"edge {i}: bad multiplicity {mult!r}")
                    mult = INF
                edges.append(EdgeBundle(str(raw["id"]), str(raw["src"]), str(raw["dst"]), mult))
            except (KeyError, TypeError, AttributeError) as exc:
                raise GraphError(f"edge {i}: malformed entry {raw!r}") from exc
        vertices = data["vertices"]
        if not isinstance(vertices, list):
            raise GraphError("'vertices' must be a list")
        return cls([str(v) for v in vertices], edges)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dot(self, name: str = "E") -> str:
        lines = [f"digraph {_dot_id(name)} {{"]
        for v in self.sorted_vertices():
            lines.append(f"  {_dot_id(v)} [label={_dot_id(v)}];")
        for e in sorted(self.edges, key=lambda b: (b.src, b.dst, b.id)):
            label = e.id
            if e.infinite:
                label += " x∞"
            elif e.mult > 1:
                label += f" x{e.mult}"
            lines.append(f"  {_dot_id(e.src)} -> {_dot_id(e.dst)} [label={_dot_id(label)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def make_graph(vertices: Iterable[str], edges: Iterable[tuple]) -> Graph:
    """Shorthand: ``edges`` are ``(id, src, dst)`` or ``(id, src, dst, mult)`` tuples."""
    return Graph(vertices, [EdgeBundle(*t) for t in edges])


# -- vertex predicates ------------------------------------------------------


def classify_vertex(g: Graph, v: str) -> VertexClass:
    out = g.out_mult(v)
    if out == 0:
        return VertexClass.SINK
    if out == INF:
        return VertexClass.INFINITE_EMITTER
    return VertexClass.REGULAR


def is_regular(g: Graph, v: str) -> bool:
    return classify_vertex(g, v) is VertexClass.REGULAR


def _reach(start: str, step) -> frozenset[str]:
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for y in step(x):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def tree(g: Graph, v: str) -> frozenset[str]:
    """All vertices reachable from ``v``, ``v`` included."""
    g.check_vertex(v)
    return _reach(v, g.successors)


def upstream(g: Graph, v: str) -> frozenset[str]:
    """All vertices from which ``v`` is reachable, ``v`` included."""
    g.check_vertex(v)
    return _reach(v, g.predecessors)


def geq(g: Graph, v: str, w: str) -> bool:
    """``v >= w``: there is a (possibly trivial) path from v to w."""
    return w in tree(g, v)


# -- cycles -----------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A cycle in canonical rotation (smallest vertex id first).

    ``edges[i]`` is the bundle from ``vertices[i]`` to ``vertices[i + 1]``
    (cyclically); ``mults`` records each bundle's multiplicity.
    """

    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    mults: tuple[int | float, ...]

    @property
    def base(self) -> str:
        return self.vertices[0]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def multiplicity(self) -> int | float:
        return math.prod(self.mults)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": list(self.edges),
            "mults": ["inf" if m == INF else m for m in self.mults],
        }

    def __str__(self) -> str:
        return "[" + "; ".join(self.vertices) + " | " + " ".join(self.edges) + "]"


def _make_cycle(g: Graph, vs: list[str]) -> Cycle:
    k = vs.index(min(vs))
    vs = vs[k:] + vs[:k]
    bundles = [g.bundle(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
    return Cycle(tuple(vs), tuple(b.id for b in bundles), tuple(b.mult for b in bundles))


def enumerate_cycles(g: Graph) -> list[Cycle]:
    """All cycles of ``g`` up to rotation, in lexicographic order of vertex lists."""
    found: list[Cycle] = []
    for s in g.sorted_vertices():
        # only visit vertices > s, so each cycle is found once from its minimum
        path = [s]
        on_path = {s}

        def dfs(x: str):
            for y in g.successors(x):
                if y == s:
                    found.append(_make_cycle(g, list(path)))
                elif y > s and y not in on_path:
                    path.append(y)
                    on_path.add(y)
                    dfs(y)
                    path.pop()
                    on_path.discard(y)

        dfs(s)
    found.sort(key=lambda c: (c.vertices, c.edges))
    return found


def check_cycle(g: Graph, c: Cycle) -> None:
    n = len(c.vertices)
    if n == 0 or len(set(c.vertices)) != n or len(c.edges) != n:
        raise GraphError(f"not a cycle: {c}")
    for i, eid in enumerate(c.edges):
        e = g.edge(eid)
        if e.src != c.vertices[i] or e.dst != c.vertices[(i + 1) % n]:
            raise GraphError(f"not a cycle of this graph: {c}")


def cycle_exits(g: Graph, c: Cycle) -> list[tuple[str, int | float]]:
    """Exit bundles of ``c`` as ``(edge id, number of exiting copies)``.

    Extra parallel copies of a cycle bundle count as exits.
    """
    check_cycle(g, c)
    own = set(c.edges)
    exits = []
    for v in c.vertices:
        for e in g.out_edges(v):
            if e.id not in own:
                exits.append((e.id, e.mult))
            elif e.mult > 1:
                exits.append((e.id, e.mult - 1 if e.mult != INF else INF))
    return exits


def has_exit(g: Graph, c: Cycle) -> bool:
    return bool(cycle_exits(g, c))


def simple_closed_path_count(g: Graph, v: str) -> int:
    """Number of simple closed paths based at ``v``, saturated at 2.

    Parallel copies count as distinct edges; an infinite bundle on such a path
    or a cycle avoiding ``v`` along such a path yields 2 ("at least two").
    """
    g.check_vertex(v)
    # vertices (other than v) lying on some path v -> ... -> v avoiding v inside
    fwd = _reach_avoiding(g, [e.dst for e in g.out_edges(v) if e.dst != v], v, g.successors)
    bwd = _reach_avoiding(g, [e.src for e in g.in_edges(v) if e.src != v], v, g.predecessors)
    mid = fwd & bwd

    def sat(x):
        return min(x, 2)

    # paths from x to v through mid, counted with saturation; cycles inside mid -> 2
    memo: dict[str, int] = {}
    state: dict[str, int] = {}

    def count_to_v(x: str) -> int:
        if x in memo:
            return memo[x]
        if state.get(x) == 1:
            raise _CycleFound
        state[x] = 1
        total = 0
        for e in g.out_edges(x):
            if e.dst == v:
                total = sat(total + sat(e.mult))
            elif e.dst in mid:
                sub = count_to_v(e.dst)
                if sub:
                    total = sat(total + sat(e.mult * sub))
        state[x] = 2
        memo[x] = total
        return total

    total = 0
    try:
        for e in g.out_edges(v):
            if e.dst == v:
                total = sat(total + sat(e.mult))
            elif e.dst in mid:
                sub = count_to_v(e.dst)
                if sub:
                    total = sat(total + sat(e.mult * sub))
    except _CycleFound:
        return 2
    return total


class _CycleFound(Exception):
    pass


def _reach_avoiding(g: Graph, starts, avoid: str, step) -> frozenset[str]:
    seen = set(s for s in starts if s != avoid)
    todo = deque(seen)
    while todo:
        x = todo.popleft()
        for y in step(x):
            if y != avoid and y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def condition_L(g: Graph) -> bool:
    return all(has_exit(g, c) for c in enumerate_cycles(g))


def condition_K(g: Graph) -> bool:
    return all(simple_closed_path_count(g, v) != 1 for v in g.vertices)


def cu_cycles(g: Graph) -> list[Cycle]:
    """Cycles whose base carries exactly one simple closed path."""
    return [c for c in enumerate_cycles(g) if simple_closed_path_count(g, c.base) == 1]


def cycle_downset(g: Graph, c: Cycle) -> frozenset[str]:
    """Hereditary saturated closure of the ranges of the exits of ``c``."""
    from .lattice import saturated_closure

    ranges = {g.edge(eid).dst for eid, _ in cycle_exits(g, c)}
    return saturated_closure(g, ranges)


def weak_components(g: Graph) -> list[frozenset[str]]:
    """Weakly connected components, ordered by their smallest vertex."""
    left = set(g.vertices)
    comps = []
    for v in g.sorted_vertices():
        if v not in left:
            continue
        comp = _reach(v, lambda x: g.successors(x) + g.predecessors(x))
        left -= comp
        comps.append(comp)
    return comps
