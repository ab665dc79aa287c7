"""``lpa``: command-line front end.

Exit status: 0 on success, 1 when a validation fails (the report is still
printed), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from importlib import resources
from pathlib import Path

from . import constructions as C
from . import graded as G
from . import lattice as L
from .graph import (
    Graph,
    GraphError,
    condition_K,
    condition_L,
    cu_cycles,
    cycle_downset,
)
from .ideals import IdealError, Ring, Z, parse_symbols
from .quotients import (
    NotIBasic,
    NotRowFinite,
    cross_check,
    decompose,
    quotient_ibasic,
)

COMMANDS = (
    "lattice", "pairs", "check-k", "cu", "validate-f", "validate-phi", "phi", "f",
    "classify", "member", "max-basic", "quotient-graph", "porcupine", "quotient",
    "decompose", "cross-check",
)


class Malformed(Exception):
    """Input could not be parsed (exit 2)."""


class Failed(Exception):
    """A check failed; ``report`` is printed before exiting 1."""

    def __init__(self, report: str):
        super().__init__(report)
        self.report = report


# -- input ----------------------------------------------------------------------------


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("lpa") / "corpus" / name))


def resolve(path: str) -> Path:
    """A filesystem path, or the bundled corpus file of the same basename."""
    p = Path(path)
    if p.exists():
        return p
    bundled = corpus_path(p.name)
    if bundled.exists():
        return bundled
    raise Malformed(f"no such file: {path}")


def load_json(path: str):
    p = resolve(path)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise Malformed(f"{path}: invalid JSON ({exc})") from exc


def load_graph(path: str) -> tuple[Graph, str]:
    data = load_json(path)
    try:
        g = Graph.from_dict(data)
    except GraphError as exc:
        raise Malformed(f"{path}: {exc}") from exc
    return g, str(data.get("name", "E")) if isinstance(data, dict) else "E"


def load_f(path: str, lat: L.PairLattice) -> G.SaturatedFn:
    try:
        f = G.SaturatedFn.from_json(load_json(path))
    except (G.FunctionError, IdealError, L.LatticeError) as exc:
        raise Malformed(f"{path}: {exc}") from exc
    G.check_total_f(lat, f)
    return f


def load_phi(path: str, lat: L.PairLattice) -> G.GradedIdealFn:
    try:
        phi = G.GradedIdealFn.from_json(load_json(path))
    except (G.FunctionError, IdealError) as exc:
        raise Malformed(f"{path}: {exc}") from exc
    G.check_total_phi(lat, phi)
    return phi


def vertex_list(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [v.strip() for v in raw.split(",") if v.strip()]


def need(args, attr: str, flag: str):
    val = getattr(args, attr)
    if val is None:
        raise Malformed(f"{args.command} needs {flag}")
    return val


def depth_of(args) -> int | None:
    if args.depth is not None:
        return args.depth
    env = os.environ.get("LPA_DEPTH")
    if env:
        try:
            return int(env)
        except ValueError:
            raise Malformed(f"LPA_DEPTH must be an integer, got {env!r}") from None
    return None


# -- rendering helpers -----------------------------------------------------------------------


def dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def hasse_dot(name: str, labels: list[str], covers: list[tuple[int, int]]) -> str:
    lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
    for i, lab in enumerate(labels):
        lines.append(f'  n{i} [label="{lab}"];')
    for a, b in covers:
        lines.append(f"  n{a} -> n{b} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def is_chain(n: int, covers) -> bool:
    return len(covers) == max(n - 1, 0) and all(
        sum(1 for a, _ in covers if a == i) <= 1 and sum(1 for _, b in covers if b == i) <= 1
        for i in range(n)
    )


# -- commands -------------------------------------------------------------------------------


def cmd_lattice(args, g, name):
    sets = L.enumerate_HE(g)
    idx = {s: i for i, s in enumerate(sets)}
    covers = [(idx[a], idx[b]) for a, b in L.he_covers(sets)]
    labels = [L.fmt_set(s) if s else "∅" for s in sets]
    if args.plot:
        from .plotting import save_hasse

        save_hasse(labels, [(labels[a], labels[b]) for a, b in covers], args.plot, title=f"H_{name}")
    if args.format == "json":
        return dump({"elements": [sorted(s) for s in sets], "covers": covers})
    if args.format == "dot":
        return hasse_dot(f"H_{name}", labels, covers)
    out = [f"H_{name}: {len(sets)} hereditary saturated sets"]
    out += [f"  [{i}] {lab}" for i, lab in enumerate(labels)]
    out += ["covers:"] + [f"  {labels[a]} < {labels[b]}" for a, b in covers]
    return "\n".join(out)


def cmd_pairs(args, g, name):
    lat = L.enumerate_TE(g)
    els = lat.nonzero
    idx = {p: i for i, p in enumerate(els)}
    covers = [(idx[a], idx[b]) for a, b in lat.covers(els)]
    labels = [str(p) for p in els]
    chain = is_chain(len(els), covers)
    if args.plot:
        from .plotting import save_hasse

        save_hasse(labels, [(labels[a], labels[b]) for a, b in covers], args.plot, title=f"T*_{name}")
    if args.format == "json":
        return dump({"elements": [p.to_dict() for p in els], "covers": covers, "chain": chain})
    if args.format == "dot":
        return hasse_dot(f"T*_{name}", labels, covers)
    out = [f"T*_{name}: {len(els)} admissible pairs" + (" (a chain)" if chain else "")]
    out += [f"  [{i}] {lab}" for i, lab in enumerate(labels)]
    out += ["covers:"] + [f"  {labels[a]} < {labels[b]}" for a, b in covers]
    return "\n".join(out)


def cmd_check_k(args, g, name):
    k, l = condition_K(g), condition_L(g)
    if args.format == "json":
        return dump({"condition_K": k, "condition_L": l, "all_ideals_graded": k})
    tf = lambda b: "true" if b else "false"  # noqa: E731
    return f"Condition (K): {tf(k)}; all ideals graded: {tf(k)}\nCondition (L): {tf(l)}"


def cmd_cu(args, g, name):
    cycles = cu_cycles(g)
    rows = [(c, cycle_downset(g, c)) for c in cycles]
    if args.format == "json":
        return dump([{"cycle": c.to_dict(), "downset": sorted(d)} for c, d in rows])
    if not rows:
        return "C_u(E) = ∅"
    return "\n".join(f"{c}  c_↓ = {L.fmt_set(d) if d else '∅'}" for c, d in rows)


def _report(rep: G.Report, fmt: str) -> str:
    return dump(rep.to_json()) if fmt == "json" else "\n".join(rep.lines())


def cmd_validate_f(args, g, name):
    lat = L.enumerate_TE(g)
    rep = G.validate_saturated(lat, load_f(need(args, "f", "--f"), lat))
    text = _report(rep, args.format)
    if not rep.ok:
        raise Failed(text)
    return text


def cmd_validate_phi(args, g, name):
    lat = L.enumerate_TE(g)
    rep = G.validate_phi(lat, load_phi(need(args, "phi", "--phi"), lat))
    text = _report(rep, args.format)
    if not rep.ok:
        raise Failed(text)
    return text


def _phi_text(phi: G.GradedIdealFn, symbols) -> str:
    return "\n".join(f"φ({x}) = {phi(x).render(symbols)}" for x in sorted(phi.values, key=G.XVertex.sort_key))


def _f_text(f: G.SaturatedFn, symbols) -> str:
    return "\n".join(
        f"f({p}) = {f(p).render(symbols)}" for p in sorted(f.values, key=L.AdmissiblePair.sort_key)
    )


def _get_f(args, lat) -> G.SaturatedFn:
    if args.f:
        return load_f(args.f, lat)
    if args.phi:
        phi = load_phi(args.phi, lat)
        rep = G.validate_phi(lat, phi)
        if not rep.ok:
            raise Failed("\n".join(rep.lines()))
        return G.f_from_phi(lat, phi)
    raise Malformed(f"{args.command} needs --f or --phi")


def _get_phi(args, lat) -> G.GradedIdealFn:
    if args.phi:
        return load_phi(args.phi, lat)
    if args.f:
        return G.phi_from_f(lat, load_f(args.f, lat))
    raise Malformed(f"{args.command} needs --phi or --f")


def cmd_phi(args, g, name):
    lat = L.enumerate_TE(g)
    phi = G.phi_from_f(lat, load_f(need(args, "f", "--f"), lat))
    return dump(phi.to_json()) if args.format == "json" else _phi_text(phi, args.symbols)


def cmd_f(args, g, name):
    lat = L.enumerate_TE(g)
    phi = load_phi(need(args, "phi", "--phi"), lat)
    rep = G.validate_phi(lat, phi)
    if not rep.ok:
        raise Failed(_report(rep, args.format))
    f = G.f_from_phi(lat, phi)
    return dump(f.to_json()) if args.format == "json" else _f_text(f, args.symbols)


def cmd_classify(args, g, name):
    lat = L.enumerate_TE(g)
    c = G.classify(lat, _get_f(args, lat))
    return dump(c.to_json()) if args.format == "json" else c.render(args.symbols)


def cmd_member(args, g, name):
    lat = L.enumerate_TE(g)
    phi = _get_phi(args, lat)
    k = need(args, "k", "--k")
    v = need(args, "x", "--x")
    x = G.XVertex(v, frozenset(vertex_list(args.H))) if args.H is not None else G.XVertex(v)
    try:
        ok = G.membership(lat, phi, k, x)
    except G.FunctionError as exc:
        raise Failed(str(exc)) from exc
    if args.format == "json":
        return dump({"k": k, "x": x.to_json(), "member": ok})
    return f"{k}·{x} ∈ A: {'true' if ok else 'false'}"


def cmd_max_basic(args, g, name):
    lat = L.enumerate_TE(g)
    p = G.max_basic_pair(lat, _get_f(args, lat))
    zero = p == L.BOTTOM
    if args.format == "json":
        return dump({**p.to_dict(), "zero_basic_part": zero})
    return f"maximal basic pair: {p}" + ("  (zero basic part)" if zero else "")


def _graph_out(args, graph: Graph, title: str, payload: dict, extra_text: list[str]):
    if args.plot:
        from .plotting import save_graphs

        save_graphs([(title, graph)], args.plot)
    if args.format == "json":
        return dump(payload)
    if args.format == "dot":
        return graph.to_dot(title)
    lines = [title, "  vertices: " + ", ".join(graph.vertices)]
    lines += [
        f"  {e.id}: {e.src} -> {e.dst}" + ("" if e.mult == 1 else f" (x{'∞' if e.infinite else e.mult})")
        for e in graph.edges
    ]
    return "\n".join(lines + extra_text)


def cmd_quotient_graph(args, g, name):
    p = L.AdmissiblePair(frozenset(vertex_list(args.H)), frozenset(vertex_list(args.S)))
    q = C.quotient_graph(g, p)
    return _graph_out(args, q.graph, f"{name}\\{p}", q.to_json(), [])


def cmd_porcupine(args, g, name):
    X = vertex_list(need(args, "X", "--X"))
    pg = C.porcupine(g, X, depth_of(args))
    extra = [f"  F(X): {', '.join(C.path_name(a) for a in pg.paths) or '∅'}"]
    if pg.infinite:
        extra.append(f"  infinite: true (truncated at depth {pg.depth})")
    else:
        extra.append("  infinite: false")
    return _graph_out(args, pg.graph, f"_{L.fmt_set(pg.X)}{name}", pg.to_json(), extra)


def cmd_quotient(args, g, name):
    lat = L.enumerate_TE(g)
    f = _get_f(args, lat)
    try:
        res = quotient_ibasic(g, lat, f, name)
    except NotIBasic as exc:
        epi = exc.epi
        text = dump({**epi.to_json(), "error": str(exc)}) if args.format == "json" else (
            f"{exc}\n{epi.render(args.symbols)}"
        )
        raise Failed(text) from exc
    if args.plot:
        from .plotting import save_graphs

        save_graphs([(f"{name}\\{res.pair}", res.quotient.graph)], args.plot)
    if args.format == "json":
        return dump(res.to_json())
    if args.format == "dot":
        return res.quotient.graph.to_dot(f"{name}\\{res.pair}")
    return "\n".join([
        f"classification: {res.klass.render(args.symbols)}",
        f"(H,S) = {res.pair}; I = {res.ideal.render(args.symbols)}; R/I = {res.ring.render(args.symbols)}",
        f"quotient graph {name}\\{res.pair}: vertices {', '.join(res.quotient.graph.vertices) or '∅'}",
        res.render(args.symbols),
    ])


def cmd_decompose(args, g, name):
    lat = L.enumerate_TE(g)
    phi = _get_phi(args, lat)
    dec = decompose(g, lat, phi, depth_of(args), name)
    if args.plot:
        from .plotting import save_graphs

        save_graphs(
            [(f"_{L.fmt_set(s.X)}{name}  over {s.ring}", s.porcupine.graph) for s in dec.live]
            or [("zero algebra", Graph([]))],
            args.plot,
        )
    if args.format == "json":
        return dump(dec.to_json())
    if args.format == "dot":
        return "".join(s.porcupine.graph.to_dot(f"_{L.fmt_set(s.X)}{name}") for s in dec.live)
    lines = []
    for s in dec.summands:
        tag = "vanishing" if s.vanishing else s.render(args.symbols)
        lines.append(f"I = {s.ideal.render(args.symbols)}: X = {L.fmt_set(s.X)}  -> {tag}")
    lines.append(dec.render(args.symbols))
    return "\n".join(lines)


def cmd_cross_check(args, g, name):
    if not g.row_finite:
        raise NotRowFinite("cross-check needs a row-finite graph")
    lat = L.enumerate_TE(g)
    if args.f or args.phi:
        fs = [_get_f(args, lat)]
    else:
        rng = random.Random(args.seed)
        ring = Ring(args.modulus) if args.modulus else Z
        fs = [G.random_ibasic(lat, ring, rng) for _ in range(args.trials)]
    results = [cross_check(g, lat, f, name) for f in fs]
    bad = [r for r in results if not r.ok]
    if args.format == "json":
        text = dump([r.to_json() for r in results])
    else:
        text = "\n".join(r.render(args.symbols) for r in results)
    if bad:
        raise Failed(text)
    return text


HANDLERS = {
    "lattice": cmd_lattice,
    "pairs": cmd_pairs,
    "check-k": cmd_check_k,
    "cu": cmd_cu,
    "validate-f": cmd_validate_f,
    "validate-phi": cmd_validate_phi,
    "phi": cmd_phi,
    "f": cmd_f,
    "classify": cmd_classify,
    "member": cmd_member,
    "max-basic": cmd_max_basic,
    "quotient-graph": cmd_quotient_graph,
    "porcupine": cmd_porcupine,
    "quotient": cmd_quotient,
    "decompose": cmd_decompose,
    "cross-check": cmd_cross_check,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lpa",
        description="Graded ideals and quotients of Leavitt path algebras over Z and Z_n.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("graph", help="graph JSON file (bundled corpus names also resolve)")
    ap.add_argument("--format", choices=("text", "json", "dot"), default="text")
    ap.add_argument("--f", help="saturated function JSON")
    ap.add_argument("--phi", help="graded ideal function JSON")
    ap.add_argument("--H", help="comma-separated vertex list")
    ap.add_argument("--S", help="comma-separated vertex list")
    ap.add_argument("--X", help="comma-separated vertex list for porcupine graphs")
    ap.add_argument("--k", type=int, help="ring element for membership queries")
    ap.add_argument("--x", help="vertex for membership queries (with --H: the element x^H)")
    ap.add_argument("--depth", type=int, help="porcupine truncation depth (env LPA_DEPTH)")
    ap.add_argument("--symbols", help="symbolic names for integers, e.g. p=2,q=3")
    ap.add_argument("--name", help="display name of the graph")
    ap.add_argument("--plot", help="also render a figure to this path (png/pdf/svg)")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomly generated functions")
    ap.add_argument("--trials", type=int, default=20, help="random instances for cross-check")
    ap.add_argument("--modulus", type=int, default=0, help="ring Z_n for random instances (0: Z)")
    return ap


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        args.symbols = parse_symbols(args.symbols)
        g, name = load_graph(args.graph)
        name = args.name or name
        text = HANDLERS[args.command](args, g, name)
    except Malformed as exc:
        print(f"error: {exc}", file=err)
        return 2
    except Failed as exc:
        print(exc.report, file=out)
        return 1
    except G.PartialAssignment as exc:
        print(f"error: {exc}", file=err)
        return 1
    except NotRowFinite as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (G.InvalidFunction, L.LatticeError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (GraphError, IdealError, G.FunctionError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    print(text, file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
