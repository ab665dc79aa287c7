"""Matplotlib figures for graphs and Hasse diagrams, written next to the
textual reports."""

from __future__ import annotations

from pathlib import Path
from typing import Hashable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle, FancyArrowPatch  # noqa: E402

from .graph import Graph  # noqa: E402

STYLE = {
    "font.size": 10,
    "font.family": "DejaVu Sans",
    "axes.linewidth": 0.0,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _graph_layers(g: Graph) -> dict[str, int]:
    # longest-path layering over the DFS tree/forward/cross edges (back edges ignored)
    order: list[str] = []
    state: dict[str, int] = {}
    back = set()

    def dfs(v):
        state[v] = 1
        for e in g.out_edges(v):
            w = e.dst
            if state.get(w) == 1:
                back.add(e.id)
            elif w not in state:
                dfs(w)
        state[v] = 2
        order.append(v)

    for v in g.sorted_vertices():
        if v not in state:
            dfs(v)
    layer = {v: 0 for v in g.vertices}
    for v in reversed(order):
        for e in g.out_edges(v):
            if e.id not in back and e.dst != v:
                layer[e.dst] = max(layer[e.dst], layer[v] + 1)
    return layer


def _positions(layers: dict[Hashable, int], horizontal: bool) -> dict[Hashable, tuple[float, float]]:
    rows: dict[int, list] = {}
    for k, l in layers.items():
        rows.setdefault(l, []).append(k)
    pos = {}
    for l, ks in rows.items():
        ks.sort(key=str)
        for i, k in enumerate(ks):
            off = i - (len(ks) - 1) / 2
            pos[k] = (l, -off) if horizontal else (off, l)
    return pos


def draw_graph(g: Graph, ax=None, title: str | None = None):
    """Layered drawing of ``g``; edge labels carry id and multiplicity."""
    with plt.rc_context(STYLE):
        if ax is None:
            _, ax = plt.subplots(figsize=(max(3, 1.6 * len(g)), 2.6))
        pos = _positions(_graph_layers(g), horizontal=True)
        for e in g.edges:
            label = e.id + ("" if e.mult == 1 else (" x∞" if e.infinite else f" x{e.mult}"))
            (x0, y0), (x1, y1) = pos[e.src], pos[e.dst]
            if e.src == e.dst:
                ax.add_patch(Circle((x0, y0 + 0.16), 0.14, fill=False, ec="0.25", lw=1.2))
                ax.plot([x0 + 0.02], [y0 + 0.02], marker=(3, 0, 200), color="0.25", markersize=6)
                ax.text(x0, y0 + 0.34, label, ha="center", va="bottom", fontsize=8)
                continue
            rad = 0.25 if g.bundle(e.dst, e.src) is not None else 0.0
            arrow = FancyArrowPatch((x0, y0), (x1, y1), connectionstyle=f"arc3,rad={rad}",
                                    arrowstyle="-|>", mutation_scale=10, shrinkA=12, shrinkB=12,
                                    color="0.25")
            ax.add_patch(arrow)
            ax.text((x0 + x1) / 2, (y0 + y1) / 2 + 0.08 + rad / 2, label, ha="center",
                    va="bottom", fontsize=8)
        for v, (x, y) in pos.items():
            ax.plot([x], [y], "o", color="k", markersize=5)
            ax.text(x, y - 0.12, v, ha="center", va="top")
        _finish(ax, pos, title)
        return ax


def draw_hasse(elements: Sequence, covers: Sequence[tuple], ax=None, title: str | None = None,
               label=str):
    """Hasse diagram; elements are stacked by rank (longest chain from below)."""
    with plt.rc_context(STYLE):
        rank = {x: 0 for x in elements}
        changed = True
        while changed:
            changed = False
            for a, b in covers:
                if rank[b] < rank[a] + 1:
                    rank[b] = rank[a] + 1
                    changed = True
        if ax is None:
            width = max(len([x for x in elements if rank[x] == r]) for r in set(rank.values())) if elements else 1
            _, ax = plt.subplots(figsize=(max(3, 2.2 * width), 1.1 * (max(rank.values(), default=0) + 2)))
        pos = _positions(rank, horizontal=False)
        for a, b in covers:
            (x0, y0), (x1, y1) = pos[a], pos[b]
            ax.plot([x0, x1], [y0, y1], "-", color="0.4", linewidth=1)
        for x, (px, py) in pos.items():
            ax.text(px, py, label(x), ha="center", va="center",
                    bbox=dict(boxstyle="round,pad=0.25", fc="white", ec="0.3"))
        _finish(ax, pos, title)
        return ax


def _finish(ax, pos, title):
    xs = [p[0] for p in pos.values()] or [0]
    ys = [p[1] for p in pos.values()] or [0]
    ax.set_xlim(min(xs) - 0.7, max(xs) + 0.7)
    ax.set_ylim(min(ys) - 0.6, max(ys) + 0.7)
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_aspect("auto")
    for s in ax.spines.values():
        s.set_visible(False)
    if title:
        ax.set_title(title)


def save_graphs(graphs: Sequence[tuple[str, Graph]], path: str | Path) -> Path:
    """One panel per ``(title, graph)``, stacked vertically."""
    path = Path(path)
    with plt.rc_context(STYLE):
        n = max(len(graphs), 1)
        width = max((len(g) for _, g in graphs), default=1)
        fig, axes = plt.subplots(n, 1, figsize=(max(3.5, 1.7 * width), 2.6 * n), squeeze=False)
        for ax, (title, g) in zip(axes[:, 0], graphs):
            draw_graph(g, ax=ax, title=title)
        fig.savefig(path)
        plt.close(fig)
    return path


def save_hasse(elements: Sequence, covers: Sequence[tuple], path: str | Path, title: str | None = None,
               label=str) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        ax = draw_hasse(elements, covers, title=title, label=label)
        ax.figure.savefig(path)
        plt.close(ax.figure)
    return path
