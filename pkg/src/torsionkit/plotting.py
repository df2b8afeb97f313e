"""Figures for the ``report`` command; rendered off-screen to PNG files."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .lattice import DIAGRAM_EDGES, DIAGRAM_POSITIONS  # noqa: E402


def plot_diagram(path: Path, highlight: Sequence[str] = ()) -> Path:
    """Draw the grid of C_ij building blocks with their diagram edges."""
    fig, ax = plt.subplots(figsize=(6, 5))
    xy = {n: (c, -r) for n, (r, c) in DIAGRAM_POSITIONS.items()}
    for a, b in DIAGRAM_EDGES:
        (x0, y0), (x1, y1) = xy[a], xy[b]
        ax.plot([x0, x1], [y0, y1], color="0.6", lw=1.2, zorder=1)
    marked = set(highlight)
    for n, (x, y) in sorted(xy.items()):
        face = "#f4a259" if n in marked else "#8ecae6"
        ax.scatter([x], [y], s=900, color=face, edgecolor="k", zorder=2)
        ax.text(x, y, n, ha="center", va="center", fontsize=9, zorder=3)
    ax.set_axis_off()
    ax.set_title("Building blocks C_ij" + (f" (marked: {len(marked)})" if marked else ""))
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def plot_mutations(path: Path, rows) -> Path:
    """Bar chart of scripts broken per removed rule, direct vs. through the chain."""
    rows = sorted(rows, key=lambda r: (-len(r.broken), r.rule))
    names = [r.rule for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.3 * len(rows)), 4))
    xs = range(len(rows))
    ax.bar(xs, [len(r.broken) for r in rows], color="#219ebc", label="transitive")
    ax.bar(xs, [len(r.direct) for r in rows], color="#fb8500", width=0.5, label="direct")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=90, fontsize=7)
    ax.set_ylabel("scripts Invalid")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def plot_hull_sizes(path: Path, sizes: dict[str, int]) -> Path:
    names = list(sizes)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar(range(len(names)), [sizes[n] for n in names], color="#8ecae6", edgecolor="k")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=60, fontsize=8)
    ax.set_ylabel("profiles in closure")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
