"""Hasse-diagram rendering to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .lattice import QuotientPoset, transitive_reduction


def _levels(n, leq):
    """Longest-chain height of every node (0 for minimal ones)."""
    preds = {i: [j for j in range(n) if j != i and (j, i) in leq] for i in range(n)}
    level = {}
    remaining = set(range(n))
    while remaining:
        progressed = False
        for i in sorted(remaining):
            if all(j in level for j in preds[i]):
                level[i] = 1 + max((level[j] for j in preds[i]), default=-1)
                remaining.discard(i)
                progressed = True
                break
        if not progressed:
            raise ValueError("order relation has a cycle")
    return level


def render_hasse(labels, leq, path, sublabels=None, title=None):
    """Draw the transitive reduction of an order on `labels` and save it.

    `leq` holds (i, j) index pairs; `sublabels` adds a smaller caption under
    each node (the lattice command uses it for h-values).
    """
    n = len(labels)
    level = _levels(n, leq)
    by_level = {}
    for i in sorted(level):
        by_level.setdefault(level[i], []).append(i)

    pos = {}
    for lv, nodes in sorted(by_level.items()):
        for k, i in enumerate(nodes):
            pos[i] = (k - (len(nodes) - 1) / 2.0, lv)

    width = max(4.0, 1.8 * max(len(v) for v in by_level.values()))
    height = max(3.0, 1.4 * (max(by_level) + 1))
    fig, ax = plt.subplots(figsize=(width, height))
    for (i, j) in transitive_reduction(n, leq):
        (x1, y1), (x2, y2) = pos[i], pos[j]
        ax.plot([x1, x2], [y1, y2], color="0.4", zorder=1)
    for i in range(n):
        x, y = pos[i]
        ax.scatter([x], [y], s=600, color="white", edgecolors="black", zorder=2)
        ax.annotate(labels[i], (x, y), ha="center", va="center", fontsize=9, zorder=3)
        if sublabels is not None:
            ax.annotate(sublabels[i], (x, y - 0.22), ha="center", va="top",
                        fontsize=7, color="0.35", zorder=3)
    if title:
        ax.set_title(title)
    ax.set_axis_off()
    ax.margins(0.2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_poset(poset: QuotientPoset, path, title=None):
    labels = [c.label for c in poset.classes]
    sublabels = ["{" + ",".join(c.hvalue) + "}" for c in poset.classes]
    return render_hasse(labels, poset.leq, path, sublabels=sublabels, title=title)
