"""Figure rendering for histogram reports.

The CLI's report path writes the delimited histogram data and, alongside
it, a rendered figure: empirical bars scaled to density units with the
theoretical Sato-Tate curve overlaid, the spike fraction quoted in the
corner.  Uses the Agg backend; nothing here opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_histogram(hist, model=None, path="histogram.png", title=None):
    """Render one histogram (optionally with a density overlay) to a file."""
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    widths = np.diff(hist.edges)
    # bar heights in density units so the overlay is comparable
    heights = hist.empirical / widths
    ax.bar(hist.edges[:-1], heights, width=widths, align="edge",
           color="#9ecae1", edgecolor="#3182bd", linewidth=0.4,
           label="empirical")
    if model is not None:
        ts = np.linspace(hist.edges[0], hist.edges[-1], 1201)
        ys = []
        for t in ts:
            t = float(t)
            if not model.lo < t < model.hi or t in model.singular:
                ys.append(np.nan)
            else:
                ys.append(model.pdf(t))
        ax.plot(ts, ys, color="#d7301f", linewidth=1.4,
                label=f"{model.name} density")
    ax.text(0.02, 0.95,
            f"spike at 0: {hist.spike_fraction:.4f}\nn = {hist.sample_count}",
            transform=ax.transAxes, va="top", fontsize=9,
            bbox=dict(boxstyle="round", facecolor="white", alpha=0.8))
    ax.set_xlabel("normalized Frobenius trace")
    ax.set_ylabel("density")
    ax.set_title(title or f"trace distribution: {hist.surface}")
    ax.legend(loc="upper right", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
