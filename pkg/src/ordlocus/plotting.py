"""SVG rendering of loci with matplotlib.

Output is byte-for-byte reproducible: the SVG id salt is fixed, the date
metadata is dropped, text is kept as text and panels are drawn in sorted
component order.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from .locus import Arc, Locus, dinfty_reduce  # noqa: E402

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
AXIS_COLOR = "#7f7f7f"


@dataclass(frozen=True)
class PlotOptions:
    quotient: bool = False
    debug_su2: bool = False
    annotate: bool = True
    el: bool = True
    panel_size: float = 3.2
    columns: int = 3


def _title(key, quotient: bool) -> str:
    i, j = key
    return f"{'PL ' if quotient else ''}H$_{{{i},{j}}}$"


def _draw_arc(ax, arc: Arc, color: str, window, annotate: bool):
    xy = arc.xy
    if arc.is_axis:
        ax.plot(xy[:, 0], xy[:, 1], color=AXIS_COLOR, lw=0.8, zorder=1)
        return
    if len(xy) == 1:
        ax.plot(xy[:, 0], xy[:, 1], ".", color=color, ms=3, zorder=2)
        return
    ax.plot(xy[:, 0], xy[:, 1], color=color, lw=1.2, zorder=2)
    if not annotate:
        return
    xmax, ymax = window
    for a in arc.asymptotes:
        if a.slope is None or not math.isfinite(a.slope):
            continue
        pts = xy if a.end == 1 else xy[::-1]
        inside = [p for p in pts if abs(p[0]) <= xmax and abs(p[1]) <= ymax]
        if not inside:
            continue
        x, y = inside[-1]
        ax.annotate(f"{a.slope:+.2f}", (x, y), fontsize=6, color=color,
                    xytext=(0, 0), textcoords="offset points",
                    ha="right" if x > 0 else "left", va="center")


def _panel(ax, locus: Locus, key, arcs, options: PlotOptions):
    xmax, ymax = locus.window
    ax.axhline(0.0, color="#d0d0d0", lw=0.5, zorder=0)
    ax.axvline(0.0, color="#d0d0d0", lw=0.5, zorder=0)
    for n, arc in enumerate(arcs):
        _draw_arc(ax, arc, PALETTE[n % len(PALETTE)], locus.window, options.annotate)
    if key == (0, 0):
        xs = [a.x for a in locus.alexander_points]
        if xs:
            ax.plot(xs, [0.0] * len(xs), "o", color="black", ms=5, zorder=4)
    parab = [p for p in locus.parabolic_points if (p[2], p[3]) == key]
    if parab:
        ax.plot([p[0] for p in parab], [p[1] for p in parab], "o", mfc="none",
                mec="black", ms=7, zorder=4)
    if options.debug_su2:
        bad = [p for p in locus.diagnostics.get("filtered_points", []) if (p[2], p[3]) == key]
        if bad:
            ax.plot([p[0] for p in bad], [p[1] for p in bad], "x", color="#555555", ms=4, zorder=3)
    lo = 0.0 if (options.quotient and key == (0, 0)) else -xmax
    ax.set_xlim(lo, xmax)
    ax.set_ylim(-ymax, ymax)
    ax.set_title(_title(key, options.quotient), fontsize=9)
    ax.tick_params(labelsize=7)
    ax.set_xlabel("x", fontsize=7)
    ax.set_ylabel("y", fontsize=7)


def _el_panel(ax, locus: Locus):
    arcs = [a for a in locus.el_arcs if len(a.points) > 0]
    ymax = max([1.0] + [float(abs(a.xy[:, 1]).max()) for a in arcs])
    ax.axhline(0.0, color=AXIS_COLOR, lw=0.8, zorder=1)
    for n, arc in enumerate(arcs):
        xy = arc.xy
        color = PALETTE[n % len(PALETTE)]
        for shift in (-1, 0, 1):
            ax.plot(xy[:, 0] + shift, xy[:, 1], color=color, lw=1.2, zorder=2)
        ends = [xy[k] for k, e in ((0, arc.ends[0]), (-1, arc.ends[1])) if e == "parabolic-origin"]
        for x, y in ends:
            xs = [round(x) + s for s in (-1, 0, 1)]
            ax.plot(xs, [round(y)] * 3, "o", mfc="none", mec="black", ms=6, zorder=4)
    ax.set_xlim(-1.0, 1.0)
    ax.set_ylim(-1.1 * ymax, 1.1 * ymax)
    ax.set_title("EL", fontsize=9)
    ax.tick_params(labelsize=7)


def render_figure(locus: Locus, options: PlotOptions | None = None) -> Figure:
    options = options or PlotOptions()
    if options.quotient and not locus.quotient:
        locus = dinfty_reduce(locus)
    keys = sorted(locus.components) or [(0, 0)]
    # (0, 0) first, then by |j|
    keys = sorted(keys, key=lambda k: (k != (0, 0), abs(k[1]), k[1], k[0]))
    with_el = options.el and bool(locus.el_arcs)
    n = len(keys) + (1 if with_el else 0)
    cols = min(n, options.columns)
    rows = math.ceil(n / cols)
    fig = Figure(figsize=(options.panel_size * cols, options.panel_size * rows))
    axes = fig.subplots(rows, cols, squeeze=False)
    slots = [ax for row in axes for ax in row]
    k = 0
    if with_el:
        _el_panel(slots[0], locus)
        k = 1
    for key in keys:
        _panel(slots[k], locus, key, locus.components.get(key, ()), options)
        k += 1
    for ax in slots[k:]:
        ax.set_visible(False)
    if locus.name:
        fig.suptitle(locus.name, fontsize=10)
    fig.tight_layout()
    return fig


def render_svg(locus: Locus, options: PlotOptions | None = None) -> str:
    """Deterministic SVG text for the locus."""
    fig = render_figure(locus, options)
    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "ordlocus", "svg.fonttype": "none",
                                "path.simplify": False}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def save_svg(locus: Locus, path, options: PlotOptions | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(locus, options))

