"""Figure renderers: one function per figure kind, dispatched by render()."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spec import FigureSpec, SpecError

DPI = 150

_RC = {
    "figure.figsize": (6.0, 4.5),
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "plots",
}


def render(spec: FigureSpec) -> None:
    """Draw the figure for `spec` and write it to spec.out."""
    fn = {"loglog": _render_loglog, "scatter": _render_scatter,
          "table-heatmap": _render_table_heatmap, "quiver": _render_quiver}
    with plt.rc_context(_RC):
        fig = fn[spec.kind](spec)
        fig.savefig(spec.out, dpi=DPI, metadata={"Software": None})
        plt.close(fig)


def _floats(values, table, name):
    try:
        return np.array([float(v) for v in values])
    except ValueError as exc:
        raise SpecError(f"non-numeric value in column {name!r} of {table}: "
                        f"{exc}") from exc


def _numeric_table(spec: FigureSpec, name: str):
    t = spec.tables[name]
    cols = t["columns"]
    return cols, [_floats(spec.column(name, c), name, c) for c in cols]


def _first_table(spec: FigureSpec) -> str:
    return next(iter(spec.tables))


def _render_loglog(spec: FigureSpec):
    name = _first_table(spec)
    cols, data = _numeric_table(spec, name)
    fig, ax = plt.subplots()
    # a leading low-cardinality column labels groups (e.g. one line per
    # coefficient-decay class); otherwise it is the shared x axis
    n = len(data[0])
    grouped = len(cols) >= 3 and len(np.unique(data[0])) <= n // 2
    if grouped:
        gcol, xcol, ycols = cols[0], cols[1], cols[2:]
        for g in np.unique(data[0]):
            mask = data[0] == g
            for j, yc in enumerate(ycols):
                _loglog_series(ax, data[1][mask], data[2 + j][mask],
                               f"{yc} ({gcol}={g:g})")
    else:
        for j, yc in enumerate(cols[1:]):
            _loglog_series(ax, data[0], data[1 + j], yc)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(cols[1] if grouped else cols[0])
    ax.set_title(spec.manifest.get("preset", name))
    ax.legend(fontsize=7)
    return fig


def _loglog_series(ax, x, y, label):
    mask = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    x, y = x[mask], y[mask]
    if len(x) == 0:
        return
    line, = ax.plot(x, y, "o-", label=label)
    if len(np.unique(x)) >= 3:
        # dashed reference line at the nearest half-integer slope
        slope = round(2 * np.polyfit(np.log(x), np.log(y), 1)[0]) / 2
        ax.plot(x, y[0] * (x / x[0]) ** slope, "--", color=line.get_color(),
                alpha=0.5, linewidth=1, label=f"slope {slope:g} reference")
    return line


def _render_scatter(spec: FigureSpec):
    labels = spec.column("embedding.csv", "label")
    classes = spec.column("embedding.csv", "class")
    x = _floats(spec.column("embedding.csv", "x"), "embedding.csv", "x")
    y = _floats(spec.column("embedding.csv", "y"), "embedding.csv", "y")
    fig, ax = plt.subplots()
    uniq = sorted(set(classes))
    cmap = plt.get_cmap("tab10")
    for i, cls in enumerate(uniq):
        mask = np.array([c == cls for c in classes])
        ax.scatter(x[mask], y[mask], s=25, color=cmap(i % 10),
                   label=str(cls), zorder=3)
    if len(labels) <= 20:
        for lx, ly, lab in zip(x, y, labels):
            ax.annotate(str(lab), (lx, ly), fontsize=6,
                        xytext=(3, 3), textcoords="offset points")
    if len(uniq) > 1 and len(uniq) <= 10:
        ax.legend(fontsize=7, title="class")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(spec.manifest.get("preset", "embedding"))
    return fig


def _render_table_heatmap(spec: FigureSpec):
    name = _first_table(spec)
    cols, data = _numeric_table(spec, name)
    r0 = np.unique(data[0])
    r1 = np.unique(data[1]) if len(cols) > 1 else np.array([])
    pivoted = (len(cols) >= 3 and len(r0) > 1 and len(r1) > 1
               and len(data[0]) == len(r0) * len(r1))
    if pivoted:
        # long-format (row key, column key, value...) table: one panel per
        # value column
        vcols = cols[2:]
        fig, axes = plt.subplots(1, len(vcols),
                                 figsize=(4.0 * len(vcols), 3.6))
        axes = np.atleast_1d(axes)
        for ax, vc, vals in zip(axes, vcols, data[2:]):
            grid = np.full((len(r0), len(r1)), np.nan)
            for a, b, v in zip(data[0], data[1], vals):
                grid[np.searchsorted(r0, a), np.searchsorted(r1, b)] = v
            _heatmap(ax, grid, [f"{v:g}" for v in r1], [f"{v:g}" for v in r0],
                     title=vc, xlabel=cols[1], ylabel=cols[0])
    else:
        # wide-format table: rows keyed by the first column
        grid = np.column_stack(data[1:])
        fig, ax = plt.subplots(figsize=(1.2 * len(cols) + 2,
                                        0.5 * grid.shape[0] + 2))
        _heatmap(ax, grid, cols[1:], [f"{v:g}" for v in data[0]],
                 title=name, xlabel="", ylabel=cols[0], per_column=True)
    fig.suptitle(spec.manifest.get("preset", name))
    fig.tight_layout()
    return fig


def _heatmap(ax, grid, xticks, yticks, title, xlabel, ylabel,
             per_column=False):
    shown = grid.copy()
    if per_column:
        # columns hold unrelated quantities; normalize each for the colormap
        lo, hi = np.nanmin(shown, axis=0), np.nanmax(shown, axis=0)
        shown = (shown - lo) / np.where(hi > lo, hi - lo, 1.0)
    ax.imshow(shown, cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(xticks)), xticks, fontsize=7)
    ax.set_yticks(range(len(yticks)), yticks, fontsize=7)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=9)
    ax.grid(False)
    for i in range(grid.shape[0]):
        for j in range(grid.shape[1]):
            ax.text(j, i, f"{grid[i, j]:.3g}", ha="center", va="center",
                    fontsize=6, color="white")


def _render_quiver(spec: FigureSpec):
    x = _floats(spec.column("field.csv", "x"), "field.csv", "x")
    y = _floats(spec.column("field.csv", "y"), "field.csv", "y")
    bx = _floats(spec.column("field.csv", "bx"), "field.csv", "bx")
    by = _floats(spec.column("field.csv", "by"), "field.csv", "by")
    cx = _floats(spec.column("curve.csv", "x"), "curve.csv", "x")
    cy = _floats(spec.column("curve.csv", "y"), "curve.csv", "y")
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    mag = np.hypot(bx, by)
    ax.quiver(x, y, bx, by, mag, cmap="Blues", angles="xy")
    ax.plot(np.append(cx, cx[0]), np.append(cy, cy[0]), "k-", linewidth=1.2)
    ax.set_aspect("equal")
    ax.set_title(spec.manifest.get("preset", "representer field"))
    return fig
