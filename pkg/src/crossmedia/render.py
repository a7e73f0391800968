"""Hand-rolled SVG 1.1 renderers for the batch figures.

The diverging palette interpolates linearly in sRGB between blue (-1),
white (0), and red (+1); undefined heatmap cells render gray.  Everything
returns an SVG string so callers control file placement.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .influence import LagHeatmap
from .timeutil import HOUR, format_date

__all__ = [
    "diverging_color",
    "sequential_color",
    "render_heatmap_svg",
    "render_bar_svg",
    "render_box_svg",
    "render_scatter_svg",
    "render_line_svg",
    "render_matrix_svg",
    "offset_label",
]

UNDEFINED_COLOR = "#808080"

_FONT = 'font-family="monospace" font-size="10"'


def diverging_color(value: float) -> str:
    """Map [-1, 1] to blue-white-red: channel = round(255 * (1 - |v|))."""
    v = min(1.0, max(-1.0, float(value)))
    fade = int(round(255.0 * (1.0 - abs(v))))
    if v >= 0:
        return f"#ff{fade:02x}{fade:02x}"
    return f"#{fade:02x}{fade:02x}ff"


def sequential_color(value: float) -> str:
    """Map [0, 1] to white-black (darker = larger)."""
    v = min(1.0, max(0.0, float(value)))
    fade = int(round(255.0 * (1.0 - v)))
    return f"#{fade:02x}{fade:02x}{fade:02x}"


def _svg_open(width: float, height: float) -> list[str]:
    return [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="white"/>',
    ]


def _text(x: float, y: float, label: str, anchor: str = "start", extra: str = "") -> str:
    return (
        f'<text x="{x:.1f}" y="{y:.1f}" {_FONT} text-anchor="{anchor}"{extra}>'
        f"{escape(label)}</text>"
    )


def offset_label(offset_seconds: int) -> str:
    hours = offset_seconds // HOUR
    return f"{hours:+d}h" if hours else "0h"


def render_heatmap_svg(heatmap: LagHeatmap, title: str | None = None) -> str:
    """Lag heatmap with window-start rows and offset columns."""
    matrix = heatmap.matrix
    if matrix.size == 0 or heatmap.n_defined() == 0:
        raise ValueError("heatmap has no defined cells to render")
    n_rows, n_cols = matrix.shape
    cell_w = max(4.0, min(12.0, 900.0 / n_cols))
    cell_h = max(2.0, min(12.0, 600.0 / n_rows))
    left, top, right, bottom = 90.0, 40.0, 20.0, 60.0
    width = left + n_cols * cell_w + right
    height = top + n_rows * cell_h + bottom
    parts = _svg_open(width, height)
    if title is None:
        title = f"{heatmap.candidate} windowed correlation".strip()
    parts.append(_text(width / 2.0, 20.0, title, anchor="middle"))
    for i in range(n_rows):
        for j in range(n_cols):
            value = matrix[i, j]
            color = UNDEFINED_COLOR if not np.isfinite(value) else diverging_color(value)
            x = left + j * cell_w
            y = top + i * cell_h
            parts.append(
                f'<rect x="{x:.1f}" y="{y:.1f}" width="{cell_w:.1f}" '
                f'height="{cell_h:.1f}" fill="{color}"/>'
            )
    # Offset ticks every 12 columns plus the ends; row date ticks ~8 total.
    for j in range(0, n_cols, max(1, n_cols // 8)):
        x = left + (j + 0.5) * cell_w
        parts.append(
            _text(x, top + n_rows * cell_h + 14.0, offset_label(int(heatmap.offsets[j])), "middle")
        )
    parts.append(
        _text(
            left + n_cols * cell_w / 2.0,
            top + n_rows * cell_h + 34.0,
            "News leading ← offset → Twitter leading",
            "middle",
        )
    )
    for i in range(0, n_rows, max(1, n_rows // 8)):
        y = top + (i + 0.5) * cell_h + 3.0
        parts.append(_text(left - 6.0, y, format_date(int(heatmap.row_starts[i])), "end"))
    parts.append("</svg>")
    return "\n".join(parts)


def render_bar_svg(
    labels, values, title: str, ylabel: str = "", baseline: float = 0.0
) -> str:
    """Vertical bars, drawn from a baseline so mean-shifted deltas read
    naturally in both directions."""
    vals = [float(v) for v in values]
    if len(labels) != len(vals) or not vals:
        raise ValueError("labels and values must be equal-length and non-empty")
    lo = min(min(vals), baseline)
    hi = max(max(vals), baseline)
    span = (hi - lo) or 1.0
    left, top, bottom = 70.0, 40.0, 70.0
    bar_w, gap = 34.0, 14.0
    plot_h = 240.0
    width = left + len(vals) * (bar_w + gap) + 30.0
    height = top + plot_h + bottom
    parts = _svg_open(width, height)
    parts.append(_text(width / 2.0, 20.0, title, "middle"))
    if ylabel:
        parts.append(
            _text(16.0, top + plot_h / 2.0, ylabel, "middle", f' transform="rotate(-90 16 {top + plot_h / 2.0:.1f})"')
        )

    def y_of(v: float) -> float:
        return top + plot_h * (1.0 - (v - lo) / span)

    base_y = y_of(baseline)
    parts.append(
        f'<line x1="{left:.1f}" y1="{base_y:.1f}" x2="{width - 20:.1f}" '
        f'y2="{base_y:.1f}" stroke="black"/>'
    )
    for i, (label, v) in enumerate(zip(labels, vals)):
        x = left + i * (bar_w + gap)
        y = min(y_of(v), base_y)
        h = abs(y_of(v) - base_y)
        color = "#b2182b" if v >= baseline else "#2166ac"
        parts.append(
            f'<rect x="{x:.1f}" y="{y:.1f}" width="{bar_w:.1f}" height="{h:.1f}" fill="{color}"/>'
        )
        parts.append(
            _text(x + bar_w / 2.0, top + plot_h + 14.0, str(label), "middle")
        )
        parts.append(_text(x + bar_w / 2.0, y - 4.0, f"{v:.3g}", "middle"))
    parts.append("</svg>")
    return "\n".join(parts)


def render_box_svg(labels, stats_list, title: str) -> str:
    """Box-and-whisker summaries (p5 whiskers, p25-p75 box, median line)."""
    if len(labels) != len(stats_list) or not stats_list:
        raise ValueError("labels and stats must be equal-length and non-empty")
    lo = min(s.p5 for s in stats_list)
    hi = max(s.p95 for s in stats_list)
    span = (hi - lo) or 1.0
    left, top, bottom = 70.0, 40.0, 60.0
    slot_w = 70.0
    plot_h = 240.0
    width = left + len(labels) * slot_w + 30.0
    height = top + plot_h + bottom
    parts = _svg_open(width, height)
    parts.append(_text(width / 2.0, 20.0, title, "middle"))

    def y_of(v: float) -> float:
        return top + plot_h * (1.0 - (v - lo) / span)

    for i, (label, st) in enumerate(zip(labels, stats_list)):
        cx = left + i * slot_w + slot_w / 2.0
        parts.append(
            f'<line x1="{cx:.1f}" y1="{y_of(st.p5):.1f}" x2="{cx:.1f}" '
            f'y2="{y_of(st.p95):.1f}" stroke="black"/>'
        )
        box_y = y_of(st.p75)
        parts.append(
            f'<rect x="{cx - 16:.1f}" y="{box_y:.1f}" width="32" '
            f'height="{abs(y_of(st.p25) - box_y):.1f}" fill="#cccccc" stroke="black"/>'
        )
        parts.append(
            f'<line x1="{cx - 16:.1f}" y1="{y_of(st.median):.1f}" x2="{cx + 16:.1f}" '
            f'y2="{y_of(st.median):.1f}" stroke="black"/>'
        )
        parts.append(_text(cx, top + plot_h + 16.0, str(label), "middle"))
    parts.append("</svg>")
    return "\n".join(parts)


def render_scatter_svg(points, xlabel: str, ylabel: str, title: str) -> str:
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValueError("no points to render")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0
    left, top, plot_w, plot_h = 70.0, 40.0, 360.0, 280.0
    width = left + plot_w + 30.0
    height = top + plot_h + 70.0
    parts = _svg_open(width, height)
    parts.append(_text(width / 2.0, 20.0, title, "middle"))
    parts.append(
        f'<rect x="{left:.1f}" y="{top:.1f}" width="{plot_w:.1f}" height="{plot_h:.1f}" '
        'fill="none" stroke="black"/>'
    )
    for x, y in pts:
        px = left + plot_w * (x - x_lo) / x_span
        py = top + plot_h * (1.0 - (y - y_lo) / y_span)
        parts.append(f'<circle cx="{px:.1f}" cy="{py:.1f}" r="2" fill="#2166ac"/>')
    parts.append(_text(left + plot_w / 2.0, top + plot_h + 30.0, xlabel, "middle"))
    parts.append(
        _text(16.0, top + plot_h / 2.0, ylabel, "middle", f' transform="rotate(-90 16 {top + plot_h / 2.0:.1f})"')
    )
    parts.append("</svg>")
    return "\n".join(parts)


def render_line_svg(series: dict, xlabel: str, ylabel: str, title: str) -> str:
    """One or more named polylines over shared axes (name -> (xs, ys))."""
    if not series:
        raise ValueError("no series to render")
    palette = ["#b2182b", "#2166ac", "#1a9850", "#756bb1", "#e08214"]
    all_x = [float(x) for xs, _ in series.values() for x in xs]
    all_y = [float(y) for _, ys in series.values() for y in ys]
    if not all_x:
        raise ValueError("series are empty")
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0
    left, top, plot_w, plot_h = 70.0, 40.0, 420.0, 260.0
    width = left + plot_w + 160.0
    height = top + plot_h + 70.0
    parts = _svg_open(width, height)
    parts.append(_text(width / 2.0 - 60.0, 20.0, title, "middle"))
    parts.append(
        f'<rect x="{left:.1f}" y="{top:.1f}" width="{plot_w:.1f}" height="{plot_h:.1f}" '
        'fill="none" stroke="black"/>'
    )
    for idx, (name, (xs, ys)) in enumerate(series.items()):
        color = palette[idx % len(palette)]
        coords = " ".join(
            f"{left + plot_w * (float(x) - x_lo) / x_span:.1f},"
            f"{top + plot_h * (1.0 - (float(y) - y_lo) / y_span):.1f}"
            for x, y in zip(xs, ys)
        )
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = top + 14.0 + idx * 14.0
        parts.append(f'<rect x="{left + plot_w + 12:.1f}" y="{ly - 8:.1f}" width="10" height="10" fill="{color}"/>')
        parts.append(_text(left + plot_w + 26.0, ly, str(name)))
    parts.append(_text(left + plot_w / 2.0, top + plot_h + 30.0, xlabel, "middle"))
    parts.append(
        _text(16.0, top + plot_h / 2.0, ylabel, "middle", f' transform="rotate(-90 16 {top + plot_h / 2.0:.1f})"')
    )
    parts.append("</svg>")
    return "\n".join(parts)


def render_matrix_svg(row_labels, col_labels, matrix, title: str) -> str:
    """Grayscale matrix (0 = white, 1 = black); used for topic shares."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (len(row_labels), len(col_labels)):
        raise ValueError("matrix shape does not match the labels")
    cell = 22.0
    left, top = 150.0, 120.0
    width = left + len(col_labels) * cell + 30.0
    height = top + len(row_labels) * cell + 40.0
    parts = _svg_open(width, height)
    parts.append(_text(width / 2.0, 20.0, title, "middle"))
    for j, label in enumerate(col_labels):
        x = left + (j + 0.5) * cell
        parts.append(
            _text(x, top - 8.0, str(label), "start", f' transform="rotate(-60 {x:.1f} {top - 8.0:.1f})"')
        )
    for i, label in enumerate(row_labels):
        parts.append(_text(left - 6.0, top + (i + 0.6) * cell, str(label), "end"))
        for j in range(len(col_labels)):
            color = UNDEFINED_COLOR if not np.isfinite(m[i, j]) else sequential_color(m[i, j])
            parts.append(
                f'<rect x="{left + j * cell:.1f}" y="{top + i * cell:.1f}" '
                f'width="{cell:.1f}" height="{cell:.1f}" fill="{color}" stroke="#eeeeee"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
