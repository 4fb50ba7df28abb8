"""Deterministic SVG line charts for sweep and trace results.

Pure string assembly on a fixed canvas: identical inputs produce
byte-identical documents (no timestamps, no randomness, no font
measurement).  Only the chart styles needed by the command-line tool are
implemented: single/multi-series line charts with an optional
logarithmic x-axis and an optional secondary y-axis.
"""

from __future__ import annotations

import math

WIDTH = 720
HEIGHT = 480
MARGIN_LEFT = 72
MARGIN_RIGHT = 72
MARGIN_TOP = 48
MARGIN_BOTTOM = 56

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")


def _fmt(value: float) -> str:
    """Stable short decimal for tick labels."""
    text = f"{value:.6g}"
    return "0" if text == "-0" else text


def _coord(value: float) -> str:
    return f"{value:.2f}"


def _nice_step(span: float, target: int = 5) -> float:
    raw = span / max(target, 1)
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for multiple in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= multiple * magnitude:
            return multiple * magnitude
    return 10.0 * magnitude


def _ticks(lo: float, hi: float, target: int = 5):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("cannot build an axis from non-finite values")
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        lo, hi = lo - pad, hi + pad
    step = _nice_step(hi - lo, target)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + step * 1e-9:
        ticks.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return lo, hi, ticks


class _Scale:
    def __init__(self, lo: float, hi: float, out_lo: float, out_hi: float):
        self.lo, self.hi = lo, hi
        self.out_lo, self.out_hi = out_lo, out_hi

    def __call__(self, value: float) -> float:
        frac = (value - self.lo) / (self.hi - self.lo)
        return self.out_lo + frac * (self.out_hi - self.out_lo)


def _finite(values):
    return [v for v in values if math.isfinite(v)]


def render_line_chart(
    series,
    title: str,
    xlabel: str,
    ylabel: str,
    log_x: bool = False,
    y2_series=None,
    y2label: str = "",
) -> str:
    """Render labelled line series to an SVG document string.

    ``series`` is a list of ``(label, xs, ys)`` triples drawn against the
    left axis; ``y2_series`` optionally holds triples for a secondary
    right-hand axis.  Raises ``ValueError`` on empty input.
    """
    series = list(series)
    y2_series = list(y2_series) if y2_series else []
    if not series or all(len(xs) == 0 for _, xs, _ in series):
        raise ValueError("no data to plot")

    def xs_of(triples):
        out = []
        for _, xs, _ in triples:
            out.extend(math.log10(x) if log_x else x for x in xs)
        return out

    all_x = _finite(xs_of(series) + xs_of(y2_series))
    all_y = _finite([y for _, _, ys in series for y in ys])
    if not all_x or not all_y:
        raise ValueError("no finite data to plot")

    def padded(values):
        lo, hi = min(values), max(values)
        pad = 0.04 * (hi - lo)
        return lo - pad, hi + pad

    x_lo, x_hi, x_ticks = _ticks(*padded(all_x))
    y_lo, y_hi, y_ticks = _ticks(*padded(all_y))
    sx = _Scale(x_lo, x_hi, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    sy = _Scale(y_lo, y_hi, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)

    sy2 = None
    y2_ticks = []
    if y2_series:
        all_y2 = _finite([y for _, _, ys in y2_series for y in ys])
        if all_y2:
            y2_lo, y2_hi, y2_ticks = _ticks(*padded(all_y2))
            sy2 = _Scale(y2_lo, y2_hi, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
    ]

    # frame and grid
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
    for t in x_ticks:
        px = sx(t)
        parts.append(f'<line x1="{_coord(px)}" y1="{y0}" x2="{_coord(px)}" y2="{y1}" stroke="#dddddd"/>')
        label = _fmt(10.0**t) if log_x else _fmt(t)
        parts.append(
            f'<text x="{_coord(px)}" y="{y0 + 18}" text-anchor="middle" font-size="11">{label}</text>'
        )
    for t in y_ticks:
        py = sy(t)
        parts.append(f'<line x1="{x0}" y1="{_coord(py)}" x2="{x1}" y2="{_coord(py)}" stroke="#dddddd"/>')
        parts.append(
            f'<text x="{x0 - 6}" y="{_coord(py + 4)}" text-anchor="end" font-size="11">{_fmt(t)}</text>'
        )
    if sy2 is not None:
        for t in y2_ticks:
            py = sy2(t)
            parts.append(
                f'<text x="{x1 + 6}" y="{_coord(py + 4)}" text-anchor="start" font-size="11">{_fmt(t)}</text>'
            )
    parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="#333333"/>')
    parts.append(
        f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle" font-size="13">{xlabel}</text>'
    )
    parts.append(
        f'<text x="20" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 20 {(y0 + y1) / 2:.1f})">{ylabel}</text>'
    )
    if y2label and sy2 is not None:
        parts.append(
            f'<text x="{WIDTH - 18}" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" font-size="13" '
            f'transform="rotate(90 {WIDTH - 18} {(y0 + y1) / 2:.1f})">{y2label}</text>'
        )

    def draw(triples, scale_y, color_offset=0):
        for k, (label, xs, ys) in enumerate(triples):
            color = PALETTE[(k + color_offset) % len(PALETTE)]
            points = [
                (sx(math.log10(x) if log_x else x), scale_y(y))
                for x, y in zip(xs, ys)
                if math.isfinite(y) and (not log_x or x > 0)
            ]
            if len(points) >= 2:
                path = " ".join(f"{_coord(px)},{_coord(py)}" for px, py in points)
                parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            if len(points) <= 48:
                for px, py in points:
                    parts.append(f'<circle cx="{_coord(px)}" cy="{_coord(py)}" r="3" fill="{color}"/>')

    draw(series, sy)
    if sy2 is not None:
        draw(y2_series, sy2, color_offset=len(series))

    # legend
    legend_y = MARGIN_TOP + 8
    entries = [(label, PALETTE[k % len(PALETTE)]) for k, (label, _, _) in enumerate(series)]
    entries += [
        (label, PALETTE[(k + len(series)) % len(PALETTE)]) for k, (label, _, _) in enumerate(y2_series)
    ]
    for label, color in entries:
        parts.append(
            f'<line x1="{x0 + 10}" y1="{legend_y}" x2="{x0 + 34}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{x0 + 40}" y="{legend_y + 4}" font-size="12">{label}</text>')
        legend_y += 16

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def trace_plot(trace, alpha: float) -> str:
    """Pathloss against iteration for one alternating-optimization run."""
    steps = trace.steps
    if not steps:
        raise ValueError("trace is empty")
    xs = [float(step.iteration) for step in steps]
    ys = [step.pathloss for step in steps]
    return render_line_chart(
        [("pathloss", xs, ys)],
        title=f"Alternating optimization at alpha = {_fmt(alpha)} rad",
        xlabel="iteration",
        ylabel="pathloss (dB)",
    )


def angle_sweep_plot(result) -> str:
    """Four-strategy pathloss comparison over the orientation sweep."""
    if not result.points:
        raise ValueError("sweep result is empty")
    xs = list(result.alphas())
    series = [
        ("joint", xs, list(result.losses("joint"))),
        ("tx-only", xs, list(result.losses("tx-only"))),
        ("rx-only", xs, list(result.losses("rx-only"))),
        ("equal", xs, list(result.losses("equal"))),
    ]
    return render_line_chart(
        series,
        title="Pathloss over receiver orientation",
        xlabel="alpha (rad)",
        ylabel="pathloss (dB)",
    )


def threshold_plot(points) -> str:
    """Mean reduction and mean iteration count against the stopping threshold."""
    points = list(points)
    if not points:
        raise ValueError("threshold results are empty")
    xs = [p.delta for p in points]
    return render_line_chart(
        [("mean reduction (%)", xs, [p.mean_reduction_pct for p in points])],
        title="Stopping threshold trade-off",
        xlabel="threshold (dB)",
        ylabel="mean reduction (%)",
        log_x=True,
        y2_series=[("mean iterations", xs, [p.mean_iterations for p in points])],
        y2label="mean iterations",
    )
