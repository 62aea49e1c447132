"""CSV, JSON and SVG writers for experiment reports."""
from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from .riesz import ExperimentReport

CSV_HEADER = "n,sup_value,bound_value,ratio"
WIDTH, HEIGHT = 800, 600
MARGIN = dict(left=90, right=30, top=40, bottom=70)


def fmt(x) -> str:
    """12 significant digits, '.' decimal separator."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    return obj


def csv_text(report: ExperimentReport) -> str:
    lines = [CSV_HEADER]
    for r in report.rows:
        lines.append(",".join([str(int(r.n)), fmt(r.sup_value), fmt(r.bound_value), fmt(r.ratio)]))
    return "\n".join(lines) + "\n"


def json_text(report: ExperimentReport) -> str:
    return json.dumps(to_jsonable(report.to_dict()), indent=2) + "\n"


def _log_ticks(lo: float, hi: float, max_ticks: int = 10):
    a, b = math.floor(math.log2(lo)), math.ceil(math.log2(hi))
    if a == b:
        a, b = a - 1, b + 1
    stride = max(1, math.ceil((b - a + 1) / max_ticks))
    return [e for e in range(a, b + 1) if (e - a) % stride == 0], a, b


def svg_text(report: ExperimentReport, title: str | None = None) -> str:
    """Log-log chart of sup_value and bound_value against n.

    Exactly two polylines; axis ticks sit at powers of 2. Nonpositive values
    cannot be placed on a log axis and are left out of their polyline.
    """
    series = {
        "sup_value": [(r.n, r.sup_value) for r in report.rows],
        "bound_value": [(r.n, r.bound_value) for r in report.rows],
    }
    xs = [n for n, _ in series["sup_value"] if n > 0]
    ys = [v for pts in series.values() for _, v in pts if v > 0 and math.isfinite(v)]
    if not xs:
        xs = [1, 2]
    if not ys:
        ys = [0.5, 1.0]
    xt, xa, xb = _log_ticks(min(xs), max(xs))
    yt, ya, yb = _log_ticks(min(ys), max(ys))
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def px(n):
        return x0 + (math.log2(n) - xa) / (xb - xa) * (x1 - x0)

    def py(v):
        return y0 - (math.log2(v) - ya) / (yb - ya) * (y0 - y1)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{title or report.command}</text>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
    ]
    for e in xt:
        x = px(2.0**e)
        out.append(f'<line class="xtick" x1="{x:.2f}" y1="{y0}" x2="{x:.2f}" y2="{y0 + 6}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{y0 + 22}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="12">2^{e}</text>')
    for e in yt:
        y = py(2.0**e)
        out.append(f'<line class="ytick" x1="{x0 - 6}" y1="{y:.2f}" x2="{x0}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 10}" y="{y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="12">2^{e}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13">n (log2)</text>')
    colors = {"sup_value": "#1f77b4", "bound_value": "#d62728"}
    for name, pts in series.items():
        coords = " ".join(f"{px(n):.2f},{py(v):.2f}" for n, v in pts
                          if n > 0 and v > 0 and math.isfinite(v))
        out.append(f'<polyline class="{name}" fill="none" stroke="{colors[name]}" '
                   f'stroke-width="2" points="{coords}"/>')
    for i, name in enumerate(series):
        y = MARGIN["top"] + 10 + 18 * i
        out.append(f'<text x="{x1 - 10}" y="{y}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="12" fill="{colors[name]}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(report: ExperimentReport, prefix) -> list[Path]:
    """Write <prefix>.csv, <prefix>.json and <prefix>.svg.

    Files already written are removed again if a later write fails.
    """
    prefix = Path(prefix)
    targets = [
        (prefix.with_name(prefix.name + ".csv"), csv_text(report)),
        (prefix.with_name(prefix.name + ".json"), json_text(report)),
        (prefix.with_name(prefix.name + ".svg"), svg_text(report)),
    ]
    written = []
    try:
        if prefix.parent and not prefix.parent.exists():
            prefix.parent.mkdir(parents=True)
        for path, text in targets:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(path)
    except OSError:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        raise
    return written
