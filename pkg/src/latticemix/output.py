"""Deterministic CSV/JSON/SVG emission for command-line runs.

Identical inputs must produce byte-identical files: floats are written with 17
significant digits (lossless round trip), JSON keys are sorted, line endings
are LF, and nothing time- or host-dependent is ever emitted.
"""

from __future__ import annotations

import json

import numpy as np

SCHEMA_VERSION = 1


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def write_json(path: str, payload: dict) -> None:
    with open(path, "w", newline="") as fh:
        json.dump(_jsonable(payload), fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_manifest(out_path: str, command: str, config: dict, version: str) -> str:
    """Sidecar <out>.manifest.json echoing everything needed to re-run the job."""
    path = out_path + ".manifest.json"
    write_json(path, {
        "schema_version": SCHEMA_VERSION,
        "tool": "latticemix",
        "tool_version": version,
        "command": command,
        "config": config,
    })
    return path


_SERIES_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728")


def write_svg(
    path: str,
    series: list[tuple[str, np.ndarray, np.ndarray]],
    x_label: str = "",
    y_label: str = "",
) -> None:
    """Minimal static polyline chart: axes, up to four series, a legend.

    Hand-rolled on purpose; no plotting dependency, fully deterministic.
    """
    width, height = 800.0, 500.0
    margin = 60.0
    xs_all = np.concatenate([np.asarray(x, dtype=float) for _, x, _ in series])
    ys_all = np.concatenate([np.asarray(y, dtype=float) for _, _, y in series])
    x_lo, x_hi = float(xs_all.min()), float(xs_all.max())
    y_lo, y_hi = float(ys_all.min()), float(ys_all.max())
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x):
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
        f'<line x1="{margin:g}" y1="{height - margin:g}" x2="{width - margin:g}" '
        f'y2="{height - margin:g}" stroke="black"/>',
        f'<line x1="{margin:g}" y1="{margin:g}" x2="{margin:g}" '
        f'y2="{height - margin:g}" stroke="black"/>',
    ]
    for value, anchor, x, y, dy in (
        (x_lo, "middle", sx(x_lo), height - margin + 20, 0),
        (x_hi, "middle", sx(x_hi), height - margin + 20, 0),
        (y_lo, "end", margin - 8, sy(y_lo), 4),
        (y_hi, "end", margin - 8, sy(y_hi), 4),
    ):
        parts.append(
            f'<text x="{x:.2f}" y="{y + dy:.2f}" font-size="12" '
            f'text-anchor="{anchor}">{value:.6g}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{width / 2:g}" y="{height - 12:g}" font-size="14" '
            f'text-anchor="middle">{x_label}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="16" y="{height / 2:g}" font-size="14" text-anchor="middle" '
            f'transform="rotate(-90 16 {height / 2:g})">{y_label}</text>'
        )
    for idx, (name, xs, ys) in enumerate(series):
        color = _SERIES_COLORS[idx % len(_SERIES_COLORS)]
        points = " ".join(
            f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys)
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>'
        )
        ly = margin + 18 * idx
        parts.append(
            f'<line x1="{width - margin - 150:g}" y1="{ly:g}" '
            f'x2="{width - margin - 120:g}" y2="{ly:g}" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{width - margin - 112:g}" y="{ly + 4:g}" '
            f'font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(parts) + "\n")
