"""Minimal deterministic SVG charts (no timestamps, fixed number formatting)."""
import numpy as np

W, H, PAD = 480, 320, 48


def _scale(vals, lo_px, hi_px):
    lo, hi = float(np.min(vals)), float(np.max(vals))
    if hi == lo:
        hi = lo + 1.0
    return lambda v: lo_px + (v - lo) / (hi - lo) * (hi_px - lo_px), lo, hi


def _frame(title, xlabel, ylabel, xlo, xhi, ylo, yhi):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<text x="{W / 2:.1f}" y="{H - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="14" y="{H / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H / 2:.1f})">{ylabel}</text>',
        f'<text x="{PAD}" y="{H - PAD + 16}" font-size="10">{xlo:.4g}</text>',
        f'<text x="{W - PAD}" y="{H - PAD + 16}" text-anchor="end" font-size="10">{xhi:.4g}</text>',
        f'<text x="{PAD - 4}" y="{H - PAD}" text-anchor="end" font-size="10">{ylo:.4g}</text>',
        f'<text x="{PAD - 4}" y="{PAD + 4}" text-anchor="end" font-size="10">{yhi:.4g}</text>',
    ]


def line_chart(xs, ys, title="", xlabel="", ylabel=""):
    fx, xlo, xhi = _scale(xs, PAD, W - PAD)
    fy, ylo, yhi = _scale(ys, H - PAD, PAD)
    parts = _frame(title, xlabel, ylabel, xlo, xhi, ylo, yhi)
    pts = " ".join(f"{fx(x):.2f},{fy(y):.2f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="2"/>')
    parts += [f'<circle cx="{fx(x):.2f}" cy="{fy(y):.2f}" r="3" fill="steelblue"/>' for x, y in zip(xs, ys)]
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def histogram(values, bins=30, title="", xlabel="", ylabel="count"):
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins)
    fx, xlo, xhi = _scale(edges, PAD, W - PAD)
    fy, _, yhi = _scale(np.append(counts, 0), H - PAD, PAD)
    parts = _frame(title, xlabel, ylabel, xlo, xhi, 0, yhi)
    for c, a, b in zip(counts, edges[:-1], edges[1:]):
        x0, x1, y = fx(a), fx(b), fy(c)
        parts.append(f'<rect x="{x0:.2f}" y="{y:.2f}" width="{x1 - x0:.2f}" height="{H - PAD - y:.2f}" fill="steelblue"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
