"""Minimal native SVG line plots (fixed viewBox, deterministic output)."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

PALETTE = {
    "exact": ("#d62728", ""),
    "ms2": ("#000000", "6,3,2,3"),
    "ms2n": ("#1f5fbf", "6,4"),
    "rwa": ("#c41fc4", "2,3"),
    "E_R": ("#d62728", ""),
    "E_RN": ("#1f5fbf", "6,4"),
    "E_R_RWA": ("#c41fc4", "6,3,2,3"),
}

WIDTH = 720
PANEL_H = 220
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 130, 28, 40


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray


@dataclass
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series]
    hlines: list[float] = field(default_factory=list)
    ymin: float | None = None


def _c(v: float) -> str:
    return f"{v:.2f}"


def _decimate(x, y, limit=4000):
    n = len(x)
    if n <= limit:
        return x, y
    idx = np.unique(np.linspace(0, n - 1, limit).round().astype(int))
    return x[idx], y[idx]


def nice_ticks(lo: float, hi: float, target: int = 5) -> np.ndarray:
    """Round-valued ticks (1, 2 or 5 times a power of ten) inside [lo, hi]."""
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** np.floor(np.log10(raw))
    step = mag * min((m for m in (1, 2, 5, 10) if m * mag >= raw), default=10)
    ticks = np.arange(np.ceil(lo / step - 1e-9), np.floor(hi / step + 1e-9) + 1) * step
    ticks[np.abs(ticks) < 1e-9 * step] = 0.0
    return ticks


def _panel(p: Panel, top: float) -> list[str]:
    out = []
    w = WIDTH - MARGIN_L - MARGIN_R
    h = PANEL_H - MARGIN_T - MARGIN_B
    xs = np.concatenate([s.x for s in p.series])
    ys = np.concatenate([s.y for s in p.series] + [np.asarray(p.hlines, dtype=float)])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    if p.ymin is not None:
        y0 = p.ymin

    def px(v):
        return MARGIN_L + (v - x0) / (x1 - x0) * w

    def py(v):
        return top + MARGIN_T + (y1 - v) / (y1 - y0) * h

    out.append(
        f'<rect x="{MARGIN_L}" y="{_c(top + MARGIN_T)}" width="{w}" height="{h}" '
        'fill="none" stroke="#444" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{MARGIN_L + w / 2:.2f}" y="{_c(top + 18)}" text-anchor="middle" '
        f'font-size="13">{escape(p.title)}</text>'
    )
    for xv in nice_ticks(x0, x1, 7):
        out.append(
            f'<text x="{_c(px(xv))}" y="{_c(top + PANEL_H - MARGIN_B + 16)}" '
            f'text-anchor="middle" font-size="10">{xv:.4g}</text>'
        )
    for yv in nice_ticks(y0, y1):
        out.append(
            f'<line x1="{MARGIN_L - 4}" x2="{MARGIN_L}" y1="{_c(py(yv))}" y2="{_c(py(yv))}" stroke="#444"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 6}" y="{_c(py(yv) + 3)}" text-anchor="end" '
            f'font-size="10">{yv:.3g}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L + w / 2:.2f}" y="{_c(top + PANEL_H - 6)}" '
        f'text-anchor="middle" font-size="11">{escape(p.xlabel)}</text>'
    )
    out.append(
        f'<text x="14" y="{_c(top + MARGIN_T + h / 2)}" font-size="11" '
        f'transform="rotate(-90 14 {_c(top + MARGIN_T + h / 2)})" '
        f'text-anchor="middle">{escape(p.ylabel)}</text>'
    )
    for level in p.hlines:
        out.append(
            f'<line x1="{MARGIN_L}" x2="{MARGIN_L + w}" y1="{_c(py(level))}" '
            f'y2="{_c(py(level))}" stroke="#000" stroke-width="0.8" stroke-dasharray="1,3"/>'
        )
    for k, s in enumerate(p.series):
        color, dash = PALETTE.get(s.label, ("#2ca02c", ""))
        x, y = _decimate(np.asarray(s.x, float), np.asarray(s.y, float))
        pts = " ".join(f"{_c(px(a))},{_c(py(b))}" for a, b in zip(x, y))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.3"{dash_attr} points="{pts}"/>'
        )
        ly = top + MARGIN_T + 14 + 16 * k
        lx = MARGIN_L + w + 10
        out.append(
            f'<line x1="{lx}" x2="{lx + 24}" y1="{_c(ly)}" y2="{_c(ly)}" stroke="{color}" '
            f'stroke-width="1.3"{dash_attr}/>'
        )
        out.append(f'<text x="{lx + 30}" y="{_c(ly + 4)}" font-size="11">{escape(s.label)}</text>')
    return out


def render(panels: list[Panel]) -> str:
    height = PANEL_H * len(panels)
    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {height}" '
        f'width="{WIDTH}" height="{height}" font-family="sans-serif">',
        f'<rect width="{WIDTH}" height="{height}" fill="#fff"/>',
    ]
    for i, p in enumerate(panels):
        body.extend(_panel(p, i * PANEL_H))
    body.append("</svg>")
    return "\n".join(body) + "\n"


def trajectory_svg(trajectories: dict, eps: float) -> str:
    """Three stacked panels (alpha10, alpha20, alpha30 vs tau)."""
    panels = []
    for c, name in enumerate(("alpha10", "alpha20", "alpha30")):
        series = [Series(label, tr[0], tr[1][:, c]) for label, tr in trajectories.items()]
        panels.append(Panel(f"{name}  (eps = {eps:g})", "tau", name, series))
    return render(panels)


def error_curve_svg(samples: np.ndarray, title: str) -> str:
    """``samples`` columns: eps, E_R, E_RN, E_R_RWA (spline samples)."""
    series = [Series(lab, samples[:, 0], samples[:, k + 1]) for k, lab in enumerate(("E_R", "E_RN", "E_R_RWA"))]
    return render([Panel(title, "eps", "max relative error", series, [0.15, 0.10, 0.05, 0.01], ymin=0.0)])
