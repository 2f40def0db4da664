"""Figures and tables: RDM heatmaps, RSA bar charts, CSV/JSON result dumps.

SVG is assembled by hand with fixed-precision coordinates so identical inputs
produce identical bytes; every plotted quantity comes straight from an RDM or
RsaResult that the tables also serialize. No plotting library involved.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ReportError
from .rdm_engine import RDM
from .rsa_stats import RsaResult
from .stimulus_bank import note_name

REPORT_SCHEMA_VERSION = 1

# single-hue luminance ramps, light (value 0) to dark (value 1)
PALETTES = {
    "blues": ((247, 251, 255), (8, 48, 107)),
    "greys": ((250, 250, 250), (35, 35, 35)),
}

_MODEL_BAR_COLORS = {
    "pitch_height": "#4c78a8",
    "chroma_binary": "#e49444",
    "chroma_circular": "#d1615d",
}
_DEFAULT_BAR_COLOR = "#85b6b2"


@dataclass(frozen=True)
class FigureSpec:
    kind: str  # rdm_heatmap | rsa_bars
    title: str
    inputs: tuple = ()
    palette: str = "blues"
    size_px: tuple = (760, 760)
    config_hash: str = ""

    def __post_init__(self):
        if self.kind not in ("rdm_heatmap", "rsa_bars"):
            raise ReportError(f"unknown figure kind {self.kind!r}")
        if self.palette not in PALETTES:
            raise ReportError(f"unknown palette {self.palette!r}")
        if self.size_px[0] <= 0 or self.size_px[1] <= 0:
            raise ReportError("figure size must be positive")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _color(value: float, palette: str) -> str:
    lo, hi = PALETTES[palette]
    v = min(max(value, 0.0), 1.0)
    r, g, b = (round(l + (h - l) * v) for l, h in zip(lo, hi))
    return f"#{r:02x}{g:02x}{b:02x}"


def _svg_document(spec: FigureSpec, body: list, extra_meta: dict) -> str:
    w, h = spec.size_px
    meta = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": spec.kind,
        "title": spec.title,
        "inputs": list(spec.inputs),
        "config_hash": spec.config_hash,
    }
    meta.update(extra_meta)
    meta_json = json.dumps(meta, sort_keys=True, separators=(",", ":"), allow_nan=False)
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f"<metadata>{_esc(meta_json)}</metadata>",
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
        f'<text x="{w / 2:.1f}" y="24" font-family="sans-serif" font-size="15" '
        f'text-anchor="middle">{_esc(spec.title)}</text>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def render_rdm_heatmap(rdm: RDM, spec: FigureSpec) -> str:
    """n x n heatmap of a plotting-normalized RDM with octave rules and note labels."""
    if spec.kind != "rdm_heatmap":
        raise ReportError("spec.kind must be 'rdm_heatmap'")
    mask = ~np.eye(rdm.n, dtype=bool)
    off = rdm.values[mask]
    if abs(float(off.min())) > 1e-9 or abs(float(off.max()) - 1.0) > 1e-9:
        raise ReportError("heatmap requires a normalized RDM (off-diagonal range [0,1])")
    w, h = spec.size_px
    left, top, right, bottom = 64.0, 44.0, 18.0, 64.0
    n = rdm.n
    cell_w = (w - left - right) / n
    cell_h = (h - top - bottom) / n
    body = []
    for i in range(n):
        for j in range(n):
            x = left + j * cell_w
            y = top + i * cell_h
            fill = _color(float(rdm.values[i, j]), spec.palette)
            body.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell_w:.2f}" '
                        f'height="{cell_h:.2f}" fill="{fill}"/>')
    # octave boundaries: rule before every C
    for idx in range(1, n):
        if rdm.labels[idx] % 12 == 0:
            gx = left + idx * cell_w
            gy = top + idx * cell_h
            body.append(f'<line x1="{gx:.2f}" y1="{top:.2f}" x2="{gx:.2f}" '
                        f'y2="{top + n * cell_h:.2f}" stroke="#555555" stroke-width="1"/>')
            body.append(f'<line x1="{left:.2f}" y1="{gy:.2f}" x2="{left + n * cell_w:.2f}" '
                        f'y2="{gy:.2f}" stroke="#555555" stroke-width="1"/>')
    for idx, midi in enumerate(rdm.labels):
        label = _esc(note_name(midi))
        ly = top + (idx + 0.5) * cell_h
        lx = left + (idx + 0.5) * cell_w
        body.append(f'<text x="{left - 6:.2f}" y="{ly + 2.5:.2f}" font-family="sans-serif" '
                    f'font-size="7" text-anchor="end">{label}</text>')
        body.append(f'<text x="{lx:.2f}" y="{top + n * cell_h + 8:.2f}" '
                    f'font-family="sans-serif" font-size="7" text-anchor="middle" '
                    f'transform="rotate(-90 {lx:.2f} {top + n * cell_h + 8:.2f})" '
                    f'>{label}</text>')
    return _svg_document(spec, body, {"n_notes": n})


def _halfmoon(cx: float, cy: float) -> str:
    return (f'<path d="M {cx - 5:.2f} {cy:.2f} A 5 5 0 0 1 {cx + 5:.2f} {cy:.2f} Z" '
            f'fill="#222222" class="sig-zero"/>')


def _dewdrop(cx: float, cy: float) -> str:
    return (f'<path d="M {cx:.2f} {cy - 9:.2f} C {cx + 5:.2f} {cy - 3:.2f} '
            f'{cx + 4:.2f} {cy + 3:.2f} {cx:.2f} {cy + 3:.2f} '
            f'C {cx - 4:.2f} {cy + 3:.2f} {cx - 5:.2f} {cy - 3:.2f} '
            f'{cx:.2f} {cy - 9:.2f} Z" fill="#555555" class="sig-ceiling"/>')


def render_rsa_bars(results, spec: FigureSpec) -> str:
    """Bar chart of mean Spearman rho with SEM whiskers, noise-ceiling bands,
    and significance glyphs (filled half-moon: vs zero; drop: below ceiling)."""
    if spec.kind != "rsa_bars":
        raise ReportError("spec.kind must be 'rsa_bars'")
    results = list(results)
    if not results:
        raise ReportError("no results to plot")
    fam = {(r.alpha, r.n_comparisons) for r in results}
    if len(fam) != 1:
        raise ReportError("results from mixed test families cannot share a figure")
    w, h = spec.size_px
    left, top, right, bottom = 64.0, 44.0, 18.0, 84.0
    plot_w = w - left - right
    plot_h = h - top - bottom

    finite = [v for r in results
              for v in (r.mean_rho, (r.mean_rho + r.sem) if not math.isnan(r.sem) else math.nan,
                        (r.mean_rho - r.sem) if not math.isnan(r.sem) else math.nan,
                        r.noise_lower, r.noise_upper)
              if not math.isnan(v)]
    y_hi = max(1.0, max(finite) if finite else 1.0) + 0.05
    y_lo = min(0.0, min(finite) if finite else 0.0) - 0.05
    y_hi = math.ceil(y_hi * 10.0) / 10.0
    y_lo = math.floor(y_lo * 10.0) / 10.0

    def ypix(v: float) -> float:
        return top + (y_hi - v) / (y_hi - y_lo) * plot_h

    body = []
    tick = math.ceil(y_lo / 0.2) * 0.2
    while tick <= y_hi + 1e-9:
        yy = ypix(tick)
        body.append(f'<line x1="{left:.2f}" y1="{yy:.2f}" x2="{left + plot_w:.2f}" '
                    f'y2="{yy:.2f}" stroke="#dddddd" stroke-width="1"/>')
        body.append(f'<text x="{left - 6:.2f}" y="{yy + 3:.2f}" font-family="sans-serif" '
                    f'font-size="9" text-anchor="end">{_fmt(tick)}</text>')
        tick += 0.2
    zero_y = ypix(0.0)
    body.append(f'<line x1="{left:.2f}" y1="{zero_y:.2f}" x2="{left + plot_w:.2f}" '
                f'y2="{zero_y:.2f}" stroke="#777777" stroke-width="1"/>')

    slot = plot_w / len(results)
    bar_w = slot * 0.55
    for i, r in enumerate(results):
        x0 = left + i * slot
        cx = x0 + slot / 2.0
        if not (math.isnan(r.noise_lower) or math.isnan(r.noise_upper)):
            by0 = ypix(r.noise_upper)
            by1 = ypix(r.noise_lower)
            body.append(f'<rect x="{x0 + slot * 0.08:.2f}" y="{by0:.2f}" '
                        f'width="{slot * 0.84:.2f}" height="{max(by1 - by0, 0.5):.2f}" '
                        f'fill="#bbbbbb" fill-opacity="0.55" class="ceiling-band"/>')
        if not math.isnan(r.mean_rho):
            color = _MODEL_BAR_COLORS.get(r.model_name, _DEFAULT_BAR_COLOR)
            by = ypix(max(r.mean_rho, 0.0))
            bh = abs(ypix(r.mean_rho) - zero_y)
            body.append(f'<rect x="{cx - bar_w / 2:.2f}" y="{min(by, zero_y):.2f}" '
                        f'width="{bar_w:.2f}" height="{max(bh, 0.1):.2f}" '
                        f'fill="{color}" class="bar"/>')
            if not math.isnan(r.sem):
                wy0 = ypix(r.mean_rho + r.sem)
                wy1 = ypix(r.mean_rho - r.sem)
                body.append(f'<line x1="{cx:.2f}" y1="{wy0:.2f}" x2="{cx:.2f}" '
                            f'y2="{wy1:.2f}" stroke="#222222" stroke-width="1.2"/>')
                for wy in (wy0, wy1):
                    body.append(f'<line x1="{cx - 4:.2f}" y1="{wy:.2f}" '
                                f'x2="{cx + 4:.2f}" y2="{wy:.2f}" '
                                f'stroke="#222222" stroke-width="1.2"/>')
            glyph_y = min(ypix(max(r.mean_rho + (0.0 if math.isnan(r.sem) else r.sem), 0.0)),
                          zero_y) - 12.0
            if r.sig_vs_zero:
                body.append(_halfmoon(cx - (7.0 if r.sig_below_ceiling else 0.0), glyph_y))
            if r.sig_below_ceiling:
                body.append(_dewdrop(cx + (7.0 if r.sig_vs_zero else 0.0), glyph_y))
        label_y = top + plot_h + 16.0
        body.append(f'<text x="{cx:.2f}" y="{label_y:.2f}" font-family="sans-serif" '
                    f'font-size="9" text-anchor="middle">{_esc(r.model_name)}</text>')
        body.append(f'<text x="{cx:.2f}" y="{label_y + 14.0:.2f}" font-family="sans-serif" '
                    f'font-size="9" text-anchor="middle">{_esc(r.representation_name)}</text>')

    body.append(f'<text x="16" y="{top + plot_h / 2:.2f}" font-family="sans-serif" '
                f'font-size="11" text-anchor="middle" '
                f'transform="rotate(-90 16 {top + plot_h / 2:.2f})">Spearman rho</text>')
    plotted = {
        "mean_rho": [None if math.isnan(r.mean_rho) else r.mean_rho for r in results],
        "sem": [None if math.isnan(r.sem) else r.sem for r in results],
        "noise_lower": [None if math.isnan(r.noise_lower) else r.noise_lower for r in results],
        "noise_upper": [None if math.isnan(r.noise_upper) else r.noise_upper for r in results],
    }
    return _svg_document(spec, body, {"plotted": plotted})


# ---------------------------------------------------------------------------
# tables

_CSV_COLUMNS = (
    "representation_name", "model_name", "mean_rho", "sem", "p_vs_zero", "sig_vs_zero",
    "noise_lower", "noise_upper", "p_vs_ceiling", "sig_below_ceiling", "alpha",
    "n_comparisons", "per_instrument_rho",
)


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_tables(results, csv_path, json_path) -> None:
    """CSV (one row per result, RFC-4180) and JSON with every RsaResult field."""
    results = list(results)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for r in results:
        row = []
        for col in _CSV_COLUMNS[:-1]:
            v = getattr(r, col)
            row.append(_csv_cell(v))
        row.append(";".join(repr(float(x)) for x in r.per_instrument_rho))
        writer.writerow(row)
    Path(csv_path).write_text(buf.getvalue(), encoding="utf-8")
    doc = {"schema_version": REPORT_SCHEMA_VERSION,
           "results": [r.to_dict() for r in results]}
    Path(json_path).write_text(
        json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n",
        encoding="utf-8")


def read_results_json(path) -> list:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    out = []
    for d in doc["results"]:
        def unscrub(x):
            return math.nan if x is None else x
        out.append(RsaResult(
            representation_name=d["representation_name"],
            model_name=d["model_name"],
            per_instrument_rho=tuple(unscrub(x) for x in d["per_instrument_rho"]),
            mean_rho=unscrub(d["mean_rho"]),
            sem=unscrub(d["sem"]),
            p_vs_zero=unscrub(d["p_vs_zero"]),
            sig_vs_zero=d["sig_vs_zero"],
            noise_lower=unscrub(d["noise_lower"]),
            noise_upper=unscrub(d["noise_upper"]),
            p_vs_ceiling=unscrub(d["p_vs_ceiling"]),
            sig_below_ceiling=d["sig_below_ceiling"],
            alpha=d["alpha"],
            n_comparisons=d["n_comparisons"],
        ))
    return out
