"""Fault-space diagrams as SVG: time on X, memory bits on Y, one color per outcome."""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .campaign import CampaignResult
from .configuration import as_configuration
from .predictor import _CODES, Predictor, excluded_times, removed_before
from .interp import Outcome

FILLS = {
    "sdc": "#808080",
    "benign": "#ffffff",
    "trap": "#e6c229",
    "timeout": "#e07a2f",
    "detected1": "#1a7a1a",
    "detected2": "#8fd18f",
}
_BY_CODE = {
    _CODES[Outcome.SDC]: "sdc",
    _CODES[Outcome.BENIGN]: "benign",
    _CODES[Outcome.TRAP]: "trap",
    _CODES[Outcome.TIMEOUT]: "timeout",
}

LEFT, TOP, RIGHT, BOTTOM = 96, 40, 16, 48


def _cell_size(runtime: int, bits: int) -> tuple[int, int]:
    cw = min(24, max(1, 720 // max(runtime, 1)))
    ch = min(12, max(1, 480 // max(bits, 1)))
    return cw, ch


def regions(campaign: CampaignResult, c) -> list[tuple[str, int, int, int, int]]:
    """Maximal same-class rectangles as (class, t0, t1, bit0, bit1), half-open.

    Times are on the configuration's compressed timeline. Rows are merged
    horizontally first, then runs of identical rows within one variable
    are merged vertically.
    """
    c = as_configuration(c, campaign.n_assertions)
    pred = Predictor(campaign)
    excluded = excluded_times(campaign, c)
    codes = pred.classify(c)
    enabled = np.asarray(c.bits, dtype=bool)
    n_hits = pred.detectors[:, enabled].sum(axis=1) if enabled.any() else np.zeros(len(codes), int)
    lo = pred.lo - removed_before(excluded, pred.lo)
    hi = pred.hi - removed_before(excluded, pred.hi)

    rows: dict[int, list[list]] = {}
    for r, code, hits, a, b in zip(campaign.records, codes, n_hits, lo, hi):
        if a == b:
            continue
        if code == _CODES[Outcome.DETECTED]:
            cls = "detected2" if hits >= 2 else "detected1"
        else:
            cls = _BY_CODE[int(code)]
        row = rows.setdefault(r.bit, [])
        if row and row[-1][0] == cls and row[-1][2] == a:
            row[-1][2] = int(b)
        else:
            row.append([cls, int(a), int(b)])

    var_of = [0] * campaign.total_bits
    for k, (_, off, n) in enumerate(campaign.variables):
        for bit in range(off, off + n):
            var_of[bit] = k

    out = []
    bit = 0
    while bit < campaign.total_bits:
        segs = rows.get(bit, [])
        end = bit + 1
        while (end < campaign.total_bits and var_of[end] == var_of[bit]
               and rows.get(end, []) == segs):
            end += 1
        out.extend((cls, t0, t1, bit, end) for cls, t0, t1 in segs)
        bit = end
    return out


def render_svg(campaign: CampaignResult, c) -> str:
    """SVG 1.1 document for configuration ``c``; byte-identical for equal inputs."""
    c = as_configuration(c, campaign.n_assertions)
    excluded = excluded_times(campaign, c)
    runtime = campaign.T - sum(e - s for s, e in excluded)
    bits = campaign.total_bits
    cw, ch = _cell_size(runtime, bits)
    pw, ph = runtime * cw, bits * ch
    width, height = LEFT + pw + RIGHT, TOP + ph + BOTTOM

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}"'
        f' viewBox="0 0 {width} {height}" data-config="{c}" data-runtime="{runtime}"'
        f' data-bits="{bits}" data-cell-width="{cw}" data-cell-height="{ch}">',
        f"<title>{escape(f'config {c} program {campaign.program_digest}')}</title>",
        f'<text x="{LEFT}" y="{TOP - 24}" font-family="sans-serif" font-size="12">'
        f"config {c}  runtime {runtime}  bits {bits}</text>",
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#000000"/>',
        '<g id="cells" shape-rendering="crispEdges">',
    ]
    for cls, t0, t1, b0, b1 in regions(campaign, c):
        lines.append(
            f'<rect x="{LEFT + t0 * cw}" y="{TOP + b0 * ch}" width="{(t1 - t0) * cw}"'
            f' height="{(b1 - b0) * ch}" fill="{FILLS[cls]}" data-class="{cls}"'
            f' data-t0="{t0}" data-t1="{t1}" data-b0="{b0}" data-b1="{b1}"/>'
        )
    lines.append("</g>")

    lines.append('<g id="variables" font-family="sans-serif" font-size="10">')
    for name, off, n in campaign.variables:
        y0 = TOP + off * ch
        lines.append(f'<line x1="{LEFT - 4}" y1="{y0}" x2="{LEFT + pw}" y2="{y0}" stroke="#000000"'
                     ' stroke-width="0.5"/>')
        lines.append(f'<text x="{LEFT - 6}" y="{y0 + n * ch / 2 + 3:.1f}" text-anchor="end">'
                     f"{escape(name)}</text>")
    lines.append("</g>")

    # enabled assertion windows along the time axis
    lines.append('<g id="windows" font-family="sans-serif" font-size="9">')
    on = set(c.enabled)
    for w in campaign.windows:
        if w.assertion_index not in on:
            continue
        s = w.t_start - int(removed_before(excluded, w.t_start))
        e = w.t_end - int(removed_before(excluded, w.t_end))
        aid = campaign.assertion_ids[w.assertion_index]
        lines.append(
            f'<rect x="{LEFT + s * cw}" y="{TOP + ph + 4}" width="{(e - s) * cw}" height="8"'
            f' fill="#1a7a1a" data-window={quoteattr(aid)} data-instance="{w.instance}"/>'
        )
    lines.append("</g>")
    lines.append(f'<text x="{LEFT + pw / 2:.1f}" y="{height - 8}" text-anchor="middle"'
                 ' font-family="sans-serif" font-size="11">time step</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
