"""Static SVG pictures of a trajectory structure."""

import numpy as np

SIZE = 600
MARGIN = 30


def _fmt(x):
    return f"{x:.2f}"


def structure_svg(structure, triangulation=None):
    """Zeros as crosses, marked directions as ticks on the escape circle,
    separatrices as solid curves and triangulation arcs as dotted chords."""
    p = structure.polynomial
    R = structure.params.escape_radius
    scale = (SIZE / 2 - MARGIN) / R

    def xy(z):
        return SIZE / 2 + scale * z.real, SIZE / 2 - scale * z.imag

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<circle cx="{SIZE / 2}" cy="{SIZE / 2}" r="{_fmt(R * scale)}" fill="none" '
        'stroke="#bbbbbb" stroke-width="1"/>',
    ]
    m = p.m
    marks = [R * np.exp(2j * np.pi * k / m) for k in range(m)]
    for k, z in enumerate(marks):
        x0, y0 = xy(0.96 * z)
        x1, y1 = xy(1.04 * z)
        lx, ly = xy(1.09 * z)
        out.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                   'stroke="black" stroke-width="2"/>')
        out.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="12" text-anchor="middle" '
                   f'dominant-baseline="middle">{k}</text>')
    if triangulation is not None:
        for i, j in triangulation.arcs:
            (x0, y0), (x1, y1) = xy(marks[i]), xy(marks[j])
            out.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                       'stroke="#3060c0" stroke-width="1.5" stroke-dasharray="2,4"/>')
    for trajs in structure.separatrices.values():
        for t in trajs:
            pts = t.points
            # keep long traces light
            step = max(1, len(pts) // 400)
            pts = np.concatenate([pts[::step], pts[-1:]])
            path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(xy, pts))
            out.append(f'<polyline points="{path}" fill="none" stroke="#c03030" stroke-width="1.2"/>')
    d = 5
    for z in p.roots:
        x, y = xy(z)
        out.append(f'<path d="M{_fmt(x - d)},{_fmt(y - d)} L{_fmt(x + d)},{_fmt(y + d)} '
                   f'M{_fmt(x - d)},{_fmt(y + d)} L{_fmt(x + d)},{_fmt(y - d)}" '
                   'stroke="black" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
