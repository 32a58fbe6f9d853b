"""Poincare-disk SVG rendering. Presentation only: nothing parses these back."""

from __future__ import annotations

import math

import numpy as np

from . import kernel

_PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#2f4b7c", "#ffa600",
]


def _color(i):
    return _PALETTE[i % len(_PALETTE)]


def _svg_header(size):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="-1.05 -1.05 2.1 2.1">\n'
        '<circle cx="0" cy="0" r="1" fill="white" stroke="black" stroke-width="0.004"/>\n'
    )


def _poincare_path(points, close=True):
    cmds = []
    for k, z in enumerate(points):
        cmds.append(("M" if k == 0 else "L") + f"{z[0]:.5f},{z[1]:.5f}")
    if close:
        cmds.append("Z")
    return " ".join(cmds)


def _ball_outline(center, radius, segments=24):
    pts = [kernel.point_at(center, 2.0 * math.pi * k / segments, radius) for k in range(segments)]
    return kernel.to_poincare(np.array(pts))


def render_net(net, coloring, path=None, size=640):
    """Colored net disk: one fill per color class, region boundary dashed."""
    body = [_svg_header(size)]
    rim = _ball_outline(net.base, net.region_radius, segments=96)
    body.append(
        f'<path d="{_poincare_path(rim)}" fill="none" stroke="#888" '
        'stroke-width="0.003" stroke-dasharray="0.02,0.012"/>\n'
    )
    for i, center in enumerate(net.centers):
        outline = _ball_outline(center, net.r)
        body.append(
            f'<path d="{_poincare_path(outline)}" fill="{_color(int(coloring.colors[i]))}" '
            'fill-opacity="0.55" stroke="none"/>\n'
        )
    body.append("</svg>\n")
    text = "".join(body)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _sample_geodesic(a, b, segments=16):
    d = kernel.dist(a, b)
    if d < 1e-12:
        return np.array([a, b])
    pts = []
    for k in range(segments + 1):
        s = k / segments
        # geodesic interpolation via the Minkowski linear combination
        w = math.sinh((1 - s) * d) * np.asarray(a) + math.sinh(s * d) * np.asarray(b)
        pts.append(kernel.normalize_point(w / math.sinh(d)))
    return np.array(pts)


def _is_null(v):
    return abs(float(kernel.minkowski_dot(v, v))) < 1e-8 * v[0] * v[0]


def _disk_coords(v):
    """Disk chart for finite points and boundary chart for null rays."""
    if _is_null(v):
        return np.array([v[1] / v[0], v[2] / v[0]])
    return kernel.to_poincare(kernel.normalize_point(v))


def render_developed_patch(surface, chains, path=None, size=640):
    """Developed polygons of one or more chains, drawn as geodesic outlines.

    Sides with an ideal endpoint degrade to straight chords; finite sides are
    sampled along the actual geodesic.
    """
    body = [_svg_header(size)]
    for chain in chains:
        for k, poly_id in enumerate(chain.polygons):
            real = surface.realization(poly_id)
            mat = chain.placements[k]
            verts = [np.asarray(mat) @ np.asarray(v, dtype=float) for v in real.vertices]
            outline = []
            for i, v in enumerate(verts):
                w = verts[(i + 1) % len(verts)]
                if _is_null(v) or _is_null(w):
                    outline.append(_disk_coords(v))
                    outline.append(_disk_coords(w))
                else:
                    seg = _sample_geodesic(kernel.normalize_point(v), kernel.normalize_point(w))
                    outline.extend(kernel.to_poincare(seg))
            body.append(
                f'<path d="{_poincare_path(np.array(outline))}" fill="none" '
                f'stroke="{_color(k)}" stroke-width="0.004"/>\n'
            )
            center = kernel.to_poincare(chain.center(k))
            body.append(
                f'<circle cx="{center[0]:.5f}" cy="{center[1]:.5f}" r="0.008" fill="{_color(k)}"/>\n'
            )
    body.append("</svg>\n")
    text = "".join(body)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
