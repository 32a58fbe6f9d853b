"""Coloring the thin cylinders: slicing half-collars into bounded-diameter sections.

A thin cylinder around a geodesic of length L carries the metric
drho^2 + L^2 cosh^2(rho) dt^2, so the curve parallel to the geodesic at
distance rho has length L cosh(rho).  Each half-collar is cut top-down into
sections whose estimated diameter (height plus half the longer boundary
curve) stays just below d; the heights of all but the last section then
exceed d/2, which caps the section graph degree at 4 and the palette at 5
colors per half, 10 per cylinder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError, ParameterRegimeError
from .formulas import ARCSINH_1, CONVEXITY_THINNESS, collar_geometry

#: relative shortfall of the target diameter below d
DIAMETER_SLACK = 1e-6


def parallel_curve_length(geodesic_length, rho):
    """Length of the curve parallel to the core geodesic at distance rho."""
    if geodesic_length <= 0:
        raise InvalidInputError("geodesic length must be positive")
    if rho < 0:
        raise InvalidInputError("rho must be nonnegative")
    return geodesic_length * math.cosh(rho)


@dataclass(frozen=True)
class Section:
    """One slice of a half-collar: rho_top > rho_bottom >= 0 (distances from the core)."""

    rho_top: float
    rho_bottom: float
    height: float
    diam_bound: float
    color: int | None = None

    def replace_color(self, color):
        return Section(self.rho_top, self.rho_bottom, self.height, self.diam_bound, color)


@dataclass(frozen=True)
class SectionDecomposition:
    """Slicing of one half-collar, top (boundary) down to the core geodesic."""

    geodesic_length: float
    thinness: float
    boundary_distance: float
    d: float
    sections: tuple
    regime_notes: tuple

    def heights_ok(self):
        """All non-final section heights exceed d/2 (the degree-4 workhorse)."""
        return all(s.height > 0.5 * self.d for s in self.sections[:-1])


def slice_half_collar(geodesic_length, thinness, d, r0=None):
    """Slice one half-collar into sections of estimated diameter just below d.

    The section with the half-collar boundary on top is cut first; each
    section's height is d' - (top parallel curve)/2 with d' = d (1 - 1e-6),
    which bounds its diameter by d' < d.  The a-priori sufficient conditions
    (boundary curve <= r0 <= d/2) are reported, not enforced: what is
    enforced is the outcome, every non-final height > d/2.

    Raises
    ------
    ParameterRegimeError
        Naming the failed inequality when the slicing cannot deliver the
        height guarantee, or when thinness exceeds the convexity threshold
        arcsinh(1/sqrt(2)).
    """
    if d <= 0 or not math.isfinite(d):
        raise InvalidInputError("d must be positive")
    if thinness > CONVEXITY_THINNESS + 1e-12:
        raise ParameterRegimeError(
            f"thinness {thinness} > arcsinh(1/sqrt 2) = {CONVEXITY_THINNESS}: half-collars "
            "are no longer guaranteed convex"
        )
    cg = collar_geometry(geodesic_length, thinness)  # validates the rest
    k_c = cg.boundary_distance
    boundary_len = parallel_curve_length(geodesic_length, k_c)

    notes = []
    if r0 is None:
        r0 = min(2.0 * d / 5.0, ARCSINH_1)
    if boundary_len > r0:
        notes.append(
            f"boundary curve {boundary_len:.6g} exceeds r0 {r0:.6g}; relying on the "
            "per-instance height audit instead of the a-priori bound"
        )
    if r0 > 0.5 * d:
        notes.append(f"r0 {r0:.6g} exceeds d/2 {0.5 * d:.6g}")

    d_target = d * (1.0 - DIAMETER_SLACK)
    sections = []
    rho = k_c
    while rho > 0:
        top_curve = parallel_curve_length(geodesic_length, rho)
        height = d_target - 0.5 * top_curve
        if height <= 0:
            raise ParameterRegimeError(
                f"section height d' - boundary/2 = {height:.6g} <= 0 at rho = {rho:.6g}: "
                "boundary curve too long for diameter-d sections"
            )
        if height >= rho:
            sections.append(Section(rho, 0.0, rho, rho + 0.5 * top_curve))
            break
        sections.append(Section(rho, rho - height, height, d_target))
        rho = rho - height
    decomposition = SectionDecomposition(
        geodesic_length=geodesic_length,
        thinness=thinness,
        boundary_distance=k_c,
        d=d,
        sections=tuple(sections),
        regime_notes=tuple(notes),
    )
    for s in decomposition.sections[:-1]:
        if s.height <= 0.5 * d:
            raise ParameterRegimeError(
                f"non-final section height {s.height:.6g} <= d/2 = {0.5 * d:.6g}"
            )
    if any(s.diam_bound >= d for s in decomposition.sections):
        raise ParameterRegimeError("a section diameter bound reached d")
    return decomposition


def section_graph(decomposition):
    """Adjacency among the sections of one half: edge iff a distance-d pair may exist.

    Conservative interval test on the rho axis: sections can host a pair at
    distance exactly d iff their gap is below d and d does not exceed their
    span plus the circumferential slack of the hull.
    """
    secs = decomposition.sections
    L = decomposition.geodesic_length
    d = decomposition.d
    n = len(secs)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            hi, lo = secs[min(i, j)], secs[max(i, j)]
            gap = max(hi.rho_bottom - lo.rho_top, 0.0)
            span = hi.rho_top - lo.rho_bottom
            slack = 0.5 * parallel_curve_length(L, hi.rho_top)
            if gap < d <= span + slack:
                edges.append((i, j))
    # adjacent sections always interact
    for i in range(n - 1):
        if (i, i + 1) not in edges:
            edges.append((i, i + 1))
    return sorted(edges)


def color_half(decomposition, palette_offset=0):
    """Greedy coloring of one half's section graph; returns colored sections."""
    secs = list(decomposition.sections)
    edges = section_graph(decomposition)
    neighbors = {i: set() for i in range(len(secs))}
    for i, j in edges:
        neighbors[i].add(j)
        neighbors[j].add(i)
    colors = {}
    for i in range(len(secs)):
        used = {colors[j] for j in neighbors[i] if j in colors}
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    return [s.replace_color(colors[i] + palette_offset) for i, s in enumerate(secs)], max(colors.values()) + 1


def color_cylinder(geodesic_length, thinness, d, r0=None):
    """Slice and color both halves of a thin cylinder with disjoint palettes.

    Returns (decomposition, colored sections of both halves, colors used);
    by the height guarantee the per-half graph has degree at most 4, so at
    most 5 colors per half and 10 per cylinder are used.
    """
    deco = slice_half_collar(geodesic_length, thinness, d, r0=r0)
    plus, n_plus = color_half(deco, palette_offset=0)
    minus, n_minus = color_half(deco, palette_offset=n_plus)
    return deco, {"plus": plus, "minus": minus}, n_plus + n_minus


def max_section_degree(decomposition):
    edges = section_graph(decomposition)
    deg = {}
    for i, j in edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    return max(deg.values(), default=0)


def cylinder_budget(genus):
    """Color budget for all thin cylinders of a closed genus-g surface: 10(3g-3)."""
    if genus != int(genus) or genus < 2:
        raise InvalidInputError("need an integer genus >= 2")
    return 10 * (3 * int(genus) - 3)


def decomposition_to_json(decomposition, colored=None):
    """JSON dump {l_gamma, eps, K_C, sections: [...]} of one half-collar slicing."""
    secs = colored if colored is not None else list(decomposition.sections)
    return {
        "l_gamma": decomposition.geodesic_length,
        "eps": decomposition.thinness,
        "K_C": decomposition.boundary_distance,
        "d": decomposition.d,
        "sections": [
            {
                "rho_top": s.rho_top,
                "rho_bottom": s.rho_bottom,
                "height": s.height,
                "diam_bound": s.diam_bound,
                "color": s.color,
            }
            for s in secs
        ],
        "notes": list(decomposition.regime_notes),
    }
