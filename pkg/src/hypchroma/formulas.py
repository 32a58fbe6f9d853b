"""Closed-form hyperbolic trigonometry for every quantity the toolkit uses.

Each function is total over its validated domain and raises
GeometryInfeasibleError / InvalidInputError outside it, so the surface and
coloring constructions can rely on the domain checks.  The geometric kernel
provides independent numeric constructions for these same quantities; the
test suite cross-checks the two routes against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GeometryInfeasibleError, InvalidInputError
from .kernel import arccosh1p

ARCSINH_1 = math.asinh(1.0)

#: thinness below which half-collars are convex
CONVEXITY_THINNESS = math.asinh(1.0 / math.sqrt(2.0))

#: crossover of the net degree bound between its small-d and large-d branches
DEGREE_BOUND_BRANCH = 10.0 * ARCSINH_1


def _require_finite(**kwargs):
    for name, value in kwargs.items():
        if not math.isfinite(value):
            raise InvalidInputError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class CollarGeometry:
    """Collar of a simple closed geodesic, cut at constant injectivity radius.

    ``width`` is the collar-lemma half-width arcsinh(1/sinh(L/2)) of the
    geodesic of length ``geodesic_length``; ``boundary_distance`` is the
    distance from the geodesic to the curve where embedded loops have length
    2 * ``thinness``.  ``margin = width - boundary_distance`` is positive for
    thinness below arcsinh(1), which is what lets the thin part sit strictly
    inside the collars.
    """

    geodesic_length: float
    thinness: float
    width: float
    boundary_distance: float
    margin: float


def collar_geometry(geodesic_length, thinness):
    """Collar width, boundary distance and their margin for a geodesic of given length.

    Raises
    ------
    GeometryInfeasibleError
        If sinh(thinness) < sinh(length/2): the boundary distance is
        undefined (the geodesic is not that thin to begin with).
    InvalidInputError
        For thinness beyond arcsinh(1), where the collar comparison loses
        its meaning (the margin would go negative).
    """
    _require_finite(geodesic_length=geodesic_length, thinness=thinness)
    if geodesic_length <= 0:
        raise InvalidInputError("geodesic length must be positive")
    if thinness <= 0:
        raise InvalidInputError("thinness must be positive")
    if thinness > ARCSINH_1 + 1e-12:
        raise InvalidInputError("thinness above arcsinh(1): collar margin is no longer positive")
    h = 0.5 * geodesic_length
    sh = math.sinh(h)
    # sinh(eps) - sinh(h) without cancellation
    num = 2.0 * math.cosh(0.5 * (thinness + h)) * math.sinh(0.5 * (thinness - h))
    if num < -1e-12:
        raise GeometryInfeasibleError(
            "boundary distance undefined: sinh(thinness) < sinh(length/2)"
        )
    num = max(num, 0.0)
    width = math.asinh(1.0 / sh)
    boundary_distance = float(arccosh1p(num / sh))
    return CollarGeometry(
        geodesic_length=geodesic_length,
        thinness=thinness,
        width=width,
        boundary_distance=boundary_distance,
        margin=width - boundary_distance,
    )


def ideal_clique_distance(n):
    """Pairwise center distance in the ideal regular n-gon surface (twice the inradius)."""
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    s = math.sin(math.pi / n)
    return math.acosh(2.0 / (s * s) - 1.0)


def truncated_clique_distance(n, t):
    """Center distance across a pasted side of the right-angled 2n-gon with hole size t."""
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    if not math.isfinite(t) or t < 0:
        raise InvalidInputError("t must be a nonnegative real")
    s = math.sin(math.pi / n)
    # cosh(d/2) = cosh(t/2) / sin(pi/n)
    return 2.0 * float(arccosh1p((math.cosh(0.5 * t) - s) / s))


def truncation_for_distance(n, d):
    """Inverse of truncated_clique_distance in t: the hole size realizing center distance d.

    Raises GeometryInfeasibleError for d below the ideal-polygon distance,
    where no truncation can realize d.
    """
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    _require_finite(d=d)
    u = math.cosh(0.5 * d) * math.sin(math.pi / n) - 1.0
    if u < -1e-12:
        raise GeometryInfeasibleError(
            f"no truncation realizes distance {d}: below the ideal-polygon distance for n={n}"
        )
    return 2.0 * float(arccosh1p(max(u, 0.0)))


def equilateral_side(n):
    """Side length of the equilateral triangle with all angles 2*pi/n (needs n >= 7)."""
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    if n <= 6:
        raise GeometryInfeasibleError(
            "angles 2*pi/n with n <= 6 give a Euclidean or spherical triangle"
        )
    a = 2.0 * math.pi / n
    c = math.cos(a)
    s2 = math.sin(a) ** 2
    return math.acosh((c * c + c) / s2)


@dataclass(frozen=True)
class HoledTriangleMetrics:
    """Outer side length and vertex-to-hole distance of the one-holed triangle block."""

    side_length: float
    vertex_to_hole: float

    @property
    def margin(self):
        """vertex_to_hole - side_length/2; must be positive for geometric clique edges."""
        return self.vertex_to_hole - 0.5 * self.side_length


def holed_triangle_metrics(n, t):
    """Metrics of the one-holed triangle with corner angles 2*pi/n and hole length t."""
    if n != int(n) or n < 7:
        raise InvalidInputError("need an integer n >= 7")
    if not math.isfinite(t) or t <= 0:
        raise InvalidInputError("hole length t must be positive")
    s = math.sin(math.pi / n)
    side = 2.0 * math.acosh(math.cosh(t / 6.0) / s)
    ratio = math.sinh(0.5 * side) / math.sinh(t / 6.0)
    if ratio < 1.0:
        raise GeometryInfeasibleError("vertex-to-hole distance undefined for these parameters")
    return HoledTriangleMetrics(side_length=side, vertex_to_hole=math.acosh(ratio))


def annulus_degree_bound(d, r0):
    """Packing bound on the degree of a net point: sinh(5 r0/2) sinh(d) / sinh^2(r0/4).

    Counts how many disjoint r0/2-balls fit in the annulus of radii
    d -+ 5 r0/2; equals (sinh^2((d + 5 r0/2)/2) - sinh^2((d - 5 r0/2)/2))
    / sinh^2(r0/4) by the product identity for sinh.
    """
    _require_finite(d=d, r0=r0)
    if d <= 0:
        raise InvalidInputError("d must be positive")
    if not (0 < r0 <= 2.0 * d / 5.0 + 1e-12):
        raise InvalidInputError("need 0 < r0 <= 2d/5 for balls of diameter below d")
    q = math.sinh(0.25 * r0)
    return math.sinh(2.5 * r0) * math.sinh(d) / (q * q)


def net_degree_bound(d):
    """Degree bound of the net distance graph as a function of d alone.

    Piecewise: sinh^2(d)/sinh^2(d/10) up to d = 10 arcsinh(1), then
    sinh(10 arcsinh(1)) sinh(d); continuous at the crossover.  One more than
    this is the color count of the net coloring.  The crossover constant is
    kept exactly as the bound is stated; annulus_degree_bound(d, r0) is the
    self-consistent form for any explicit r0.
    """
    _require_finite(d=d)
    if d <= 0:
        raise InvalidInputError("d must be positive")
    if d <= DEGREE_BOUND_BRANCH:
        q = math.sinh(0.1 * d)
        return math.sinh(d) ** 2 / (q * q)
    return math.sinh(DEGREE_BOUND_BRANCH) * math.sinh(d)
