"""Numerical model of the hyperbolic plane.

Points live on the upper sheet of the unit hyperboloid in Minkowski
3-space: x0^2 - x1^2 - x2^2 = 1 with x0 >= 1.  All operations are pure
functions on small float64 arrays; isometries are 3x3 matrices preserving
the Minkowski form.  The Poincare disk appears only as a rendering chart
and as an independent cross-check in the test suite.

Distances are evaluated through the Minkowski form with a log1p-stable
arccosh so that separations down to ~1e-8 keep full relative accuracy.
Distances above ``MAX_DISTANCE`` are rejected: beyond that cosh-based
arithmetic silently sheds precision, and the rejection makes the overflow
policy explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryInfeasibleError, InvalidInputError

MAX_DISTANCE = 50.0

# Hyperboloid constraint tolerance after normalization.
POINT_TOL = 1e-12

_J_DIAG = np.array([1.0, -1.0, -1.0])


def minkowski_dot(p, q):
    """Minkowski inner product with signature (+,-,-). Broadcasts over leading axes."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return p[..., 0] * q[..., 0] - p[..., 1] * q[..., 1] - p[..., 2] * q[..., 2]


def arccosh1p(u):
    """arccosh(1 + u) evaluated stably for small u >= 0."""
    u = np.asarray(u, dtype=float)
    u = np.where(np.abs(u) < 1e-15, np.maximum(u, 0.0), u)
    if np.any(u < 0):
        raise GeometryInfeasibleError("arccosh argument below 1")
    return np.log1p(u + np.sqrt(u * (u + 2.0)))


def normalize_point(p):
    """Repair a nearly-unit timelike vector onto the hyperboloid (upper sheet).

    Rebuilds the timelike coordinate from the spacelike ones, which keeps the
    constraint exact even when x0^2 - x1^2 - x2^2 suffers heavy cancellation
    (deep points, r ~ 20 and beyond).  Deliberately does *not* rescale by the
    computed Minkowski norm: after cancellation-prone arithmetic that norm can
    be pure noise, and dividing by it would inject its error into the point.
    Callers holding a genuinely non-unit vector divide by the analytically
    known norm first.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise InvalidInputError("normalize_point expects a single 3-vector")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError("non-finite coordinates")
    if p[0] < 0:
        p = -p
    x0 = math.sqrt(1.0 + p[1] * p[1] + p[2] * p[2])
    if abs(p[0] - x0) > 1e-6 * x0:
        raise InvalidInputError("vector is too far from the hyperboloid to renormalize")
    return np.array([x0, p[1], p[2]])


def make_point(x1, x2):
    """Point of the plane from its two spacelike coordinates."""
    x1 = float(x1)
    x2 = float(x2)
    return np.array([math.sqrt(1.0 + x1 * x1 + x2 * x2), x1, x2])


def base_point():
    """The origin (1, 0, 0) used as the canonical base of polar charts."""
    return np.array([1.0, 0.0, 0.0])


def from_polar(theta, rho):
    """Point at hyperbolic polar coordinates (theta, rho) about the origin."""
    return np.array([math.cosh(rho), math.sinh(rho) * math.cos(theta), math.sinh(rho) * math.sin(theta)])


def is_valid_point(p, tol=POINT_TOL):
    """Hyperboloid membership within tol, scaled by x0^2 (the dot's noise floor)."""
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3 or not np.all(np.isfinite(p)):
        return False
    scale = 1.0 + p[..., 0] * p[..., 0]
    return bool(
        np.all(np.abs(minkowski_dot(p, p) - 1.0) <= tol * scale) and np.all(p[..., 0] >= 1.0 - tol)
    )


def _check_point(p, name="point"):
    if not is_valid_point(p, tol=1e-9):
        raise InvalidInputError(f"{name} does not satisfy the hyperboloid constraint")


def dist(p, q):
    """Hyperbolic distance between two points.

    Symmetric, zero iff the points coincide, and stable for nearby points:
    the Minkowski norm of the coordinate difference feeds a log1p-form
    arccosh, avoiding the catastrophic cancellation of arccosh(<p,q>).

    Raises
    ------
    InvalidInputError
        For non-finite/off-hyperboloid input or separations above
        ``MAX_DISTANCE``.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
        raise InvalidInputError("non-finite coordinates")
    d = p - q
    u_near = 0.5 * (d[..., 1] ** 2 + d[..., 2] ** 2 - d[..., 0] ** 2)
    u_far = minkowski_dot(p, q) - 1.0
    # The coordinate-difference form wins below cosh(d) ~ 2 (no cancellation
    # in small separations); the direct form wins for far pairs.
    u = np.where(u_far < 1.0, u_near, u_far)
    u = np.maximum(u, 0.0)  # roundoff can drive <p,q> a hair below 1
    out = arccosh1p(u)
    if np.any(out > MAX_DISTANCE):
        raise InvalidInputError(f"distance exceeds supported range {MAX_DISTANCE}")
    return float(out) if out.ndim == 0 else out


def translation_to(p):
    """Canonical isometry carrying the origin to p (translation along the joining geodesic).

    Computed as R(phi) X(rho) R(-phi) where phi, rho are the polar
    coordinates of p.  The composition keeps every entry well scaled, so the
    matrix stays an isometry to machine precision even for deep points —
    unlike Gram-Schmidt frames, whose defects get amplified by cosh(r).
    """
    p = np.asarray(p, dtype=float)
    # sinh(rho) from the spacelike part: exact on-shell, no x0^2 - 1 cancellation
    sh = math.hypot(p[1], p[2])
    if sh < 1e-300:
        return np.eye(3)
    c, s = p[1] / sh, p[2] / sh
    ch = p[0]
    return np.array(
        [
            [ch, sh * c, sh * s],
            [sh * c, 1.0 + (ch - 1.0) * c * c, (ch - 1.0) * c * s],
            [sh * s, (ch - 1.0) * c * s, 1.0 + (ch - 1.0) * s * s],
        ]
    )


def frame_at(p):
    """Deterministic orthonormal tangent frame (e1, e2) at p.

    The frame is the parallel transport of the coordinate frame at the
    origin along the geodesic to p; it pins the theta = 0 direction of
    point_at per base point.
    """
    t = translation_to(p)
    return t[:, 1].copy(), t[:, 2].copy()


def point_at(p, theta, r):
    """Exponential map: the point at distance r from p in direction theta."""
    if not np.isfinite(theta) or not np.isfinite(r):
        raise InvalidInputError("non-finite direction or radius")
    if r < 0:
        raise InvalidInputError("radius must be nonnegative")
    if r > MAX_DISTANCE:
        raise InvalidInputError(f"radius exceeds supported range {MAX_DISTANCE}")
    _check_point(p)
    if r == 0.0:
        return np.asarray(p, dtype=float).copy()
    w = np.array([math.cosh(r), math.sinh(r) * math.cos(theta), math.sinh(r) * math.sin(theta)])
    return normalize_point(translation_to(p) @ w)


def direction(p, q):
    """Unit tangent at p pointing toward q (log map direction)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    v = q - minkowski_dot(p, q) * p
    n2 = -minkowski_dot(v, v)
    if n2 <= 0:
        raise InvalidInputError("direction undefined for coincident points")
    return v / math.sqrt(n2)


def angle_at(p, q, r):
    """Interior angle at p of the geodesic triangle (p, q, r)."""
    u = direction(p, q)
    v = direction(p, r)
    c = -minkowski_dot(u, v)  # Riemannian inner product on the tangent plane
    return math.acos(min(1.0, max(-1.0, float(c))))


def rotate_tangent(p, v, alpha):
    """Rotate tangent vector v at p by alpha (counterclockwise in the frame orientation)."""
    e = np.cross(p, v)
    jv = np.array([-e[0], e[1], e[2]])
    return math.cos(alpha) * np.asarray(v) + math.sin(alpha) * jv


def lorentz_cross(a, b):
    """Vector c with <c, w> = det[a, b, w] for every w (Minkowski-orthogonal to a and b)."""
    e = np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return np.array([e[0], -e[1], -e[2]])


def geodesic_normal(p, q):
    """Unit spacelike normal of the geodesic through two points."""
    c = lorentz_cross(p, q)
    n2 = -minkowski_dot(c, c)
    if n2 <= 0:
        raise InvalidInputError("points do not span a geodesic")
    return c / math.sqrt(n2)


def ideal_point(theta):
    """Null direction vector of the ideal point at boundary angle theta."""
    return np.array([1.0, math.cos(theta), math.sin(theta)])


def dist_to_geodesic(p, normal):
    """Distance from p to the geodesic with the given unit normal."""
    return float(np.arcsinh(abs(minkowski_dot(p, normal))))


def foot_on_geodesic(p, normal):
    """Orthogonal projection of p onto the geodesic with the given unit normal."""
    s = float(minkowski_dot(p, normal))
    f = np.asarray(p, dtype=float) + s * np.asarray(normal)
    # analytic norm of the projection: sqrt(1 + s^2)
    return normalize_point(f / math.sqrt(1.0 + s * s))


def geodesic_intersection(n1, n2):
    """Intersection point of two geodesics given by unit normals; error if disjoint."""
    c = lorentz_cross(n1, n2)
    n2_ = minkowski_dot(c, c)
    if n2_ <= 0:
        raise GeometryInfeasibleError("geodesics do not intersect")
    c = c / math.sqrt(n2_)
    return c if c[0] > 0 else -c


def ball_area(rho):
    """Area of the disk of radius rho: 4 pi sinh^2(rho/2)."""
    if not np.isfinite(rho) or rho < 0:
        raise InvalidInputError("radius must be a nonnegative real")
    s = math.sinh(0.5 * rho)
    return 4.0 * math.pi * s * s


def circumference(rho):
    """Length of the circle of radius rho: 2 pi sinh(rho)."""
    if not np.isfinite(rho) or rho < 0:
        raise InvalidInputError("radius must be a nonnegative real")
    return 2.0 * math.pi * math.sinh(rho)


# ---------------------------------------------------------------------------
# Isometries


def frame_matrix(p, u, v):
    """O(1,2) matrix with columns (p, u, v): a point plus orthonormal tangent frame."""
    return np.column_stack([p, u, v])


def frame_inverse(mat):
    """Inverse of a frame matrix via the Minkowski form: J M^T J."""
    return (_J_DIAG[:, None] * mat.T) * _J_DIAG[None, :]


def isometry_between_frames(p, u, v, p2, u2, v2):
    """The isometry carrying frame (p, u, v) to frame (p2, u2, v2)."""
    return frame_matrix(p2, u2, v2) @ frame_inverse(frame_matrix(p, u, v))


def apply_isometry(mat, p):
    """Apply a 3x3 Minkowski isometry to a point (and renormalize)."""
    return normalize_point(np.asarray(mat) @ np.asarray(p, dtype=float))


def random_isometry(rng):
    """Orientation-preserving isometry drawn from a seeded generator (for tests)."""
    theta = rng.uniform(0.0, 2.0 * math.pi)
    rho = rng.uniform(0.0, 3.0)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    target = from_polar(theta, rho)
    e1, e2 = frame_at(target)
    u = rotate_tangent(target, e1, phi)
    v = rotate_tangent(target, e2, phi)
    b1, b2 = frame_at(base_point())
    return isometry_between_frames(base_point(), b1, b2, target, u, v)


# ---------------------------------------------------------------------------
# Poincare disk chart (rendering + independent oracle hooks)


def to_poincare(p):
    """Hyperboloid point -> Poincare disk coordinates (x1, x2)/(1 + x0)."""
    p = np.asarray(p, dtype=float)
    return p[..., 1:] / (1.0 + p[..., 0:1])


def from_poincare(z):
    """Poincare disk coordinates -> hyperboloid point."""
    z = np.asarray(z, dtype=float)
    r2 = np.sum(z * z, axis=-1)
    if np.any(r2 >= 1.0):
        raise InvalidInputError("Poincare coordinates must lie in the open unit disk")
    denom = 1.0 - r2
    out = np.empty(z.shape[:-1] + (3,))
    out[..., 0] = (1.0 + r2) / denom
    out[..., 1] = 2.0 * z[..., 0] / denom
    out[..., 2] = 2.0 * z[..., 1] / denom
    return out


# ---------------------------------------------------------------------------
# Root finding (bisection keeps the dependency surface minimal)


def bisect(f, lo, hi, tol=1e-14, max_iter=200):
    """Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise InvalidInputError("bisection bracket does not straddle a root")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or (hi - lo) < tol * max(1.0, abs(mid)):
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Right-angled quadrilateral solver


@dataclass(frozen=True)
class RightQuadrilateral:
    """Symmetric quadrilateral with two right angles astride a base side.

    Vertices in order A, B, C, D: right angles at B and C, the base BC of
    length ``base``, equal legs AB = CD of length ``leg``, equal apex
    angles ``apex_angle`` at A and D, and the opposite side AD of length
    ``opposite``.  ``diagonal`` is |BD| = |AC|.
    """

    base: float
    apex_angle: float
    leg: float
    opposite: float
    diagonal: float
    vertices: tuple = field(repr=False, default=())


def solve_right_quadrilateral(t3, alpha):
    """Solve the two-right-angle symmetric quadrilateral with base t3 and apex angles alpha.

    Construction is purely geometric (exponential map + angle measurement +
    bisection), so it cross-checks any closed-form route independently.

    Raises
    ------
    GeometryInfeasibleError
        If no hyperbolic quadrilateral matches (alpha outside (0, pi/2) or
        t3 <= 0).
    """
    if not (np.isfinite(t3) and np.isfinite(alpha)):
        raise InvalidInputError("non-finite quadrilateral parameters")
    if t3 <= 0:
        raise GeometryInfeasibleError("base side must be positive")
    if not (0.0 < alpha < 0.5 * math.pi):
        raise GeometryInfeasibleError("apex angle must lie in (0, pi/2) for a hyperbolic solution")

    b = base_point()
    c = point_at(b, 0.0, t3)

    def corners(leg):
        u_bc = direction(b, c)
        a_pt = normalize_point(math.cosh(leg) * b + math.sinh(leg) * rotate_tangent(b, u_bc, 0.5 * math.pi))
        u_cb = direction(c, b)
        d_pt = normalize_point(math.cosh(leg) * c + math.sinh(leg) * rotate_tangent(c, u_cb, -0.5 * math.pi))
        return a_pt, d_pt

    def apex_of(leg):
        a_pt, d_pt = corners(leg)
        return angle_at(a_pt, b, d_pt)

    # apex angle decreases monotonically from pi/2 (leg -> 0) to 0 (leg -> inf)
    hi = 1.0
    while apex_of(hi) > alpha:
        hi *= 2.0
        if hi > MAX_DISTANCE:
            raise GeometryInfeasibleError("quadrilateral solve left the supported range")
    leg = bisect(lambda x: apex_of(x) - alpha, 1e-12, hi)
    a_pt, d_pt = corners(leg)
    return RightQuadrilateral(
        base=t3,
        apex_angle=alpha,
        leg=leg,
        opposite=dist(a_pt, d_pt),
        diagonal=dist(b, d_pt),
        vertices=(tuple(a_pt), tuple(b), tuple(c), tuple(d_pt)),
    )


# ---------------------------------------------------------------------------
# Development of polygon chains


@dataclass
class DevelopedChain:
    """Chain of polygon placements obtained by unfolding a glued surface.

    ``placements[k]`` is the isometry positioning the canonical copy of
    ``polygons[k]`` in the plane; consecutive placements agree along the
    crossed side (midpoint mismatch below 1e-10).
    """

    polygons: list
    placements: list
    crossings: list

    def center(self, k):
        return self.point(k, self._realization(k).center)

    def point(self, k, p):
        return apply_isometry(self.placements[k], p)

    def _realization(self, k):
        return self._surface.realization(self.polygons[k])

    def check(self, tol=1e-10):
        """Verify that consecutive placements agree on the shared side midpoint."""
        for k, ((pa, sa), (pb, sb)) in enumerate(self.crossings):
            ra = self._surface.realization(pa)
            rb = self._surface.realization(pb)
            ma = self.point(k, ra.side_mid[sa])
            mb = self.point(k + 1, rb.side_mid[sb])
            if dist(ma, mb) > tol:
                return False
        return True


def develop(surface, path, start=0, base=None):
    """Unfold a sequence of side crossings of a glued surface into the plane.

    Parameters
    ----------
    surface : object
        Provides ``realization(poly_id)`` (canonical metric placement) and
        ``neighbor(poly_id, side_id) -> (poly2, side2) | None``.
    path : sequence of (polygon id, side id)
        Consecutive crossings; each pair names the side being crossed from
        the polygon currently entered.  Empty path develops ``start`` alone.
    base : 3x3 array, optional
        Isometry prepended to the whole chain (defaults to the identity).

    Raises
    ------
    ConstructionError subclasses
        If a crossing names a boundary side or does not continue the chain.
    """
    from .errors import ConstructionError

    placement = np.eye(3) if base is None else np.asarray(base, dtype=float)
    if path:
        start = path[0][0]
    polygons = [start]
    placements = [placement]
    crossings = []
    current = start
    for poly_id, side_id in path:
        if poly_id != current:
            raise ConstructionError(f"path crossing ({poly_id},{side_id}) does not start at polygon {current}")
        nb = surface.neighbor(poly_id, side_id)
        if nb is None:
            raise ConstructionError(f"side {side_id} of polygon {poly_id} is a boundary side")
        nxt, side2 = nb
        ra = surface.realization(poly_id)
        rb = surface.realization(nxt)
        m, u, n = ra.side_mid[side_id], ra.side_tan[side_id], ra.side_normal[side_id]
        m2, u2, n2 = rb.side_mid[side2], rb.side_tan[side2], rb.side_normal[side2]
        # Glue midpoint-to-midpoint with the side tangent reversed: the next
        # polygon lands on the far side, orientation preserved.
        step = isometry_between_frames(m2, u2, n2, m, -u, -n)
        placement = placements[-1] @ step
        placements.append(placement)
        polygons.append(nxt)
        crossings.append(((poly_id, side_id), (nxt, side2)))
        current = nxt
    chain = DevelopedChain(polygons=polygons, placements=placements, crossings=crossings)
    chain._surface = surface
    return chain
