"""Hyperbolic surfaces glued from polygons, with certified equidistant cliques.

Four polygon families: ideal regular n-gons, semi-regular right-angled
2n-gons (every second side of length t), equilateral triangles with angles
2 pi/n, and one-holed triangles (annular blocks with a closed geodesic hole).
A purely combinatorial genus patch stands in for "any surface with one
boundary curve of the right length".

Conventions.  Polygon sides are numbered counterclockwise; corner j sits
between side j and side j+1, so side j runs from corner j-1 to corner j.
Pairings glue side midpoints together with the side tangents reversed
(midpoint-to-midpoint, shear-free); a pairing with ``flip=True`` instead
matches the tangents, which reverses orientation.  Hole sides are closed
geodesics carrying one marker vertex each, which keeps Euler counting exact
when holes are pasted to each other.

Euler characteristic uses V - E + F over the pasted complex with ideal
corners excluded (they aggregate into cusps); holed triangles carry a -1
correction (their hidden cut edge) and genus patches carry -2k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .errors import (
    BlueprintError,
    ConnectivityError,
    ConstructionError,
    GeometryInfeasibleError,
    InvalidInputError,
    OrientabilityError,
    PairingError,
    ValidationError,
)
from .formulas import equilateral_side, holed_triangle_metrics

SIDE_LENGTH_TOL = 1e-10


@dataclass(frozen=True)
class RealizedPolygon:
    """Canonical metric placement of a polygon around the origin."""

    center: np.ndarray
    side_mid: np.ndarray
    side_tan: np.ndarray
    side_normal: np.ndarray
    vertices: np.ndarray


@dataclass(frozen=True)
class PolygonSpec:
    """One polygon of a glued surface: combinatorics plus optional metric data.

    ``side_lengths`` uses inf for ideal sides; ``hole_sides`` marks closed
    boundary geodesics (no corners).  ``corner_kinds`` is 'finite' or 'ideal'
    per corner; ``chi_correction`` feeds the Euler bookkeeping.
    """

    kind: str
    params: dict
    nsides: int
    side_lengths: tuple
    glueable: tuple
    hole_sides: tuple
    corner_kinds: tuple
    corner_angle: float
    chi_correction: int
    realization: RealizedPolygon | None = field(repr=False, default=None)

    def side_corners(self, s):
        """(start, end) corner indices of side s, or (None, None) for hole sides."""
        if s in self.hole_sides:
            return None, None
        ncorners = self.nsides - len(self.hole_sides)
        return (s - 1) % ncorners, s % ncorners


def _polar_frame(theta, rho):
    """(midpoint, ccw tangent, inward normal) for a side touching radius rho at angle theta."""
    ct, st = math.cos(theta), math.sin(theta)
    ch, sh = math.cosh(rho), math.sinh(rho)
    mid = np.array([ch, sh * ct, sh * st])
    tan = np.array([0.0, -st, ct])
    normal = -np.array([sh, ch * ct, ch * st])
    return mid, tan, normal


def ideal_regular_polygon(n):
    """Ideal regular n-gon: vertices at infinity, side midpoints at the inradius."""
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    n = int(n)
    # side k touches the inscribed circle at angle 2 pi k / n; its ideal
    # endpoints sit at +- pi/n around that.  Inradius from the side geodesic.
    normal0 = kernel.geodesic_normal(kernel.ideal_point(-math.pi / n), kernel.ideal_point(math.pi / n))
    rho = kernel.dist_to_geodesic(kernel.base_point(), normal0)
    mids = np.empty((n, 3))
    tans = np.empty((n, 3))
    norms = np.empty((n, 3))
    verts = np.empty((n, 3))
    for k in range(n):
        theta = 2.0 * math.pi * k / n
        mids[k], tans[k], norms[k] = _polar_frame(theta, rho)
        verts[k] = kernel.ideal_point(theta + math.pi / n)
    return PolygonSpec(
        kind="ideal_regular",
        params={"n": n},
        nsides=n,
        side_lengths=(math.inf,) * n,
        glueable=tuple(range(n)),
        hole_sides=(),
        corner_kinds=("ideal",) * n,
        corner_angle=0.0,
        chi_correction=0,
        realization=RealizedPolygon(
            center=kernel.base_point(), side_mid=mids, side_tan=tans, side_normal=norms, vertices=verts
        ),
    )


def _semiregular_inradius(n, t):
    """Center-to-pasted-side distance of the right-angled 2n-gon, found geometrically.

    Solved from scratch (perpendicularity of adjacent sides plus the side
    length t), independently of any closed form relating t to the distance.
    """
    cos_pn = math.cos(math.pi / n)
    lo = math.atanh(cos_pn)  # ideal-polygon limit (t -> 0)

    def half_t_of(rho_s):
        rho_t = math.atanh(cos_pn / math.tanh(rho_s))
        nu_s = np.array([math.sinh(rho_s), math.cosh(rho_s), 0.0])
        th = math.pi / n
        nu_t = np.array(
            [math.sinh(rho_t), math.cosh(rho_t) * math.cos(th), math.cosh(rho_t) * math.sin(th)]
        )
        vertex = kernel.geodesic_intersection(nu_s, nu_t)
        m_t = kernel.from_polar(th, rho_t)
        return kernel.dist(m_t, vertex), rho_t

    def objective(rho_s):
        return 2.0 * half_t_of(rho_s)[0] - t

    # within ~1e-12 of the ideal limit the objective is rounding noise; walk
    # outward by decades until the signal dominates and the sign is negative
    lo_b = None
    for exp in range(3, 14):
        eps = 10.0 ** (-exp)
        try:
            if objective(lo + eps) < 0:
                lo_b = lo + eps
                break
        except (GeometryInfeasibleError, InvalidInputError):
            continue
    if lo_b is None:
        raise GeometryInfeasibleError("hole length t is below the supported numeric resolution")
    hi = lo_b + max(t, 1.0)
    while objective(hi) < 0:
        hi += max(t, 1.0)
        if hi > kernel.MAX_DISTANCE:
            raise GeometryInfeasibleError("2n-gon solve left the supported range")
    rho_s = kernel.bisect(objective, lo_b, hi)
    return rho_s, half_t_of(rho_s)[1]


def semiregular_2n_gon(n, t):
    """Right-angled 2n-gon with n pasted sides and n boundary sides of length t.

    Sides alternate: even indices are the pasted ('s') sides, odd indices the
    boundary ('t') sides.
    """
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    if not (t > 0 and math.isfinite(t)):
        raise InvalidInputError("t must be positive")
    n = int(n)
    rho_s, rho_t = _semiregular_inradius(n, t)
    mids = np.empty((2 * n, 3))
    tans = np.empty((2 * n, 3))
    norms = np.empty((2 * n, 3))
    verts = np.empty((2 * n, 3))
    lengths = [0.0] * (2 * n)
    side_geodesics = []
    for k in range(2 * n):
        theta = math.pi * k / n
        rho = rho_s if k % 2 == 0 else rho_t
        mids[k], tans[k], norms[k] = _polar_frame(theta, rho)
        side_geodesics.append(
            np.array([math.sinh(rho), math.cosh(rho) * math.cos(theta), math.cosh(rho) * math.sin(theta)])
        )
    # corner j between side j and side j+1
    for j in range(2 * n):
        verts[j] = kernel.geodesic_intersection(side_geodesics[j], side_geodesics[(j + 1) % (2 * n)])
    # rotational symmetry makes the side lengths two exact orbits; storing the
    # k = 0 representatives keeps symmetric sides bitwise equal for the audits
    s_len = 2.0 * kernel.dist(mids[0], verts[0])
    t_len = 2.0 * kernel.dist(mids[1], verts[1])
    if abs(t_len - t) > 1e-8 * max(1.0, t):
        raise ValidationError(f"2n-gon solve missed the hole length: {t_len} vs {t}")
    for k in range(2 * n):
        lengths[k] = s_len if k % 2 == 0 else float(t)
    return PolygonSpec(
        kind="semiregular_2n",
        params={"n": n, "t": t},
        nsides=2 * n,
        side_lengths=tuple(lengths),
        glueable=tuple(range(0, 2 * n, 2)),
        hole_sides=(),
        corner_kinds=("finite",) * (2 * n),
        corner_angle=0.5 * math.pi,
        chi_correction=0,
        realization=RealizedPolygon(
            center=kernel.base_point(), side_mid=mids, side_tan=tans, side_normal=norms, vertices=verts
        ),
    )


def equilateral_triangle(n):
    """Equilateral triangle with all angles 2 pi / n (hyperbolic for n >= 7)."""
    side = equilateral_side(n)  # validates n >= 7
    n = int(n)
    # right-triangle split: apothem and circumradius of the equilateral triangle
    apothem = math.acosh(math.cos(math.pi / n) / math.sin(math.pi / 3.0))
    circum = math.acosh(1.0 / (math.tan(math.pi / 3.0) * math.tan(math.pi / n)))
    mids = np.empty((3, 3))
    tans = np.empty((3, 3))
    norms = np.empty((3, 3))
    verts = np.empty((3, 3))
    for k in range(3):
        theta = 2.0 * math.pi * k / 3.0
        mids[k], tans[k], norms[k] = _polar_frame(theta, apothem)
        verts[k] = kernel.from_polar(theta + math.pi / 3.0, circum)
    return PolygonSpec(
        kind="equilateral",
        params={"n": n},
        nsides=3,
        side_lengths=(side,) * 3,
        glueable=(0, 1, 2),
        hole_sides=(),
        corner_kinds=("finite",) * 3,
        corner_angle=2.0 * math.pi / n,
        chi_correction=0,
        realization=RealizedPolygon(
            center=kernel.base_point(), side_mid=mids, side_tan=tans, side_normal=norms, vertices=verts
        ),
    )


def holed_triangle(n, t):
    """One-holed triangle: three outer sides plus a closed geodesic hole (side 3).

    Annular, so it carries no global planar realization; pairing-length and
    angle audits use its metric fields.
    """
    metrics = holed_triangle_metrics(n, t)  # validates n >= 7, t > 0
    n = int(n)
    return PolygonSpec(
        kind="holed_triangle",
        params={"n": n, "t": float(t)},
        nsides=4,
        side_lengths=(metrics.side_length,) * 3 + (float(t),),
        glueable=(0, 1, 2),
        hole_sides=(3,),
        corner_kinds=("finite",) * 3,
        corner_angle=2.0 * math.pi / n,
        chi_correction=-1,
        realization=None,
    )


def genus_patch(genus, boundary_length):
    """Combinatorial stand-in for a genus-k surface with one boundary curve."""
    if genus != int(genus) or genus < 0:
        raise InvalidInputError("patch genus must be a nonnegative integer")
    if not (boundary_length > 0):
        raise InvalidInputError("patch boundary length must be positive")
    return PolygonSpec(
        kind="genus_patch",
        params={"genus": int(genus), "boundary_length": float(boundary_length)},
        nsides=1,
        side_lengths=(float(boundary_length),),
        glueable=(),
        hole_sides=(0,),
        corner_kinds=(),
        corner_angle=0.0,
        chi_correction=-2 * int(genus),
        realization=None,
    )


_POLYGON_BUILDERS = {
    "ideal_regular": lambda params: ideal_regular_polygon(params["n"]),
    "semiregular_2n": lambda params: semiregular_2n_gon(params["n"], params["t"]),
    "equilateral": lambda params: equilateral_triangle(params["n"]),
    "holed_triangle": lambda params: holed_triangle(params["n"], params["t"]),
    "genus_patch": lambda params: genus_patch(params["genus"], params["boundary_length"]),
}


@dataclass(frozen=True)
class EulerData:
    chi: int
    genus: int | None
    boundaries: int
    cusps: int
    orientable: bool


@dataclass
class GluedSurface:
    """Polygons plus side pairings; derived topology recomputable from scratch."""

    polygons: list
    pairings: list  # ((p1, s1), (p2, s2), flip)
    funnel_boundaries: bool = False

    def __post_init__(self):
        self._neighbor = {}
        for (p1, s1), (p2, s2), flip in self.pairings:
            self._neighbor[(p1, s1)] = (p2, s2)
            self._neighbor[(p2, s2)] = (p1, s1)
        self.validate()

    # -- protocol used by kernel.develop ------------------------------------
    def neighbor(self, poly_id, side_id):
        return self._neighbor.get((poly_id, side_id))

    def realization(self, poly_id):
        r = self.polygons[poly_id].realization
        if r is None:
            raise GeometryInfeasibleError(
                f"polygon {poly_id} ({self.polygons[poly_id].kind}) has no planar realization"
            )
        return r

    # -- audits ---------------------------------------------------------------
    def validate(self):
        seen = set()
        for (p1, s1), (p2, s2), flip in self.pairings:
            for p, s in ((p1, s1), (p2, s2)):
                if not (0 <= p < len(self.polygons)):
                    raise PairingError(f"pairing names unknown polygon {p}")
                if not (0 <= s < self.polygons[p].nsides):
                    raise PairingError(f"pairing names unknown side {s} of polygon {p}")
                if (p, s) in seen:
                    raise PairingError(f"side ({p},{s}) appears in more than one pairing")
                seen.add((p, s))
            if (p1, s1) == (p2, s2):
                raise PairingError("a side cannot be pasted to itself")
            l1 = self.polygons[p1].side_lengths[s1]
            l2 = self.polygons[p2].side_lengths[s2]
            if l1 == math.inf and l2 == math.inf:
                continue
            if not (math.isfinite(l1) and math.isfinite(l2)) or abs(l1 - l2) > SIDE_LENGTH_TOL:
                raise PairingError(
                    f"paired sides ({p1},{s1}) and ({p2},{s2}) have unequal lengths {l1} vs {l2}"
                )

    def is_connected(self):
        npoly = len(self.polygons)
        if npoly == 0:
            return True
        seen = [False] * npoly
        stack = [0]
        seen[0] = True
        while stack:
            p = stack.pop()
            for s in range(self.polygons[p].nsides):
                nb = self.neighbor(p, s)
                if nb and not seen[nb[0]]:
                    seen[nb[0]] = True
                    stack.append(nb[0])
        return all(seen)

    def orientation_signs(self):
        """Polygon orientation classes (+1/-1) from the flip-parity constraints.

        A flip pairing forces opposite signs, a plain pairing equal signs.
        Returns None when the constraints are contradictory (non-orientable).
        """
        flips = {}
        for (p1, s1), (p2, s2), flip in self.pairings:
            flips[(p1, s1)] = flip
            flips[(p2, s2)] = flip
        npoly = len(self.polygons)
        sign = [0] * npoly
        for root in range(npoly):
            if sign[root]:
                continue
            sign[root] = 1
            stack = [root]
            while stack:
                p = stack.pop()
                for s in range(self.polygons[p].nsides):
                    key = (p, s)
                    if key not in self._neighbor:
                        continue
                    q, s2 = self._neighbor[key]
                    want = -sign[p] if flips[key] else sign[p]
                    if sign[q] == 0:
                        sign[q] = want
                        stack.append(q)
                    elif sign[q] != want:
                        return None
        return sign

    def orientable(self):
        return self.orientation_signs() is not None

    def unpaired_sides(self):
        out = []
        for p, poly in enumerate(self.polygons):
            for s in range(poly.nsides):
                if (p, s) not in self._neighbor:
                    out.append((p, s))
        return out

    def _corner_classes(self):
        """Union-find over polygon corners; returns (class id map, class kinds)."""
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for p, poly in enumerate(self.polygons):
            ncorners = poly.nsides - len(poly.hole_sides)
            for c in range(ncorners):
                parent[(p, c)] = (p, c)
        for (p1, s1), (p2, s2), flip in self.pairings:
            a_start, a_end = self.polygons[p1].side_corners(s1)
            b_start, b_end = self.polygons[p2].side_corners(s2)
            if a_start is None or b_start is None:
                continue  # paired hole circles carry their own marker vertices
            if flip:
                union((p1, a_start), (p2, b_start))
                union((p1, a_end), (p2, b_end))
            else:
                union((p1, a_start), (p2, b_end))
                union((p1, a_end), (p2, b_start))
        classes = {}
        for key in parent:
            root = find(key)
            classes.setdefault(root, []).append(key)
        return classes

    def boundary_curves(self):
        """Boundary components: lists of (polygon, side) with total lengths."""
        unpaired = self.unpaired_sides()
        curves = []
        hole_like = [(p, s) for (p, s) in unpaired if s in self.polygons[p].hole_sides]
        for p, s in hole_like:
            curves.append({"sides": [(p, s)], "length": self.polygons[p].side_lengths[s], "closed_geodesic": True})
        ordinary = [(p, s) for (p, s) in unpaired if s not in self.polygons[p].hole_sides]
        if not ordinary:
            return curves
        classes = self._corner_classes()
        corner_to_class = {}
        for root, members in classes.items():
            for m in members:
                corner_to_class[m] = root
        # at each corner class, boundary side-ends must pair up 2 by 2
        end_map = {}
        for p, s in ordinary:
            start, end = self.polygons[p].side_corners(s)
            for corner, which in ((start, "start"), (end, "end")):
                cls = corner_to_class[(p, corner)]
                end_map.setdefault(cls, []).append((p, s, which))
        for cls, ends in end_map.items():
            if len(ends) != 2:
                raise ValidationError(
                    f"corner class {cls} touches {len(ends)} boundary side-ends; not a surface"
                )
        visited = set()
        for p0, s0 in ordinary:
            if (p0, s0) in visited:
                continue
            cycle = []
            p, s, come_from = p0, s0, "start"
            length = 0.0
            while (p, s) not in visited:
                visited.add((p, s))
                cycle.append((p, s))
                length += self.polygons[p].side_lengths[s]
                start, end = self.polygons[p].side_corners(s)
                exit_corner = end if come_from == "start" else start
                cls = corner_to_class[(p, exit_corner)]
                nxt = [e for e in end_map[cls] if (e[0], e[1]) != (p, s)]
                if not nxt:
                    break
                np_, ns_, which = nxt[0]
                p, s, come_from = np_, ns_, which
            curves.append({"sides": cycle, "length": length, "closed_geodesic": False})
        return curves

    def euler(self):
        """Euler characteristic, genus, boundary and cusp counts, recomputed from scratch."""
        classes = self._corner_classes()
        v_finite = 0
        cusps = 0
        for root, members in classes.items():
            p, c = members[0]
            kinds = {self.polygons[m[0]].corner_kinds[m[1]] for m in members}
            if len(kinds) > 1:
                raise ValidationError("corner class mixes ideal and finite corners")
            if kinds == {"ideal"}:
                cusps += 1
            else:
                v_finite += 1
        # hole circles: one marker vertex and one edge each; pasting two holes
        # identifies both, so each *pairing class* of holes contributes (1, 1)
        hole_sides = [
            (p, s) for p, poly in enumerate(self.polygons) for s in poly.hole_sides
        ]
        hole_classes = 0
        counted = set()
        for p, s in hole_sides:
            if (p, s) in counted:
                continue
            counted.add((p, s))
            nb = self.neighbor(p, s)
            if nb:
                counted.add(nb)
            hole_classes += 1
        v_holes = hole_classes
        e_holes = hole_classes
        ordinary_pairings = sum(
            1
            for (p1, s1), (p2, s2), _ in self.pairings
            if s1 not in self.polygons[p1].hole_sides
        )
        ordinary_unpaired = sum(
            1 for (p, s) in self.unpaired_sides() if s not in self.polygons[p].hole_sides
        )
        e_ordinary = ordinary_pairings + ordinary_unpaired
        f = len(self.polygons)
        corrections = sum(poly.chi_correction for poly in self.polygons)
        chi = (v_finite + v_holes) - (e_ordinary + e_holes) + f + corrections
        boundaries = len(self.boundary_curves())
        orientable = self.orientable()
        genus = None
        if orientable:
            g2 = 2 - chi - boundaries - cusps
            if g2 % 2 != 0 or g2 < 0:
                raise ValidationError(f"inconsistent topology: chi={chi}, b={boundaries}, cusps={cusps}")
            genus = g2 // 2
        return EulerData(chi=chi, genus=genus, boundaries=boundaries, cusps=cusps, orientable=orientable)

    # -- serialization ---------------------------------------------------------
    def to_json(self):
        def enc_len(x):
            return "inf" if x == math.inf else x

        eu = self.euler()
        return {
            "polygons": [
                {"kind": poly.kind, "params": poly.params, "sides": [enc_len(x) for x in poly.side_lengths]}
                for poly in self.polygons
            ],
            "pairings": [
                ([p1, s1], [p2, s2]) if not flip else ([p1, s1], [p2, s2], "flip")
                for (p1, s1), (p2, s2), flip in self.pairings
            ],
            "boundaries": [
                {
                    "sides": [[p, s] for p, s in curve["sides"]],
                    "length": curve["length"],
                    "closed_geodesic": curve["closed_geodesic"],
                    "funnel": self.funnel_boundaries,
                }
                for curve in self.boundary_curves()
            ],
            "derived": {
                "chi": eu.chi,
                "genus": eu.genus,
                "boundaries": eu.boundaries,
                "cusps": eu.cusps,
                "orientable": eu.orientable,
            },
        }


def surface_from_json(data):
    """Rebuild a surface from its descriptor; re-derives and re-audits everything."""
    polygons = []
    for entry in data["polygons"]:
        kind = entry["kind"]
        if kind not in _POLYGON_BUILDERS:
            raise ValidationError(f"unknown polygon kind {kind!r}")
        polygons.append(_POLYGON_BUILDERS[kind](entry["params"]))
    pairings = []
    for item in data["pairings"]:
        flip = len(item) == 3 and item[2] == "flip"
        (p1, s1), (p2, s2) = item[0], item[1]
        pairings.append(((int(p1), int(s1)), (int(p2), int(s2)), bool(flip)))
    return GluedSurface(
        polygons=polygons,
        pairings=pairings,
        funnel_boundaries=bool(data.get("boundaries")) and all(b.get("funnel") for b in data["boundaries"]),
    )


# ---------------------------------------------------------------------------
# Constructors


def _round_robin_pairing(npoly, glue_sides):
    """Canonical pairing: polygon i meets polygon j on glue side index (j-i-1) mod npoly."""
    pairs = []
    for i in range(npoly):
        for j in range(i + 1, npoly):
            si = glue_sides[(j - i - 1) % npoly]
            sj = glue_sides[(i - j - 1) % npoly]
            pairs.append(((i, si), (j, sj), False))
    return pairs


def _check_one_shared_side(npoly, pairings):
    met = {}
    for (p1, s1), (p2, s2), _ in pairings:
        key = (min(p1, p2), max(p1, p2))
        if p1 == p2:
            raise ConstructionError("a polygon cannot be pasted to itself in this construction")
        met[key] = met.get(key, 0) + 1
    for key, count in met.items():
        if count != 1:
            raise ConstructionError(f"polygons {key} share {count} sides; exactly one required")
    if len(met) != npoly * (npoly - 1) // 2:
        raise ConstructionError("every two distinct polygons must share exactly one side")


def build_ideal_surface(n, pairing=None):
    """Glue n+1 ideal regular n-gons, every two sharing exactly one side.

    The default pairing is the fixed round-robin table; an explicit pairing
    must satisfy the same one-shared-side rule.  Centers form an equidistant
    clique certified separately by certify_clique.
    """
    proto = ideal_regular_polygon(n)
    npoly = int(n) + 1
    polygons = [proto] * npoly
    if pairing is None:
        pairing = _round_robin_pairing(npoly, proto.glueable)
    else:
        pairing = [((int(a), int(b)), (int(c), int(d)), bool(f[0]) if f else False) for (a, b), (c, d), *f in pairing]
    _check_one_shared_side(npoly, pairing)
    surface = GluedSurface(polygons=polygons, pairings=pairing)
    if len(surface.unpaired_sides()) != 0:
        raise ConstructionError("ideal construction must pair every side")
    if not surface.is_connected():
        raise ConnectivityError("glued surface is not connected")
    return surface


def build_truncated_surface(n, t, pairing=None):
    """Glue n+1 right-angled 2n-gons along their pasted sides; holes stay as funnels.

    Requires an orientable result; the boundary curves (cycles of length-t
    sides) are flagged funnel-capped rather than metrically completed.
    """
    proto = semiregular_2n_gon(n, t)
    npoly = int(n) + 1
    polygons = [proto] * npoly
    if pairing is None:
        pairing = _round_robin_pairing(npoly, proto.glueable)
    else:
        pairing = [((int(a), int(b)), (int(c), int(d)), bool(f[0]) if f else False) for (a, b), (c, d), *f in pairing]
    _check_one_shared_side(npoly, pairing)
    for (p1, s1), (p2, s2), _ in pairing:
        if s1 not in proto.glueable or s2 not in proto.glueable:
            raise PairingError("only the even (pasted) sides of the 2n-gon may be glued")
    surface = GluedSurface(polygons=polygons, pairings=pairing, funnel_boundaries=True)
    if not surface.is_connected():
        raise ConnectivityError("glued surface is not connected")
    if not surface.orientable():
        raise OrientabilityError("pairing produces a non-orientable surface")
    return surface


def build_triangle_surface(rs, mode="equilateral", t=None, require_metric=True):
    """Replace the faces of a triangular embedding by metric triangles.

    ``rs`` must trace only triangles and be regular of degree N; equilateral
    mode yields a closed surface, holed mode the block surface with one
    boundary geodesic per face.  N <= 6 is flat/spherical for the equilateral
    block: it raises unless ``require_metric=False``, which returns the
    purely combinatorial complex (genus bookkeeping only).
    """
    from . import rotations

    faces = rotations.trace_faces(rs)
    if any(len(f) != 3 for f in faces):
        raise BlueprintError("rotation system is not triangular")
    if not rs.is_regular():
        raise BlueprintError("rotation system is not regular")
    degree = rs.degree(0)
    if mode not in ("equilateral", "holed"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    if t is None and mode == "holed":
        t = 6.0 * math.asinh(0.25)

    metric = True
    if degree <= 6:
        if require_metric:
            raise GeometryInfeasibleError(
                f"degree {degree} forces angle sum 2 pi with flat triangles; no hyperbolic metric"
            )
        metric = False

    if metric:
        if mode == "equilateral":
            proto = equilateral_triangle(degree)
        else:
            proto = holed_triangle(degree, t)
            if holed_triangle_metrics(degree, t).margin <= 0:
                raise ConstructionError(
                    "hole length t too large: vertex-to-hole distance at most half the side"
                )
    else:
        # combinatorial stand-in: unit side lengths, no realization
        if mode == "equilateral":
            proto = PolygonSpec(
                kind="equilateral",
                params={"n": degree},
                nsides=3,
                side_lengths=(1.0,) * 3,
                glueable=(0, 1, 2),
                hole_sides=(),
                corner_kinds=("finite",) * 3,
                corner_angle=2.0 * math.pi / degree,
                chi_correction=0,
                realization=None,
            )
        else:
            proto = PolygonSpec(
                kind="holed_triangle",
                params={"n": degree, "t": float(t)},
                nsides=4,
                side_lengths=(1.0,) * 3 + (float(t),),
                glueable=(0, 1, 2),
                hole_sides=(3,),
                corner_kinds=("finite",) * 3,
                corner_angle=2.0 * math.pi / degree,
                chi_correction=-1,
                realization=None,
            )

    dart_position = {}
    for fi, face in enumerate(faces):
        for k, dart in enumerate(face):
            dart_position[dart] = (fi, k)
    pairings = []
    for (u, v), (fi, k) in dart_position.items():
        if u < v:
            fj, k2 = dart_position[(v, u)]
            pairings.append(((fi, k), (fj, k2), False))
    surface = GluedSurface(polygons=[proto] * len(faces), pairings=pairings)
    if not surface.is_connected():
        raise ConnectivityError("triangle complex is not connected")
    surface.blueprint_vertices = rs.n
    surface.metric_feasible = metric
    return surface


def close_surface(surface, boundary_pairing=None, extra_genus=0, patch_index=0):
    """Close a surface by pasting boundary geodesics in pairs.

    With ``extra_genus = k > 0`` a combinatorial genus-k patch is pasted onto
    one boundary first (raising the final genus by k).  Every boundary curve
    must be a single closed geodesic side (holes); the remaining curves are
    paired by ``boundary_pairing`` (indices into the boundary list) or
    consecutively by default.
    """
    curves = surface.boundary_curves()
    if any(not c["closed_geodesic"] for c in curves):
        raise PairingError("close_surface needs single-geodesic boundary curves")
    signs = surface.orientation_signs()
    polygons = list(surface.polygons)
    pairings = list(surface.pairings)
    holes = [c["sides"][0] for c in curves]
    if extra_genus > 0:
        if not holes:
            raise PairingError("no boundary available for the genus patch")
        target = holes.pop(patch_index)
        patch = genus_patch(extra_genus, surface.polygons[target[0]].side_lengths[target[1]])
        polygons.append(patch)
        pairings.append((target, (len(polygons) - 1, 0), False))
    if boundary_pairing is None:
        if len(holes) % 2 != 0:
            raise PairingError(f"odd number of boundaries ({len(holes)}) cannot be paired")
        boundary_pairing = [(2 * i, 2 * i + 1) for i in range(len(holes) // 2)]
    used = set()
    for i, j in boundary_pairing:
        if i == j or not (0 <= i < len(holes)) or not (0 <= j < len(holes)):
            raise PairingError("invalid boundary pairing indices")
        if i in used or j in used:
            raise PairingError("boundary pairing reuses a curve")
        used.update((i, j))
        # pick the flip that keeps the pasting orientation-compatible
        flip = False
        if signs is not None:
            flip = signs[holes[i][0]] != signs[holes[j][0]]
        pairings.append((holes[i], holes[j], flip))
    if used != set(range(len(holes))):
        raise PairingError("boundary pairing must consume every remaining curve")
    closed = GluedSurface(polygons=polygons, pairings=pairings)
    for attr in ("blueprint_vertices", "metric_feasible"):
        if hasattr(surface, attr):
            setattr(closed, attr, getattr(surface, attr))
    return closed


# ---------------------------------------------------------------------------
# Infinite chain (finite prefix descriptor)


def build_infinite_chain(n_list, systems, prefix_length=None):
    """Descriptor of the chained block surface carrying ever-larger cliques.

    Block i is the holed-triangle block surface for n_list[i] (its blueprint
    rotation system of K_{n+1} supplied in ``systems``); consecutive blocks
    join along one boundary geodesic each.  The reported chromatic lower
    bound is the largest block clique in the prefix.
    """
    if prefix_length is None:
        prefix_length = len(n_list)
    chosen = list(n_list[:prefix_length])
    blocks = []
    for n in chosen:
        if n not in systems:
            raise BlueprintError(f"no rotation system supplied for block n={n}")
        rs = systems[n]
        if rs.n != n + 1:
            raise BlueprintError(f"block n={n} needs a K_{n + 1} rotation system, got {rs.n} vertices")
        surface = build_triangle_surface(rs, mode="holed", require_metric=False)
        eu = surface.euler()
        edge_length = None
        if n >= 7:
            edge_length = holed_triangle_metrics(n, 6.0 * math.asinh(0.25)).side_length
        blocks.append(
            {
                "n": int(n),
                "clique": int(n) + 1,
                "edge_length": edge_length,
                "boundaries": eu.boundaries,
                "genus": eu.genus,
            }
        )
    for i, block in enumerate(blocks[:-1]):
        if block["boundaries"] < 2 or blocks[i + 1]["boundaries"] < 2:
            raise ConstructionError("chain blocks need at least two boundary curves each")
    junctions = [[i, i + 1] for i in range(len(blocks) - 1)]
    return {
        "blocks": blocks,
        "junctions": junctions,
        "chromatic_lower_bound": max((b["clique"] for b in blocks), default=0),
    }


# ---------------------------------------------------------------------------
# Clique certification by bounded development


@dataclass(frozen=True)
class CliqueCertificate:
    """Outcome of the bounded shortest-alternative search between centers.

    ``margin`` is min(alternative developed length) - edge_length over all
    non-direct crossing sequences up to ``depth`` crossings; positive margin
    certifies the direct radial paths as strict minimizers at this depth.
    ``indeterminate`` marks budgets too small to see any alternative.
    """

    vertex_count: int
    edge_length: float
    margin: float | None
    depth: int
    alternatives: int
    indeterminate: bool


def _crossing_step(surface, p, s, q, s2):
    """Isometry appending polygon q across side s of p to a developed chain."""
    rp = surface.realization(p)
    rq = surface.realization(q)
    return kernel.isometry_between_frames(
        rq.side_mid[s2],
        rq.side_tan[s2],
        rq.side_normal[s2],
        rp.side_mid[s],
        -rp.side_tan[s],
        -rp.side_normal[s],
    )


def certify_clique(surface, max_polygons=4):
    """Certify the polygon centers as an equidistant clique by development.

    Enumerates every side-crossing sequence of 2..max_polygons crossings
    from each polygon (never immediately re-crossing the side just used),
    develops it into the plane, and compares the endpoint center distance
    against the single-crossing radial path.  The developed distance lower
    bounds the in-class path length, so a positive margin certifies the
    radial paths as the unique minimizers at this depth.
    """
    npoly = len(surface.polygons)
    if npoly < 2:
        raise InvalidInputError("need at least two polygons to certify a clique")

    direct = None
    for a in range(npoly):
        for b in range(a + 1, npoly):
            shared = [
                s
                for s in surface.polygons[a].glueable
                if surface.neighbor(a, s) is not None and surface.neighbor(a, s)[0] == b
            ]
            if len(shared) != 1:
                raise ConstructionError("certify_clique expects exactly one shared side per pair")
            chain = kernel.develop(surface, [(a, shared[0])])
            d_direct = kernel.dist(chain.center(0), chain.center(1))
            if direct is None:
                direct = d_direct
            elif abs(d_direct - direct) > 1e-9:
                raise ValidationError("center distances are not all equal; not an equidistant clique")

    margin = None
    alternatives = 0
    for a in range(npoly):
        center_a = surface.realization(a).center
        # stack frames: (polygon, side just entered through, placement, crossings so far)
        stack = [(a, None, np.eye(3), 0)]
        while stack:
            p, entered, placement, depth = stack.pop()
            if depth >= max_polygons:
                continue
            for s in surface.polygons[p].glueable:
                if s == entered:
                    continue
                nb = surface.neighbor(p, s)
                if nb is None:
                    continue
                q, s2 = nb
                new_placement = placement @ _crossing_step(surface, p, s, q, s2)
                new_depth = depth + 1
                if new_depth >= 2 and q != a:
                    alternatives += 1
                    alt = kernel.dist(
                        center_a, kernel.apply_isometry(new_placement, surface.realization(q).center)
                    )
                    gap = alt - direct
                    if margin is None or gap < margin:
                        margin = gap
                stack.append((q, s2, new_placement, new_depth))
    return CliqueCertificate(
        vertex_count=npoly,
        edge_length=direct,
        margin=margin,
        depth=max_polygons,
        alternatives=alternatives,
        indeterminate=margin is None,
    )
