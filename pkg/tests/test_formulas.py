import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypchroma import formulas as F
from hypchroma import kernel
from hypchroma.errors import GeometryInfeasibleError, InvalidInputError


# ---------------------------------------------------------------------------
# collar geometry


def test_collar_boundary_at_threshold():
    # sinh(L/2) = 1 and thinness arcsinh(1): boundary distance collapses to 0
    cg = F.collar_geometry(2.0 * math.asinh(1.0), math.asinh(1.0))
    assert cg.width == pytest.approx(math.asinh(1.0), abs=1e-12)
    assert cg.boundary_distance == pytest.approx(0.0, abs=1e-12)
    assert cg.margin == pytest.approx(cg.width, abs=1e-12)


def test_collar_margin_limit_log2_over_2():
    cg = F.collar_geometry(1e-6, F.CONVEXITY_THINNESS)
    assert cg.margin == pytest.approx(0.5 * math.log(2.0), abs=1e-4)


def test_collar_margin_vanishes_at_arcsinh1():
    assert F.collar_geometry(1e-6, F.ARCSINH_1).margin == pytest.approx(0.0, abs=1e-9)
    assert F.collar_geometry(0.01, F.ARCSINH_1).margin < 1e-3


def test_collar_fields_consistent():
    cg = F.collar_geometry(0.7, 0.5)
    assert cg.width == pytest.approx(math.asinh(1.0 / math.sinh(0.35)), abs=1e-12)
    assert cg.boundary_distance == pytest.approx(
        math.acosh(math.sinh(0.5) / math.sinh(0.35)), abs=1e-12
    )
    assert cg.margin == pytest.approx(cg.width - cg.boundary_distance, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 0.88), st.floats(1e-5, 4.0))
def test_collar_margin_positive_property(eps, length):
    if math.sinh(eps) < math.sinh(0.5 * length) or eps >= F.ARCSINH_1:
        return
    assert F.collar_geometry(length, eps).margin > 0


def test_convexity_threshold_inequality_chain():
    # what makes half-collars convex: an escaping-and-returning path pays at
    # least twice the limiting margin (log 2 total), which strictly exceeds
    # the in-collar detour allowance arcsinh(1/sqrt 2)
    assert F.CONVEXITY_THINNESS < math.log(2.0)
    assert 2.0 * F.collar_geometry(1e-6, F.CONVEXITY_THINNESS).margin > F.CONVEXITY_THINNESS


def test_collar_rejects_undefined_boundary():
    with pytest.raises(GeometryInfeasibleError):
        F.collar_geometry(3.0, 0.2)  # sinh(eps) < sinh(L/2)


def test_collar_rejects_thick_thinness():
    with pytest.raises(InvalidInputError):
        F.collar_geometry(0.1, 1.0)


# ---------------------------------------------------------------------------
# ideal polygon distance


def test_ideal_distance_triangle_is_log3():
    assert F.ideal_clique_distance(3) == pytest.approx(math.log(3.0), abs=1e-14)


def test_ideal_distance_square():
    assert F.ideal_clique_distance(4) == pytest.approx(math.acosh(3.0), abs=1e-14)


def test_ideal_distance_vs_kernel_inradius():
    # independent route: distance from the center to the side geodesic of the
    # ideal polygon, doubled
    for n in (3, 4, 5, 7, 12):
        normal = kernel.geodesic_normal(
            kernel.ideal_point(-math.pi / n), kernel.ideal_point(math.pi / n)
        )
        inradius = kernel.dist_to_geodesic(kernel.base_point(), normal)
        assert F.ideal_clique_distance(n) == pytest.approx(2.0 * inradius, abs=1e-9)


def test_ideal_distance_asymptotics():
    n = 100
    assert F.ideal_clique_distance(n) / (2.0 * math.log(n) + 2.0 * math.log(2.0 / math.pi)) == (
        pytest.approx(1.0, abs=1e-3)
    )


def test_ideal_distance_increasing():
    vals = [F.ideal_clique_distance(n) for n in range(3, 40)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_ideal_distance_rejects_small_n():
    with pytest.raises(InvalidInputError):
        F.ideal_clique_distance(2)


# ---------------------------------------------------------------------------
# truncation relation


def test_truncation_zero_limit():
    for n in (3, 5, 9):
        assert F.truncated_clique_distance(n, 0.0) == pytest.approx(
            F.ideal_clique_distance(n), abs=1e-12
        )
        assert F.truncation_for_distance(n, F.ideal_clique_distance(n)) == pytest.approx(
            0.0, abs=1e-6
        )


def test_truncation_defining_relation():
    n, t = 5, 1.0
    d = F.truncated_clique_distance(n, t)
    assert math.cosh(0.5 * t) == pytest.approx(
        math.cosh(0.5 * d) * math.sin(math.pi / n), abs=1e-12
    )


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 40), st.floats(1e-3, 8.0))
def test_truncation_roundtrip_property(n, t):
    d = F.truncated_clique_distance(n, t)
    assert F.truncation_for_distance(n, d) == pytest.approx(t, abs=1e-12 * max(1.0, t) + 1e-12)


def test_truncation_exact_roundtrip():
    assert F.truncated_clique_distance(5, F.truncation_for_distance(5, 3.0)) == pytest.approx(
        3.0, abs=1e-12
    )


def test_truncation_strictly_increasing_unbounded():
    ts = np.linspace(0, 12, 40)
    vals = [F.truncated_clique_distance(6, t) for t in ts]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 12.0


def test_truncation_infeasible_below_ideal():
    with pytest.raises(GeometryInfeasibleError):
        F.truncation_for_distance(5, 0.9 * F.ideal_clique_distance(5))


# ---------------------------------------------------------------------------
# equilateral triangles


def test_equilateral_known_value():
    assert F.equilateral_side(12) == pytest.approx(math.acosh(3.0 + 2.0 * math.sqrt(3.0)), abs=1e-12)


def test_equilateral_monotone_increasing():
    vals = [F.equilateral_side(n) for n in range(7, 60)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_equilateral_altitude_exceeds_half_side():
    # altitude from cosh(side) = cosh(side/2) cosh(altitude)
    for n in (7, 12, 30):
        side = F.equilateral_side(n)
        altitude = math.acosh(math.cosh(side) / math.cosh(0.5 * side))
        assert altitude > 0.5 * side


def test_equilateral_rejects_flat():
    with pytest.raises(GeometryInfeasibleError):
        F.equilateral_side(6)


# ---------------------------------------------------------------------------
# one-holed triangles


def test_holed_triangle_frozen_values():
    # computed from the closed forms at sinh(t/6) = 1/4, n = 12, and
    # cross-checked against solve_right_quadrilateral in test_kernel
    t = 6.0 * math.asinh(0.25)
    m = F.holed_triangle_metrics(12, t)
    assert m.side_length == pytest.approx(4.117875275066862, abs=1e-12)
    assert m.vertex_to_hole == pytest.approx(math.acosh(4.0 * math.sinh(0.5 * m.side_length)), abs=1e-12)
    assert m.margin > 0


def test_holed_triangle_margin_fails_for_large_hole():
    # with sinh(t/6) = 1 the margin goes negative for every n: the choice of
    # a small hole matters
    t_big = 6.0 * math.asinh(1.0)
    margins = [F.holed_triangle_metrics(n, t_big).margin for n in range(7, 200, 10)]
    assert all(m < 0 for m in margins)
    t_small = 6.0 * math.asinh(0.25)
    margins_small = [F.holed_triangle_metrics(n, t_small).margin for n in range(7, 200, 10)]
    assert all(m > 0 for m in margins_small)


def test_holed_triangle_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        F.holed_triangle_metrics(6, 1.0)
    with pytest.raises(InvalidInputError):
        F.holed_triangle_metrics(12, 0.0)


# ---------------------------------------------------------------------------
# degree bounds


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0, 6.0), st.floats(0.1, 3.0))
def test_sinh_product_identity(a, b):
    if b >= a:
        return
    lhs = math.sinh(a) ** 2 - math.sinh(b) ** 2
    rhs = math.sinh(a + b) * math.sinh(a - b)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_degree_bound_value():
    assert F.annulus_degree_bound(1.0, 0.4) == pytest.approx(
        math.sinh(1.0) ** 2 / math.sinh(0.1) ** 2, rel=1e-14
    )
    assert F.annulus_degree_bound(1.0, 0.4) == pytest.approx(137.65033787812885, abs=1e-9)


def test_degree_bound_equals_annulus_ratio():
    for d, r0 in ((1.0, 0.4), (3.0, 0.7), (6.0, 1.2)):
        a = 0.5 * (d + 2.5 * r0)
        b = 0.5 * (d - 2.5 * r0)
        packed = (math.sinh(a) ** 2 - math.sinh(b) ** 2) / math.sinh(0.25 * r0) ** 2
        assert F.annulus_degree_bound(d, r0) == pytest.approx(packed, rel=1e-12)


def test_degree_bound_monotone_in_d():
    vals = [F.annulus_degree_bound(d, 0.4) for d in np.linspace(1.0, 8.0, 20)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_degree_bound_domain():
    with pytest.raises(InvalidInputError):
        F.annulus_degree_bound(1.0, 0.5)  # r0 > 2d/5


def test_net_degree_bound_small_branch():
    assert F.net_degree_bound(1.0) == pytest.approx(137.65033787812885, abs=1e-9)


def test_net_degree_bound_branch_agreement():
    d_star = F.DEGREE_BOUND_BRANCH
    small = math.sinh(d_star) ** 2 / math.sinh(0.1 * d_star) ** 2
    large = math.sinh(F.DEGREE_BOUND_BRANCH) * math.sinh(d_star)
    target = math.sinh(d_star) ** 2
    assert small == pytest.approx(target, rel=1e-12)
    assert large == pytest.approx(target, rel=1e-12)
    # the exact branch value is the integer 11309768 = 2 * 2378^2
    assert F.net_degree_bound(d_star) == pytest.approx(11309768.0, rel=1e-12)


def test_net_degree_bound_small_branch_is_selfconsistent_bound():
    # on the small branch, r0 = 2d/5 reproduces the bound exactly
    for d in (0.5, 1.0, 2.0, 8.0):
        assert F.net_degree_bound(d) == pytest.approx(
            F.annulus_degree_bound(d, 2.0 * d / 5.0), rel=1e-12
        )


def test_net_degree_bound_exponential_envelope():
    ratios = [F.net_degree_bound(d) / math.exp(d) for d in np.linspace(5.0, 25.0, 40)]
    assert min(ratios) > 100.0
    assert max(ratios) < 1700.0
