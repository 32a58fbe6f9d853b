import json
import math

import pytest

from hypchroma import collars as C
from hypchroma.errors import InvalidInputError, ParameterRegimeError
from hypchroma.formulas import CONVEXITY_THINNESS, collar_geometry


def test_parallel_curve_at_core():
    assert C.parallel_curve_length(0.3, 0.0) == 0.3


def test_parallel_curve_boundary_consistency():
    # at the boundary distance, sinh(eps) = sinh(L/2) cosh(K_C) ties the
    # loop length to the parallel curve
    for lg in (0.05, 0.4, 1.0):
        cg = collar_geometry(lg, CONVEXITY_THINNESS)
        k_c = cg.boundary_distance
        assert math.sinh(CONVEXITY_THINNESS) == pytest.approx(
            math.sinh(0.5 * lg) * math.cosh(k_c), rel=1e-12
        )
        assert C.parallel_curve_length(lg, k_c) == pytest.approx(lg * math.cosh(k_c), rel=1e-14)


def test_parallel_curve_convexity():
    lg = 0.2
    r1, r2 = 0.7, 2.9
    mid = 0.5 * (r1 + r2)
    assert C.parallel_curve_length(lg, r1) + C.parallel_curve_length(lg, r2) >= 2 * (
        C.parallel_curve_length(lg, mid)
    )


def test_parallel_curve_increasing():
    vals = [C.parallel_curve_length(0.1, r) for r in (0.0, 0.5, 1.0, 2.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# slicing


GRID = [(lg, d) for lg in (0.05, 0.1, 0.5) for d in (2.0, 4.0, 8.0)]


@pytest.mark.parametrize("lg,d", GRID)
def test_slicing_grid_heights_and_diameters(lg, d):
    deco = C.slice_half_collar(lg, CONVEXITY_THINNESS, d)
    secs = deco.sections
    assert secs[0].rho_top == pytest.approx(deco.boundary_distance)
    assert secs[-1].rho_bottom == 0.0
    for a, b in zip(secs, secs[1:]):
        assert a.rho_bottom == pytest.approx(b.rho_top)
    assert all(s.height > 0.5 * d for s in secs[:-1])
    assert all(s.diam_bound < d for s in secs)
    assert deco.heights_ok()


@pytest.mark.parametrize("lg,d", GRID)
def test_slicing_grid_degree_and_colors(lg, d):
    deco, halves, ncolors = C.color_cylinder(lg, CONVEXITY_THINNESS, d)
    assert C.max_section_degree(deco) <= 4
    assert ncolors <= 10
    plus_colors = {s.color for s in halves["plus"]}
    minus_colors = {s.color for s in halves["minus"]}
    assert len(plus_colors) <= 5 and len(minus_colors) <= 5
    assert plus_colors.isdisjoint(minus_colors)
    # coloring is proper on the section graph
    edges = C.section_graph(deco)
    for i, j in edges:
        assert halves["plus"][i].color != halves["plus"][j].color
        assert halves["minus"][i].color != halves["minus"][j].color


def test_single_section_when_boundary_close():
    # K_C + boundary/2 well under d: one section per half, two colors total
    deco, halves, ncolors = C.color_cylinder(1.2, CONVEXITY_THINNESS, 4.0)
    assert len(deco.sections) == 1
    assert ncolors == 2


def test_diameter_bound_monotone_toward_core():
    # moving a section boundary toward the core shrinks the bound
    deco = C.slice_half_collar(0.05, CONVEXITY_THINNESS, 2.0)
    lg = deco.geodesic_length
    for s in deco.sections:
        inner = s.height + 0.5 * C.parallel_curve_length(lg, max(s.rho_top - 0.1, 0.0))
        outer = s.height + 0.5 * C.parallel_curve_length(lg, s.rho_top + 0.1)
        assert inner <= s.height + 0.5 * C.parallel_curve_length(lg, s.rho_top) <= outer


def test_slicer_rejects_thickness_beyond_convexity():
    with pytest.raises(ParameterRegimeError):
        C.slice_half_collar(0.1, math.asinh(1.0), 2.0)


def test_slicer_reports_failed_inequality():
    # boundary curve half-length at d: no diameter-d section exists at the top
    with pytest.raises(ParameterRegimeError) as err:
        C.slice_half_collar(1.2, CONVEXITY_THINNESS, 0.5)
    assert "boundary" in str(err.value)
    # larger d slices, but the first height falls below d/2
    with pytest.raises(ParameterRegimeError) as err:
        C.slice_half_collar(1.2, CONVEXITY_THINNESS, 0.8)
    assert "height" in str(err.value)


def test_slicer_notes_paper_regime():
    deco = C.slice_half_collar(0.05, CONVEXITY_THINNESS, 2.0)
    assert any("r0" in note for note in deco.regime_notes)


def test_budget_values():
    assert C.cylinder_budget(2) == 30
    assert C.cylinder_budget(10) == 270
    with pytest.raises(InvalidInputError):
        C.cylinder_budget(1)


def test_budget_consistent_with_genus_bound():
    from hypchroma.bounds import GENUS_BOUND_THRESHOLD, genus_upper_bound

    for g in (2, 5, 17):
        thick = genus_upper_bound(g, GENUS_BOUND_THRESHOLD) - C.cylinder_budget(g)
        assert thick == g - 1  # (g-1)/sinh^2(arcsinh 1)


def test_json_dump():
    deco, halves, _ = C.color_cylinder(0.1, CONVEXITY_THINNESS, 4.0)
    payload = C.decomposition_to_json(deco, colored=halves["plus"])
    text = json.dumps(payload)
    back = json.loads(text)
    assert back["l_gamma"] == 0.1
    assert len(back["sections"]) == len(deco.sections)
    assert all(s["color"] is not None for s in back["sections"])
