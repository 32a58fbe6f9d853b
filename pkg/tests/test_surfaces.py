import math

import numpy as np
import pytest

from hypchroma import kernel, rotations, surfaces
from hypchroma.errors import (
    BlueprintError,
    ConstructionError,
    GeometryInfeasibleError,
    OrientabilityError,
    PairingError,
)
from hypchroma.formulas import (
    equilateral_side,
    holed_triangle_metrics,
    ideal_clique_distance,
    truncated_clique_distance,
    truncation_for_distance,
)

HOLE_T = 6.0 * math.asinh(0.25)


# ---------------------------------------------------------------------------
# polygon realizations


def test_ideal_polygon_inradius_matches_formula():
    for n in (3, 4, 7):
        poly = surfaces.ideal_regular_polygon(n)
        r = poly.realization
        inradius = kernel.dist(r.center, r.side_mid[0])
        assert 2.0 * inradius == pytest.approx(ideal_clique_distance(n), abs=1e-12)


def test_semiregular_matches_truncation_relation():
    # realization is solved geometrically; the closed form is the cross-check
    for n, t in ((3, 0.5), (5, 1.0), (9, 2.0)):
        poly = surfaces.semiregular_2n_gon(n, t)
        r = poly.realization
        d = 2.0 * kernel.dist(r.center, r.side_mid[0])
        assert d == pytest.approx(truncated_clique_distance(n, t), abs=1e-9)
        assert poly.side_lengths[1] == pytest.approx(t, abs=1e-9)


def test_semiregular_right_angles():
    poly = surfaces.semiregular_2n_gon(5, 1.0)
    r = poly.realization
    for j in range(10):
        v = r.vertices[j]
        angle = kernel.angle_at(v, r.side_mid[j], r.side_mid[(j + 1) % 10])
        assert angle == pytest.approx(0.5 * math.pi, abs=1e-9)


def test_equilateral_realization_angles_and_sides():
    poly = surfaces.equilateral_triangle(12)
    r = poly.realization
    for k in range(3):
        angle = kernel.angle_at(r.vertices[k], r.vertices[(k + 1) % 3], r.vertices[(k + 2) % 3])
        assert angle == pytest.approx(2.0 * math.pi / 12.0, abs=1e-9)
        side = kernel.dist(r.vertices[k], r.vertices[(k + 1) % 3])
        assert side == pytest.approx(equilateral_side(12), abs=1e-9)


def test_holed_triangle_margin_condition():
    poly = surfaces.holed_triangle(12, HOLE_T)
    metrics = holed_triangle_metrics(12, HOLE_T)
    assert poly.side_lengths[0] == pytest.approx(metrics.side_length, abs=1e-12)
    assert poly.side_lengths[3] == HOLE_T
    assert metrics.margin > 0


# ---------------------------------------------------------------------------
# ideal surface construction


def test_ideal_surface_combinatorics():
    surf = surfaces.build_ideal_surface(3)
    assert len(surf.polygons) == 4
    assert len(surf.pairings) == 6
    eu = surf.euler()
    assert eu.chi == -2 and eu.orientable and eu.boundaries == 0
    assert eu.cusps in (2, 4) and eu.genus == (4 - eu.cusps) // 2


def test_ideal_surface_rejects_double_share():
    pairing = list(surfaces._round_robin_pairing(4, (0, 1, 2)))
    pairing[0] = ((0, 0), (1, 0), False)
    pairing[1] = ((0, 1), (1, 1), False)
    with pytest.raises(ConstructionError):
        surfaces.build_ideal_surface(3, pairing=pairing)


def test_ideal_surface_adjacent_centers_at_clique_distance():
    for n in (3, 4):
        surf = surfaces.build_ideal_surface(n)
        for (p, s), (q, s2), _ in surf.pairings[:3]:
            chain = kernel.develop(surf, [(p, s)])
            assert chain.check(tol=1e-10)
            assert kernel.dist(chain.center(0), chain.center(1)) == pytest.approx(
                ideal_clique_distance(n), abs=1e-9
            )


# ---------------------------------------------------------------------------
# truncated surfaces


def test_truncated_surface_structure():
    surf = surfaces.build_truncated_surface(5, 1.0)
    assert len(surf.polygons) == 6
    eu = surf.euler()
    assert eu.chi == -9  # (n+1)(2-n)/2 for n = 5
    assert eu.orientable and eu.boundaries > 0
    assert surf.funnel_boundaries
    for curve in surf.boundary_curves():
        assert not curve["closed_geodesic"]
        assert curve["length"] == pytest.approx(
            len(curve["sides"]) * 1.0, abs=1e-9
        )  # cycles of t-sides


def test_truncated_distance_continuity_to_ideal():
    surf = surfaces.build_truncated_surface(5, 1e-4)
    chain = kernel.develop(surf, [surf.pairings[0][0]])
    d = kernel.dist(chain.center(0), chain.center(1))
    assert d == pytest.approx(ideal_clique_distance(5), abs=1e-6)


def test_truncated_solves_target_distance():
    t = truncation_for_distance(5, 3.0)
    surf = surfaces.build_truncated_surface(5, t)
    chain = kernel.develop(surf, [surf.pairings[0][0]])
    assert kernel.dist(chain.center(0), chain.center(1)) == pytest.approx(3.0, abs=1e-9)


def test_truncated_rejects_non_orientable():
    pairing = surfaces._round_robin_pairing(6, tuple(range(0, 10, 2)))
    pairing[0] = (pairing[0][0], pairing[0][1], True)
    with pytest.raises(OrientabilityError):
        surfaces.build_truncated_surface(5, 1.0, pairing=pairing)


# ---------------------------------------------------------------------------
# triangle surfaces


def test_triangle_surface_k7_metric_infeasible_but_combinatorial_genus():
    rs = rotations.load_bundled("k7")
    with pytest.raises(GeometryInfeasibleError):
        surfaces.build_triangle_surface(rs, mode="equilateral")
    surf = surfaces.build_triangle_surface(rs, mode="equilateral", require_metric=False)
    eu = surf.euler()
    assert eu.chi == 0 and eu.genus == 1 and eu.boundaries == 0
    assert len(surf._corner_classes()) == 7  # vertex classes recover the graph vertices


def test_triangle_surface_k12_equilateral_metric():
    rs = rotations.load_bundled("k12")
    surf = surfaces.build_triangle_surface(rs, mode="equilateral")
    assert surf.metric_feasible
    eu = surf.euler()
    assert eu.genus == 6 and eu.boundaries == 0
    # angle audit: every vertex class accumulates full angle 2 pi
    poly = surf.polygons[0]
    assert poly.side_lengths[0] == pytest.approx(equilateral_side(11), abs=1e-12)
    for root, members in surf._corner_classes().items():
        total = sum(surf.polygons[p].corner_angle for p, _ in members)
        assert total == pytest.approx(2.0 * math.pi, abs=1e-9)


def test_triangle_surface_k12_holed_blocks():
    rs = rotations.load_bundled("k12")
    surf = surfaces.build_triangle_surface(rs, mode="holed", t=HOLE_T)
    eu = surf.euler()
    assert eu.boundaries == 44  # one hole per face: T_11
    assert eu.genus == 6
    for curve in surf.boundary_curves():
        assert curve["closed_geodesic"]
        assert curve["length"] == pytest.approx(HOLE_T, abs=1e-12)


def test_triangle_surface_rejects_irregular():
    # triangular bipyramid: all faces triangles, degrees 3, 3, 4, 4, 4
    rs = rotations.rotation_system(
        [(2, 4, 3), (2, 3, 4), (0, 3, 1, 4), (0, 4, 1, 2), (0, 2, 1, 3)]
    )
    assert rotations.is_triangular(rs) and not rs.is_regular()
    with pytest.raises(BlueprintError):
        surfaces.build_triangle_surface(rs, mode="holed", require_metric=False)


def test_triangle_surface_rejects_nontriangular():
    # K5 with a cyclic rotation is regular but not triangular
    rs = rotations.rotation_system([tuple((v + k) % 5 for k in (1, 2, 3, 4)) for v in range(5)])
    assert not rotations.is_triangular(rs)
    with pytest.raises(BlueprintError):
        surfaces.build_triangle_surface(rs, mode="equilateral", require_metric=False)


# ---------------------------------------------------------------------------
# closing surfaces


def test_close_k12_blocks_to_min_genus():
    rs = rotations.load_bundled("k12")
    surf = surfaces.build_triangle_surface(rs, mode="holed", t=HOLE_T)
    closed = surfaces.close_surface(surf)
    eu = closed.euler()
    assert eu.boundaries == 0
    assert eu.genus == 28  # 6 + 44/2, the exact minimal closed genus for n = 11


def test_close_two_boundary_toy_adds_handle():
    tri = surfaces.holed_triangle(12, HOLE_T)
    toy = surfaces.GluedSurface(
        polygons=[tri, tri],
        pairings=[((0, 0), (1, 0), True), ((0, 1), (1, 1), True), ((0, 2), (1, 2), True)],
    )
    eu = toy.euler()
    assert eu.genus == 0 and eu.boundaries == 2  # the doubled triangle minus two disks
    closed = surfaces.close_surface(toy)
    assert closed.euler().genus == 1


def test_close_with_genus_patch_additivity():
    tri = surfaces.holed_triangle(12, HOLE_T)
    base = surfaces.GluedSurface(
        polygons=[tri, tri, surfaces.genus_patch(0, HOLE_T)],
        pairings=[
            ((0, 0), (1, 0), True),
            ((0, 1), (1, 1), True),
            ((0, 2), (1, 2), True),
            ((0, 3), (2, 0), False),
        ],
    )
    g0 = base.euler().genus
    for k in (1, 5):
        closed = surfaces.close_surface(base, extra_genus=k)
        assert closed.euler().genus == g0 + k


def test_close_rejects_odd_boundaries():
    rs = rotations.load_bundled("k12")
    surf = surfaces.build_triangle_surface(rs, mode="holed", t=HOLE_T)
    with pytest.raises(PairingError):
        surfaces.close_surface(surf, extra_genus=2)  # 43 curves left: unpairable


def test_paired_sides_must_match_lengths():
    tri12 = surfaces.holed_triangle(12, HOLE_T)
    tri13 = surfaces.holed_triangle(13, HOLE_T)
    with pytest.raises(PairingError):
        surfaces.GluedSurface(polygons=[tri12, tri13], pairings=[((0, 0), (1, 0), False)])


def test_euler_single_triangle_disk():
    poly = surfaces.equilateral_triangle(12)
    surf = surfaces.GluedSurface(polygons=[poly], pairings=[])
    eu = surf.euler()
    assert eu.chi == 1 and eu.genus == 0 and eu.boundaries == 1


def test_euler_invariant_under_relabeling():
    surf = surfaces.build_truncated_surface(4, 0.7)
    perm = [3, 0, 4, 1, 2]
    polys = [surf.polygons[perm.index(i)] for i in range(5)]
    pairings = [
        ((perm[p1], s1), (perm[p2], s2), flip) for (p1, s1), (p2, s2), flip in surf.pairings
    ]
    relabeled = surfaces.GluedSurface(polygons=polys, pairings=pairings, funnel_boundaries=True)
    assert relabeled.euler() == surf.euler()


# ---------------------------------------------------------------------------
# clique certificates


@pytest.mark.parametrize("n", [3, 4, 5])
def test_certify_ideal_margin_positive(n):
    surf = surfaces.build_ideal_surface(n)
    cert = surfaces.certify_clique(surf, max_polygons=4)
    assert cert.vertex_count == n + 1
    assert cert.edge_length == pytest.approx(ideal_clique_distance(n), abs=1e-9)
    assert not cert.indeterminate
    assert cert.margin > 0


@pytest.mark.parametrize("t", [0.1, 1.0])
def test_certify_truncated_margin_positive(t):
    surf = surfaces.build_truncated_surface(5, t)
    cert = surfaces.certify_clique(surf, max_polygons=4)
    assert cert.edge_length == pytest.approx(truncated_clique_distance(5, t), abs=1e-9)
    assert cert.margin > 0


def test_certify_budget_too_small_is_indeterminate():
    surf = surfaces.build_ideal_surface(3)
    cert = surfaces.certify_clique(surf, max_polygons=1)
    assert cert.indeterminate and cert.margin is None and cert.alternatives == 0


# ---------------------------------------------------------------------------
# chains and serialization


def test_chain_descriptor():
    systems = {3: rotations.load_bundled("k4"), 6: rotations.load_bundled("k7")}
    chain = surfaces.build_infinite_chain([3, 6], systems)
    assert chain["chromatic_lower_bound"] == 7
    assert [b["clique"] for b in chain["blocks"]] == [4, 7]
    assert chain["junctions"] == [[0, 1]]


def test_chain_empty():
    assert surfaces.build_infinite_chain([], {})["chromatic_lower_bound"] == 0


def test_chain_single_block_matches_closed_bound():
    systems = {6: rotations.load_bundled("k7")}
    chain = surfaces.build_infinite_chain([6], systems)
    assert chain["chromatic_lower_bound"] == 7  # the closed single-block clique


def test_chain_prefix_monotone():
    systems = {
        3: rotations.load_bundled("k4"),
        6: rotations.load_bundled("k7"),
        11: rotations.load_bundled("k12"),
    }
    bounds = [
        surfaces.build_infinite_chain([3, 6, 11], systems, prefix_length=k)["chromatic_lower_bound"]
        for k in (1, 2, 3)
    ]
    assert bounds == sorted(bounds) == [4, 7, 12]


def test_chain_missing_blueprint():
    with pytest.raises(BlueprintError):
        surfaces.build_infinite_chain([3, 8], {3: rotations.load_bundled("k4")})


def test_descriptor_roundtrip_revalidates():
    for surf in (surfaces.build_ideal_surface(3), surfaces.build_truncated_surface(4, 0.7)):
        data = surf.to_json()
        rebuilt = surfaces.surface_from_json(data)
        assert rebuilt.euler() == surf.euler()
        assert rebuilt.to_json()["derived"] == data["derived"]
