"""Self-check suites behind the CLI `verify` subcommand.

Each suite runs the oracle cross-checks that tie the closed forms to the
geometric kernel (and the shipped data files to their documented
invariants), returning a machine-readable list of check records.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernel, rotations, surfaces
from .formulas import (
    ARCSINH_1,
    CONVEXITY_THINNESS,
    annulus_degree_bound,
    collar_geometry,
    equilateral_side,
    holed_triangle_metrics,
    ideal_clique_distance,
    truncated_clique_distance,
    truncation_for_distance,
)


def _check(name, ok, detail=""):
    return {"check": name, "passed": bool(ok), "detail": detail}


def verify_formulas():
    """Closed forms vs kernel constructions and internal identities."""
    checks = []

    # collar margin positive over the admissible grid
    worst = math.inf
    for eps in np.linspace(0.1, ARCSINH_1 - 1e-3, 24):
        for lg in np.linspace(1e-4, 4.0, 24):
            if math.sinh(eps) < math.sinh(0.5 * lg):
                continue
            worst = min(worst, collar_geometry(lg, float(eps)).margin)
    checks.append(_check("collar margin positive on grid", worst > 0, f"min margin {worst:.3e}"))

    limit = collar_geometry(1e-6, CONVEXITY_THINNESS).margin
    checks.append(
        _check(
            "collar margin limit log(2)/2",
            abs(limit - 0.5 * math.log(2.0)) < 1e-4,
            f"{limit:.10f}",
        )
    )

    # ideal clique distance vs doubled inradius via side geodesics
    errs = []
    for n in (3, 4, 5, 7, 12):
        normal = kernel.geodesic_normal(
            kernel.ideal_point(-math.pi / n), kernel.ideal_point(math.pi / n)
        )
        inradius = kernel.dist_to_geodesic(kernel.base_point(), normal)
        errs.append(abs(ideal_clique_distance(n) - 2.0 * inradius))
    checks.append(
        _check("ideal distance vs doubled inradius", max(errs) < 1e-9, f"max err {max(errs):.2e}")
    )

    # truncation relation round trips
    errs = []
    for n in (3, 5, 12):
        for d in (3.0, 4.5):
            dd = max(d, ideal_clique_distance(n) + 1e-9)
            t = truncation_for_distance(n, dd)
            errs.append(abs(truncated_clique_distance(n, t) - dd))
    checks.append(_check("truncation round trip", max(errs) < 1e-12, f"max err {max(errs):.2e}"))

    # equilateral side vs quadrilateral-free triangle solve
    n = 12
    circum = math.acosh(1.0 / (math.tan(math.pi / 3.0) * math.tan(math.pi / n)))
    verts = [kernel.from_polar(2.0 * math.pi * (k + 0.5) / 3.0, circum) for k in range(3)]
    side_err = abs(kernel.dist(verts[0], verts[1]) - equilateral_side(n))
    angle_err = abs(kernel.angle_at(verts[0], verts[1], verts[2]) - 2.0 * math.pi / n)
    checks.append(
        _check(
            "equilateral triangle realization",
            side_err < 1e-9 and angle_err < 1e-9,
            f"side err {side_err:.2e}, angle err {angle_err:.2e}",
        )
    )

    # holed triangle metrics vs the quadrilateral solver
    t = 6.0 * math.asinh(0.25)
    metrics = holed_triangle_metrics(12, t)
    quad = kernel.solve_right_quadrilateral(t / 3.0, math.pi / 12.0)
    checks.append(
        _check(
            "holed triangle vs quadrilateral solver",
            abs(quad.opposite - metrics.side_length) < 1e-9
            and abs(quad.leg - metrics.vertex_to_hole) < 1e-9,
            f"side err {abs(quad.opposite - metrics.side_length):.2e}",
        )
    )

    # packing-degree identity
    rng = np.random.default_rng(0)
    errs = []
    for _ in range(50):
        d = rng.uniform(0.5, 8.0)
        r0 = rng.uniform(0.05, 2.0 * d / 5.0)
        lhs = annulus_degree_bound(d, r0)
        a = 0.5 * (d + 2.5 * r0)
        b = 0.5 * (d - 2.5 * r0)
        rhs = (math.sinh(a) ** 2 - math.sinh(b) ** 2) / math.sinh(0.25 * r0) ** 2
        errs.append(abs(lhs - rhs) / rhs)
    checks.append(_check("degree bound product identity", max(errs) < 1e-12, f"{max(errs):.2e}"))
    return checks


def verify_surfaces():
    """Construction audits: Euler data, pairing lengths, clique certificates."""
    checks = []
    surf = surfaces.build_ideal_surface(3)
    eu = surf.euler()
    checks.append(
        _check(
            "ideal n=3 topology",
            eu.chi == -2 and eu.orientable and eu.boundaries == 0,
            f"chi {eu.chi}, cusps {eu.cusps}",
        )
    )
    for n in (3, 4):
        cert = surfaces.certify_clique(surfaces.build_ideal_surface(n), max_polygons=4)
        edge_err = abs(cert.edge_length - ideal_clique_distance(n))
        checks.append(
            _check(
                f"ideal n={n} clique certificate",
                cert.margin is not None and cert.margin > 0 and edge_err < 1e-9,
                f"margin {cert.margin:.4f}, edge err {edge_err:.2e}",
            )
        )
    surf = surfaces.build_truncated_surface(5, 1.0)
    cert = surfaces.certify_clique(surf, max_polygons=3)
    edge_err = abs(cert.edge_length - truncated_clique_distance(5, 1.0))
    checks.append(
        _check(
            "truncated n=5 clique certificate",
            cert.margin is not None and cert.margin > 0 and edge_err < 1e-9,
            f"margin {cert.margin:.4f}, edge err {edge_err:.2e}",
        )
    )
    js = surf.to_json()
    surf2 = surfaces.surface_from_json(js)
    checks.append(
        _check("descriptor round trip", surf2.euler() == surf.euler(), "emit -> parse -> audit")
    )
    return checks


def verify_rotations(files=None):
    """Shipped (or supplied) rotation systems trace to their documented genus."""
    checks = []
    expected = {"k4": (4, 0), "k7": (7, 1), "k12": (12, 6), "k15": (15, 11), "k16": (16, 13)}
    if files is None:
        systems = {name: rotations.load_bundled(name) for name in expected}
    else:
        systems = {name: rotations.load_file(path) for name, path in files.items()}
    for name, rs in systems.items():
        n, genus = expected.get(name, (rs.n, None))
        try:
            report = rotations.face_report(rs)
            ok = (
                report["triangular"]
                and (genus is None or report["genus"] == genus)
                and rotations.verify_ringel_youngs(rs, n)
            )
            detail = f"V={report['V']} E={report['E']} F={report['F']} genus={report['genus']}"
        except Exception as exc:  # malformed data must fail, not crash the suite
            ok = False
            detail = f"{type(exc).__name__}: {exc}"
        checks.append(_check(f"rotation system {name}", ok, detail))
    return checks


SUITES = {
    "formulas": verify_formulas,
    "surfaces": verify_surfaces,
    "rotations": verify_rotations,
}


def run_suite(name):
    """Run one suite (or 'all'); returns the JSON-ready result."""
    if name == "all":
        checks = []
        for suite_name in ("formulas", "surfaces", "rotations"):
            for record in SUITES[suite_name]():
                record = dict(record)
                record["check"] = f"{suite_name}: {record['check']}"
                checks.append(record)
    elif name in SUITES:
        checks = SUITES[name]()
    else:
        raise KeyError(name)
    return {
        "suite": name,
        "passed": all(c["passed"] for c in checks),
        "failures": [c for c in checks if not c["passed"]],
        "checks": checks,
    }
