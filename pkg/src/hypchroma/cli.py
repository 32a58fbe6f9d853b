"""Command-line interface: bounds reports, constructions, net experiments, verify suites.

Exit codes: 0 success, 1 domain/construction failure, 2 usage error.  All
randomized commands take --seed and write byte-identical JSON when repeated;
timing is only attached under --timing so that the default output stays
reproducible.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import __version__, _kernels
from .errors import HypchromaError

USAGE_EXIT = 2
FAILURE_EXIT = 1


def _emit(payload, args):
    text = json.dumps(payload, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive(value, name, parser):
    if not (value > 0 and math.isfinite(value)):
        parser.error(f"{name} must be a positive real")
    return value


def cmd_bounds(args, parser):
    from . import bounds

    if args.genus is None and args.d is None:
        parser.error("bounds needs --d or --genus")
    if args.genus is not None:
        if args.genus < 2:
            parser.error("--genus must be at least 2")
        report = bounds.report_for_genus(args.genus, d=args.d)
    else:
        _positive(args.d, "--d", parser)
        report = bounds.report_for_distance(args.d)
    payload = report.to_json()
    if args.fit_constants:
        payload["fitted_constants"] = bounds.fitted_envelope_constants()
    _emit(payload, args)
    return 0


def cmd_construct(args, parser):
    from . import rotations, surfaces
    from .kernel import develop

    if args.kind == "ideal":
        if args.n is None or args.n < 3:
            parser.error("construct ideal needs --n >= 3")
        surface = surfaces.build_ideal_surface(args.n)
    elif args.kind == "truncated":
        if args.n is None or args.n < 3:
            parser.error("construct truncated needs --n >= 3")
        if (args.t is None) == (args.d is None):
            parser.error("construct truncated needs exactly one of --t or --d")
        if args.t is None:
            from .formulas import truncation_for_distance

            _positive(args.d, "--d", parser)
            t = truncation_for_distance(args.n, args.d)
        else:
            t = _positive(args.t, "--t", parser)
        surface = surfaces.build_truncated_surface(args.n, t)
    elif args.kind == "triangle":
        if not args.rs:
            parser.error("construct triangle needs --rs FILE")
        rs = rotations.load_file(args.rs)
        surface = surfaces.build_triangle_surface(rs, mode=args.mode, t=args.t)
    elif args.kind == "chain":
        if not args.blocks:
            parser.error("construct chain needs --blocks k<n>:file[,...]")
        systems = {}
        n_list = []
        for token in args.blocks.split(","):
            try:
                name, path = token.split(":", 1)
                n = int(name.lstrip("kK")) - 1
            except ValueError:
                parser.error(f"bad block spec {token!r}, expected k<n>:file")
            systems[n] = rotations.load_file(path)
            n_list.append(n)
        payload = surfaces.build_infinite_chain(n_list, systems)
        _emit(payload, args)
        return 0
    else:  # pragma: no cover - argparse restricts choices
        parser.error(f"unknown construction kind {args.kind}")

    payload = surface.to_json()
    if args.kind in ("ideal", "truncated"):
        cert = surfaces.certify_clique(surface, max_polygons=args.depth)
        payload["clique"] = {
            "vertices": cert.vertex_count,
            "edge_length": cert.edge_length,
            "margin": cert.margin,
            "depth": cert.depth,
            "indeterminate": cert.indeterminate,
        }
        if args.svg:
            from . import svg

            # develop polygon 0 plus every neighbor across its glue sides
            chains = [
                develop(surface, [(0, s)])
                for s in surface.polygons[0].glueable
                if surface.neighbor(0, s) is not None
            ]
            svg.render_developed_patch(surface, chains, path=args.svg)
    _emit(payload, args)
    return 0


def cmd_net(args, parser):
    from . import nets
    from .formulas import ARCSINH_1

    _positive(args.d, "--d", parser)
    _positive(args.radius, "--radius", parser)
    if args.trials < 0:
        parser.error("--trials must be nonnegative")
    r0 = args.r0 if args.r0 is not None else min(2.0 * args.d / 5.0, ARCSINH_1)
    if not (0 < r0 <= 2.0 * args.d / 5.0 + 1e-12):
        parser.error(f"--r0 must satisfy 0 < r0 <= 2d/5 = {2.0 * args.d / 5.0:.6g}")
    t0 = time.perf_counter()
    record = nets.run_experiment(args.d, args.radius, args.seed, args.trials, r0=r0)
    if args.timing:
        record["wall_time"] = time.perf_counter() - t0
    if args.svg:
        from . import svg
        from .nets import Coloring

        import numpy as np

        net = nets.build_net(args.radius, r0, args.seed)
        coloring = Coloring(colors=np.array(record["colors"]), n_colors=record["colors_used"])
        svg.render_net(net, coloring, path=args.svg)
    _emit(record, args)
    return 0


def cmd_verify(args, parser):
    from . import verifysuite

    try:
        result = verifysuite.run_suite(args.suite)
    except KeyError:
        parser.error(f"unknown suite {args.suite!r}")
    _emit(result, args)
    return 0 if result["passed"] else FAILURE_EXIT


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hypchroma",
        description="Chromatic-number machinery for hyperbolic surfaces",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="cap worker threads (default: machine parallelism; env HYPCHROMA_THREADS)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="evaluate upper/lower bounds for a distance or genus")
    p.add_argument("--d", type=float, default=None, help="distance parameter")
    p.add_argument("--genus", type=int, default=None, help="genus parameter")
    p.add_argument("--fit-constants", action="store_true", help="attach fitted envelope constants")
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="build a surface and audit it")
    p.add_argument("kind", choices=["ideal", "truncated", "triangle", "chain"])
    p.add_argument("--n", type=int, default=None, help="polygon side count")
    p.add_argument("--t", type=float, default=None, help="hole/truncation length")
    p.add_argument("--d", type=float, default=None, help="target clique distance (truncated)")
    p.add_argument("--rs", help="rotation-system file (triangle)")
    p.add_argument("--mode", choices=["equilateral", "holed"], default="equilateral")
    p.add_argument("--blocks", help="chain blocks as k<n>:file[,k<n>:file...]")
    p.add_argument("--depth", type=int, default=4, help="clique certificate search depth")
    p.add_argument("--svg", help="write a developed-patch SVG here")
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("net", help="run a net coloring experiment")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--radius", type=float, required=True, help="region disk radius")
    p.add_argument("--r0", type=float, default=None, help="net separation (default min(2d/5, arcsinh 1))")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100_000, help="validation sample count")
    p.add_argument("--timing", action="store_true", help="attach wall_time (breaks byte-reproducibility)")
    p.add_argument("--svg", help="write the colored disk SVG here")
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("verify", help="run oracle cross-check suites")
    p.add_argument("suite", choices=["formulas", "surfaces", "rotations", "all"])
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_verify)
    return parser


def _configure_threads(args):
    threads = args.threads
    if threads is None:
        env = os.environ.get("HYPCHROMA_THREADS", "").strip()
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise HypchromaError(f"HYPCHROMA_THREADS must be an integer, got {env!r}")
    if threads is not None:
        if threads < 1:
            raise HypchromaError("thread cap must be at least 1")
        if _kernels.active_backend() == "numba":
            import numba

            numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _configure_threads(args)
        return args.func(args, parser)
    except HypchromaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILURE_EXIT


if __name__ == "__main__":
    sys.exit(main())
