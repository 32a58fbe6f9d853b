#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the hot paths of the net pipeline (dart insertion, coverage audit,
exact-distance validation, interval adjacency) under both backends and
prints a timing table plus the cross-backend equality check.

Usage:
    python scripts/bench_backends.py [--d 1.0] [--radius 6.0] [--seed 7]
                                     [--trials 100000] [--quick]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from hypchroma import _kernels, nets


def run_pipeline(d, radius, seed, trials):
    t = {}
    t0 = time.perf_counter()
    net = nets.build_net(radius, min(2.0 * d / 5.0, 0.881373587019543), seed)
    t["net build"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    graph = nets.build_distance_graph(net, d)
    t["adjacency"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    coloring = nets.greedy_color(graph)
    t["greedy color"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    violations = nets.validate_coloring(net, coloring, d, trials, seed=seed + 1)
    t["validation"] = time.perf_counter() - t0
    return t, net, graph, coloring, violations


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=float, default=1.0)
    ap.add_argument("--radius", type=float, default=6.0)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--quick", action="store_true", help="smaller instance (radius 4, 2e4 trials)")
    args = ap.parse_args()
    if args.quick:
        args.radius, args.trials = 4.0, 20_000

    results = {}
    nets_out = {}
    backends = ["numpy"]
    try:
        _kernels.use_backend("numba")
        backends.insert(0, "numba")
    except Exception:
        print("numba unavailable; benchmarking numpy only")

    for backend in backends:
        _kernels.use_backend(backend)
        if backend == "numba":  # warm the JIT before timing
            run_pipeline(args.d, 2.0, args.seed, 1000)
        times, net, graph, coloring, violations = run_pipeline(
            args.d, args.radius, args.seed, args.trials
        )
        results[backend] = times
        nets_out[backend] = (net.centers, graph.indices, coloring.colors, violations)
        total = sum(times.values())
        print(f"\n[{backend}] n={net.size} edges={graph.edge_count} "
              f"colors={coloring.n_colors} violations={violations}")
        for stage, dt in times.items():
            print(f"  {stage:>14}: {dt * 1e3:9.1f} ms")
        print(f"  {'total':>14}: {total * 1e3:9.1f} ms")

    if len(results) == 2:
        print("\nspeedup (numpy / numba):")
        for stage in results["numba"]:
            ratio = results["numpy"][stage] / max(results["numba"][stage], 1e-9)
            print(f"  {stage:>14}: {ratio:6.1f}x")
        same = all(
            np.array_equal(a, b) for a, b in zip(nets_out["numba"][:3], nets_out["numpy"][:3])
        ) and nets_out["numba"][3] == nets_out["numpy"][3]
        print(f"\nbit-identical results across backends: {same}")
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
