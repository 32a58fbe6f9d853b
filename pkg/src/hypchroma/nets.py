"""Separated nets in a hyperbolic disk, their distance graphs, and colorings.

The pipeline: throw darts until a maximal r-separated net saturates, audit
coverage by sampling, build the graph joining centers whose distance lies in
[d - 2r, d + 2r], color it greedily, then sample exact-distance-d point pairs
to confirm the induced coloring never collides.

Everything is deterministic per seed: candidate points come from a single
numpy Generator stream in fixed-size batches, and the accept/reject kernels
(see _kernels) are bit-identical across backends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, kernel
from .errors import InvalidInputError, SizeExceededError
from .formulas import ARCSINH_1

#: consecutive rejected darts before the net is declared saturated
DART_STREAK_LIMIT = 5000

#: sample size of one coverage-audit pass
AUDIT_SAMPLES = 10_000

_BATCH = 4096


@dataclass
class Net:
    """Maximal r-separated point set in the disk of radius ``region_radius``."""

    centers: np.ndarray
    r: float
    region_radius: float
    base: np.ndarray
    seed: int
    _acc: object = field(repr=False, default=None)

    @property
    def size(self):
        return int(self.centers.shape[0])


@dataclass
class DistanceGraph:
    """Graph on net centers; edge iff |dist - d| <= 2 r0 (interval inclusive)."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    d: float
    r0: float

    def neighbors(self, v):
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def max_degree(self):
        if self.n == 0:
            return 0
        return int(np.max(np.diff(self.indptr)))

    @property
    def edge_count(self):
        return int(self.indices.shape[0] // 2)

    def edges(self):
        """Iterate undirected edges (u, v) with u < v."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)


@dataclass
class Coloring:
    """Proper coloring of a distance graph: color index per vertex."""

    colors: np.ndarray
    n_colors: int


def _sample_disk(rng, n, radius):
    """n area-uniform points in the disk of the given radius about the origin."""
    u = rng.random(n)
    theta = rng.random(n) * (2.0 * math.pi)
    x0 = 1.0 + u * (math.cosh(radius) - 1.0)
    sh = np.sqrt(np.maximum(x0 * x0 - 1.0, 0.0))
    pts = np.empty((n, 3))
    pts[:, 0] = x0
    pts[:, 1] = sh * np.cos(theta)
    pts[:, 2] = sh * np.sin(theta)
    return pts


def build_net(region_radius, r, seed, base=None):
    """Dart-throw a maximal r-separated net in the disk, then audit coverage.

    Saturation is declared after DART_STREAK_LIMIT consecutive rejections;
    a follow-up audit samples AUDIT_SAMPLES points per pass and inserts any
    uncovered sample (which automatically respects the separation), repeating
    until a pass inserts nothing.  The base point is always center 0.
    """
    if not (region_radius > 0 and r > 0):
        raise InvalidInputError("region radius and separation must be positive")
    if base is None:
        base = kernel.base_point()
    elif not kernel.is_valid_point(base, tol=1e-9):
        raise InvalidInputError("base point is off the hyperboloid")
    if float(np.max(np.abs(base[1:]))) > 1e-15:
        raise InvalidInputError("net construction currently requires the origin base point")

    rng = np.random.default_rng(seed)
    acc = _kernels.NetAccumulator(region_radius, r)
    acc.insert_batch(np.asarray([base]), streak=0, streak_limit=DART_STREAK_LIMIT)

    streak = 0
    while streak < DART_STREAK_LIMIT:
        cand = _sample_disk(rng, _BATCH, region_radius)
        streak, _, _ = acc.insert_batch(cand, streak, DART_STREAK_LIMIT)

    clean = 0
    while clean < 3:  # three consecutive clean passes before trusting saturation
        cand = _sample_disk(rng, AUDIT_SAMPLES, region_radius)
        _, _, inserted = acc.insert_batch(cand, streak=0, streak_limit=2 * AUDIT_SAMPLES)
        clean = clean + 1 if inserted == 0 else 0

    net = Net(
        centers=acc.points[: acc.count].copy(),
        r=float(r),
        region_radius=float(region_radius),
        base=np.asarray(base, dtype=float),
        seed=int(seed),
        _acc=acc,
    )
    return net


def build_distance_graph(net, d):
    """Distance graph on the net with the interval criterion |dist - d| <= 2 r0.

    r0 is the net separation; requires r0 <= 2d/5 so that ball diameters stay
    below d.
    """
    if not (d > 0 and math.isfinite(d)):
        raise InvalidInputError("d must be positive")
    if net.r > 2.0 * d / 5.0 + 1e-12:
        raise InvalidInputError("net separation exceeds 2d/5: balls too large for a d-coloring")
    pts = net.centers
    n = pts.shape[0]
    lo = d - 2.0 * net.r
    hi = d + 2.0 * net.r
    indptr, indices = _kernels.interval_adjacency(pts, math.cosh(max(lo, 0.0)), math.cosh(hi))
    return DistanceGraph(n=n, indptr=indptr, indices=indices, d=float(d), r0=float(net.r))


def greedy_color(graph, order="natural"):
    """Greedy proper coloring; order is 'natural' (index) or 'dsatur'.

    Color count never exceeds max degree + 1.
    """
    n = graph.n
    colors = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return Coloring(colors=colors, n_colors=0)
    if order == "natural":
        sequence = range(n)
        for v in sequence:
            used = set(int(c) for c in colors[graph.neighbors(v)] if c >= 0)
            c = 0
            while c in used:
                c += 1
            colors[v] = c
    elif order == "dsatur":
        sat = [set() for _ in range(n)]
        degrees = np.diff(graph.indptr)
        done = np.zeros(n, dtype=bool)
        for _ in range(n):
            # max saturation, then max degree, then min index: deterministic
            best, best_key = -1, None
            for v in range(n):
                if done[v]:
                    continue
                key = (len(sat[v]), int(degrees[v]), -v)
                if best_key is None or key > best_key:
                    best, best_key = v, key
            used = sat[best]
            c = 0
            while c in used:
                c += 1
            colors[best] = c
            done[best] = True
            for w in graph.neighbors(best):
                sat[int(w)].add(c)
    else:
        raise InvalidInputError(f"unknown ordering policy {order!r}")
    return Coloring(colors=colors, n_colors=int(colors.max()) + 1 if n else 0)


def is_proper(graph, coloring):
    for u in range(graph.n):
        cu = coloring.colors[u]
        for v in graph.neighbors(u):
            if coloring.colors[v] == cu and u != v:
                return False
    return True


def exact_chromatic(graph, limit=40):
    """Exact chromatic number by branch and bound with a clique lower bound.

    Refuses graphs larger than ``limit`` vertices.
    """
    n = graph.n
    if n > limit:
        raise SizeExceededError(f"graph has {n} vertices, exact limit is {limit}")
    if n == 0:
        return 0
    adj = [0] * n
    for u in range(n):
        for v in graph.neighbors(u):
            if v != u:
                adj[u] |= 1 << int(v)
    if not any(adj):
        return 1

    order = sorted(range(n), key=lambda v: -bin(adj[v]).count("1"))

    # greedy clique on the degree order -> lower bound
    clique = []
    cmask = (1 << n) - 1
    for v in order:
        if cmask >> v & 1:
            clique.append(v)
            cmask &= adj[v]
    lb = len(clique)

    ub_coloring = greedy_color(graph, order="dsatur")
    best = ub_coloring.n_colors
    if best == lb:
        return best

    colors = [-1] * n

    def feasible(v, c):
        m = adj[v]
        while m:
            w = (m & -m).bit_length() - 1
            if colors[w] == c:
                return False
            m &= m - 1
        return True

    def search(i, used):
        nonlocal best
        if used >= best:
            return
        if i == n:
            best = used
            return
        v = order[i]
        for c in range(min(used + 1, best - 1) + 1):
            if c >= best:
                break
            if feasible(v, c):
                colors[v] = c
                search(i + 1, max(used, c + 1))
                colors[v] = -1
            if best == lb:
                return

    search(0, 0)
    return best


def point_color(net, coloring, p):
    """Color of the lowest-index center whose r-ball covers p; None if uncovered.

    The tie-break makes the 'pick any covering ball' rule canonical and
    reproducible.
    """
    p = np.asarray(p, dtype=float)
    if not kernel.is_valid_point(p, tol=1e-9):
        raise InvalidInputError("query point is off the hyperboloid")
    pts = net.centers
    t = p[0] * pts[:, 0]
    t -= p[1] * pts[:, 1]
    t -= p[2] * pts[:, 2]
    mask = t <= math.cosh(net.r)
    if not mask.any():
        return None
    return int(coloring.colors[int(np.argmax(mask))])


def validate_coloring(net, coloring, d, trials, seed):
    """Sample exact-distance-d pairs and count same-color covered pairs.

    x is drawn uniformly from the sub-disk of radius region_radius - d (the
    margin avoids boundary artifacts), theta uniformly, y = point_at(x,
    theta, d).  Pairs with either endpoint uncovered are skipped.  Returns
    the violation count; a proper coloring of the matching distance graph
    yields zero.
    """
    if trials < 0:
        raise InvalidInputError("trials must be nonnegative")
    if trials == 0:
        return 0
    safe_radius = max(net.region_radius - d, 0.0)
    rng = np.random.default_rng(seed)
    cosh_d = math.cosh(d)
    sinh_d = math.sinh(d)
    violations = 0
    remaining = trials
    acc = net._acc
    if acc is None:
        raise InvalidInputError("net lost its spatial index; rebuild it with build_net")
    while remaining > 0:
        m = min(remaining, 65536)
        x_pts = _sample_disk(rng, m, safe_radius) if safe_radius > 0 else np.tile(net.base, (m, 1))
        theta = rng.random(m) * (2.0 * math.pi)
        v, _, _ = acc.validate_batch(
            x_pts, np.cos(theta), np.sin(theta), cosh_d, sinh_d, coloring.colors
        )
        violations += int(v)
        remaining -= m
    return violations


def run_experiment(d, region_radius, seed, trials, r0=None, order="natural"):
    """End-to-end net experiment; returns the JSON-ready result record."""
    from .formulas import annulus_degree_bound, net_degree_bound

    if r0 is None:
        r0 = min(2.0 * d / 5.0, ARCSINH_1)
    net = build_net(region_radius, r0, seed)
    graph = build_distance_graph(net, d)
    coloring = greedy_color(graph, order=order)
    violations = validate_coloring(net, coloring, d, trials, seed=seed + 1)
    return {
        "R": region_radius,
        "r0": r0,
        "d": d,
        "seed": seed,
        "centers": [[float(c) for c in row] for row in net.centers],
        "colors": [int(c) for c in coloring.colors],
        "edges": graph.edge_count,
        "max_degree": graph.max_degree,
        "degree_bound": annulus_degree_bound(d, r0),
        "colors_used": coloring.n_colors,
        "phi_plus_one": int(math.floor(net_degree_bound(d))) + 1,
        "violations": violations,
        "trials": trials,
    }
