"""Hot inner loops behind the net experiments, in two interchangeable backends.

The numba backend JIT-compiles scalar loops over a polar bucket grid; the
numpy backend replays the same logic with vectorized full scans.  Selection:
``HYPCHROMA_BACKEND=numba|numpy`` (default: numba when importable).

Both backends must produce bit-identical results.  Two rules make that hold:

* no transcendental calls inside the loops — callers hoist cosh/sinh/cos/sin
  of all radii and angles into plain float arguments;
* the Minkowski dot used by every accept/cover predicate is evaluated in the
  same literal order (t = x0*y0; t -= x1*y1; t -= x2*y2) in both paths.

The bucket grid only decides which candidate centers get *scanned*; its
angular windows carry two sectors of slack, so an off-by-one cell assignment
(atan2 rounding) can never change a predicate outcome.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import InvalidInputError

_ENV_BACKEND = os.environ.get("HYPCHROMA_BACKEND", "").strip().lower()
if _ENV_BACKEND not in ("", "numba", "numpy"):
    raise InvalidInputError(f"HYPCHROMA_BACKEND must be 'numba' or 'numpy', got {_ENV_BACKEND!r}")

_numba = None
if _ENV_BACKEND != "numpy":
    try:
        import numba as _numba
    except ImportError:  # pragma: no cover - depends on environment
        _numba = None
        if _ENV_BACKEND == "numba":
            raise InvalidInputError("HYPCHROMA_BACKEND=numba but numba is not importable")

_ACTIVE = "numba" if _numba is not None else "numpy"


def active_backend():
    """Name of the backend currently answering kernel calls."""
    return _ACTIVE


def use_backend(name):
    """Switch backends at runtime (tests and the benchmark use this)."""
    global _ACTIVE
    if name not in ("numba", "numpy"):
        raise InvalidInputError(f"unknown backend {name!r}")
    if name == "numba" and _numba is None:
        raise InvalidInputError("numba backend requested but numba is not importable")
    _ACTIVE = name


# ---------------------------------------------------------------------------
# Polar bucket grid
#
# Bands of height ~r stacked in the radial coordinate, each split into
# sectors of outer arc ~r.  Band membership is decided by comparing x0
# against precomputed cosh(band edge) values: no transcendentals needed at
# query time.


class BucketGrid:
    """Static geometry of the polar bucket index over a disk of radius ``radius``."""

    def __init__(self, radius, r):
        if r <= 0 or radius <= 0:
            raise InvalidInputError("grid needs positive radius and spacing")
        self.r = float(r)
        self.radius = float(radius)
        nbands = max(1, int(math.ceil(radius / r))) + 1
        edges = np.array([math.cosh(r * (b + 1)) for b in range(nbands)])
        sectors = np.empty(nbands, dtype=np.int64)
        for b in range(nbands):
            arc = 2.0 * math.pi * math.sinh(r * (b + 1))
            sectors[b] = max(4, int(math.ceil(arc / r)))
        offsets = np.zeros(nbands + 1, dtype=np.int64)
        np.cumsum(sectors, out=offsets[1:])
        self.nbands = nbands
        self.band_cosh_edges = edges
        self.band_sectors = sectors
        self.cell_offsets = offsets
        self.ncells = int(offsets[-1])
        self.windows = self._angular_windows()

    def _angular_windows(self):
        """Sector half-windows win[b, j] for target band b + (j - 1), j in {0,1,2}.

        Conservative: a query in band b must scan enough sectors of the
        target band to see every point within distance r.  Computed by
        maximizing the subtended angle over a grid of radius pairs, then
        padded with two sectors of slack.
        """
        r = self.r
        cosh_r = math.cosh(r)
        win = np.zeros((self.nbands, 3), dtype=np.int64)
        for b in range(self.nbands):
            for j, tb in enumerate((b - 1, b, b + 1)):
                if tb < 0 or tb >= self.nbands:
                    continue
                k = int(self.band_sectors[tb])
                lo_q, hi_q = b * r, (b + 1) * r
                lo_t, hi_t = tb * r, (tb + 1) * r
                if lo_q < 2.0 * r or lo_t < 2.0 * r:
                    win[b, j] = k  # near the origin angles are unbounded: scan the band
                    continue
                dmax = 0.0
                for rq in np.linspace(lo_q, hi_q, 9):
                    for rt in np.linspace(lo_t, hi_t, 9):
                        ca = (math.cosh(rq) * math.cosh(rt) - cosh_r) / (
                            math.sinh(rq) * math.sinh(rt)
                        )
                        if ca < 1.0:
                            dmax = max(dmax, math.acos(max(ca, -1.0)))
                sect_width = 2.0 * math.pi / k
                win[b, j] = min(k, int(math.ceil(dmax / sect_width)) + 2)
        return win


MAX_NET_POINTS = 20_000_000


def _grid_capacity(radius, r):
    """Upper bound on the number of r-separated points in the disk (packing bound)."""
    packed = math.sinh(0.5 * (radius + 0.5 * r)) ** 2 / math.sinh(0.25 * r) ** 2
    if packed > MAX_NET_POINTS:
        raise InvalidInputError(
            f"region holds up to {packed:.2e} separated points; "
            f"the in-memory net supports at most {MAX_NET_POINTS:.0e}"
        )
    return int(packed) + 64


class NetAccumulator:
    """Mutable state threaded through the insertion kernels: points + bucket lists."""

    def __init__(self, radius, r):
        self.grid = BucketGrid(radius + r, r)
        cap = _grid_capacity(radius + r, r)
        self.points = np.zeros((cap, 3))
        self.count = 0
        self.heads = np.full(self.grid.ncells, -1, dtype=np.int64)
        self.next_in_cell = np.full(cap, -1, dtype=np.int64)
        self.cosh_r = math.cosh(r)

    def insert_batch(self, candidates, streak, streak_limit):
        """Try candidates in order; insert each one farther than r from all kept points.

        Returns (new streak, processed, inserted); stops early once the
        rejection streak reaches streak_limit.
        """
        g = self.grid
        fn = _insert_batch_numba if _ACTIVE == "numba" else _insert_batch_numpy
        new_count, new_streak, processed, inserted = fn(
            self.points,
            self.count,
            self.heads,
            self.next_in_cell,
            g.band_cosh_edges,
            g.band_sectors,
            g.cell_offsets,
            g.windows,
            np.ascontiguousarray(candidates, dtype=np.float64),
            self.cosh_r,
            streak,
            streak_limit,
        )
        if new_count >= self.points.shape[0]:
            raise InvalidInputError("net exceeded its packing-bound capacity")
        self.count = int(new_count)
        return int(new_streak), int(processed), int(inserted)

    def validate_batch(self, x_pts, cos_t, sin_t, cosh_d, sinh_d, colors):
        """Count same-color covered pairs (x, point_at(x, theta, d)) for a trial batch."""
        g = self.grid
        fn = _validate_batch_numba if _ACTIVE == "numba" else _validate_batch_numpy
        return fn(
            self.points,
            self.count,
            np.ascontiguousarray(colors, dtype=np.int64),
            self.heads,
            self.next_in_cell,
            g.band_cosh_edges,
            g.band_sectors,
            g.cell_offsets,
            g.windows,
            np.ascontiguousarray(x_pts, dtype=np.float64),
            np.ascontiguousarray(cos_t, dtype=np.float64),
            np.ascontiguousarray(sin_t, dtype=np.float64),
            float(cosh_d),
            float(sinh_d),
            self.cosh_r,
        )


# ---------------------------------------------------------------------------
# Scalar-loop implementations (compiled by numba)


def _cell_index_py(x0, x1, x2, edges, sectors, offsets):
    b = 0
    nb = edges.shape[0]
    while b < nb - 1 and x0 >= edges[b]:
        b += 1
    k = sectors[b]
    phi = math.atan2(x2, x1)
    if phi < 0.0:
        phi += 2.0 * math.pi
    s = int(phi * k / (2.0 * math.pi))
    if s >= k:
        s = k - 1
    return b, s


def _covering_min_index_py(
    pts, heads, nxt, edges, sectors, offsets, windows, x0, x1, x2, cosh_r
):
    """Lowest index among stored points within distance r of (x0,x1,x2); -1 if none."""
    b, s = _cell_index_py(x0, x1, x2, edges, sectors, offsets)
    best = -1
    nb = edges.shape[0]
    for j in range(3):
        tb = b + j - 1
        if tb < 0 or tb >= nb:
            continue
        w = windows[b, j]
        if w <= 0:
            continue
        k = sectors[tb]
        phi = math.atan2(x2, x1)
        if phi < 0.0:
            phi += 2.0 * math.pi
        sc = int(phi * k / (2.0 * math.pi))
        if sc >= k:
            sc = k - 1
        lo = sc - w
        hi = sc + w
        if hi - lo + 1 >= k:
            lo, hi = 0, k - 1
        for ss in range(lo, hi + 1):
            cell = offsets[tb] + (ss % k)
            idx = heads[cell]
            while idx >= 0:
                t = x0 * pts[idx, 0]
                t -= x1 * pts[idx, 1]
                t -= x2 * pts[idx, 2]
                if t <= cosh_r and (best < 0 or idx < best):
                    best = idx
                idx = nxt[idx]
    return best


def _any_cover_py(pts, heads, nxt, edges, sectors, offsets, windows, x0, x1, x2, cosh_r):
    """Whether any stored point lies within distance r; early exit on the first hit.

    The scan order varies with the grid layout, but existence is
    order-independent, so the accept/reject decision stays deterministic.
    """
    b, s = _cell_index_py(x0, x1, x2, edges, sectors, offsets)
    nb = edges.shape[0]
    for j in range(3):
        tb = b + j - 1
        if tb < 0 or tb >= nb:
            continue
        w = windows[b, j]
        if w <= 0:
            continue
        k = sectors[tb]
        phi = math.atan2(x2, x1)
        if phi < 0.0:
            phi += 2.0 * math.pi
        sc = int(phi * k / (2.0 * math.pi))
        if sc >= k:
            sc = k - 1
        lo = sc - w
        hi = sc + w
        if hi - lo + 1 >= k:
            lo, hi = 0, k - 1
        for ss in range(lo, hi + 1):
            cell = offsets[tb] + (ss % k)
            idx = heads[cell]
            while idx >= 0:
                t = x0 * pts[idx, 0]
                t -= x1 * pts[idx, 1]
                t -= x2 * pts[idx, 2]
                if t <= cosh_r:
                    return True
                idx = nxt[idx]
    return False


def _insert_batch_py(
    pts, count, heads, nxt, edges, sectors, offsets, windows, cand, cosh_r, streak, streak_limit
):
    processed = 0
    inserted = 0
    cap = pts.shape[0]
    for i in range(cand.shape[0]):
        if streak >= streak_limit or count >= cap:
            break
        x0 = cand[i, 0]
        x1 = cand[i, 1]
        x2 = cand[i, 2]
        processed += 1
        if _any_cover_py(pts, heads, nxt, edges, sectors, offsets, windows, x0, x1, x2, cosh_r):
            streak += 1
            continue
        pts[count, 0] = x0
        pts[count, 1] = x1
        pts[count, 2] = x2
        b, s = _cell_index_py(x0, x1, x2, edges, sectors, offsets)
        cell = offsets[b] + s
        nxt[count] = heads[cell]
        heads[cell] = count
        count += 1
        inserted += 1
        streak = 0
    return count, streak, processed, inserted


def _validate_batch_py(
    pts, count, colors, heads, nxt, edges, sectors, offsets, windows,
    x_pts, cos_t, sin_t, cosh_d, sinh_d, cosh_r,
):
    violations = 0
    both_covered = 0
    uncovered = 0
    for i in range(x_pts.shape[0]):
        x0 = x_pts[i, 0]
        x1 = x_pts[i, 1]
        x2 = x_pts[i, 2]
        # y = point_at(x, theta, d) via the origin-translation composition
        shx = math.sqrt(x1 * x1 + x2 * x2)
        if shx < 1e-300:
            cphi = 1.0
            sphi = 0.0
        else:
            cphi = x1 / shx
            sphi = x2 / shx
        w1 = sinh_d * cos_t[i]
        w2 = sinh_d * sin_t[i]
        a1 = cphi * w1 + sphi * w2
        a2 = -sphi * w1 + cphi * w2
        y0 = x0 * cosh_d + shx * a1
        b1 = shx * cosh_d + x0 * a1
        y1 = cphi * b1 - sphi * a2
        y2 = sphi * b1 + cphi * a2
        cx = _covering_min_index_py(
            pts, heads, nxt, edges, sectors, offsets, windows, x0, x1, x2, cosh_r
        )
        cy = _covering_min_index_py(
            pts, heads, nxt, edges, sectors, offsets, windows, y0, y1, y2, cosh_r
        )
        if cx < 0 or cy < 0:
            uncovered += 1
            continue
        both_covered += 1
        if colors[cx] == colors[cy]:
            violations += 1
    return violations, both_covered, uncovered


if _numba is not None:
    import types as _types

    _njit = _numba.njit(cache=True, fastmath=False)

    def _njit_clone(fn, mapping):
        """Compile fn under numba with njit-compiled helpers injected by name.

        The clone shares fn's code object, so the numba kernels can never
        drift from the python reference implementations above.
        """
        env = dict(fn.__globals__)
        env.update(mapping)
        clone = _types.FunctionType(fn.__code__, env, fn.__name__ + "_nb", fn.__defaults__, fn.__closure__)
        return _njit(clone)

    _cell_index_nb = _njit(_cell_index_py)
    _covering_min_index_nb = _njit_clone(
        _covering_min_index_py, {"_cell_index_py": _cell_index_nb}
    )
    _any_cover_nb = _njit_clone(_any_cover_py, {"_cell_index_py": _cell_index_nb})
    _insert_batch_numba = _njit_clone(
        _insert_batch_py,
        {"_cell_index_py": _cell_index_nb, "_any_cover_py": _any_cover_nb},
    )
    _validate_batch_numba = _njit_clone(
        _validate_batch_py, {"_covering_min_index_py": _covering_min_index_nb}
    )
else:  # pragma: no cover - numba-less environments
    _insert_batch_numba = None
    _validate_batch_numba = None


def _adjacency_py(pts, cosh_lo, cosh_hi):
    n = pts.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for i in range(n):
        c = 0
        for j in range(n):
            if i == j:
                continue
            t = pts[i, 0] * pts[j, 0]
            t -= pts[i, 1] * pts[j, 1]
            t -= pts[i, 2] * pts[j, 2]
            if cosh_lo <= t <= cosh_hi:
                c += 1
        deg[i] = c
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + deg[i]
    indices = np.empty(indptr[n], dtype=np.int64)
    for i in range(n):
        k = indptr[i]
        for j in range(n):
            if i == j:
                continue
            t = pts[i, 0] * pts[j, 0]
            t -= pts[i, 1] * pts[j, 1]
            t -= pts[i, 2] * pts[j, 2]
            if cosh_lo <= t <= cosh_hi:
                indices[k] = j
                k += 1
    return indptr, indices


if _numba is not None:
    _adjacency_numba = _numba.njit(cache=True, fastmath=False)(_adjacency_py)
else:  # pragma: no cover
    _adjacency_numba = None


def _adjacency_numpy(pts, cosh_lo, cosh_hi):
    n = pts.shape[0]
    rows = []
    block = max(1, int(4e6 // max(n, 1)))
    for start in range(0, n, block):
        stop = min(start + block, n)
        t = pts[start:stop, 0:1] * pts[None, :, 0]
        t -= pts[start:stop, 1:2] * pts[None, :, 1]
        t -= pts[start:stop, 2:3] * pts[None, :, 2]
        mask = (t >= cosh_lo) & (t <= cosh_hi)
        for i in range(start, stop):
            mask[i - start, i] = False
        rows.append(mask)
    mask = np.vstack(rows) if rows else np.zeros((0, 0), dtype=bool)
    indptr = np.zeros(n + 1, dtype=np.int64)
    if n:
        np.cumsum(mask.sum(axis=1), out=indptr[1:])
    indices = np.nonzero(mask)[1].astype(np.int64)
    return indptr, indices


def interval_adjacency(pts, cosh_lo, cosh_hi):
    """CSR adjacency joining point pairs whose Minkowski dot lies in [cosh_lo, cosh_hi]."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    fn = _adjacency_numba if _ACTIVE == "numba" else _adjacency_numpy
    return fn(pts, float(cosh_lo), float(cosh_hi))


# ---------------------------------------------------------------------------
# Vectorized numpy fallbacks (same decisions, no bucket grid)


def _min_dot_cover_np(pts, count, x0, x1, x2, cosh_r):
    """Vectorized twin of the covering query: lowest covering index or -1."""
    if count == 0:
        return -1
    t = x0 * pts[:count, 0]
    t -= x1 * pts[:count, 1]
    t -= x2 * pts[:count, 2]
    mask = t <= cosh_r
    if not mask.any():
        return -1
    return int(np.argmax(mask))


def _insert_batch_numpy(
    pts, count, heads, nxt, edges, sectors, offsets, windows, cand, cosh_r, streak, streak_limit
):
    processed = 0
    inserted = 0
    cap = pts.shape[0]
    for i in range(cand.shape[0]):
        if streak >= streak_limit or count >= cap:
            break
        x0, x1, x2 = cand[i, 0], cand[i, 1], cand[i, 2]
        processed += 1
        if _min_dot_cover_np(pts, count, x0, x1, x2, cosh_r) >= 0:
            streak += 1
            continue
        pts[count] = cand[i]
        b, s = _cell_index_py(x0, x1, x2, edges, sectors, offsets)
        cell = offsets[b] + s
        nxt[count] = heads[cell]
        heads[cell] = count
        count += 1
        inserted += 1
        streak = 0
    return count, streak, processed, inserted


def _validate_batch_numpy(
    pts, count, colors, heads, nxt, edges, sectors, offsets, windows,
    x_pts, cos_t, sin_t, cosh_d, sinh_d, cosh_r,
):
    n = x_pts.shape[0]
    x0 = x_pts[:, 0]
    x1 = x_pts[:, 1]
    x2 = x_pts[:, 2]
    shx = np.sqrt(x1 * x1 + x2 * x2)
    safe = shx >= 1e-300
    cphi = np.where(safe, np.divide(x1, shx, out=np.ones_like(x1), where=safe), 1.0)
    sphi = np.where(safe, np.divide(x2, shx, out=np.zeros_like(x2), where=safe), 0.0)
    w1 = sinh_d * cos_t
    w2 = sinh_d * sin_t
    a1 = cphi * w1 + sphi * w2
    a2 = -sphi * w1 + cphi * w2
    y0 = x0 * cosh_d + shx * a1
    b1 = shx * cosh_d + x0 * a1
    y1 = cphi * b1 - sphi * a2
    y2 = sphi * b1 + cphi * a2

    violations = 0
    both_covered = 0
    uncovered = 0
    block = max(1, int(4e6 // max(count, 1)))
    cpts = pts[:count]
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        tx = x0[lo:hi, None] * cpts[None, :, 0]
        tx -= x1[lo:hi, None] * cpts[None, :, 1]
        tx -= x2[lo:hi, None] * cpts[None, :, 2]
        mx = tx <= cosh_r
        ty = y0[lo:hi, None] * cpts[None, :, 0]
        ty -= y1[lo:hi, None] * cpts[None, :, 1]
        ty -= y2[lo:hi, None] * cpts[None, :, 2]
        my = ty <= cosh_r
        covx = mx.any(axis=1)
        covy = my.any(axis=1)
        both = covx & covy
        uncovered += int((~both).sum())
        both_covered += int(both.sum())
        ix = mx.argmax(axis=1)
        iy = my.argmax(axis=1)
        violations += int((both & (colors[ix] == colors[iy])).sum())
    return violations, both_covered, uncovered
