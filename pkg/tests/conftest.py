import math

import numpy as np
import pytest

from hypchroma import kernel
from hypchroma.nets import DistanceGraph


def poincare_distance(u, v):
    """Independent oracle: the Poincare-disk distance formula.

    Shares nothing with kernel.dist beyond arithmetic; used to cross-check
    the hyperboloid route.  Written in the arcsinh form (2 arcsinh sqrt(z)
    with cosh d = 1 + 2z) so its own precision does not collapse for nearby
    points the way acosh(1 + tiny) does.
    """
    du = float(np.sum((u - v) ** 2))
    z = du / ((1.0 - float(np.sum(u * u))) * (1.0 - float(np.sum(v * v))))
    return 2.0 * math.asinh(math.sqrt(z))


def oracle_dist(p, q):
    """Distance via the Poincare chart of two hyperboloid points."""
    return poincare_distance(kernel.to_poincare(p), kernel.to_poincare(q))


def graph_from_edges(n, edges):
    """Build a DistanceGraph-shaped adjacency from an explicit edge list."""
    neighbors = [[] for _ in range(n)]
    for u, v in edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        neighbors[v].sort()
        indptr[v + 1] = indptr[v] + len(neighbors[v])
    indices = np.array([w for row in neighbors for w in row], dtype=np.int64)
    return DistanceGraph(n=n, indptr=indptr, indices=indices, d=1.0, r0=0.1)


def brute_force_chromatic(graph):
    """Smallest k admitting a proper coloring, by exhaustive assignment."""
    n = graph.n
    if n == 0:
        return 0
    adj = [set(int(w) for w in graph.neighbors(v)) for v in range(n)]

    def colorable(k):
        colors = [-1] * n

        def place(v):
            if v == n:
                return True
            for c in range(k):
                if all(colors[w] != c for w in adj[v] if w < v or colors[w] >= 0):
                    colors[v] = c
                    if place(v + 1):
                        return True
                    colors[v] = -1
            return False

        return place(0)

    k = 1
    while not colorable(k):
        k += 1
    return k


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
