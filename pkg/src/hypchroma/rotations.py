"""Rotation systems: combinatorial embeddings of graphs on oriented surfaces.

A rotation system assigns each vertex the cyclic order of its neighbors.
Faces are traced with the next-after rule: the dart (u, v) is followed by
(v, w) where w succeeds u in the rotation at v.  Euler's formula then gives
the genus of the embedding.

Text format, one vertex per line, '#' comments::

    0: 1 3 2
    1: 2 3 0
    ...

The sections after face tracing supply verified complete-graph systems as
package data and a budgeted backtracking search for triangular embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import BlueprintError, InvalidInputError, ValidationError


@dataclass(frozen=True)
class RotationSystem:
    """Per-vertex cyclic neighbor orders; vertices are 0..n-1."""

    rotations: tuple

    @property
    def n(self):
        return len(self.rotations)

    def __post_init__(self):
        self.validate()

    def validate(self):
        n = len(self.rotations)
        seen = {}
        for v, rot in enumerate(self.rotations):
            if len(set(rot)) != len(rot):
                raise ValidationError(f"vertex {v}: repeated neighbor in rotation")
            for w in rot:
                if not (0 <= w < n) or w == v:
                    raise ValidationError(f"vertex {v}: invalid neighbor {w}")
                seen[(v, w)] = seen.get((v, w), 0) + 1
        for (v, w), count in seen.items():
            if count != 1:
                raise ValidationError(f"dart ({v},{w}) appears {count} times")
            if (w, v) not in seen:
                raise ValidationError(f"adjacency not symmetric: ({v},{w}) without ({w},{v})")

    def degree(self, v):
        return len(self.rotations[v])

    @property
    def edge_count(self):
        return sum(len(r) for r in self.rotations) // 2

    def successor(self, v, u):
        """Neighbor following u in the rotation at v."""
        rot = self.rotations[v]
        i = rot.index(u)
        return rot[(i + 1) % len(rot)]

    def is_complete(self):
        n = self.n
        return all(sorted(rot) == [w for w in range(n) if w != v] for v, rot in enumerate(self.rotations))

    def is_regular(self):
        degs = {len(r) for r in self.rotations}
        return len(degs) == 1

    def relabeled(self, perm):
        """Apply a vertex permutation (for invariance tests)."""
        inv = [0] * self.n
        for i, p in enumerate(perm):
            inv[p] = i
        new_rot = [None] * self.n
        for v, rot in enumerate(self.rotations):
            new_rot[perm[v]] = tuple(perm[w] for w in rot)
        return RotationSystem(rotations=tuple(new_rot))


def rotation_system(rotations):
    """Build a RotationSystem from any nested iterable of neighbor orders."""
    return RotationSystem(rotations=tuple(tuple(int(w) for w in rot) for rot in rotations))


def trace_faces(rs):
    """Face cycles of the embedding, each as a list of darts (u, v).

    Every dart lies in exactly one face and the face lengths sum to twice
    the edge count (the directed-edge double cover).
    """
    pending = {(v, w) for v, rot in enumerate(rs.rotations) for w in rot}
    faces = []
    while pending:
        start = min(pending)  # deterministic trace order
        face = []
        dart = start
        while True:
            face.append(dart)
            pending.discard(dart)
            u, v = dart
            dart = (v, rs.successor(v, u))
            if dart == start:
                break
            if dart not in pending:
                raise ValidationError("face tracing revisited a consumed dart: malformed rotation")
        faces.append(face)
    return faces


def _is_connected(rs):
    n = rs.n
    if n == 0:
        return True
    seen = [False] * n
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for w in rs.rotations[v]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return all(seen)


def genus_of(rs):
    """Genus of the closed oriented surface carrying the embedding."""
    if not _is_connected(rs):
        raise InvalidInputError("genus is defined for connected systems only")
    v = rs.n
    e = rs.edge_count
    f = len(trace_faces(rs))
    chi = v - e + f
    if chi % 2 != 0:
        raise ValidationError(f"odd Euler characteristic {chi}: inconsistent rotation system")
    return (2 - chi) // 2


def is_triangular(rs):
    """True iff every traced face is a 3-cycle."""
    return all(len(face) == 3 for face in trace_faces(rs))


def complete_graph_genus(n):
    """Minimal genus of an embedding of the complete graph on n vertices."""
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    return ((n - 3) * (n - 4)) // 12


def verify_ringel_youngs(rs, n):
    """True iff rs embeds K_n in the minimal genus ((n-3)(n-4)/12 rounded down)."""
    if rs.n != n or not rs.is_complete():
        raise ValidationError(f"rotation system is not a complete graph on {n} vertices")
    return genus_of(rs) == complete_graph_genus(n)


def face_report(rs):
    """JSON-ready embedding summary {V, E, F, genus, triangular}."""
    faces = trace_faces(rs)
    return {
        "V": rs.n,
        "E": rs.edge_count,
        "F": len(faces),
        "genus": genus_of(rs),
        "triangular": all(len(f) == 3 for f in faces),
    }


# ---------------------------------------------------------------------------
# Text format


def dumps(rs, comment=None):
    lines = []
    if comment:
        for line in comment.splitlines():
            lines.append(f"# {line}")
    for v, rot in enumerate(rs.rotations):
        lines.append(f"{v}: " + " ".join(str(w) for w in rot))
    return "\n".join(lines) + "\n"


def loads(text):
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValidationError(f"line {lineno}: expected 'v: a b c ...'")
        head, tail = line.split(":", 1)
        try:
            v = int(head)
            rot = tuple(int(tok) for tok in tail.split())
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from exc
        if v in rows:
            raise ValidationError(f"line {lineno}: duplicate vertex {v}")
        rows[v] = rot
    if not rows:
        raise ValidationError("empty rotation file")
    n = max(rows) + 1
    if sorted(rows) != list(range(n)):
        raise ValidationError("vertex lines must cover 0..n-1")
    return RotationSystem(rotations=tuple(rows[v] for v in range(n)))


def load_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads(fh.read())
    except FileNotFoundError as exc:
        raise BlueprintError(f"rotation-system file not found: {path}") from exc


def load_bundled(name):
    """Load a rotation system shipped as package data (e.g. 'k7')."""
    ref = resources.files("hypchroma.data").joinpath(f"{name}.rot")
    try:
        return loads(ref.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise BlueprintError(f"no bundled rotation system named {name!r}") from exc


# ---------------------------------------------------------------------------
# Budgeted search for triangular embeddings


def triangular_admissible(n):
    """Residues mod 12 for which K_n admits a triangular embedding."""
    return n % 12 in (0, 3, 4, 7)


def search_triangular_embedding(n, seed=0, budget=200_000):
    """Backtracking search for a triangular rotation system of K_n.

    Exploits the corner-forcing rule of triangular embeddings: fixing w as the
    successor of u at v forces v as the successor of w at u... i.e. successor
    choices propagate around each triangle, which prunes hard.  Deterministic
    per seed; returns None once the node budget runs out (a legitimate
    outcome, reported by callers).
    """
    if n != int(n) or n < 3:
        raise InvalidInputError("need an integer n >= 3")
    if not triangular_admissible(n):
        raise InvalidInputError(f"K_{n} admits no triangular embedding (n mod 12 = {n % 12})")
    rng = np.random.default_rng(seed)

    # succ[v][u] = successor of u in the rotation at v (-1 when unset)
    succ = np.full((n, n), -1, dtype=np.int64)
    pred = np.full((n, n), -1, dtype=np.int64)
    remaining = np.full(n, n - 1, dtype=np.int64)  # unset successor slots per vertex
    nodes = 0

    def set_succ(v, u, w):
        """succ[v][u] = w with consistency checks; returns the undo token or None."""
        if u == w or succ[v, u] != -1 or pred[v, w] != -1:
            return None if succ[v, u] != w else ()
        succ[v, u] = w
        pred[v, w] = u
        remaining[v] -= 1
        return (v, u, w)

    def undo(tokens):
        for v, u, w in tokens:
            succ[v, u] = -1
            pred[v, w] = -1
            remaining[v] += 1

    def force_triangle(v, u, w):
        """Apply succ[v][u] = w plus the two forced corners of its triangle."""
        tokens = []
        for (a, b, c) in ((v, u, w), (w, v, u), (u, w, v)):
            tok = set_succ(a, b, c)
            if tok is None:
                undo(tokens)
                return None
            if tok != ():
                tokens.append(tok)
        return tokens

    def rotation_closes(v):
        """If v's successors are complete, check they form one (n-1)-cycle."""
        if remaining[v] != 0:
            return True
        start = 0 if v != 0 else 1
        u = start
        count = 0
        while True:
            u = succ[v, u]
            count += 1
            if u == start:
                break
            if count > n:
                return False
        return count == n - 1

    def pick_slot():
        """First vertex with open slots (most constrained first), then an open u."""
        best_v = -1
        for v in range(n):
            if remaining[v] > 0 and (best_v < 0 or remaining[v] < remaining[best_v]):
                best_v = v
        if best_v < 0:
            return None
        for u in range(n):
            if u != best_v and succ[best_v, u] == -1:
                return best_v, u
        return None

    def solve():
        nonlocal nodes
        slot = pick_slot()
        if slot is None:
            return True
        nodes += 1
        if nodes > budget:
            return False
        v, u = slot
        cands = [w for w in range(n) if w != v and w != u and pred[v, w] == -1]
        order = rng.permutation(len(cands))
        for k in order:
            w = cands[k]
            tokens = force_triangle(v, u, w)
            if tokens is None:
                continue
            if rotation_closes(v) and rotation_closes(u) and rotation_closes(w) and solve():
                return True
            undo(tokens)
            if nodes > budget:
                return False
        return False

    # canonical first rotation to cut the symmetry group
    tokens0 = []
    for u in range(1, n - 1):
        tok = force_triangle(0, u, u + 1)
        if tok is None:
            undo(tokens0)
            return None
        tokens0.extend(tok)
    tok = force_triangle(0, n - 1, 1)
    if tok is None:
        undo(tokens0)
        return None

    if not solve():
        return None

    rotations = []
    for v in range(n):
        start = 0 if v != 0 else 1
        rot = [start]
        u = succ[v, start]
        while u != start:
            rot.append(int(u))
            u = succ[v, u]
        rotations.append(tuple(rot))
    rs = RotationSystem(rotations=tuple(rotations))
    if not (is_triangular(rs) and verify_ringel_youngs(rs, n)):
        raise ValidationError("search produced a system that fails verification")
    return rs
