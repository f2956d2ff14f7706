"""Approximate double description method (abstract core and geometric run)."""
from __future__ import annotations

import warnings

import numpy as np

from .common import (
    MINUS,
    PLUS,
    ZERO,
    ApproxVRep,
    Bands,
    IdRegistry,
    check_new_vertex,
    place_on_segment,
    require_minus,
    simplex_vertices,
)
from .errors import TooLarge
from .hrep import HPolytope
from .numerics import dot

MAX_VERTICES = 1_000_000
MAX_EDGES = 2_000_000
_ROW_CHUNK = 2048


class IncidenceGraph:
    """Vertices with incidence sets ``I(v)``; ``uw`` is an edge iff ``|I(u) & I(w)| >= d - 1``.

    The full edge set is only built on request.  An iteration needs just the
    edges between the minus and plus classes, which are found directly.
    """

    def __init__(self, d: int, registry: IdRegistry | None = None, max_vertices: int = MAX_VERTICES):
        self.d = d
        self.registry = registry or IdRegistry(d)
        self.max_vertices = max_vertices
        self.I: dict = {}
        self.coords: dict = {}
        self.created: dict = {}
        self._edges = None
        for j in self.registry.initial():
            self.I[j] = frozenset(k for k in range(1, d + 2) if k != j)
            self.created[j] = 0

    @property
    def vertices(self):
        return sorted(self.I)

    @property
    def edges(self) -> set:
        if self._edges is None:
            ids = self.vertices
            self._edges = {(u, w) for u, w in self.adjacent_pairs(ids, ids) if u < w}
        return self._edges

    def rebuild_edges(self):
        self._edges = None
        return self.edges

    def has_edge(self, u, w) -> bool:
        return u != w and len(self.I[u] & self.I[w]) >= self.d - 1

    def adjacent_pairs(self, left, right) -> list:
        """Pairs ``(u, w)`` from ``left x right`` sharing at least ``d - 1`` indices."""
        if not left or not right:
            return []
        universe = sorted(set().union(*(self.I[v] for v in left), *(self.I[v] for v in right)))
        col = {k: n for n, k in enumerate(universe)}

        def matrix(ids):
            M = np.zeros((len(ids), len(universe)), dtype=np.float32)
            for r, v in enumerate(ids):
                M[r, [col[k] for k in self.I[v]]] = 1
            return M

        L, R = matrix(left), matrix(right)
        out = []
        for lo in range(0, len(left), _ROW_CHUNK):
            rs, cs = np.nonzero(L[lo:lo + _ROW_CHUNK] @ R.T >= self.d - 1)
            out.extend((left[lo + a], right[b]) for a, b in zip(rs.tolist(), cs.tolist()))
            if len(out) > MAX_EDGES:
                raise TooLarge(f"more than {MAX_EDGES} adjacent pairs among {len(self.I)} vertices")
        return out

    def step(self, i: int, classes: dict, place=None):
        """One outer iteration with a complete partition ``classes`` of the vertices.

        ``place(u, w, vid)`` is called for every new vertex so a geometric run
        can fill in coordinates.  Returns the list of new vertex ids.
        """
        require_minus(classes, i)
        minus = sorted(v for v, c in classes.items() if c == MINUS)
        plus = sorted(v for v, c in classes.items() if c == PLUS)
        pairs = sorted(self.adjacent_pairs(minus, plus), key=lambda p: (min(p), max(p)))
        if len(self.I) - len(plus) + len(pairs) > self.max_vertices:
            raise TooLarge(f"more than {self.max_vertices} vertices at iteration {i}")
        new = []
        for lo, hi in pairs:
            vid = self.registry.child(lo, hi, i)
            self.I[vid] = self.I[lo] & self.I[hi]
            self.created[vid] = i
            if place is not None:
                place(lo, hi, vid)
            new.append(vid)
        for v, c in classes.items():
            if c == ZERO:
                self.I[v] = self.I[v] | {i}
        for v in new:
            self.I[v] = self.I[v] | {i}
        for v in plus:
            del self.I[v]
            self.coords.pop(v, None)
            self.created.pop(v, None)
        self._edges = None
        return new


class CoreAddm:
    """Stepwise abstract run driven by a partition rule ``rule(i, vid, anchor)``."""

    def __init__(self, d: int, registry: IdRegistry | None = None):
        self.g = IncidenceGraph(d, registry)

    def iterate(self, i: int, rule, anchor: int):
        classes = {v: rule(i, v, anchor) for v in self.g.vertices}
        return self.g.step(i, classes)


def core_addm(d: int, m: int, rule, registry: IdRegistry | None = None) -> IncidenceGraph:
    """Abstract method on ``K_{d+1}`` for rows ``d+2..m``; the anchor is the smallest id."""
    run = CoreAddm(d, registry)
    for i in range(d + 2, m + 1):
        run.iterate(i, rule, min(run.g.vertices))
    return run.g


def addm_run(P: HPolytope, eps, registry: IdRegistry | None = None, experimental_highdim=False,
             observer=None, shadow=None, max_vertices: int = MAX_VERTICES):
    """Approximate double description method with the quarter-band partition rule.

    Returns ``(graph, coords, ApproxVRep)``.  ``observer(i, graph, classes)``
    is called after every outer iteration when given.

    Raises:
        TooLarge: the intermediate vertex count exceeds ``max_vertices``.
    """
    backend = P.backend
    if backend.scalar(eps) <= 0:
        raise ValueError("eps must be positive")
    d = P.d
    if d < 2:
        raise ValueError("dimension must be at least 2")
    experimental = d >= 4
    if experimental:
        if not experimental_highdim:
            raise ValueError("d >= 4 requires the experimental high-dimension flag")
        warnings.warn("correctness for d >= 4 is an open question; output is experimental",
                      stacklevel=2)
    bands = Bands.for_eps(eps, backend)
    g = IncidenceGraph(d, registry, max_vertices)
    init = simplex_vertices(P, eps)
    for j, u in zip(g.vertices, init):
        g.coords[j] = u
    if shadow is not None:
        shadow.init(g.vertices, init, simplex_vertices(shadow.P, shadow.eps))
    values: dict = {}

    def place(lo, hi, vid):
        c = place_on_segment(g.coords[lo], g.coords[hi], values[lo], values[hi], bands.mid)
        g.coords[vid] = c
        check_new_vertex(dot(row, c), bands, backend.exact)
        if shadow is not None:
            shadow.place(lo, hi, vid, c)

    for i in range(d + 2, P.m + 1):
        row = P.row(i)
        values = {v: dot(row, g.coords[v]) for v in g.vertices}
        classes = {v: bands.classify(x) for v, x in values.items()}
        if shadow is not None:
            shadow.classify(i, classes)
        g.step(i, classes, place)
        if observer is not None:
            observer(i, g, classes)
    ids = g.vertices
    rep = ApproxVRep([g.coords[v] for v in ids], ids, eps,
                     {v: g.created[v] for v in ids}, experimental)
    return g, dict(g.coords), rep
