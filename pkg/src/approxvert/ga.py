"""Graph algorithm for approximate vertex enumeration in dimensions 2 and 3."""
from __future__ import annotations

from collections import deque

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
from .dcel import PlaneGraph, init_complete
from .hrep import HPolytope
from .numerics import dot


def admissible(intermediate_classes) -> bool:
    """Walk segment test: all intermediates plus, or none of them minus."""
    cs = list(intermediate_classes)
    return all(c == PLUS for c in cs) or all(c != MINUS for c in cs)


def walk_admissible(g: PlaneGraph, f, u0, w0, classes):
    """Search the bounding walks of face ``f`` for an admissible ``u0 .. w0`` segment.

    Every occurrence of ``u0`` is tried, scanning forward to every occurrence
    of ``w0``; the reverse direction is the forward scan from ``w0``.
    Returns ``(True, half_edges)`` with the segment's half-edges or ``(False, None)``.
    """
    for cyc in g.face_cycles(f):
        vs = [g.origin[h] for h in cyc]
        n = len(vs)
        for start, end in ((u0, w0), (w0, u0)):
            for i in range(n):
                if vs[i] != start:
                    continue
                for k in range(1, n):
                    j = (i + k) % n
                    if vs[j] == end:
                        mids = [classes[vs[(i + s) % n]] for s in range(1, k)]
                        if admissible(mids):
                            seg = [cyc[(i + s) % n] for s in range(k)]
                            if start != u0:
                                seg = [g.twin[h] for h in reversed(seg)]
                            return True, seg
    return False, None


class GaState:
    """Plane graph plus coordinates and per-iteration classes of one run."""

    def __init__(self, d: int, registry: IdRegistry | None = None, coords=None, audit=False):
        if d not in (2, 3):
            raise ValueError("the graph algorithm needs d in {2, 3}")
        self.d = d
        self.registry = registry or IdRegistry(d)
        self.g = init_complete(d, coords)
        self.created = {v: 0 for v in self.g.vertices}
        self.classes: dict = {}
        self.i = d + 1
        self.audit = audit
        if audit:
            self.g.audit_hook = lambda g, op: g.audit(None)
            self.census()

    @property
    def coords(self):
        return self.g.coords

    def census(self):
        self.g.audit(1 if self.d == 2 else 0)

    # one outer iteration -----------------------------------------------------

    def iterate(self, i: int, classes: dict, place=None):
        g, d = self.g, self.d
        self.i = i
        require_minus(classes, i)
        classes = dict(classes)
        self.classes = classes
        # first inner loop: split crossing edges
        crossing = []
        for h in sorted(g.origin):
            if h > g.twin[h]:
                continue
            u, w = g.origin[h], g.dest(h)
            if {classes[u], classes[w]} == {MINUS, PLUS}:
                crossing.append((min(u, w), max(u, w), h))
        crossing.sort()
        for _, _, h in crossing:
            u, w = g.origin[h], g.dest(h)
            lo, hi = (u, w) if classes[u] == MINUS else (w, u)
            vid = self.registry.child(lo, hi, i)
            c = place(lo, hi, vid) if place is not None else None
            g.split_edge(h, vid, c)
            classes[vid] = ZERO
            self.created[vid] = i
        # second inner loop: chords, driven by a queue of 0/+ half-edges
        self._insert_chords(i, classes)
        # purge the plus class
        merge = self._merge_kappa(i, classes) if d == 3 else None
        for v in sorted(v for v, c in classes.items() if c == PLUS):
            for h in sorted(g.out[v]):
                if h in g.origin:
                    g.delete_edge(h, merge)
            del g.out[v]
            g.coords.pop(v, None)
            self.created.pop(v, None)
        g.dedupe_parallel_edges()
        if self.audit:
            self.census()

    def _candidates(self, classes):
        g = self.g
        return {
            v for v, c in classes.items()
            if c == ZERO and v in g.out and any(classes[g.dest(h)] == PLUS for h in g.out[v])
        }

    def _insert_chords(self, i, classes):
        g = self.g
        cand = self._candidates(classes)
        queue = deque()
        member = set()
        for h in sorted(g.origin):
            a, b = classes[g.origin[h]], classes[g.dest(h)]
            if {a, b} == {ZERO, PLUS}:
                queue.append(h)
                member.add(h)
        while queue:
            h = queue.popleft()
            if h not in member:
                continue
            cyc = g.cycle(h)
            member.difference_update(cyc)
            if not g.faces[g.face[h]].valid:
                continue
            stack = [h]
            while stack:
                start = stack.pop()
                found = self._find_pair(g.cycle(start), classes, cand)
                if found is None:
                    continue
                ha, hb = found
                a = g.insert_chord(ha, hb, kappa=i if self.d == 2 else None)
                member.difference_update(g.cycle(a))
                member.difference_update(g.cycle(g.twin[a]))
                stack.append(g.twin[a])
                stack.append(a)

    def _find_pair(self, cyc, classes, cand):
        """First admissible non-adjacent candidate pair along one face cycle."""
        g = self.g
        vs = [g.origin[h] for h in cyc]
        n = len(vs)
        for s in range(n):
            u = vs[s]
            if u not in cand:
                continue
            nbrs = g.neighbours(u)
            mids = []
            for k in range(1, n):
                j = (s + k) % n
                w = vs[j]
                if w in cand and w != u and w not in nbrs and admissible(mids):
                    return cyc[s], cyc[j]
                mids.append(classes[w])
                if classes[w] == MINUS:
                    break
        return None

    @staticmethod
    def _merge_kappa(i, classes):
        # a face made only of 0/+ vertices lies in the half-space of row i
        def merge(fk, fg, vertices):
            if all(classes.get(v) in (ZERO, PLUS) for v in vertices):
                return i
            return fk.kappa

        return merge


class CoreGa:
    """Stepwise abstract run driven by a partition rule ``rule(i, vid, anchor)``."""

    def __init__(self, d: int, registry: IdRegistry | None = None, audit=False):
        self.state = GaState(d, registry, audit=audit)

    @property
    def g(self):
        return self.state.g

    def iterate(self, i, rule, anchor):
        classes = {v: rule(i, v, anchor) for v in self.g.vertices}
        self.state.iterate(i, classes)


def core_ga(d: int, m: int, rule, registry: IdRegistry | None = None, audit=False) -> PlaneGraph:
    """Abstract graph algorithm for rows ``d+2..m``; the anchor is the smallest id."""
    run = CoreGa(d, registry, audit)
    for i in range(d + 2, m + 1):
        run.iterate(i, rule, min(run.g.vertices))
    return run.g


def ga_run(P: HPolytope, eps, registry: IdRegistry | None = None, audit=False, observer=None,
           shadow=None):
    """Graph algorithm with the quarter-band partition rule.

    Returns ``(graph, coords, ApproxVRep)``.  ``observer(i, state)`` is called
    after initialization (``i = d+1``) and after every outer iteration.
    ``shadow`` (see :class:`approxvert.verify.Shadow`) follows the run with
    exact coordinates.
    """
    backend = P.backend
    if backend.scalar(eps) <= 0:
        raise ValueError("eps must be positive")
    d = P.d
    if d not in (2, 3):
        raise ValueError("the graph algorithm needs d in {2, 3}")
    bands = Bands.for_eps(eps, backend)
    init = simplex_vertices(P, eps)
    st = GaState(d, registry, init, audit)
    if shadow is not None:
        shadow.init(st.g.vertices, init, simplex_vertices(shadow.P, shadow.eps))
    if observer is not None:
        observer(d + 1, st)
    values: dict = {}
    for i in range(d + 2, P.m + 1):
        row = P.row(i)
        values = {v: dot(row, st.coords[v]) for v in st.g.vertices}
        classes = {v: bands.classify(x) for v, x in values.items()}

        def place(lo, hi, vid, row=row):
            c = place_on_segment(st.coords[lo], st.coords[hi], values[lo], values[hi], bands.mid)
            check_new_vertex(dot(row, c), bands, backend.exact)
            if shadow is not None:
                shadow.place(lo, hi, vid, c)
            return c

        if shadow is not None:
            shadow.classify(i, classes)
        st.iterate(i, classes, place)
        if observer is not None:
            observer(i, st)
    ids = st.g.vertices
    rep = ApproxVRep([st.coords[v] for v in ids], ids, eps, {v: st.created[v] for v in ids})
    return st.g, dict(st.coords), rep
