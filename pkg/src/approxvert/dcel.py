"""Half-edge representation of plane graphs embedded in the sphere.

Faces carry a ``valid`` flag and a row label ``kappa``.  A face may have
several boundary cycles (one per bounding walk), so disconnected graphs are
represented without any special casing.  Edge labels for the planar case are
stored per undirected edge, keyed by the smaller of its two half-edge ids.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotOnSameWalk, StructureError


@dataclass
class Face:
    valid: bool
    kappa: int | None = None


class PlaneGraph:
    def __init__(self):
        self.origin: dict = {}
        self.twin: dict = {}
        self.next: dict = {}
        self.prev: dict = {}
        self.face: dict = {}
        self.out: dict = {}
        self.faces: dict = {}
        self.face_hedges: dict = {}
        self.edge_kappa: dict = {}
        self.coords: dict = {}
        self.audit_hook = None
        self._nh = 0
        self._nf = 0

    # ------------------------------------------------------------------ basics

    @property
    def vertices(self):
        return sorted(self.out)

    def num_edges(self) -> int:
        return len(self.origin) // 2

    def num_faces(self) -> int:
        return len(self.faces)

    def dest(self, h):
        return self.origin[self.twin[h]]

    def edge_key(self, h):
        return min(h, self.twin[h])

    def edges(self):
        """Undirected edges as sorted vertex pairs (with multiplicity)."""
        return sorted(
            tuple(sorted((self.origin[h], self.dest(h)))) for h in self.origin if h < self.twin[h]
        )

    def edge_set(self) -> set:
        return set(self.edges())

    def neighbours(self, v):
        return {self.dest(h) for h in self.out[v]}

    def find_half_edge(self, u, w):
        for h in self.out[u]:
            if self.dest(h) == w:
                return h
        return None

    def add_vertex(self, v, coords=None):
        if v in self.out:
            raise StructureError(f"vertex {v} already present")
        self.out[v] = set()
        if coords is not None:
            self.coords[v] = coords

    def _new_face(self, valid, kappa=None):
        f = self._nf
        self._nf += 1
        self.faces[f] = Face(valid, kappa)
        self.face_hedges[f] = set()
        return f

    def _new_pair(self, u, w):
        h, t = self._nh, self._nh + 1
        self._nh += 2
        self.origin[h], self.origin[t] = u, w
        self.twin[h], self.twin[t] = t, h
        self.out[u].add(h)
        self.out[w].add(t)
        return h, t

    def _set_face(self, h, f):
        old = self.face.get(h)
        if old is not None:
            self.face_hedges[old].discard(h)
        self.face[h] = f
        self.face_hedges[f].add(h)

    def _link(self, a, b):
        self.next[a] = b
        self.prev[b] = a

    def cycle(self, h):
        out = [h]
        x = self.next[h]
        while x != h:
            out.append(x)
            x = self.next[x]
            if len(out) > len(self.origin):  # pragma: no cover - corrupted links
                raise StructureError("unterminated half-edge cycle")
        return out

    def _notify(self, op):
        if self.audit_hook is not None:
            self.audit_hook(self, op)

    # ------------------------------------------------------------ constructors

    @classmethod
    def from_cycles(cls, vertices, faces, valid=None, kappa=None):
        """Build from oriented face cycles (lists of vertex ids).

        Every undirected edge must appear once in each direction.
        """
        g = cls()
        for v in vertices:
            g.add_vertex(v)
        half = {}
        for fi, cyc in enumerate(faces):
            f = g._new_face(True if valid is None else valid[fi],
                            None if kappa is None else kappa[fi])
            hs = []
            for k, u in enumerate(cyc):
                w = cyc[(k + 1) % len(cyc)]
                if (u, w) in half:
                    raise StructureError(f"directed edge {u}->{w} used twice")
                if (w, u) in half:
                    h = g.twin[half[(w, u)]]
                else:
                    h, _ = g._new_pair(u, w)
                half[(u, w)] = h
                g._set_face(h, f)
                hs.append(h)
            for k, h in enumerate(hs):
                g._link(h, hs[(k + 1) % len(hs)])
        for (u, w), h in half.items():
            if (w, u) not in half:
                raise StructureError(f"edge {u}-{w} bounds only one oriented cycle")
        return g

    # ---------------------------------------------------------------- mutation

    def split_edge(self, h, v, coords=None):
        """Subdivide the edge of ``h`` (``u -> w``) by the new vertex ``v``.

        Afterwards ``h`` runs ``u -> v``; the returned half-edge runs ``v -> w``.
        """
        t = self.twin[h]
        u, w = self.origin[h], self.origin[t]
        nh, pt = self.next[h], self.prev[t]
        self.add_vertex(v, coords)
        h2, t2 = self._new_pair(v, w)
        self.out[w].discard(t)
        self.out[v].add(t)
        self.origin[t] = v
        self._set_face(h2, self.face[h])
        self._set_face(t2, self.face[t])
        if nh == t:
            self._link(h, h2)
            self._link(h2, t2)
            self._link(t2, t)
        else:
            self._link(h2, nh)
            self._link(h, h2)
            self._link(pt, t2)
            self._link(t2, t)
        k = self.edge_kappa.get(self.edge_key(h))
        if k is not None:
            self.edge_kappa[self.edge_key(h2)] = k
        self._notify("split_edge")
        return h2

    def insert_chord(self, ha, hb, kappa=None):
        """Connect ``origin(ha)`` and ``origin(hb)`` inside their common face cycle.

        The new face is bounded by the chord and the walk segment from
        ``origin(ha)`` to ``origin(hb)``; it inherits validity and label.
        Returns the half-edge running from ``origin(ha)`` to ``origin(hb)``.
        """
        u0, w0 = self.origin[ha], self.origin[hb]
        if u0 == w0:
            raise StructureError("chord would be a loop")
        if hb not in self.cycle(ha):
            raise NotOnSameWalk("chord endpoints are not on one bounding walk")
        f = self.face[ha]
        pa, pb = self.prev[ha], self.prev[hb]
        a, b = self._new_pair(u0, w0)
        self._link(pa, a)
        self._link(a, hb)
        self._link(pb, b)
        self._link(b, ha)
        self._set_face(a, f)
        nf = self._new_face(self.faces[f].valid, self.faces[f].kappa)
        for x in self.cycle(b):
            self._set_face(x, nf)
        if kappa is not None:
            self.edge_kappa[self.edge_key(a)] = kappa
        self._notify("insert_chord")
        return a

    def delete_edge(self, h, merge_kappa=None):
        """Remove the edge of ``h``; faces on both sides merge when distinct.

        ``merge_kappa(face_keep, face_gone, vertices)`` returns the label of
        the resulting face given the vertices of both faces before deletion;
        by default the surviving face keeps its own.
        """
        t = self.twin[h]
        u, w = self.origin[h], self.origin[t]
        f1, f2 = self.face[h], self.face[t]
        walk_vertices = None
        if merge_kappa is not None:
            walk_vertices = self.face_vertices(f1) | self.face_vertices(f2)
        a, b = self.prev[h], self.next[t]
        c, e = self.prev[t], self.next[h]
        if e == t and b == h:
            pass
        elif b == h:
            self._link(c, e)
        elif e == t:
            self._link(a, b)
        else:
            self._link(a, b)
            self._link(c, e)
        for x in (h, t):
            self.face_hedges[self.face[x]].discard(x)
            del self.face[x], self.origin[x], self.twin[x], self.next[x], self.prev[x]
        self.out[u].discard(h)
        self.out[w].discard(t)
        self.edge_kappa.pop(min(h, t), None)
        if f1 != f2:
            keep, gone = (f1, f2) if f1 < f2 else (f2, f1)
            fk, fg = self.faces[keep], self.faces[gone]
            kappa = fk.kappa if merge_kappa is None else merge_kappa(fk, fg, walk_vertices)
            for x in list(self.face_hedges[gone]):
                self._set_face(x, keep)
            fk.valid = fk.valid and fg.valid
            fk.kappa = kappa
            del self.faces[gone], self.face_hedges[gone]
        elif merge_kappa is not None:
            fk = self.faces[f1]
            fk.kappa = merge_kappa(fk, fk, walk_vertices)
        self._notify("delete_edge")

    def delete_vertex(self, v):
        for h in sorted(self.out[v]):
            if h in self.origin:
                self.delete_edge(h)
        del self.out[v]
        self.coords.pop(v, None)

    def dedupe_parallel_edges(self):
        """Delete all but the lowest-id copy of every multiply present edge."""
        seen = {}
        extra = []
        for h in sorted(self.origin):
            if h > self.twin[h]:
                continue
            key = tuple(sorted((self.origin[h], self.dest(h))))
            if key in seen:
                extra.append(h)
            else:
                seen[key] = h
        for h in extra:
            self.delete_edge(h)
        return len(extra)

    # ------------------------------------------------------------------ walks

    def bounding_walks(self, f):
        """Vertex sequences of the boundary cycles of ``f`` (closing vertex omitted)."""
        return [[self.origin[x] for x in cyc] for cyc in self.face_cycles(f)]

    def face_cycles(self, f):
        """Half-edge cycles of ``f``, each starting at its smallest half-edge id."""
        todo = set(self.face_hedges[f])
        out = []
        for h in sorted(todo):
            if h in todo:
                cyc = self.cycle(h)
                todo.difference_update(cyc)
                out.append(cyc)
        return out

    def face_vertices(self, f) -> set:
        return {self.origin[h] for h in self.face_hedges[f]}

    def components(self) -> int:
        parent = {v: v for v in self.out}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h in self.origin:
            a, b = find(self.origin[h]), find(self.dest(h))
            if a != b:
                parent[a] = b
        return len({find(v) for v in self.out})

    # ------------------------------------------------------------------ audit

    def audit(self, expected_invalid: int | None = None):
        """Check link consistency, walk conditions, Euler's formula and the validity census.

        Raises:
            StructureError: on the first violation found.
        """
        for h in self.origin:
            t = self.twin[h]
            if self.twin.get(t) != h or t == h:
                raise StructureError(f"twin involution broken at {h}")
            if self.prev[self.next[h]] != h or self.next[self.prev[h]] != h:
                raise StructureError(f"next/prev not inverse at {h}")
            if self.origin[self.next[h]] != self.origin[t]:
                raise StructureError(f"next of {h} does not start at its head")
            if self.origin[h] == self.origin[t]:
                raise StructureError(f"loop at half-edge {h}")
            if self.face[self.next[h]] != self.face[h]:
                raise StructureError(f"face changes along cycle at {h}")
            if h not in self.out[self.origin[h]]:
                raise StructureError(f"half-edge {h} missing from its origin's list")
            if self.face[h] not in self.faces or h not in self.face_hedges[self.face[h]]:
                raise StructureError(f"half-edge {h} has a stale face")
        for v, hs in self.out.items():
            for h in hs:
                if self.origin.get(h) != v:
                    raise StructureError(f"vertex {v} lists foreign half-edge {h}")
        for f, hs in self.face_hedges.items():
            for h in hs:
                if self.face.get(h) != f:
                    raise StructureError(f"face {f} lists foreign half-edge {h}")
            self._check_walks(f)
        V, E, F = len(self.out), self.num_edges(), self.num_faces()
        C = self.components()
        if V - E + F != 1 + C:
            raise StructureError(f"Euler formula fails: V={V} E={E} F={F} C={C}")
        if expected_invalid is not None:
            invalid = sum(1 for fc in self.faces.values() if not fc.valid)
            if invalid != expected_invalid:
                raise StructureError(f"{invalid} invalid faces, expected {expected_invalid}")

    def _check_walks(self, f):
        for cyc in self.face_cycles(f):
            count = {}
            for h in cyc:
                k = self.edge_key(h)
                count[k] = count.get(k, 0) + 1
            for k, n in count.items():
                if n > 2:
                    raise StructureError(f"edge {k} occurs {n} times in a walk")
                other = self.face[self.twin[k]] if self.face[k] == f else self.face[k]
                if n == 1 and other == f:
                    raise StructureError(f"edge {k} occurs once but bounds face {f} twice")
                if n == 2 and other != f:
                    raise StructureError(f"edge {k} occurs twice but bounds another face")

    # ------------------------------------------------------------------ dump

    def dump(self) -> str:
        """Line-oriented debug dump: vertices, half-edges and faces."""
        lines = []
        for v in self.vertices:
            c = self.coords.get(v)
            cs = " ".join(str(x) for x in c) if c is not None else "-"
            lines.append(f"v {v} {cs}")
        for h in sorted(self.origin):
            lines.append(f"h {h} {self.origin[h]} {self.twin[h]} {self.next[h]} {self.prev[h]} {self.face[h]}")
        for f in sorted(self.faces):
            fc = self.faces[f]
            k = "-" if fc.kappa is None else str(fc.kappa)
            walks = " | ".join(" ".join(str(v) for v in w) for w in self.bounding_walks(f))
            lines.append(f"f {f} {int(fc.valid)} {k} {walks}".rstrip())
        return "\n".join(lines) + "\n"


def init_complete(d: int, coords=None) -> PlaneGraph:
    """``K_3`` with one valid and one invalid face, or ``K_4`` with four valid faces.

    Vertex ids are ``1..d+1``.  Edge labels (planar case) and face labels
    (spatial case) name the prefix row shared by the incident initial vertices.
    """
    if d == 2:
        g = PlaneGraph.from_cycles([1, 2, 3], [[1, 2, 3], [1, 3, 2]], valid=[True, False],
                                   kappa=[None, None])
        for h in g.origin:
            if h < g.twin[h]:
                pair = {g.origin[h], g.dest(h)}
                g.edge_kappa[h] = ({1, 2, 3} - pair).pop()
    elif d == 3:
        g = PlaneGraph.from_cycles(
            [1, 2, 3, 4],
            [[2, 3, 4], [1, 4, 3], [1, 2, 4], [1, 3, 2]],
            valid=[True] * 4,
            kappa=[1, 2, 3, 4],
        )
    else:
        raise ValueError("plane graph initialization needs d in {2, 3}")
    if coords is not None:
        for v, c in zip(g.vertices, coords):
            g.coords[v] = c
    return g
