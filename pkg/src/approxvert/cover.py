"""Covering predicates, the basic cut and h-correctness.

Everything here reasons with exact incidence sets and therefore runs under
the rational backend.  It is diagnostic machinery, not the production path.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .common import MINUS, PLUS, ZERO, place_on_segment
from .hrep import HPolytope, index_set
from .numerics import RATIONAL, dot, to_rational
from .verify import brute_force_vertices, point_in_vpolytope


def _q(P: HPolytope) -> HPolytope:
    return P.with_backend(RATIONAL)


def _pt(x) -> tuple:
    return tuple(to_rational(c) for c in x)


@dataclass(frozen=True)
class CutRegions:
    """The regions ``H_-``, ``H_0`` and ``H_+`` of a new row ``h`` at tolerance ``eps``."""

    h: tuple
    eps: object

    def __post_init__(self):
        object.__setattr__(self, "h", _pt(self.h))
        object.__setattr__(self, "eps", to_rational(self.eps))

    def value(self, x):
        return dot(self.h, _pt(x))

    def region(self, x) -> str:
        t = self.value(x)
        if t < 1:
            return MINUS
        if t > 1 + self.eps:
            return PLUS
        return ZERO

    def in_le(self, x) -> bool:
        return self.value(x) <= 1


@dataclass
class LabeledPointSet:
    """Points with identities; ``tags`` holds region labels after classification."""

    points: list
    labels: list = field(default_factory=list)
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = [_pt(p) for p in self.points]
        if not self.labels:
            self.labels = list(range(1, len(self.points) + 1))
        if len(self.labels) != len(self.points):
            raise ValueError("one label per point")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(zip(self.labels, self.points))

    def classify(self, cut: CutRegions) -> "LabeledPointSet":
        self.tags = {lab: cut.region(p) for lab, p in self}
        return self

    def as_set(self) -> set:
        return set(self.points)


def _as_labeled(V) -> LabeledPointSet:
    return V if isinstance(V, LabeledPointSet) else LabeledPointSet(list(V))


def covers(P: HPolytope, u, v) -> bool:
    """``J_=(u) <= J_>=(v)``: replacing vertex ``u`` by ``v`` keeps a superset of ``P``."""
    P = _q(P)
    return index_set(P, _pt(u), "=") <= index_set(P, _pt(v), ">=")


def covers_by_definition(P: HPolytope, u, v, vertices=None) -> bool:
    """LP form: ``u`` lies in the hull of the other vertices of ``P`` together with ``v``."""
    P = _q(P)
    u, v = _pt(u), _pt(v)
    verts = brute_force_vertices(P) if vertices is None else [_pt(w) for w in vertices]
    pts = [w for w in verts if w != u] + [v]
    return u == v or point_in_vpolytope(u, pts)


def uncovered_vertices(P: HPolytope, V, vertices=None) -> list:
    P = _q(P)
    pts = list(_as_labeled(V).points)
    verts = brute_force_vertices(P) if vertices is None else [_pt(w) for w in vertices]
    return [u for u in verts if not any(covers(P, u, v) for v in pts)]


def is_strong_approx_vrep(P: HPolytope, V, eps, vertices=None) -> bool:
    """``V <= (1+eps) P`` and every vertex of ``P`` is covered by a single point of ``V``."""
    P = _q(P)
    lim = 1 + to_rational(eps)
    pts = _as_labeled(V).points
    if any(dot(r, v) > lim for v in pts for r in P.A):
        return False
    return not uncovered_vertices(P, pts, vertices)


def basic_cut(P: HPolytope, eps, cut: CutRegions, V, level=None) -> LabeledPointSet:
    """One cut of an approximate vertex set by the row ``cut.h``.

    Pairs from ``V_- x V_+`` whose ``J_>=`` sets share at least ``d - 1``
    rows receive a new point on their segment with ``h^T v = level``
    (default ``1 + eps/2``).  ``V_+`` is dropped.  New points are labelled
    ``(a, b)`` with the labels of their endpoints.
    """
    P = _q(P)
    e = to_rational(eps)
    level = 1 + e / 2 if level is None else to_rational(level)
    V = _as_labeled(V).classify(cut)
    minus = [(lab, p) for lab, p in V if V.tags[lab] == MINUS]
    plus = [(lab, p) for lab, p in V if V.tags[lab] == PLUS]
    J = {lab: index_set(P, p, ">=") for lab, p in V}
    out_pts, out_labels = [], []
    for lab, p in V:
        if V.tags[lab] != PLUS:
            out_pts.append(p)
            out_labels.append(lab)
    for la, a in minus:
        for lb, b in plus:
            if len(J[la] & J[lb]) >= P.d - 1:
                out_pts.append(place_on_segment(a, b, cut.value(a), cut.value(b), level))
                out_labels.append((la, lb))
    return LabeledPointSet(out_pts, out_labels)


@dataclass
class HCorrectness:
    """Per-vertex outcome; ``violated`` collects the conditions that no cover satisfies."""

    ok: bool
    violated: set
    failures: list


def h_correctness(P: HPolytope, V, cut: CutRegions, eps=None, vertices=None) -> HCorrectness:
    """Check that every vertex has a cover obeying the cut compatibility conditions.

    ``A1``: a vertex in ``H_+`` or ``H_0`` needs a cover in ``H_+`` or ``H_0``.
    ``A2``: a vertex in ``H_-`` needs a cover in ``H_-`` or ``H_0``.
    A vertex with no cover at all is reported as ``"cover"``.
    """
    P = _q(P)
    pts = _as_labeled(V).points
    verts = brute_force_vertices(P) if vertices is None else [_pt(w) for w in vertices]
    violated, failures = set(), []
    for u in verts:
        cov = [v for v in pts if covers(P, u, v)]
        if not cov:
            violated.add("cover")
            failures.append((u, "cover"))
            continue
        ru = cut.region(u)
        allowed = (PLUS, ZERO) if ru != MINUS else (MINUS, ZERO)
        if not any(cut.region(v) in allowed for v in cov):
            name = "A1" if ru != MINUS else "A2"
            violated.add(name)
            failures.append((u, name))
    return HCorrectness(not violated, violated, failures)


def is_h_correct(P: HPolytope, V, cut: CutRegions, eps=None, vertices=None) -> bool:
    return h_correctness(P, V, cut, eps, vertices).ok


def cut_polytope(P: HPolytope, cut: CutRegions) -> HPolytope:
    """``P`` with ``h`` appended as its last row."""
    P = _q(P)
    return HPolytope(P.A + (cut.h,), RATIONAL)
