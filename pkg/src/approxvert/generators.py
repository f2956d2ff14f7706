"""Test and experiment instances."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import DegenerateGenerators, TooLarge
from .hrep import HPolytope, is_bounded
from .numerics import RATIONAL, dot, to_rational
from .verify import brute_force_vertices


@dataclass
class Fixture:
    name: str
    P: HPolytope
    vertices: list | None = None
    note: str = ""
    extra: dict = field(default_factory=dict)


def _q(x):
    return to_rational(x)


# ---------------------------------------------------------------------------
# standard shapes


def simplex(d: int) -> Fixture:
    rows = [[-1 if j == i else 0 for j in range(d)] for i in range(d)] + [[1] * d]
    P = HPolytope.from_rows(rows, RATIONAL, simplex_prefix=True)
    verts = [tuple(_q(-1) for _ in range(d))]
    for j in range(d):
        verts.append(tuple(_q(d if k == j else -1) for k in range(d)))
    return Fixture(f"simplex{d}", P, sorted(verts), "x_i >= -1, sum x_i <= 1")


def cube(d: int) -> Fixture:
    rows = []
    for i in range(d):
        for s in (1, -1):
            rows.append([s if j == i else 0 for j in range(d)])
    P = HPolytope.from_rows(rows, RATIONAL)
    verts = sorted(tuple(_q(x) for x in v) for v in itertools.product((-1, 1), repeat=d))
    return Fixture(f"cube{d}", P, verts, "[-1, 1]^d")


def crosspolytope(d: int) -> Fixture:
    rows = [list(s) for s in itertools.product((1, -1), repeat=d)]
    P = HPolytope.from_rows(rows, RATIONAL)
    verts = []
    for i in range(d):
        for s in (1, -1):
            verts.append(tuple(_q(s if j == i else 0) for j in range(d)))
    return Fixture(f"cross{d}", P, sorted(verts), "sum |x_i| <= 1")


def _rational_unit(v, denom=512):
    """A rational point on the unit sphere close to the direction ``v``.

    Inverse stereographic projection from the last pole maps rational
    parameters to rational unit vectors.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    if v[-1] > 0.999:
        v = -v
    params = [Fraction(float(x) / (1 - v[-1])).limit_denominator(denom) for x in v[:-1]]
    s2 = sum(p * p for p in params)
    out = [2 * p / (1 + s2) for p in params] + [(s2 - 1) / (1 + s2)]
    return tuple(_q(x) for x in out)


def ball_tangent(m: int, d: int, seed: int) -> Fixture:
    """``m`` random tangent half-spaces of the unit ball (exact unit normals)."""
    if m < d + 1:
        raise ValueError("need at least d+1 rows")
    rng = np.random.default_rng(seed)
    while True:
        rows = [_rational_unit(rng.standard_normal(d)) for _ in range(m)]
        P = HPolytope(tuple(rows), RATIONAL)
        if len(set(rows)) == m and is_bounded(P):
            return Fixture(f"ball{d}_m{m}_s{seed}", P, None, "unit normals, inradius 1")


def gen_standard(kind: str, d: int, m: int | None = None, seed: int = 0) -> Fixture:
    if d not in (2, 3):
        raise ValueError("standard fixtures are defined for d in {2, 3}")
    if kind == "simplex":
        return simplex(d)
    if kind == "cube":
        return cube(d)
    if kind in ("cross", "crosspolytope"):
        return crosspolytope(d)
    if kind in ("ball", "ball_tangent"):
        return ball_tangent(m if m is not None else 20, d, seed)
    raise ValueError(f"unknown fixture kind {kind!r}")


# ---------------------------------------------------------------------------
# zonotopes


def _primitive(v):
    g = reduce(math.gcd, (abs(x) for x in v))
    v = tuple(x // g for x in v)
    first = next(x for x in v if x)
    return v if first > 0 else tuple(-x for x in v)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def grid_generators(k: int | None = None):
    """``{-1,0,1}^3 \\ {0}`` up to sign (13 vectors), unit vectors first."""
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    rest = sorted(
        {_primitive(v) for v in itertools.product((-1, 0, 1), repeat=3) if any(v)} - set(units)
    )
    gens = units + rest
    return gens if k is None else gens[:k]


def zonotope_support(gens, w):
    """Support value of the zonotope ``sum [-g, g]`` in direction ``w``."""
    return sum(abs(dot(w, g)) for g in gens)


def zonotope_support_brute(gens, w):
    """Same value by maximizing over all ``2^k`` sign patterns."""
    best = None
    for signs in itertools.product((1, -1), repeat=len(gens)):
        x = dot(w, [sum(s * g[j] for s, g in zip(signs, gens)) for j in range(3)])
        best = x if best is None or x > best else best
    return best


def gen_zonotope3(generators, name=None) -> Fixture:
    """H-representation of the zonotope ``sum_k [-g_k, g_k]`` centred at the origin."""
    gens = [tuple(_q(x) for x in g) for g in generators]
    if len(gens) > 32:
        raise TooLarge("at most 32 generators are supported")
    if np.linalg.matrix_rank(np.array([[float(x) for x in g] for g in gens])) < 3:
        raise DegenerateGenerators("generators do not span R^3")
    normals = set()
    for a, b in itertools.combinations(gens, 2):
        n = _cross(a, b)
        if any(n):
            den = reduce(math.lcm, (x.denominator for x in n))
            normals.add(_primitive(tuple(int(x * den) for x in n)))
    rows = []
    for n in sorted(normals):
        nq = tuple(_q(x) for x in n)
        h = zonotope_support(gens, nq)
        rows.append(tuple(x / h for x in nq))
        rows.append(tuple(-x / h for x in nq))
    P = HPolytope(tuple(rows), RATIONAL)
    return Fixture(name or f"zono{len(gens)}", P, None, "zonotope", {"generators": gens})


# ---------------------------------------------------------------------------
# the covering counterexample


@dataclass
class ExampleA2:
    delta: object
    eps: object
    P: HPolytope
    P8: HPolytope
    h: tuple
    u: dict
    v: dict
    V: list
    J_eq: dict


def gen_example_A2(delta=Fraction(1, 10)) -> ExampleA2:
    """The 3-dimensional polytope on which the basic cut loses a covered vertex."""
    dl = _q(delta)
    a, b = dl / (1 + dl), 1 / (1 + dl)
    rows = [
        (a, a, b), (-a, 0, b), (0, -a, b),
        (1, 1, 0), (-1, 0, 0), (0, -1, 0), (0, 0, -1),
    ]
    h = (_q(-4), _q(-4), _q(0))
    P = HPolytope.from_rows(rows, RATIONAL)
    P8 = HPolytope(P.A + (h,), RATIONAL)
    Q = _q
    u = {
        1: (Q(0), Q(0), 1 + dl),
        2: (Q(-1), Q(-1), Q(1)),
        3: (Q(-1), Q(2), Q(1)),
        4: (Q(2), Q(-1), Q(1)),
        5: (Q(-1), Q(-1), Q(-1)),
        6: (Q(-1), Q(2), Q(-1)),
        7: (Q(2), Q(-1), Q(-1)),
        8: (Q(-1) / 8, Q(-1) / 8, 1 + 7 * dl / 8),
        9: (Q(-1), Q(3) / 4, Q(1)),
        10: (Q(3) / 4, Q(-1), Q(1)),
        11: (Q(-1), Q(3) / 4, Q(-1)),
        12: (Q(3) / 4, Q(-1), Q(-1)),
    }
    v = {2: (Q(-1), Q(-1), 1 + 3 * dl)}
    for k in (3, 4, 5, 6, 7, 11, 12):
        v[k] = u[k]
    v[9] = (Q(-1), Q(3) / 4, 1 + 5 * dl / 4)
    v[10] = (Q(3) / 4, Q(-1), 1 + 5 * dl / 4)
    V = [v[k] for k in (2, 3, 4, 5, 6, 7)]
    J_eq = {
        1: {1, 2, 3}, 2: {2, 3, 5, 6}, 3: {1, 2, 4, 5}, 4: {1, 3, 4, 6},
        5: {5, 6, 7}, 6: {4, 5, 7}, 7: {4, 6, 7},
        8: {2, 3, 8}, 9: {2, 5, 8}, 10: {3, 6, 8}, 11: {5, 7, 8}, 12: {6, 7, 8},
    }
    return ExampleA2(dl, 3 * dl, P, P8, h, u, v, V, J_eq)


# ---------------------------------------------------------------------------
# polar / Minkowski sequence


def regular_simplex3(denominator=1000) -> Fixture:
    """Regular tetrahedron centred at the origin with edge length close to 1.

    The exact edge ``1`` needs a factor ``1/(2 sqrt 2)``; a rational
    approximation keeps the tetrahedron exactly regular.
    """
    s = _q(Fraction(1 / (2 * math.sqrt(2))).limit_denominator(denominator))
    w = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    rows = [tuple(_q(-x) / s for x in wk) for wk in w]
    verts = sorted(tuple(s * x for x in wk) for wk in w)
    return Fixture("P0", HPolytope(tuple(rows), RATIONAL), verts, "regular simplex")


def hull_facets(points, seed=0, directions=256):
    """Facet rows ``y`` with ``conv(points) = {x | y.x <= 1}`` (origin interior).

    Returns ``(rows, candidates)``; the candidates include every vertex of the hull.

    Candidate extreme points from random directions are refined until every
    input point satisfies every computed inequality exactly; the facet rows
    are the vertices of the polar polytope of the candidates.
    """
    pts = sorted(set(tuple(_q(x) for x in p) for p in points))
    arr = np.array([[float(x) for x in p] for p in pts])
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((directions, arr.shape[1]))
    cand = set(np.argmax(arr @ W.T, axis=0).tolist())
    cand |= set(np.argmin(arr @ W.T, axis=0).tolist())
    while True:
        Q = HPolytope(tuple(pts[k] for k in sorted(cand)), RATIONAL)
        if not is_bounded(Q):  # pragma: no cover - 0 not yet interior to the candidates
            W = rng.standard_normal((directions, arr.shape[1]))
            cand |= set(np.argmax(arr @ W.T, axis=0).tolist())
            continue
        Y = brute_force_vertices(Q)
        viol = [k for k, p in enumerate(pts) if k not in cand and any(dot(y, p) > 1 for y in Y)]
        if not viol:
            return Y, [pts[k] for k in sorted(cand)]
        cand.update(viol)


def minkowski_polar_step(F: Fixture, seed=0, row_seed=None) -> Fixture:
    """``P + P°`` where ``P°`` is the convex hull of the rows of ``A``.

    Facet rows come out sorted; with ``row_seed`` they are shuffled by a
    seeded generator instead.
    """
    V = F.vertices if F.vertices is not None else brute_force_vertices(F.P)
    sums = [tuple(a + b for a, b in zip(v, r)) for v in V for r in F.P.A]
    Y, cand = hull_facets(sums, seed)
    Y = sorted(Y)
    if row_seed is not None:
        random.Random(row_seed).shuffle(Y)
    P = HPolytope(tuple(Y), RATIONAL)
    verts = []
    for p in cand:
        tight = [y for y in Y if dot(y, p) == 1]
        if len(tight) >= 3 and np.linalg.matrix_rank(np.array(tight, dtype=float)) == 3:
            verts.append(p)
    return Fixture(f"P{int(F.name[1:]) + 1}" if F.name.startswith("P") else F.name + "+",
                   P, sorted(verts), "Minkowski sum with the polar")


def gen_polar_minkowski_seq(k: int, row_seed: int | None = 0) -> list:
    """``P_0, ..., P_k`` with ``P_{j+1} = P_j + P_j°``.

    Rows of ``P_j`` (``j >= 1``) are shuffled with seed ``row_seed + j``;
    pass ``None`` for lexicographically sorted rows.
    """
    if k > 3:
        raise TooLarge("sequence depth is limited to 3")
    seq = [regular_simplex3()]
    for j in range(1, k + 1):
        seq.append(minkowski_polar_step(seq[-1], row_seed=None if row_seed is None else row_seed + j))
    return seq


def suite(n_random2=40, n_random3=40, seed=0, zonotope_sizes=(4, 7, 13)):
    """The correctness fixture suite: standard shapes, random ball tangents, zonotopes."""
    rng = random.Random(seed)
    out = [cube(2), cube(3), crosspolytope(2), crosspolytope(3)]
    for k in range(n_random2):
        out.append(ball_tangent(rng.randint(3, 30), 2, seed * 1000 + k))
    for k in range(n_random3):
        out.append(ball_tangent(rng.randint(4, 40), 3, seed * 1000 + 500 + k))
    for k in zonotope_sizes:
        out.append(gen_zonotope3(grid_generators(k)))
    return out
