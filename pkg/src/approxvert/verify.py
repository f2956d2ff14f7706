"""Ground truth: brute-force vertices, LP membership, sandwich and invariant checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np
from scipy.optimize import linprog

from .common import MINUS, PLUS, ZERO
from .errors import DegenerateDirection, SingularSystem, StructureError, TooLarge
from .hrep import HPolytope, inradius_squared
from .numerics import RATIONAL, dot, simplex_standard, solve_linear, to_rational

ORACLE_GUARD = 2_000_000
FLOAT_REPORT_TOL = 1e-9
_COND_LIMIT = 1e8
_FEAS_TOL = 1e-6
_CHUNK = 20000


def _exact(P: HPolytope) -> HPolytope:
    return P.with_backend(RATIONAL)


def brute_force_vertices(P: HPolytope) -> list:
    """All vertices of ``P`` as exact rational points, sorted.

    Every ``d``-subset of rows is solved for ``A_I x = 1``.  A float pass
    discards subsets that are clearly singular or clearly infeasible; all
    survivors, and every subset the float pass cannot judge, are settled in
    exact arithmetic.

    Raises:
        TooLarge: more than ``2 * 10**6`` row subsets.
    """
    P = _exact(P)
    m, d = P.m, P.d
    if comb(m, d) > ORACLE_GUARD:
        raise TooLarge(f"C({m},{d}) = {comb(m, d)} row subsets exceeds the oracle guard")
    Af = np.array([[float(v) for v in row] for row in P.A])
    scale = np.abs(Af).sum(axis=1)
    found = set()
    subsets = combinations(range(m), d)
    while True:
        chunk = [c for _, c in zip(range(_CHUNK), subsets)]
        if not chunk:
            break
        idx = np.array(chunk)
        M = Af[idx]
        cond = np.linalg.cond(M)
        good = np.isfinite(cond) & (cond < _COND_LIMIT)
        exact_needed = [chunk[k] for k in np.nonzero(~good)[0]]
        gi = np.nonzero(good)[0]
        if len(gi):
            X = np.linalg.solve(M[gi], np.ones((len(gi), d, 1)))[:, :, 0]
            vals = X @ Af.T
            xnorm = np.abs(X).sum(axis=1)
            slack = _FEAS_TOL * (1 + np.outer(xnorm, scale))
            ok = np.all(vals <= 1 + slack, axis=1)
            exact_needed.extend(chunk[k] for k in gi[ok])
        for I in exact_needed:
            x = _solve_exact(P, I)
            if x is not None and P.contains(x):
                found.add(x)
    return sorted(found)


def _solve_exact(P, I):
    try:
        return solve_linear([P.A[i] for i in I], [P.backend.one] * P.d)
    except SingularSystem:
        return None


def point_in_vpolytope(u, V) -> bool:
    """Whether ``u`` is a convex combination of the points ``V`` (exact LP)."""
    return _HullOracle(V).contains(u)


class _HullOracle:
    """Exact membership in ``conv V`` for many query points.

    Float column generation proposes a support: a phase-one LP over a small
    candidate set, whose duals price every point of ``V`` to pick new
    candidates.  The convex combination on the proposed support is certified
    in exact arithmetic.  If that fails the full exact LP decides, so the
    float solver never settles membership on its own.
    """

    def __init__(self, V):
        self.V = [tuple(to_rational(x) for x in v) for v in V]
        if not self.V:
            raise ValueError("empty point set")
        self.F = np.array([[float(x) for x in v] for v in self.V])

    def contains(self, u) -> bool:
        u = tuple(to_rational(x) for x in u)
        uf = np.array([float(x) for x in u])
        dist = ((self.F - uf) ** 2).sum(axis=1)
        order = np.argsort(dist, kind="stable")
        if dist[order[0]] == 0 and self.V[order[0]] == u:
            return True
        start = order[: 4 * (len(u) + 1)].tolist()
        support = _column_generation(self.F, uf, start)
        if support is not None and _exact_feasible(u, [self.V[j] for j in support]):
            return True
        return _exact_feasible(u, self.V)


def _column_generation(F, uf, start, rounds=100, batch=8):
    n, d = F.shape
    cols = list(dict.fromkeys(start))
    rhs = np.append(uf, 1.0)
    eye = np.eye(d + 1)
    for _ in range(rounds):
        k = len(cols)
        A_eq = np.hstack([np.vstack([F[cols].T, np.ones((1, k))]), eye, -eye])
        cost = np.concatenate([np.zeros(k), np.ones(2 * (d + 1))])
        res = linprog(cost, A_eq=A_eq, b_eq=rhs, bounds=(0, None), method="highs")
        if res.status != 0:
            return None
        if res.fun <= 1e-12:
            lam = res.x[:k]
            return [cols[j] for j in np.nonzero(lam > 1e-12)[0].tolist()]
        y = res.eqlin.marginals
        reduced = -(F @ y[:d] + y[d])
        reduced[cols] = np.inf
        best = np.argsort(reduced, kind="stable")[:batch]
        best = [j for j in best.tolist() if reduced[j] < -1e-12]
        if not best:
            return None
        cols.extend(best)
    return None


def _hull_system(u, V, conv):
    d = len(u)
    A = [[conv(v[j]) for v in V] for j in range(d)] + [[conv(1)] * len(V)]
    b = [conv(x) for x in u] + [conv(1)]
    return A, b


def _exact_feasible(u, V) -> bool:
    A, b = _hull_system(u, V, to_rational)
    return simplex_standard([to_rational(0)] * len(V), A, b, exact=True).optimal


def _float_support(u, V):
    A, b = _hull_system(u, V, float)
    res = simplex_standard([0.0] * len(V), A, b, exact=False)
    if not res.optimal:
        return None
    return [k for k, x in enumerate(res.x) if x > 1e-12]


@dataclass
class SandwichReport:
    inner_ok: bool
    outer_ok: bool
    worst_outer: object
    missing: list = field(default_factory=list)
    outside: list = field(default_factory=list)
    within_float_tol: int = 0
    n_vertices_P: int = 0

    @property
    def ok(self) -> bool:
        return self.inner_ok and self.outer_ok


def _max_row_values(P: HPolytope, Vq):
    """Exact ``max_i A_i v`` for the points that could matter, plus the index of the worst.

    A float pass bounds every value; exact arithmetic is used for points whose
    float maximum is within a safety margin of the limit or of the float worst.
    """
    Af = np.array([[float(x) for x in r] for r in P.A])
    Vf = np.array([[float(x) for x in v] for v in Vq])
    vals = (Vf @ Af.T).max(axis=1)
    scale = np.abs(Af).sum(axis=1).max() * (1 + np.abs(Vf).max(axis=1))
    return vals, 1e-9 * scale


def check_sandwich(P: HPolytope, V, eps, vertices_P=None) -> SandwichReport:
    """Exact test of ``P <= conv V <= (1 + eps) P``.

    Float inputs are read as the exact rationals they represent.  Outer
    violations smaller than ``1e-9 * (1 + eps)`` are counted separately as
    within float tolerance but still fail the check.
    """
    P = _exact(P)
    e = to_rational(eps)
    lim = 1 + e
    Vq = [tuple(to_rational(x) for x in v) for v in V]
    verts = brute_force_vertices(P) if vertices_P is None else vertices_P
    if not Vq:
        return SandwichReport(not verts, True, None, list(verts), [], 0, len(verts))
    fvals, margin = _max_row_values(P, Vq)
    top = fvals.max()
    limf = float(lim)
    outside, worst, within = [], None, 0
    for k in np.nonzero((fvals + margin > limf) | (fvals + 2 * margin >= top))[0].tolist():
        v = Vq[k]
        m = max(dot(r, v) for r in P.A)
        if worst is None or m > worst:
            worst = m
        if m > lim:
            outside.append(v)
            if float(m - lim) <= FLOAT_REPORT_TOL * float(lim):
                within += 1
    oracle = _HullOracle(Vq)
    missing = [u for u in verts if not oracle.contains(u)]
    return SandwichReport(not missing, not outside, worst, missing, outside, within, len(verts))


# ---------------------------------------------------------------------------
# parity probes


@dataclass(frozen=True)
class HalfPlaneProbe:
    r: tuple
    a: tuple | None = None
    seed: int = 0


def _cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _exact_point(c):
    return tuple(to_rational(x) for x in c)


class _Snapshot:
    """Exact vertex points and per-face edge lists of a graph, shared by many probes."""

    def __init__(self, g):
        self.pts = {v: _exact_point(c) for v, c in g.coords.items()}
        self.face_edges = {
            f: [(g.origin[h], g.dest(h)) for cyc in g.face_cycles(f) for h in cyc] for f in g.faces
        }
        self.valid = [f for f, fc in g.faces.items() if fc.valid]
        self.kappa = {f: fc.kappa for f, fc in g.faces.items()}


class _Signs:
    """Exact signs of the probe linear forms at every vertex of a graph."""

    def __init__(self, snap: _Snapshot, n, b):
        self.side = {v: dot(n, q) for v, q in snap.pts.items()}
        self.along = {v: dot(b, q) for v, q in snap.pts.items()}


def _crosses(sg: _Signs, u, w):
    """Whether segment ``uw`` meets the open half ``{side = 0, along > 0}``; ``None`` if degenerate."""
    su, sw = sg.side[u], sg.side[w]
    if (su > 0) == (sw > 0):
        return False
    val = su * sg.along[w] - sw * sg.along[u]
    if val == 0:
        return None
    return (val > 0) == (su > 0)


def _face_counts(snap: _Snapshot, sg: _Signs, faces):
    memo = {}
    counts = {}
    for f in faces:
        n = 0
        for u, w in snap.face_edges[f]:
            key = (u, w) if u < w else (w, u)
            x = memo.get(key)
            if x is None:
                x = _crosses(sg, u, w)
                if x is None:
                    raise DegenerateDirection("an edge meets the probe line")
                memo[key] = x
            n += x
        counts[f] = n
    return counts


def crossing_count_2d(g, r, snap: _Snapshot | None = None):
    """Per-valid-face ray crossing counts ``N(f, r)`` and their total ``N(r)``.

    Raises:
        DegenerateDirection: a vertex lies on the line through ``r``.
    """
    snap = snap or _Snapshot(g)
    r = _exact_point(r)
    n = (-r[1], r[0])
    sg = _Signs(snap, n, r)
    if any(s == 0 for s in sg.side.values()):
        raise DegenerateDirection("a vertex lies on the probe line")
    counts = _face_counts(snap, sg, snap.valid)
    return counts, sum(counts.values())


def crossing_count_3d(g, P: HPolytope, probe: HalfPlaneProbe, snap: _Snapshot | None = None):
    """Per-face half-plane crossing counts ``N(f, r, a)`` and the total over ``F(r)``.

    ``F(r)`` holds the faces with ``A_kappa(f) . r > 0``.

    Raises:
        DegenerateDirection: a vertex lies in the plane of the probe, or an
            edge meets the line through ``r``.
    """
    snap = snap or _Snapshot(g)
    r, a = _exact_point(probe.r), _exact_point(probe.a)
    n = _cross3(r, a)
    if all(x == 0 for x in n):
        raise DegenerateDirection("r and a are parallel")
    b = _cross3(n, r)
    sg = _Signs(snap, n, b)
    if any(s == 0 for s in sg.side.values()):
        raise DegenerateDirection("a vertex lies in the probe plane")
    faces = list(snap.face_edges)
    counts = _face_counts(snap, sg, faces)
    Aq = _exact(P)
    in_F = [f for f in faces if dot(Aq.row(snap.kappa[f]), r) > 0]
    return counts, sum(counts[f] for f in in_F), in_F


def _rand_vec(rng, d):
    while True:
        v = tuple(to_rational(rng.randint(-997, 997)) for _ in range(d))
        if any(v):
            return v


def _measure(g, P, probe, snap, d):
    """Counts for one probe; raises ``DegenerateDirection`` for unusable probes."""
    if d == 2:
        counts, tot = crossing_count_2d(g, probe.r, snap)
        return counts, tot
    Aq = _exact(P)
    if any(dot(Aq.row(k), probe.r) == 0 for k in snap.kappa.values()):
        raise DegenerateDirection("r is parallel to a label hyperplane")
    counts, tot, _ = crossing_count_3d(g, P, probe, snap)
    return counts, tot


def _probe_stream(g, P, count, seed, retries, snap):
    d = len(next(iter(snap.pts.values())))
    found = 0
    s = seed
    rng = random.Random(s)
    fails = 0
    while found < count:
        r = _rand_vec(rng, d)
        a = _rand_vec(rng, d) if d == 3 else None
        probe = HalfPlaneProbe(r, a, s)
        try:
            counts, tot = _measure(g, P, probe, snap, d)
        except DegenerateDirection:
            fails += 1
            if fails >= retries:
                s += 1
                rng = random.Random(s)
                fails = 0
            continue
        fails = 0
        found += 1
        yield probe, counts, tot


def sample_probes(g, P, count, seed, retries=64):
    """Seeded non-degenerate probes; after ``retries`` failures the generator is re-seeded."""
    snap = _Snapshot(g)
    return [pr for pr, _, _ in _probe_stream(g, P, count, seed, retries, snap)]


def check_parity(g, P, count=32, seed=0, independence_pairs=8):
    """Odd crossing totals for ``count`` probes (and, for d=3, independence of ``a``).

    Returns the list of totals.

    Raises:
        StructureError: an even total or a parity that depends on ``a``.
    """
    snap = _Snapshot(g)
    totals = []
    for k, (pr, counts, tot) in enumerate(_probe_stream(g, P, count, seed, 64, snap)):
        if pr.a is not None and k < independence_pairs:
            _check_a_independence(g, P, pr, counts, snap)
        if tot % 2 != 1:
            raise StructureError(f"even crossing total {tot} for probe {pr}")
        totals.append(tot)
    return totals


def _check_a_independence(g, P, pr, counts, snap):
    alternatives = [tuple(-x for x in pr.a)]
    rng = random.Random(hash(pr.r) & 0xFFFF)
    for _ in range(16):
        a2 = _rand_vec(rng, 3)
        try:
            crossing_count_3d(g, P, HalfPlaneProbe(pr.r, a2, pr.seed), snap)
        except DegenerateDirection:
            continue
        alternatives.append(a2)
        break
    for a2 in alternatives:
        try:
            c2, _, _ = crossing_count_3d(g, P, HalfPlaneProbe(pr.r, a2, pr.seed), snap)
        except DegenerateDirection:
            continue
        for f, n in counts.items():
            if n % 2 != c2[f] % 2:
                raise StructureError(f"face {f}: crossing parity depends on the auxiliary vector")


def check_kappa(g, P):
    """Every edge (d=2) or every face boundary (d=3) lies in its labelled half-space."""
    Aq = _exact(P)
    one = to_rational(1)
    pts = {v: _exact_point(c) for v, c in g.coords.items()}
    if len(next(iter(pts.values()))) == 2:
        for h in g.origin:
            if h < g.twin[h]:
                k = g.edge_kappa.get(h)
                if k is None:
                    raise StructureError(f"edge {h} has no label")
                row = Aq.row(k)
                for v in (g.origin[h], g.dest(h)):
                    if dot(row, pts[v]) < one:
                        raise StructureError(f"edge {h} leaves the half-plane of row {k}")
    else:
        for f, fc in g.faces.items():
            row = Aq.row(fc.kappa)
            for v in g.face_vertices(f):
                if dot(row, pts[v]) < one:
                    raise StructureError(f"face {f} leaves the half-space of row {fc.kappa}")


def check_face_incidence(g, I: dict, d: int):
    """Each face's vertices share at least ``d-2`` incidence indices."""
    for f in g.faces:
        vs = g.face_vertices(f)
        if not vs:
            continue
        common = frozenset.intersection(*(frozenset(I[v]) for v in vs))
        if len(common) < d - 2:
            raise StructureError(f"face {f} vertices share only {len(common)} indices")


def check_subgraph(ga_graph, addm_graph):
    """Vertex ids and edges of the plane graph appear in the incidence graph."""
    gv, av = set(ga_graph.vertices), set(addm_graph.vertices)
    if not gv <= av:
        raise StructureError(f"vertices {sorted(gv - av)} missing from the incidence graph")
    missing = [e for e in sorted(ga_graph.edge_set()) if not addm_graph.has_edge(*e)]
    if missing:
        raise StructureError(f"edges {missing[:5]} missing from the incidence graph")


# ---------------------------------------------------------------------------
# float error audit


@dataclass
class AuditReport:
    E_squared: object
    bound_squared: object
    bad_decisions: int
    sandwich: SandwichReport | None

    @property
    def E(self) -> float:
        return float(self.E_squared) ** 0.5

    @property
    def bound(self) -> float:
        return float(self.bound_squared) ** 0.5

    @property
    def error_ok(self) -> bool:
        return self.E_squared <= self.bound_squared

    @property
    def passed(self) -> bool:
        return self.error_ok and self.bad_decisions == 0 and (self.sandwich is None or self.sandwich.ok)


class Shadow:
    """Exact coordinates that follow the decisions of a float run."""

    def __init__(self, P_exact: HPolytope, eps):
        self.P = P_exact
        self.eps = to_rational(eps)
        self.coords: dict = {}
        self.E2 = to_rational(0)
        self.bad = 0
        self._vals: dict = {}

    def init(self, ids, float_coords, exact_coords):
        for v, c, q in zip(ids, float_coords, exact_coords):
            self.coords[v] = q
            self._track(c, q)

    def classify(self, i, classes):
        row = self.P.row(i)
        half = 1 + self.eps / 2
        self._vals = {}
        for v, c in classes.items():
            x = dot(row, self.coords[v])
            self._vals[v] = x
            if c == MINUS and not x < half:
                self.bad += 1
            elif c == PLUS and not x > half:
                self.bad += 1
            elif c == ZERO and not (1 <= x <= 1 + self.eps):
                self.bad += 1

    def place(self, lo, hi, vid, float_coords):
        a, b = self._vals[lo], self._vals[hi]
        level = 1 + self.eps / 2
        cu, cw = self.coords[lo], self.coords[hi]
        t = (level - a) / (b - a)
        q = tuple(x + t * (y - x) for x, y in zip(cu, cw))
        self.coords[vid] = q
        self._track(float_coords, q)

    def _track(self, c, q):
        e2 = sum((to_rational(x) - y) ** 2 for x, y in zip(c, q))
        if e2 > self.E2:
            self.E2 = e2


def float_error_audit(P: HPolytope, eps, alg="ga", verify=True) -> tuple:
    """Paired float run with exact shadow coordinates.

    Returns ``(AuditReport, ApproxVRep)`` for the float run.  The audit passes
    when the coordinate error bound holds, every float decision is valid for
    the exact shadow coordinates, and (with ``verify``) the float output
    passes the exact sandwich check.
    """
    from .addm import addm_run
    from .ga import ga_run

    Pq = _exact(P)
    shadow = Shadow(Pq, eps)
    Pf = P.with_backend("float")
    run = ga_run if alg == "ga" else addm_run
    _, _, rep = run(Pf, float(to_rational(eps)), shadow=shadow)
    bound2 = to_rational(eps) ** 2 * inradius_squared(Pq) / 16
    sw = check_sandwich(Pq, rep.points, eps) if verify else None
    return AuditReport(shadow.E2, bound2, shadow.bad, sw), rep
