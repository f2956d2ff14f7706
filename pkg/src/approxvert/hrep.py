"""H-polytopes in the canonical form ``{x | A x <= 1}`` with the origin inside.

Row indices in the public API are 1-based, matching the usual mathematical
notation ``A_1, ..., A_m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InfeasibleOrFlat, Unbounded
from .numerics import (
    RATIONAL,
    Backend,
    LpProblem,
    dot,
    get_backend,
    lp_solve,
    norm_squared,
    simplex_standard,
    sqrt_upper,
)

RELATIONS = (">", ">=", "=", "!=", "<", "<=")


@dataclass(frozen=True)
class HPolytope:
    """The point set ``{x | A x <= 1}``.

    When ``simplex_prefix`` is set, rows ``1..d+1`` describe a bounded simplex
    containing the polytope.
    """

    A: tuple
    backend: Backend = RATIONAL
    simplex_prefix: bool = False

    @classmethod
    def from_rows(cls, rows, backend=RATIONAL, simplex_prefix=False) -> "HPolytope":
        backend = get_backend(backend)
        A = backend.matrix(rows)
        if not A:
            raise ValueError("empty inequality system")
        d = len(A[0])
        if d < 1 or any(len(r) != d for r in A):
            raise ValueError("ragged inequality matrix")
        return cls(A, backend, simplex_prefix)

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def d(self) -> int:
        return len(self.A[0])

    def row(self, i: int):
        """Row ``A_i`` for a 1-based index ``i``."""
        return self.A[i - 1]

    def values(self, x) -> tuple:
        return tuple(dot(r, x) for r in self.A)

    def contains(self, x, factor=1) -> bool:
        f = self.backend.scalar(factor)
        return all(dot(r, x) <= f for r in self.A)

    def with_backend(self, backend) -> "HPolytope":
        backend = get_backend(backend)
        if backend == self.backend:
            return self
        return HPolytope(backend.matrix(self.A), backend, self.simplex_prefix)

    def without_prefix(self) -> "HPolytope":
        if not self.simplex_prefix:
            return self
        return HPolytope(self.A[self.d + 1:], self.backend, False)


@dataclass(frozen=True)
class AffineTransform:
    """Maps canonical coordinates back to the input frame: ``x = y + translation``.

    ``row_scale[i]`` is the positive number row ``i`` of the translated input
    system was divided by.
    """

    translation: tuple
    row_scale: tuple = field(default=())

    def to_original(self, y) -> tuple:
        return tuple(a + t for a, t in zip(y, self.translation))

    def to_canonical(self, x) -> tuple:
        return tuple(a - t for a, t in zip(x, self.translation))

    @property
    def is_identity(self) -> bool:
        return all(t == 0 for t in self.translation) and all(s == 1 for s in self.row_scale)


def _row_norm(row, backend):
    sq = norm_squared(row)
    return sqrt_upper(sq) if backend.exact else math.sqrt(sq)


def support_value(P: HPolytope, w):
    """``max w.x`` over ``P``, or ``None`` if unbounded in direction ``w``.

    Solved through the dual ``min 1.y s.t. A^T y = w, y >= 0``, which has only
    ``d`` equality rows.
    """
    backend = P.backend
    AT = [[P.A[i][j] for i in range(P.m)] for j in range(P.d)]
    res = simplex_standard([-backend.one] * P.m, AT, backend.vector(w), exact=backend.exact)
    if res.status == "infeasible":
        return None
    if not res.optimal:  # pragma: no cover - dual is bounded below by weak duality
        raise Unbounded("dual LP unbounded: polytope is empty")
    return -res.value


def bounding_box(P: HPolytope):
    """Axis-aligned bounding box ``(lo, hi)`` of ``P`` via ``2d`` LPs."""
    lo, hi = [], []
    one = P.backend.one
    for j in range(P.d):
        e = [P.backend.zero] * P.d
        e[j] = one
        up = support_value(P, e)
        e[j] = -one
        down = support_value(P, e)
        if up is None or down is None:
            raise Unbounded(f"polytope unbounded along axis {j + 1}")
        hi.append(up)
        lo.append(-down)
    return tuple(lo), tuple(hi)


def is_bounded(P: HPolytope) -> bool:
    try:
        bounding_box(P)
    except Unbounded:
        return False
    return True


def canonical_form(A_raw, b_raw, backend=RATIONAL):
    """Bring ``{x | A_raw x <= b_raw}`` to canonical form.

    The Chebyshev center ``x0`` (maximize ``r`` s.t. ``A_i x + r |A_i| <= b_i``)
    is moved to the origin and every row divided by its positive right-hand
    side.  Under the rational backend ``|A_i|`` is replaced by a rational upper
    bound, which keeps the ball inside and ``x0`` interior.

    Returns:
        ``(HPolytope, AffineTransform)``.

    Raises:
        InfeasibleOrFlat: no interior point.
        Unbounded: the system does not describe a bounded set.
    """
    backend = get_backend(backend)
    A = backend.matrix(A_raw)
    b = backend.vector(b_raw)
    if len(A) != len(b) or not A:
        raise ValueError("A_raw and b_raw sizes differ")
    d = len(A[0])
    zero, one = backend.zero, backend.one
    G = [tuple(row) + (_row_norm(row, backend),) for row in A]
    c = tuple([zero] * d + [one])
    res = lp_solve(LpProblem(c, tuple(G), tuple(b)), exact=backend.exact)
    if res.status == "unbounded":
        raise Unbounded("inscribed-ball LP unbounded")
    if res.status == "infeasible" or res.value <= 0:
        raise InfeasibleOrFlat("no interior point (Chebyshev radius <= 0)")
    x0 = res.x[:d]
    rhs = [bi - dot(row, x0) for row, bi in zip(A, b)]
    rows = [tuple(v / r for v in row) for row, r in zip(A, rhs)]
    P = HPolytope(tuple(rows), backend, False)
    bounding_box(P)  # raises Unbounded
    return P, AffineTransform(tuple(x0), tuple(rhs))


def prepend_bounding_simplex(P: HPolytope) -> HPolytope:
    """Put ``d+1`` redundant rows describing a simplex around ``P`` in front.

    The simplex is ``{x_j >= lo_j - margin, sum x_j <= sum hi_j + margin}``
    with ``margin`` a tenth of the bounding-box diagonal, rounded outward to a
    dyadic grid and normalized to right-hand side 1.
    """
    if P.simplex_prefix:
        return P
    backend = P.backend
    lo, hi = bounding_box(P)
    diag = math.sqrt(sum(float(h - l) ** 2 for l, h in zip(lo, hi)))
    margin = diag / 10
    # outward rounding to a dyadic grid keeps the prefix rows short rationals
    step = 2.0 ** (math.floor(math.log2(diag)) - 6)
    lower = [backend.scalar(math.floor((float(l) - margin) / step) * step) for l in lo]
    upper = backend.scalar(math.ceil((float(sum(hi)) + margin) / step) * step)
    if any(L >= l for L, l in zip(lower, lo)) or upper <= sum(hi):  # pragma: no cover
        raise ArithmeticError("bounding simplex rounding failed")
    zero, one = backend.zero, backend.one
    prefix = []
    for j in range(P.d):
        row = [zero] * P.d
        row[j] = one / lower[j]
        prefix.append(tuple(row))
    prefix.append(tuple([one / upper] * P.d))
    return HPolytope(tuple(prefix) + P.A, backend, True)


def index_set(P: HPolytope, u, rel: str) -> frozenset:
    """1-based row indices ``i`` with ``A_i u  rel  1``."""
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    one = P.backend.one
    ops = {
        ">": lambda v: v > one,
        ">=": lambda v: v >= one,
        "=": lambda v: v == one,
        "!=": lambda v: v != one,
        "<": lambda v: v < one,
        "<=": lambda v: v <= one,
    }
    test = ops[rel]
    return frozenset(i + 1 for i, row in enumerate(P.A) if test(dot(row, u)))


def inradius_squared(P: HPolytope):
    """Square of the radius of the largest origin-centred ball inside ``P``."""
    return P.backend.one / max(norm_squared(r) for r in P.A)


def inradius(P: HPolytope):
    """``1 / max_i |A_i|``; exact when that value is rational, otherwise a float."""
    sq = inradius_squared(P)
    if P.backend.exact:
        r = sqrt_upper(sq)
        if r * r == sq:
            return r
        return math.sqrt(float(sq))
    return math.sqrt(sq)


def scale(P: HPolytope, factor) -> HPolytope:
    """Canonical form of ``factor * P`` (rows divided by ``factor``)."""
    f = P.backend.scalar(factor)
    if f <= 0:
        raise ValueError("scale factor must be positive")
    return HPolytope(tuple(tuple(v / f for v in r) for r in P.A), P.backend, P.simplex_prefix)


def prefix_is_simplex(P: HPolytope) -> bool:
    """Whether rows ``1..d+1`` bound a simplex (bounded, vertices distinct)."""
    if P.m < P.d + 1:
        return False
    S = HPolytope(P.A[: P.d + 1], P.backend, False)
    return is_bounded(S)
