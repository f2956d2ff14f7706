"""Scalar backends, dense linear solves and a small dense simplex LP solver.

Two backends are provided.  ``FLOAT`` computes with IEEE doubles; ``RATIONAL``
computes with normalized arbitrary-precision fractions (``gmpy2.mpq``) so that
every ring operation and comparison is exact.  All geometry in the package is
written against plain arithmetic operators and works with either scalar type.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2

from .errors import SingularSystem

MPQ = type(gmpy2.mpq(1))
_MPZ = type(gmpy2.mpz(1))

FLOAT_PIVOT_RTOL = 1e-12
FLOAT_LP_TOL = 1e-9


def to_rational(x) -> MPQ:
    """Convert ``x`` to an exact rational.

    Floats are converted exactly (their binary value), decimal strings such as
    ``"0.1"`` are read as the decimal they spell, and ``"p/q"`` tokens are
    parsed as fractions.
    """
    if isinstance(x, MPQ):
        return x
    if isinstance(x, (int, _MPZ)):
        return gmpy2.mpq(x)
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return gmpy2.mpq(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            return gmpy2.mpq(s)
        return to_rational(Fraction(s))
    if hasattr(x, "item"):  # numpy scalar
        return to_rational(x.item())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def to_float(x) -> float:
    return float(x)


def is_exact(x) -> bool:
    return not isinstance(x, float)


@dataclass(frozen=True)
class Backend:
    name: str
    exact: bool

    def scalar(self, x):
        if self.exact:
            return to_rational(x)
        return float(to_rational(x)) if isinstance(x, str) else float(x)

    def vector(self, xs) -> tuple:
        return tuple(self.scalar(x) for x in xs)

    def matrix(self, rows) -> tuple:
        return tuple(self.vector(r) for r in rows)

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)


FLOAT = Backend("float", exact=False)
RATIONAL = Backend("rational", exact=True)


def get_backend(name: str | Backend) -> Backend:
    if isinstance(name, Backend):
        return name
    try:
        return {"float": FLOAT, "rational": RATIONAL}[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}") from None


def dot(a, b):
    s = a[0] * b[0]
    for k in range(1, len(a)):
        s += a[k] * b[k]
    return s


def norm_squared(a):
    return dot(a, a)


def sqrt_upper(q) -> MPQ:
    """Smallest convenient rational ``r`` with ``r*r >= q`` (exact when ``q`` is a square)."""
    q = to_rational(q)
    if q < 0:
        raise ValueError("negative argument")
    num, den = q.numerator, q.denominator
    rn, en = gmpy2.iroot(num, 2)
    rd, ed = gmpy2.iroot(den, 2)
    if en and ed:
        return gmpy2.mpq(rn, rd)
    r = to_rational(math.sqrt(float(q)) * (1 + 2.0**-40))
    while r * r < q:
        r *= gmpy2.mpq(1 + 2**-30)
    return r


def solve_linear(M: Sequence[Sequence], b: Sequence):
    """Solve ``M x = b`` for square ``M`` by Gaussian elimination.

    Float inputs use partial pivoting and report a singular system when the
    best pivot is at most ``1e-12 * max|M|``; exact inputs report singularity
    only for an exact zero pivot.

    Raises:
        SingularSystem: rank-deficient ``M``.
    """
    n = len(M)
    if any(len(row) != n for row in M) or len(b) != n:
        raise ValueError("solve_linear expects a square system")
    exact = all(is_exact(v) for row in M for v in row) and all(is_exact(v) for v in b)
    if exact:
        T = [[to_rational(v) for v in row] + [to_rational(bi)] for row, bi in zip(M, b)]
        thresh = None
    else:
        T = [[float(v) for v in row] + [float(bi)] for row, bi in zip(M, b)]
        scale = max((abs(v) for row in T for v in row[:n]), default=0.0)
        thresh = FLOAT_PIVOT_RTOL * scale
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if T[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(T[r][col]))
            if abs(T[piv][col]) <= thresh:
                piv = None
        if piv is None:
            raise SingularSystem(f"zero pivot in column {col}")
        if piv != col:
            T[col], T[piv] = T[piv], T[col]
        prow = T[col]
        p = prow[col]
        for r in range(col + 1, n):
            f = T[r][col]
            if f:
                f = f / p
                row = T[r]
                for k in range(col, n + 1):
                    row[k] -= f * prow[k]
    x = [None] * n
    for r in range(n - 1, -1, -1):
        s = T[r][n]
        for k in range(r + 1, n):
            s -= T[r][k] * x[k]
        x[r] = s / T[r][r]
    return tuple(x)


# --------------------------------------------------------------------------
# linear programming


@dataclass(frozen=True)
class LpProblem:
    """maximize ``objective . x`` subject to ``G x <= h`` with ``x`` free."""

    objective: tuple
    G: tuple
    h: tuple

    def __post_init__(self):
        if len(self.G) < 1:
            raise ValueError("LpProblem needs at least one constraint")
        d = len(self.objective)
        if any(len(row) != d for row in self.G) or len(self.h) != len(self.G):
            raise ValueError("inconsistent LpProblem dimensions")


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple | None = None
    value: object = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Dense simplex tableau maximizing ``obj`` with Bland's pivoting rule."""

    def __init__(self, rows, basis, ncols, tol):
        self.T = rows
        self.basis = basis
        self.n = ncols
        self.tol = tol
        self.obj = None

    def set_objective(self, c):
        n = self.n
        obj = list(c) + [c[0] * 0]
        for i, j in enumerate(self.basis):
            cj = obj[j]
            if cj:
                row = self.T[i]
                for k in range(n + 1):
                    obj[k] -= cj * row[k]
        self.obj = obj

    def pivot(self, r, j):
        T, n = self.T, self.n
        prow = T[r]
        p = prow[j]
        if p != 1:
            for k in range(n + 1):
                prow[k] = prow[k] / p
        for i, row in enumerate(T):
            if i != r:
                f = row[j]
                if f:
                    for k in range(n + 1):
                        if prow[k]:
                            row[k] -= f * prow[k]
        f = self.obj[j]
        if f:
            obj = self.obj
            for k in range(n + 1):
                if prow[k]:
                    obj[k] -= f * prow[k]
        self.basis[r] = j

    def run(self, allowed) -> str:
        tol, n = self.tol, self.n
        while True:
            obj = self.obj
            j = next((j for j in range(n) if allowed[j] and obj[j] > tol), None)
            if j is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.T):
                a = row[j]
                if a > tol:
                    ratio = row[n] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < self.basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], j)


def simplex_standard(c, A, b, exact: bool | None = None) -> LpResult:
    """maximize ``c.x`` subject to ``A x = b``, ``x >= 0`` (two-phase, Bland's rule).

    Returns the primal solution over the original columns.
    """
    k = len(A)
    n = len(c)
    if exact is None:
        exact = all(is_exact(v) for row in A for v in row) and all(is_exact(v) for v in b)
    conv = to_rational if exact else float
    tol = 0 if exact else FLOAT_LP_TOL
    zero = conv(0)
    rows = []
    for row, bi in zip(A, b):
        r = [conv(v) for v in row] + [conv(bi)]
        if r[n] < 0:
            r = [-v for v in r]
        rows.append(r)
    # reuse unit columns as the initial basis where possible
    basis = [None] * k
    used = set()
    for j in range(n):
        nz = [i for i in range(k) if rows[i][j] != 0]
        if len(nz) == 1 and rows[nz[0]][j] == 1 and basis[nz[0]] is None and j not in used:
            basis[nz[0]] = j
            used.add(j)
    art_rows = [i for i in range(k) if basis[i] is None]
    ntot = n + len(art_rows)
    for i in range(k):
        rows[i] = rows[i][:n] + [zero] * len(art_rows) + [rows[i][n]]
    for a, i in enumerate(art_rows):
        rows[i][n + a] = conv(1)
        basis[i] = n + a
    tab = _Tableau(rows, basis, ntot, tol)
    if art_rows:
        tab.set_objective([zero] * n + [conv(-1)] * len(art_rows))
        tab.run([True] * ntot)
        # obj[ntot] is the remaining sum of artificial variables
        slack = 0 if exact else tol * max(1.0, _abs_sum_b(b))
        if tab.obj[ntot] > slack:
            return LpResult("infeasible")
        # drive artificial variables out of the basis
        r = 0
        while r < len(tab.T):
            if tab.basis[r] >= n:
                j = next((j for j in range(n) if abs(tab.T[r][j]) > tol), None)
                if j is None:
                    del tab.T[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, j)
            r += 1
    tab.set_objective([conv(v) for v in c] + [zero] * len(art_rows))
    status = tab.run([True] * n + [False] * len(art_rows))
    if status == "unbounded":
        return LpResult("unbounded")
    x = [zero] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.T[i][ntot]
    return LpResult("optimal", tuple(x), -tab.obj[ntot])


def _abs_sum_b(b):
    return sum(abs(float(v)) for v in b)


def lp_solve(p: LpProblem, exact: bool | None = None) -> LpResult:
    """Solve ``max c.x s.t. G x <= h`` over free ``x`` with the dense simplex method."""
    d = len(p.objective)
    k = len(p.G)
    if exact is None:
        exact = all(is_exact(v) for row in p.G for v in row) and all(is_exact(v) for v in p.h)
    conv = to_rational if exact else float
    zero, one = conv(0), conv(1)
    A = []
    for i, (row, hi) in enumerate(zip(p.G, p.h)):
        r = [conv(v) for v in row]
        slack = [zero] * k
        slack[i] = one
        A.append(r + [-v for v in r] + slack)
    c = [conv(v) for v in p.objective]
    res = simplex_standard(c + [-v for v in c] + [zero] * k, A, [conv(v) for v in p.h], exact=exact)
    if not res.optimal:
        return res
    x = tuple(res.x[j] - res.x[d + j] for j in range(d))
    return LpResult("optimal", x, res.value)
