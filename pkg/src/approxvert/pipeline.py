"""From raw inequalities to an approximate vertex set."""
from __future__ import annotations

from .addm import addm_run
from .ga import ga_run
from .hrep import (
    AffineTransform,
    HPolytope,
    bounding_box,
    canonical_form,
    prefix_is_simplex,
    prepend_bounding_simplex,
)
from .numerics import get_backend

ALGORITHMS = ("ga", "addm")


def canonicalize(A, b, backend="rational"):
    """Canonical polytope and the map back to the input frame.

    Systems whose right-hand sides are all positive are only rescaled; others
    are recentred at their Chebyshev center.
    """
    backend = get_backend(backend)
    A = backend.matrix(A)
    b = backend.vector(b)
    if all(x > 0 for x in b):
        rows = [tuple(a / bi for a in row) for row, bi in zip(A, b)]
        P = HPolytope.from_rows(rows, backend)
        bounding_box(P)  # raises Unbounded
        return P, AffineTransform(tuple([backend.zero] * P.d), tuple(b))
    return canonical_form(A, b, backend)


def with_prefix(P: HPolytope) -> HPolytope:
    """``P`` itself when rows ``1..d+1`` already bound a simplex, else a redundant simplex in front."""
    if P.simplex_prefix:
        return P
    if prefix_is_simplex(P):
        return HPolytope(P.A, P.backend, True)
    return prepend_bounding_simplex(P)


def approximate(P: HPolytope, eps, alg: str = "ga", **kw):
    """Run ``alg`` on ``P`` (a bounding simplex is added when needed).

    Returns ``(graph, coords, ApproxVRep, Q)`` with ``Q`` the polytope the
    algorithm actually ran on; ``Q`` and ``P`` describe the same set.
    """
    if alg not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {alg!r}")
    Q = with_prefix(P)
    run = ga_run if alg == "ga" else addm_run
    g, coords, rep = run(Q, eps, **kw)
    return g, coords, rep, Q
