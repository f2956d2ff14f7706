import itertools
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxvert.errors import SingularSystem
from approxvert.numerics import (
    FLOAT,
    RATIONAL,
    LpProblem,
    get_backend,
    lp_solve,
    solve_linear,
    sqrt_upper,
    to_rational,
)


def test_to_rational_reads_decimals_exactly():
    assert to_rational("0.1") == gmpy2.mpq(1, 10)
    assert to_rational("3/7") == gmpy2.mpq(3, 7)
    assert to_rational(Fraction(5, 4)) == gmpy2.mpq(5, 4)
    assert to_rational(0.5) == gmpy2.mpq(1, 2)
    assert to_rational(0.1) != gmpy2.mpq(1, 10)  # binary value of the double


def test_to_rational_rejects_non_finite():
    with pytest.raises(ValueError):
        to_rational(float("inf"))


def test_backends():
    assert get_backend("float") is FLOAT
    assert get_backend(RATIONAL) is RATIONAL
    assert isinstance(FLOAT.scalar("1/4"), float)
    with pytest.raises(ValueError):
        get_backend("decimal")


def test_solve_linear_exact_and_singular():
    M = [[to_rational(2), to_rational(1)], [to_rational(1), to_rational(3)]]
    x = solve_linear(M, [to_rational(3), to_rational(5)])
    assert x == (gmpy2.mpq(4, 5), gmpy2.mpq(7, 5))
    with pytest.raises(SingularSystem):
        solve_linear([[to_rational(1), to_rational(2)], [to_rational(2), to_rational(4)]],
                     [to_rational(1), to_rational(2)])


def test_sqrt_upper():
    assert sqrt_upper(gmpy2.mpq(9, 4)) == gmpy2.mpq(3, 2)
    r = sqrt_upper(2)
    assert r * r >= 2


def test_lp_statuses():
    one = to_rational(1)
    # max x + y on the unit square
    G = ((one, 0), (0, one), (-one, 0), (0, -one))
    res = lp_solve(LpProblem((one, one), G, (one, one, 0, 0)))
    assert res.optimal and res.value == 2
    assert lp_solve(LpProblem((one,), ((-one,),), (one,))).status == "unbounded"
    assert lp_solve(LpProblem((one,), ((one,), (-one,)), (one, -2 * one))).status == "infeasible"


def _brute_lp(c, G, h):
    """Best objective over all vertices of ``{G x <= h}`` in the plane."""
    best = None
    for i, j in itertools.combinations(range(len(G)), 2):
        try:
            x = solve_linear([G[i], G[j]], [h[i], h[j]])
        except SingularSystem:
            continue
        if all(g[0] * x[0] + g[1] * x[1] <= hk for g, hk in zip(G, h)):
            v = c[0] * x[0] + c[1] * x[1]
            best = v if best is None else max(best, v)
    return best


small = st.integers(-5, 5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=3, max_size=7), st.tuples(small, small))
def test_lp_matches_vertex_enumeration(normals, c):
    # a bounding box keeps every instance bounded and feasible
    G = [(to_rational(a), to_rational(b)) for a, b in normals] + [
        (to_rational(1), to_rational(0)), (to_rational(-1), to_rational(0)),
        (to_rational(0), to_rational(1)), (to_rational(0), to_rational(-1))]
    h = [to_rational(1)] * len(normals) + [to_rational(10)] * 4
    c = tuple(to_rational(v) for v in c)
    res = lp_solve(LpProblem(c, tuple(G), tuple(h)), exact=True)
    assert res.optimal
    assert res.value == _brute_lp(c, G, h)
    fres = lp_solve(LpProblem(tuple(map(float, c)), tuple(tuple(map(float, g)) for g in G),
                              tuple(map(float, h))), exact=False)
    assert fres.value == pytest.approx(float(res.value), abs=1e-9)
