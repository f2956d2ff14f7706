import pytest

from approxvert.errors import InfeasibleOrFlat, Unbounded
from approxvert.generators import cube, simplex
from approxvert.hrep import (
    HPolytope,
    bounding_box,
    canonical_form,
    index_set,
    inradius,
    inradius_squared,
    is_bounded,
    prefix_is_simplex,
    prepend_bounding_simplex,
    support_value,
)
from approxvert.numerics import FLOAT, to_rational
from approxvert.verify import brute_force_vertices

q = to_rational


def test_rows_are_one_based():
    P = cube(2).P
    assert P.row(1) == P.A[0]
    assert P.m == 4 and P.d == 2


def test_index_sets_on_square_corner():
    P = HPolytope.from_rows([(1, 0), (0, 1), (-1, 0), (0, -1)])
    u = (q(1), q(1))
    assert index_set(P, u, "=") == {1, 2}
    assert index_set(P, u, "<") == {3, 4}
    assert index_set(P, (q(2), q(0)), ">") == {1}
    with pytest.raises(ValueError):
        index_set(P, u, "~")


def test_support_and_box():
    P = HPolytope.from_rows([(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert support_value(P, (q(1), q(1))) == 2
    lo, hi = bounding_box(P)
    assert list(lo) == [-1, -1] and list(hi) == [1, 1]
    assert not is_bounded(HPolytope.from_rows([(1, 0), (0, 1)]))


def test_inradius():
    P = HPolytope.from_rows([(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert inradius_squared(P) == 1
    assert inradius(HPolytope.from_rows([(2, 0), (0, 2), (-2, 0), (0, -2)])) == q("1/2")


def test_canonical_form_recentres():
    # square [2, 4] x [0, 2]
    A = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    b = [4, -2, 2, 0]
    P, T = canonical_form(A, b)
    assert T.to_original((q(0), q(0))) == (3, 1)
    assert sorted(brute_force_vertices(P)) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    assert T.to_canonical(T.to_original((q(1), q(2)))) == (1, 2)


def test_canonical_form_errors():
    with pytest.raises(InfeasibleOrFlat):
        canonical_form([(1, 0), (-1, 0), (0, 1), (0, -1)], [0, 0, 1, 1])
    with pytest.raises(Unbounded):
        canonical_form([(1, 0), (0, 1)], [1, 1])


def test_float_canonical_form():
    P, T = canonical_form([(1, 0), (-1, 0), (0, 1), (0, -1)], [4, -2, 2, 0], FLOAT)
    assert T.translation == pytest.approx((3.0, 1.0))
    assert all(isinstance(x, float) for r in P.A for x in r)


@pytest.mark.parametrize("F", [cube(2), cube(3)], ids=lambda F: F.name)
def test_bounding_simplex_is_redundant(F):
    Q = prepend_bounding_simplex(F.P)
    assert Q.simplex_prefix and prefix_is_simplex(Q)
    assert Q.m == F.P.m + F.P.d + 1
    assert Q.without_prefix().A == F.P.A
    assert brute_force_vertices(Q) == brute_force_vertices(F.P)


def test_simplex_fixture_already_has_prefix():
    P = simplex(3).P
    assert P.simplex_prefix
    assert prepend_bounding_simplex(P) is P
