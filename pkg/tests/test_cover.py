from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from approxvert.cover import (
    CutRegions,
    LabeledPointSet,
    basic_cut,
    covers,
    covers_by_definition,
    cut_polytope,
    h_correctness,
    is_strong_approx_vrep,
    uncovered_vertices,
)
from approxvert.generators import ball_tangent, cube, gen_example_A2
from approxvert.hrep import index_set
from approxvert.numerics import to_rational
from approxvert.verify import brute_force_vertices

q = to_rational


def test_example_index_sets():
    ex = gen_example_A2()
    for k, J in ex.J_eq.items():
        P = ex.P if k <= 7 else ex.P8
        assert set(index_set(P, ex.u[k], "=")) == J


def test_example_cut_loses_cover():
    ex = gen_example_A2()
    assert is_strong_approx_vrep(ex.P, ex.V, Fraction(3, 10))
    cut = CutRegions(ex.h, ex.eps)
    hc = h_correctness(ex.P, ex.V, cut)
    assert not hc.ok and hc.violated == {"A2"}
    out = basic_cut(ex.P, ex.eps, cut, ex.V)
    assert not is_strong_approx_vrep(ex.P8, out, ex.eps)
    assert sorted(uncovered_vertices(ex.P8, out)) == sorted([ex.u[1], ex.u[8]])


def test_example_cut_at_level_one_gives_printed_points():
    ex = gen_example_A2()
    out = basic_cut(ex.P, ex.eps, CutRegions(ex.h, ex.eps), ex.V, level=1)
    assert {ex.v[9], ex.v[10]} <= out.as_set()


def test_cut_regions_and_polytope():
    P = cube(2).P
    cut = CutRegions((q(1), q(0)), q("1/2"))
    assert cut.region((q(0), q(0))) == "-"
    assert cut.region((q("1.2"), q(0))) == "0"
    assert cut.region((q(2), q(0))) == "+"
    assert cut_polytope(P, cut).m == P.m + 1


def test_labels_default_to_positions():
    S = LabeledPointSet([(q(0), q(0)), (q(1), q(1))])
    assert S.labels == [1, 2]


coord = st.fractions(min_value=-2, max_value=2, max_denominator=8)


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10**4), coord, coord)
def test_covers_matches_hull_definition(m, seed, x, y):
    P = ball_tangent(m, 2, seed).P
    verts = brute_force_vertices(P)
    v = (q(x), q(y))
    for u in verts:
        assert covers(P, u, v) == covers_by_definition(P, u, v, verts)


def _vertex_set_inflated(P, eps):
    """Vertices of ``P`` pushed outward by a factor in ``(1, 1 + eps)``: a strong approximation."""
    f = 1 + q(eps) / 3
    return [tuple(f * c for c in u) for u in brute_force_vertices(P)]


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 9), st.integers(0, 10**4), coord, coord, st.sampled_from(["1/10", "1/3"]))
def test_h_correct_cut_stays_strong(m, seed, hx, hy, eps):
    P = ball_tangent(m, 2, seed).P
    assume((hx, hy) != (0, 0))
    eps = q(eps)
    h = (q(hx), q(hy))
    V = _vertex_set_inflated(P, eps)
    assert is_strong_approx_vrep(P, V, eps)
    cut = CutRegions(h, eps)
    if not h_correctness(P, V, cut).ok:
        return
    Ph = cut_polytope(P, cut)
    assume(len(brute_force_vertices(Ph)) >= 3)
    out = basic_cut(P, eps, cut, V)
    assert is_strong_approx_vrep(Ph, out, eps)
