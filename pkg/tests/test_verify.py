import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from approxvert.addm import IncidenceGraph
from approxvert.errors import DegenerateDirection, StructureError
from approxvert.ga import ga_run
from approxvert.generators import ball_tangent, cube, crosspolytope
from approxvert.numerics import to_rational
from approxvert.pipeline import with_prefix
from approxvert.verify import (
    brute_force_vertices,
    check_kappa,
    check_parity,
    check_sandwich,
    check_subgraph,
    crossing_count_2d,
    float_error_audit,
    point_in_vpolytope,
)

q = to_rational


def test_brute_force_vertices_of_cross():
    V = brute_force_vertices(crosspolytope(3).P)
    assert len(V) == 6 and (1, 0, 0) in V


coord = st.integers(-40, 40).map(lambda k: q(k) / 16)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord, coord), min_size=5, max_size=14, unique=True),
       st.tuples(coord, coord, coord))
def test_hull_membership_against_qhull(V, u):
    try:
        hull = ConvexHull([[float(x) for x in p] for p in V])
    except Exception:
        return  # flat point set
    # facet equations give a signed distance; skip points near the boundary
    dist = max(e[:3] @ [float(x) for x in u] + e[3] for e in hull.equations)
    if abs(dist) > 1e-6:
        assert point_in_vpolytope(u, V) == (dist < 0)


def test_membership_on_boundary_is_exact():
    V = [(q(0), q(0)), (q(1), q(0)), (q(0), q(1))]
    assert point_in_vpolytope((q("1/2"), q("1/2")), V)
    assert not point_in_vpolytope((q("1/2"), q("1/2") + q(1) / 10**30), V)


def test_sandwich_reports_both_sides():
    P = cube(2).P
    V = brute_force_vertices(P)
    assert check_sandwich(P, V, "1/10").ok
    shrunk = [tuple(x * q("9/10") for x in v) for v in V]
    rep = check_sandwich(P, shrunk, "1/10")
    assert not rep.inner_ok and rep.outer_ok and len(rep.missing) == 4
    grown = [tuple(x * q("6/5") for x in v) for v in V]
    rep = check_sandwich(P, grown, "1/10")
    assert rep.inner_ok and not rep.outer_ok and rep.worst_outer == q("6/5")


def test_sandwich_accepts_floats_exactly():
    P = cube(2).P
    V = [(1.1, 1.1), (-1.1, 1.1), (1.1, -1.1), (-1.1, -1.1)]
    # 1.1 as a double is slightly above 11/10
    assert not check_sandwich(P, V, "1/10").outer_ok


@pytest.fixture(scope="module")
def planar_run():
    Q = with_prefix(ball_tangent(11, 2, 8).P)
    g, _, _ = ga_run(Q, q("1/8"))
    return Q, g


def test_parity_on_final_graph(planar_run):
    Q, g = planar_run
    totals = check_parity(g, Q, count=16, seed=3)
    assert all(t % 2 == 1 for t in totals)
    check_kappa(g, Q)


def test_crossing_count_2d_degenerate_direction(planar_run):
    Q, g = planar_run
    v = next(iter(g.coords.values()))
    with pytest.raises(DegenerateDirection):
        crossing_count_2d(g, v)


def test_parity_detects_removed_edge(planar_run):
    Q, g = planar_run
    g2, _, _ = ga_run(Q, q("1/8"))
    h = next(h for h in g2.origin if g2.face[h] != g2.face[g2.twin[h]])
    g2.delete_edge(h)
    with pytest.raises(StructureError):
        check_parity(g2, Q, count=32, seed=0)


def test_parity_3d():
    Q = with_prefix(cube(3).P)
    g, _, _ = ga_run(Q, q("1/4"))
    assert len(check_parity(g, Q, count=8, seed=1, independence_pairs=4)) == 8
    check_kappa(g, Q)


def test_check_subgraph_flags_missing_edge():
    Q = with_prefix(cube(2).P)
    g, _, _ = ga_run(Q, q("1/4"))
    empty = IncidenceGraph(2)
    with pytest.raises(StructureError):
        check_subgraph(g, empty)


@pytest.mark.parametrize("alg", ["ga", "addm"])
def test_float_error_audit(alg):
    rep, _ = float_error_audit(with_prefix(ball_tangent(9, 3, 2).P), "1/1000", alg)
    assert rep.passed and rep.bad_decisions == 0
    assert rep.E <= rep.bound
