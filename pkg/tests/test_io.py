import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxvert import io as aio
from approxvert.errors import FormatError
from approxvert.ga import ga_run
from approxvert.generators import cube, simplex
from approxvert.hrep import HPolytope
from approxvert.numerics import to_rational
from approxvert.pipeline import with_prefix

SQUARE = """* unit square
H-representation
begin
4 3 rational
1 -1 0
1 1 0
1 0 -1
1 0 1
end
"""


def test_read_ine():
    A, b, nt = aio.read_ine(SQUARE)
    assert nt == "rational"
    assert A[0] == (1, 0) and b == [1, 1, 1, 1]
    assert aio.polytope_from_ine(SQUARE).A == HPolytope.from_rows(A).A


def test_polytope_from_ine_needs_positive_rhs():
    text = SQUARE.replace("1 -1 0", "0 -1 0")
    assert aio.polytope_from_ine(text) is None


@pytest.mark.parametrize("bad", [
    SQUARE.replace("rational", "rational").replace("1 -1 0", "1 -1 0.5"),
    SQUARE.replace("4 3 rational", "4 3 real").replace("1 -1 0", "1 -1/2 0"),
    SQUARE.replace("4 3", "5 3"),
    SQUARE.replace("end\n", ""),
    SQUARE.replace("1 1 0", "1 1"),
    SQUARE.replace("rational", "integer"),
    "begin\n1 2 rational\n1 1\nend\n",
])
def test_malformed_input(bad):
    with pytest.raises(FormatError):
        aio.read_ine(bad)


def test_real_tokens_are_exact_decimals():
    text = SQUARE.replace("rational", "real").replace("1 -1 0", "1 -0.1 0")
    A, _, nt = aio.read_ine(text)
    assert nt == "real" and A[0][0] == to_rational("1/10")


def test_ine_roundtrip():
    P = cube(3).P
    A, b, _ = aio.read_ine(aio.write_ine(P))
    assert tuple(map(tuple, A)) == P.A and all(x == 1 for x in b)


frac = st.fractions(min_value=-50, max_value=50, max_denominator=97)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(frac, frac, frac), min_size=1, max_size=12))
def test_ext_roundtrip(points):
    pts = [tuple(to_rational(x) for x in p) for p in points]
    assert aio.read_ext(aio.write_ext(pts)) == pts


def test_ext_rejects_rays():
    with pytest.raises(FormatError):
        aio.read_ext("V-representation\nbegin\n1 3 rational\n0 1 0\nend\n")


def test_csv():
    text = aio.write_csv([4, 7], [(to_rational("1/2"), 0), (1, 2)])
    assert text.splitlines() == ["id,x1,x2", "4,0.5,0.0", "7,1.0,2.0"]


def test_off_and_svg():
    g3, c3, _ = ga_run(with_prefix(cube(3).P), to_rational("1/2"))
    off = aio.write_off(g3).splitlines()
    assert off[0] == "OFF"
    nv, nf, _ = map(int, off[1].split())
    assert nv == len(g3.vertices) and nf >= 4
    tri = aio.write_off(g3, triangulate=True).splitlines()
    assert all(line.startswith("3 ") for line in tri[2 + nv:])
    g2, _, _ = ga_run(simplex(2).P, to_rational("1/2"))
    svg = aio.write_svg(g2)
    assert svg.startswith("<svg") and svg.count("<circle") == len(g2.vertices)
    with pytest.raises(ValueError):
        aio.write_off(g2)
