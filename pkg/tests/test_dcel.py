import pytest

from approxvert.dcel import PlaneGraph, init_complete
from approxvert.errors import NotOnSameWalk, StructureError


def test_init_planar():
    g = init_complete(2)
    g.audit(expected_invalid=1)
    assert g.num_edges() == 3 and g.num_faces() == 2
    assert sorted(g.edge_kappa.values()) == [1, 2, 3]


def test_init_spatial():
    g = init_complete(3)
    g.audit(expected_invalid=0)
    assert g.num_edges() == 6 and g.num_faces() == 4
    assert sorted(f.kappa for f in g.faces.values()) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        init_complete(4)


def test_split_then_chord():
    g = init_complete(2)
    h = g.find_half_edge(1, 2)
    back = g.split_edge(h, 4)
    assert g.dest(h) == 4 and g.dest(back) == 2
    g.audit(expected_invalid=1)
    f = g.face[h]
    ha = g.find_half_edge(4, 2)
    hb = g.find_half_edge(3, 1)
    assert g.face[ha] == g.face[hb] == f
    g.insert_chord(ha, hb)
    assert g.num_faces() == 3
    g.audit(expected_invalid=1)


def test_chord_across_faces_rejected():
    g = init_complete(3)
    ha = g.find_half_edge(2, 3)
    hb = next(x for x in g.out[1] if g.face[x] != g.face[ha])
    with pytest.raises(NotOnSameWalk):
        g.insert_chord(ha, hb)


def test_delete_vertex_merges_faces():
    g = init_complete(3)
    g.delete_vertex(4)
    g.audit()
    assert sorted(g.vertices) == [1, 2, 3]
    assert g.num_faces() == 2 and g.num_edges() == 3


def test_isolated_vertex_keeps_euler():
    g = init_complete(2)
    g.add_vertex(9)
    g.audit()
    assert g.components() == 2
    with pytest.raises(StructureError):
        g.add_vertex(9)


def test_audit_catches_broken_links():
    g = init_complete(2)
    h = next(iter(g.origin))
    g.next[h] = h
    with pytest.raises(StructureError):
        g.audit()


def test_from_cycles_walks():
    g = PlaneGraph.from_cycles([1, 2, 3, 4], [[1, 2, 3, 4], [1, 4, 3, 2]])
    walks = [w for f in g.faces for w in g.bounding_walks(f)]
    assert sorted(len(w) for w in walks) == [4, 4]
    assert g.edge_set() == {(1, 2), (2, 3), (3, 4), (1, 4)}
