from fractions import Fraction

import pytest

from bassforge.finite import GroupHom, cyclic, dihedral
from bassforge.gog import (Composite, Edge, GogError, GraphOfGroups, Inclusion, JsjAnnotation, Opaque,
                           OrbifoldDescriptor, Vertex, collapse, collapse_all_but, flatten, reduce_tracked,
                           reducible_edges, tidy, validate)
from bassforge.textformat import load

C = cyclic(2, "C")
D4 = dihedral(4, "D4")
D6 = dihedral(3, "D6")


def inc(G, name):
    return Inclusion(GroupHom.from_generators(C, G, [G.element(name)]))


def pett():
    return GraphOfGroups((Vertex("a", D4), Vertex("b", D6), Vertex("c", D4)),
                         (Edge("e1", C, "a", "b", inc(D4, "r2"), inc(D6, "s")),
                          Edge("e2", C, "b", "c", inc(D6, "rs"), inc(D4, "r2"))))


def test_pett_fixture_matches_the_hand_built_graph(fixture_path):
    g = load(fixture_path("pett_gamma.gog"))
    assert validate(g) == []
    assert [v.group.order for v in g.vertices] == [8, 6, 8]
    assert g.euler_characteristic() == Fraction(1, 8) + Fraction(1, 6) + Fraction(1, 8) - 1
    assert g.betti_number() == 0


def test_oriented_edges_and_incidence():
    g = pett()
    oe = g.oriented("~e1")
    assert (oe.origin, oe.terminus) == ("b", "a")
    assert oe.inclusion.hom.target is D6
    assert oe.bar.name == "e1"
    assert sorted(x.name for x in g.incident("b")) == ["e2", "~e1"]


def test_validation_reports_problems():
    bad_hom = Inclusion(GroupHom(C, D4, [0, 0]))
    g = GraphOfGroups((Vertex("a", D4),), (Edge("e", C, "a", "b", bad_hom, bad_hom),))
    problems = validate(g)
    assert any("unknown vertex b" in p for p in problems)
    g2 = GraphOfGroups((Vertex("a", D4), Vertex("b", D4)), ())
    assert validate(g2) == ["underlying graph is not connected"]
    g3 = GraphOfGroups((Vertex("x", Opaque("R")),))
    assert validate(g3) == ["vertex x: opaque vertex needs an annotation"]
    ann = JsjAnnotation("qh", None, 0)
    g4 = GraphOfGroups((Vertex("x", Opaque("S"), ann),))
    assert len(validate(g4)) == 2


def test_collapse_builds_composites():
    g = collapse(pett(), ["e1"])
    assert [v.name for v in g.vertices] == ["a+b", "c"]
    comp = g.vertex("a+b").group
    assert isinstance(comp, Composite) and [e.name for e in comp.graph.edges] == ["e1"]
    assert g.edge("e2").left.at == ("b",)
    assert collapse_all_but(pett(), "e2").edges[0].name == "e2"
    with pytest.raises(GogError):
        collapse(pett(), ["nope"])


def test_flatten_and_tidy_round_trip():
    g = collapse(pett(), ["e1"])
    flat = flatten(g)
    assert sorted(v.name for v in flat.vertices) == ["a", "b", "c"] or len(flat.vertices) == 3
    assert len(flat.edges) == 2
    assert validate(tidy(g)) == []


def test_reduction_absorbs_surjective_edges():
    S3 = dihedral(3)
    idS3 = Inclusion(GroupHom.identity_map(S3))
    Z2 = cyclic(2)
    g = GraphOfGroups((Vertex("x", S3), Vertex("y", S3), Vertex("z", Z2)),
                      (Edge("e", S3, "x", "y", idS3, idS3),
                       Edge("f", Z2, "y", "z", Inclusion(GroupHom.from_generators(Z2, S3, [S3.element("s")])),
                            Inclusion(GroupHom.identity_map(Z2)))))
    assert len(reducible_edges(g)) == 2
    red, where = reduce_tracked(g)
    assert len(red.vertices) == 1 and not red.edges
    assert {w for w, _ in where.values()} == {red.vertices[0].name}


def test_orbifold_descriptor():
    pants = OrbifoldDescriptor(True, 0, 3)
    assert pants.euler_characteristic() == -1 and pants.is_hyperbolic() and pants.is_surface()
    torus = OrbifoldDescriptor(True, 1, 1)
    assert torus.euler_characteristic() == -1
    cone = OrbifoldDescriptor(True, 0, 1, (2, 3))
    assert cone.euler_characteristic() == Fraction(-1, 6) and not cone.is_surface()
    assert "non-orientable" in OrbifoldDescriptor(False, 1, 2).describe()
