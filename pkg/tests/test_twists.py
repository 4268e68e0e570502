import random

import pytest

from bassforge.abelian import FgAbelianGroup
from bassforge.certify import replay, replay_verdict
from bassforge.finite import GroupHom, cyclic
from bassforge.gog import AbelianHom, Edge, GraphOfGroups, Inclusion, JsjAnnotation, Opaque, Vertex, collapse
from bassforge.textformat import load
from bassforge.twists import (TwistError, composite_center, decide, infinite_order_twist, innerness_report,
                              propagate_infinite, rank_if_toral, twist_presentation)
from bassforge.verdict import finite

import randgraphs
from oracles import toral_matrix_free_rank, twist_order_bruteforce


def test_pett_values(fixture_path):
    gamma = load(fixture_path("pett_gamma.gog"))
    v = decide(gamma)
    assert v.is_finite and v.order == 16 == twist_order_bruteforce(gamma)
    delta = decide(load(fixture_path("pett_delta.gog")))
    assert delta.is_infinite and delta.certificate.kind == "lem-twist0"
    assert replay(delta.certificate)


def test_relations_are_inner(fixture_path):
    tp = twist_presentation(load(fixture_path("pett_gamma.gog")))
    report = innerness_report(tp)
    assert report and all(ok for _, ok in report)


def _loop_with_two_legs():
    Z2, Z4 = cyclic(2), cyclic(4)
    one = Inclusion(GroupHom.identity_map(Z2))
    up = Inclusion(GroupHom.from_generators(Z2, Z4, [2]))
    return GraphOfGroups((Vertex("v", Z2), Vertex("w", Z4), Vertex("u", Z4)),
                         (Edge("e", Z2, "v", "v", one, one), Edge("f", Z2, "v", "w", one, up),
                          Edge("g", Z2, "v", "u", one, up)))


def test_composite_center():
    g = _loop_with_two_legs()
    loop = collapse(g, ["e"]).vertex("v").group.graph
    info = composite_center(loop)
    assert not info.finite
    info = composite_center(GraphOfGroups((Vertex("w", cyclic(4)),)))
    assert info.finite and len(info.elements) == 4


def test_central_rank():
    v = decide(collapse(_loop_with_two_legs(), ["e"]))
    assert v.is_infinite and v.rank == 1 and v.certificate.kind == "central-rank"
    assert replay(v.certificate)


def test_toral_rank_matches_the_relation_matrix():
    rng = random.Random(11)
    for _ in range(25):
        g = randgraphs.random_toral_graph(rng)
        assert rank_if_toral(g) == toral_matrix_free_rank(g)


def test_toral_rank_needs_a_bipartite_splitting(fixture_path):
    with pytest.raises(TwistError):
        rank_if_toral(load(fixture_path("pett_gamma.gog")))


def _toral_edge(rank):
    A, K = FgAbelianGroup(rank), FgAbelianGroup(1)
    ann = JsjAnnotation("rigid", flags=(("center", "trivial"),))
    cols = ((1,) + (0,) * (rank - 1),)
    return GraphOfGroups((Vertex("a", A), Vertex("x", Opaque("R"), ann)),
                         (Edge("e", K, "x", "a", Inclusion(None), Inclusion(AbelianHom(K, A, cols))),))


def test_infinite_order_twist():
    g = _toral_edge(2)
    cert = infinite_order_twist(g, "e", (1,))
    assert cert.kind == "lemma-ti" and replay(cert)
    with pytest.raises(TwistError):
        infinite_order_twist(g, "e", (0,))
    with pytest.raises(TwistError, match="virtually cyclic"):
        infinite_order_twist(_toral_edge(1), "e", (1,))


def test_finite_edges_have_no_such_twist(fixture_path):
    with pytest.raises(TwistError):
        infinite_order_twist(load(fixture_path("pett_gamma.gog")), "e1", 1)


def test_propagation_to_a_larger_graph():
    g = collapse(_loop_with_two_legs(), ["e"])
    sub = GraphOfGroups(g.vertices, g.edges)
    v = propagate_infinite(g, sub, decide(sub))
    assert v.is_infinite and v.certificate.kind == "extension" and replay_verdict(v)
    assert propagate_infinite(g, sub, finite(1)).is_unknown
    Z = FgAbelianGroup(1)
    with pytest.raises(TwistError):
        propagate_infinite(g, GraphOfGroups((Vertex("zz", Z),)), decide(sub))
