import random

import pytest

from bassforge.finite import GroupHom, cyclic, dihedral
from bassforge.gog import Edge, GraphOfGroups, Inclusion, Vertex
from bassforge.iso import find_isomorphism
from bassforge.moves import (MoveError, census_bound, enumerate_deformation_space, is_reduced, legal_slides,
                             reduce, replay_slides, slide, slide_conjugators, type_multisets)
from bassforge.textformat import load

import randgraphs


@pytest.fixture
def pett(fixture_path):
    return load(fixture_path("pett_gamma.gog"))


def test_slide_moves_an_endpoint(pett):
    assert slide_conjugators(pett, "e2", "~e1") == [1, 5]
    new = slide(pett, "e2", "~e1", 1)
    assert new.edge("e2").origin == "a"
    assert new.edge("e2").terminus == "c"
    assert type_multisets(new) == type_multisets(pett)
    assert find_isomorphism(new, pett) is None


def test_illegal_slides(pett):
    with pytest.raises(MoveError):
        slide(pett, "e1", "e1")
    with pytest.raises(MoveError):
        slide(pett, "e1", "e2")
    with pytest.raises(MoveError):
        slide(pett, "e2", "~e1", 0)


def test_pett_census(pett):
    c = enumerate_deformation_space(pett)
    assert len(c) == 2 and c.exhaustive
    assert c.token() == {"census_size": 2, "exhaustive": True, "bound": 10_000}
    for j in range(len(c)):
        assert find_isomorphism(replay_slides(pett, c.path_to(j)), c.members[j]) is not None


def test_census_bound(pett, monkeypatch):
    assert not enumerate_deformation_space(pett, bound=1).exhaustive
    monkeypatch.setenv("BASSFORGE_CENSUS_BOUND", "1")
    assert census_bound() == 1
    assert not enumerate_deformation_space(pett).exhaustive
    assert census_bound(7) == 7


def test_reduction():
    S3 = dihedral(3)
    Z2 = cyclic(2)
    g = GraphOfGroups((Vertex("x", S3), Vertex("y", Z2)),
                      (Edge("e", Z2, "x", "y", Inclusion(GroupHom.from_generators(Z2, S3, [S3.element("s")])),
                            Inclusion(GroupHom.identity_map(Z2))),))
    assert is_reduced(g) == (False, ["~e"])
    assert len(reduce(g).vertices) == 1


def test_slides_preserve_type_multisets():
    rng = random.Random(4)
    for _ in range(20):
        g = randgraphs.random_finite_graph(rng, max_edges=3)
        for e, f, h in legal_slides(g)[:4]:
            assert type_multisets(slide(g, e, f, h)) == type_multisets(g)
