import pytest
from hypothesis import given, settings, strategies as st

from bassforge.finite import (GroupError, GroupHom, are_isomorphic, center, centralizer, conjugate_subgroups, cyclic,
                              dihedral, direct_product, from_table, generated, identify, isomorphisms,
                              left_cosets, normal_closure, normalizer, quotient_by_normal_closure, subgroup_as_group,
                              subgroups, transporter_into, trivial, trivial_subgroup, whole)

SMALL = [cyclic(1), cyclic(2), cyclic(6), dihedral(3), dihedral(4), dihedral(6),
         direct_product([cyclic(2), cyclic(2)])]


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_tables_satisfy_the_group_axioms(G):
    assert G.audit() == []


def test_dihedral_names_and_relations():
    D4 = dihedral(4)
    r, s = D4.element("r"), D4.element("s")
    assert D4.order == 8
    assert D4.element_order(r) == 4 and D4.element_order(s) == 2
    assert D4.mul(D4.mul(s, r), s) == D4.inv(r)
    assert D4.names[D4.power(r, 2)] == "r2"


def test_centers():
    assert len(center(dihedral(3))) == 1
    assert [dihedral(4).names[x] for x in center(dihedral(4)).elements] == ["e", "r2"]
    assert len(center(cyclic(5))) == 5


def test_subgroup_counts_match_known_lattices():
    assert len(subgroups(dihedral(3))) == 6
    assert len(subgroups(dihedral(4))) == 10
    assert len(subgroups(cyclic(12))) == 6
    assert len(subgroups(direct_product([cyclic(2), cyclic(2)]))) == 5


def test_normalizer_and_centralizer_of_a_reflection():
    D4 = dihedral(4)
    S = generated(D4, [D4.element("s")])
    assert len(normalizer(D4, S)) == 4
    assert len(centralizer(D4, S)) == 4
    S3 = dihedral(3)
    T = generated(S3, [S3.element("s")])
    assert normalizer(S3, T) == T


def test_conjugacy_and_transporter():
    D4 = dihedral(4)
    a = generated(D4, [D4.element("s")])
    b = generated(D4, [D4.element("r2s")])
    c = generated(D4, [D4.element("rs")])
    g = conjugate_subgroups(D4, a, b)
    assert g is not None and a.conjugate(g) == b
    assert conjugate_subgroups(D4, a, c) is None
    assert transporter_into(D4, a, c) == []


def test_cosets_and_quotients():
    D4 = dihedral(4)
    Z = center(D4)
    assert len(left_cosets(D4, Z)) == 4
    Q, proj = quotient_by_normal_closure(D4, [D4.element("r2")])
    assert Q.order == 4 and Q.is_abelian()
    assert proj.is_homomorphism()
    Q2, _ = quotient_by_normal_closure(D4, [D4.element("s")])
    assert Q2.order == 2  # the normal closure of a reflection has index 2
    assert len(normal_closure(dihedral(3), [dihedral(3).element("s")])) == 6


def test_homomorphisms():
    C = cyclic(2)
    D4 = dihedral(4)
    h = GroupHom.from_generators(C, D4, [D4.element("r2")])
    assert h.is_injective() and h.is_homomorphism()
    assert h.preimage(D4.element("r2")) == 1
    with pytest.raises(GroupError):
        GroupHom.from_generators(cyclic(3), D4, [D4.element("s")])


def test_isomorphisms_count_automorphisms():
    assert len(isomorphisms(dihedral(4), dihedral(4))) == 8
    assert len(isomorphisms(dihedral(3), dihedral(3))) == 6
    assert len(isomorphisms(cyclic(5), cyclic(5))) == 4
    assert not are_isomorphic(cyclic(4), direct_product([cyclic(2), cyclic(2)]))
    assert are_isomorphic(dihedral(2), direct_product([cyclic(2), cyclic(2)]))


def test_subgroup_as_group_recognises_standard_shapes():
    D6 = dihedral(6)
    H = generated(D6, [D6.element("r2"), D6.element("s")])
    K, incl = subgroup_as_group(H)
    assert K.order == 6 and incl.is_injective() and incl.image() == H
    assert identify(D6, H)[0].constructor == dihedral(3).constructor


def test_from_table_rejects_non_groups():
    with pytest.raises(GroupError):
        from_table([[0, 1], [1, 1]])
    assert from_table([[0, 1], [1, 0]]).order == 2
    assert trivial().order == 1
    assert whole(cyclic(3)) != trivial_subgroup(cyclic(3))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_product_and_inverse_laws(G, data):
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == G.identity
    assert G.power(a, G.element_order(a)) == G.identity


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL[1:]), st.data())
def test_centralizers_are_brute_force_centralizers(G, data):
    gens = data.draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=2))
    H = generated(G, gens)
    brute = [g for g in range(G.order) if all(G.mul(g, h) == G.mul(h, g) for h in H.elements)]
    assert sorted(centralizer(G, H).elements) == brute
