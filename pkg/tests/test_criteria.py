import pytest

from bassforge import criteria as C
from bassforge.certify import replay, replay_verdict
from bassforge.gog import OrbifoldDescriptor
from bassforge.textformat import load, parse

FREE_TREE = """torsion = free
group T = free_abelian(0)
group Z = free_abelian(1)
vertex x : Z
vertex y : Z
vertex z : Z
edge e : T, x -> y, left = [], right = []
edge f : T, y -> z, left = [], right = []
"""


def test_gl_table():
    finite = {(r, n) for r in range(4) for n in range(4) if C.gl_finite(r, n)}
    assert finite == {(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)}


@pytest.mark.parametrize("orb, expected", [
    (OrbifoldDescriptor(True, 0, 3), "Finite"),
    (OrbifoldDescriptor(False, 1, 2), "Finite"),
    (OrbifoldDescriptor(True, 1, 1), "Infinite"),
    (OrbifoldDescriptor(True, 0, 4), "Infinite"),
    (OrbifoldDescriptor(True, 0, 1, (2, 3)), "Unknown"),
])
def test_mapping_class_groups(orb, expected):
    assert C.mcg_classification(orb) == expected


def test_parabolic_clause(fixture_path):
    v = C.cor_outu_check(load(fixture_path("coru_parabolic_rank1.gog")))
    assert v.is_infinite and v.certificate.kind == "parabolic-automorphisms"
    assert v.certificate.summary["factor"] == "GL_{1,1}(Z)" and replay(v.certificate)


def test_both_clauses_refuted(fixture_path):
    v = C.cor_outu_check(load(fixture_path("coru_refuted.gog")))
    assert v.is_unknown and v.data["clause"] == "both-refuted"
    assert "exhaustiveness of splittings not asserted" in v.assumptions


def test_structure_report(fixture_path):
    rep = C.structure_report(load(fixture_path("struct_gl12.gog")))
    out = rep.to_json()
    assert out["verdict"] == "Infinite"
    assert out["parabolic_factors"] == [{"vertex": "p", "factor": "GL_{1,2}(Z)", "classification": "Infinite"}]
    assert out["twist_part"]["verdict"] == "Finite"
    rep = C.structure_report(load(fixture_path("rht_qh_punctured_torus.gog")))
    assert rep.qh_factors[0][2] == "Infinite"


def test_free_product_twists():
    v = C.freep_check(parse(FREE_TREE))
    assert v.is_infinite and v.certificate.kind == "free-product-twists" and replay_verdict(v)


def test_freep_needs_torsion_annotation():
    with pytest.raises(C.CriteriaError, match="torsion"):
        C.freep_check(parse(FREE_TREE.replace("torsion = free\n", "")))


def test_freep_rejects_finite_factors(fixture_path):
    with pytest.raises(C.CriteriaError, match="torsion present"):
        text = open(fixture_path("z3_free_z5.gog")).read()
        C.freep_check(parse(text.replace("class = finite", "torsion = free")))


def test_freep_rejects_nontrivial_edges(fixture_path):
    with pytest.raises(C.CriteriaError, match="trivial edge groups"):
        C.freep_check(load(fixture_path("struct_gl12.gog")))


def test_rht_needs_indecomposability(fixture_path):
    v = C.rht_check(load(fixture_path("coru_refuted.gog")))
    assert v.is_unknown and v.data["clause"] == "annotation-missing"


@pytest.mark.parametrize("name, verdict", [
    ("pett_gamma.gog", "Infinite"),
    ("two_loops_z2.gog", "Infinite"),
    ("z2_free_z3.gog", "Finite"),
    ("z3_free_z5.gog", "Finite"),
    ("one_loop_z2.gog", "Finite"),
])
def test_out_of_virtually_free_groups(fixture_path, name, verdict):
    v = C.out_infinite_virtually_free(load(fixture_path(name)))
    assert v.verdict == verdict and replay_verdict(v)
    if v.is_finite:
        assert C.COMPLETENESS in v.assumptions
