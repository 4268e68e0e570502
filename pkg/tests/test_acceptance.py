"""Acceptance criteria, one test each; every test records a pass/fail line.

Run ``python3 tests/test_acceptance.py`` to get just the summary lines.
"""

from __future__ import annotations

import os
import random
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from bassforge import criteria  # noqa: E402
from bassforge.certify import replay, replay_verdict  # noqa: E402
from bassforge.cylinders import collapsed_tree_of_cylinders, tree_of_cylinders  # noqa: E402
from bassforge.finite import generated  # noqa: E402
from bassforge.gog import collapse  # noqa: E402
from bassforge.iso import isomorphic  # noqa: E402
from bassforge.moves import enumerate_deformation_space, reduce, type_multisets  # noqa: E402
from bassforge.textformat import load  # noqa: E402
from bassforge.twists import Relation, decide, decide_twists, innerness_report, rank_if_toral, \
    relation_is_inner, twist_presentation  # noqa: E402
from bassforge.words import GogWord, WordEngine, normalizer_subgraph  # noqa: E402

import acceptance_log  # noqa: E402
import corpus  # noqa: E402
import randgraphs  # noqa: E402
from oracles import TreeOracle, toral_matrix_free_rank, twist_order_bruteforce  # noqa: E402

FIX = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture(name):
    return load(os.path.join(FIX, name))


def _check(number, title, body):
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failure of the criterion
        acceptance_log.record(number, title, False, f"{type(exc).__name__}: {exc}")
        raise
    acceptance_log.record(number, title, ok, detail)
    assert ok, detail


# 1 --------------------------------------------------------------------------------------

def _pett():
    start = time.perf_counter()
    gamma = fixture("pett_gamma.gog")
    a = decide(gamma)
    b = [decide(collapse(gamma, [e.name])) for e in gamma.edges]
    delta = tree_of_cylinders(gamma)
    c = isomorphic(delta, fixture("pett_delta.gog"))
    d = decide(delta)
    e = criteria.out_infinite_virtually_free(gamma)
    elapsed = time.perf_counter() - start
    checks = {
        "a": a.is_finite,
        "b": len(b) == 2 and all(v.is_finite for v in b),
        "c": c,
        "d": d.is_infinite and d.certificate.kind == "lem-twist0" and replay(d.certificate),
        "e": e.is_infinite and replay_verdict(e),
        "time": elapsed < 1.0,
    }
    failed = [k for k, ok in checks.items() if not ok]
    return not failed, f"{elapsed:.3f}s" + (f", failed {failed}" if failed else "")


def test_criterion_1_pett():
    _check(1, "Pett reproduction", _pett)


# 2 --------------------------------------------------------------------------------------

def _bs24():
    start = time.perf_counter()
    tp = twist_presentation(fixture("bs24.gog"))
    v = decide_twists(tp)
    report = innerness_report(tp)
    rel = tp.edge_relations[0]
    flipped = Relation("edge", rel.where, {"t": rel.components["t"], "~t": (-rel.components["~t"][0],)})
    elapsed = time.perf_counter() - start
    ok = (v.is_finite and v.order == 2 and v.data.get("group") == "Z/2"
          and report and all(inner for _, inner in report)
          and not relation_is_inner(tp, flipped) and elapsed < 1.0)
    return ok, f"order {v.order}, {len(report)} relations inner, {elapsed:.3f}s"


def test_criterion_2_bs24():
    _check(2, "BS(2,4) twists finite abelian", _bs24)


# 3 --------------------------------------------------------------------------------------

def _toral():
    rng = random.Random(3)
    start = time.perf_counter()
    mismatches = []
    for i in range(200):
        g = randgraphs.random_toral_graph(rng)
        r = rank_if_toral(g)
        if r != toral_matrix_free_rank(g):
            mismatches.append(i)
        v = decide(g)
        if (v.rank or 0) != r:
            mismatches.append(("decide", i))
    elapsed = time.perf_counter() - start
    return not mismatches and elapsed < 10, f"200 graphs, {elapsed:.2f}s, mismatches {mismatches[:5]}"


def test_criterion_3_toral_rank():
    _check(3, "toral rank formula", _toral)


# 4 --------------------------------------------------------------------------------------

def _idempotence_corpus():
    graphs = []
    for name, g in corpus.fixture_graphs():
        if g.is_finite_groups() and g.edges and len({e.group.order for e in g.edges}) == 1:
            graphs.append((name, g))
    rng = random.Random(4)
    nonab = [G for G in randgraphs.VERTEX16 if not G.is_abelian()]
    made = 0
    nontrivial = 0
    while made < 100:
        k = rng.choice([1, 2, 2, 3, 4])
        pool = nonab if made % 2 else randgraphs.VERTEX16
        g = randgraphs.random_finite_graph(rng, pool=pool, max_edges=4, edge_order=k, min_edges=2)
        tc = collapsed_tree_of_cylinders(g)
        if not tc.edges and nontrivial < 60 and made >= 40:
            continue  # keep most of the sample away from trivial trees
        nontrivial += bool(tc.edges)
        graphs.append((f"random {made}", g))
        made += 1
    return graphs, nontrivial


def _idempotence():
    start = time.perf_counter()
    graphs, nontrivial = _idempotence_corpus()
    bad = []
    for label, g in graphs:
        once = collapsed_tree_of_cylinders(g)
        twice = collapsed_tree_of_cylinders(once)
        if not isomorphic(once, twice):
            bad.append(label)
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 30, (f"{len(graphs)} graphs ({nontrivial} random with nontrivial trees), "
                                      f"{elapsed:.2f}s, failures {bad[:5]}")


def test_criterion_4_idempotence():
    _check(4, "collapsed tree of cylinders is idempotent", _idempotence)


# 5 --------------------------------------------------------------------------------------

def _deformation():
    rng = random.Random(5)
    seeds = [(name, reduce(g)) for name, g in corpus.fixture_graphs()
             if g.is_finite_groups() and g.edges and len({e.group.order for e in g.edges}) == 1]
    for i in range(30):
        seeds.append((f"random {i}", reduce(randgraphs.random_finite_graph(rng, max_edges=3,
                                                                           edge_order=rng.choice([1, 2, 2, 3])))))
    bad = []
    sizes = []
    for label, g in seeds:
        census = enumerate_deformation_space(g)
        if not census.exhaustive:
            continue
        sizes.append(len(census))
        trees = [tree_of_cylinders(m) for m in census.members]
        types = [type_multisets(m) for m in census.members]
        if not all(isomorphic(trees[0], t) for t in trees[1:]) or any(t != types[0] for t in types[1:]):
            bad.append(label)
    return not bad, f"{len(sizes)} exhaustive censuses, {sum(sizes)} members, failures {bad[:5]}"


def test_criterion_5_deformation_invariance():
    _check(5, "deformation invariance of trees of cylinders", _deformation)


# 6 --------------------------------------------------------------------------------------

def random_loop(rng, orc: TreeOracle, gamma, start, max_len=8):
    """A loop at ``start`` of syllable length <= ``max_len`` as an oracle word."""
    G = gamma.vertex(start).group
    if rng.random() < 0.5:
        # conjugate of a vertex element: p·a·p⁻¹ with |p| <= max_len / 2
        p = [rng.randrange(G.order)]
        v = start
        for _ in range(rng.randint(0, max_len // 2)):
            e = rng.choice(orc.out[v])
            v = orc.ends[e][1]
            p += [e, rng.randrange(gamma.vertex(v).group.order)]
        p[-1] = orc.groups[v].mul(p[-1], rng.randrange(gamma.vertex(v).group.order))
        return orc.concat(p, orc._inv_path(p[:-1] + [orc.groups[v].identity], start), v)
    while True:
        w = [rng.randrange(G.order)]
        v = start
        for _ in range(rng.randint(1, max_len)):
            e = rng.choice(orc.out[v])
            v = orc.ends[e][1]
            w += [e, rng.randrange(gamma.vertex(v).group.order)]
        if v == start:
            return w


def _as_gogword(w, start):
    return GogWord(start, tuple((w[i], w[i + 1]) for i in range(0, len(w) - 1, 2)), w[-1])


def _normal_forms():
    rng = random.Random(6)
    start_time = time.perf_counter()
    words = 0
    elliptic = 0
    mism = []
    normalizers = 0
    nmism = []
    while words < 1000:
        g = randgraphs.random_finite_graph(rng, pool=randgraphs.VERTEX24, max_edges=3)
        engine, orc = WordEngine(g), TreeOracle(g)
        start = g.vertices[0].name
        for _ in range(25):
            w = random_loop(rng, orc, g, start)
            ours = bool(engine.is_elliptic(_as_gogword(w, start)))
            brute = orc.fixed_vertex(w, start, radius=6) is not None
            words += 1
            elliptic += brute
            if ours != brute:
                mism.append(w)
        G = g.vertex(start).group
        subs = [generated(G, [x]) for x in rng.sample(range(G.order), min(3, G.order))]
        subs += [oe.inclusion.hom.image() for oe in g.incident(start)]
        for A in subs:
            finite = normalizer_subgraph(g, start, A).is_finite()
            reach = orc.fixed_reach(list(A.elements), start, radius=6)
            normalizers += 1
            if finite != (reach < 6):
                nmism.append((start, A.elements))
    elapsed = time.perf_counter() - start_time
    ok = not mism and not nmism and elapsed < 60
    return ok, (f"{words} words ({elliptic} elliptic), {normalizers} normalizers, {elapsed:.2f}s, "
                f"mismatches {len(mism)}/{len(nmism)}")


def test_criterion_6_normal_form_oracle():
    _check(6, "normal forms agree with tree-ball search", _normal_forms)


# 7 --------------------------------------------------------------------------------------

def _twist_orders():
    rng = random.Random(7)
    checked = 0
    skipped = 0
    bad = []
    while checked < 60:
        g = randgraphs.random_finite_graph(rng, max_edges=3)
        brute = twist_order_bruteforce(g, max_order=512)
        if brute is None:
            skipped += 1
            continue
        v = decide(g)
        checked += 1
        if not (v.is_finite and v.order == brute):
            bad.append((v.verdict, v.order, brute))
    return not bad, f"{checked} graphs (skipped {skipped} with products over 512), failures {bad[:5]}"


def test_criterion_7_twist_orders():
    _check(7, "twist orders match brute-force quotients", _twist_orders)


# 8 --------------------------------------------------------------------------------------

EXPECTED = [
    ("rht_rigid_finite_index.gog", criteria.rht_check, "Finite", "star-with-finite-index-ends"),
    ("rht_qh_punctured_torus.gog", criteria.rht_check, "Infinite", "central-surface-not-exceptional"),
    ("rht_infinite_index.gog", criteria.rht_check, "Infinite", "terminal-edge-infinite-index"),
    ("freep_f2_z.gog", criteria.freep_check, "Infinite", "nonabelian-free-factor"),
    ("freep_z_z.gog", criteria.freep_check, "Infinite", "abelian-free-factor-infinite-index"),
    ("freep_z2_z2.gog", criteria.freep_check, "Finite", "abelian-free-factors-finite-index"),
]


def _checkers():
    bad = []
    for name, fn, verdict, clause in EXPECTED:
        v = fn(fixture(name))
        if v.verdict != verdict or v.data.get("clause") != clause or not replay_verdict(v):
            bad.append((name, v.verdict, v.data.get("clause")))
    return not bad, f"{len(EXPECTED)} fixtures, failures {bad}"


def test_criterion_8_checkers():
    _check(8, "criterion checkers on annotated fixtures", _checkers)


# 9 --------------------------------------------------------------------------------------

def _soundness():
    vs = corpus.verdicts()
    infinite = [(label, v) for label, v in vs if v.is_infinite]
    bad = [label for label, v in infinite if not replay_verdict(v)]
    kinds = sorted({v.certificate.kind for _, v in infinite if v.certificate is not None})
    return bool(infinite) and not bad, f"{len(vs)} verdicts, {len(infinite)} Infinite, kinds {kinds}, failures {bad[:3]}"


def test_criterion_9_soundness():
    _check(9, "every Infinite verdict replays", _soundness)


if __name__ == "__main__":
    for fn in (test_criterion_1_pett, test_criterion_2_bs24, test_criterion_3_toral_rank,
               test_criterion_4_idempotence, test_criterion_5_deformation_invariance,
               test_criterion_6_normal_form_oracle, test_criterion_7_twist_orders, test_criterion_8_checkers,
               test_criterion_9_soundness):
        try:
            fn()
        except AssertionError:
            pass
