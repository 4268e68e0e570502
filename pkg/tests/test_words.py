import random

import pytest

from bassforge.finite import generated
from bassforge.textformat import load
from bassforge.words import (WordEngine, WordError, centralizer_infinite, hyperbolic_word, normalizer_infinite,
                             replay_hyperbolic)

from oracles import TreeOracle


@pytest.fixture
def pett(fixture_path):
    return load(fixture_path("pett_gamma.gog"))


@pytest.fixture
def free(fixture_path):
    return load(fixture_path("z3_free_z5.gog"))


def test_pinch_cancels(pett):
    E = WordEngine(pett)
    w = E.word("a", "e1", "s", "~e1")
    nf = E.normal_form(w)
    assert nf.letters == () and E.vops["a"].name(nf.last) == "r2"
    assert E.is_trivial(E.concat(w, E.inverse(w)))


def test_non_pinch_survives(pett):
    E = WordEngine(pett)
    w = E.word("a", "e1", "r", "~e1")
    assert len(E.normal_form(w)) == 2
    assert E.format(E.normal_form(w)).count("e1") == 2


def test_normal_form_is_idempotent_and_respects_inverse(pett):
    E = WordEngine(pett)
    rng = random.Random(1)
    for _ in range(50):
        items, v = [], "a"
        for _ in range(rng.randint(0, 6)):
            G = pett.vertex(v).group
            items.append(rng.randrange(G.order))
            e = rng.choice(E.out_edges[v])
            items.append(e)
            v = E.terminus[e]
        w = E.word("a", *items)
        nf = E.normal_form(w)
        assert E.normal_form(nf) == nf
        assert E.is_trivial(E.multiply(w, E.inverse(w)))


def test_letters_must_compose(pett):
    E = WordEngine(pett)
    with pytest.raises(WordError):
        E.word("a", "e2")
    with pytest.raises(WordError):
        E.is_elliptic(E.word("a", "e1"))


def test_ellipticity(free):
    E = WordEngine(free)
    a = E.word("x", 1)
    assert E.is_elliptic(a)
    conj = E.word("x", "e", 1, "~e")
    assert E.is_elliptic(conj)
    prod = E.word("x", 1, "e", 1, "~e")
    ell = E.is_elliptic(prod)
    assert not ell and ell.translation_length == 2


def test_ellipticity_agrees_with_the_tree(free):
    E = WordEngine(free)
    T = TreeOracle(free)
    for items in [(1,), (1, "e", 2, "~e"), ("e", 2, "~e"), (1, "e", 1, "~e", 2), ("e", 3, "~e", 1, "e", 2, "~e")]:
        w = E.word("x", *items)
        raw = [x for pair in w.letters for x in pair] + [w.last]
        assert bool(E.is_elliptic(w)) == (T.fixed_vertex(raw, "x") is not None)


def test_ball_sizes(free):
    E = WordEngine(free)
    # the tree is (3,5)-biregular
    assert len(E.ball("x", 1)) == 1 + 3
    assert len(E.ball("x", 2)) == 1 + 3 + 3 * 4


def test_centralizers_in_a_free_product(free):
    Z3 = free.vertex("x").group
    A = generated(Z3, [1])
    assert centralizer_infinite(free, "x", A).is_finite
    assert hyperbolic_word(free, "x") is not None


def test_pett_normalizer_is_infinite(pett):
    D4 = pett.vertex("a").group
    A = generated(D4, [D4.element("r2")])
    v = normalizer_infinite(pett, "a", A)
    assert v.is_infinite and replay_hyperbolic(v.certificate)
    w = v.certificate.data["word"]
    v.certificate.data["word"] = WordEngine(pett).identity("a")
    assert not replay_hyperbolic(v.certificate)
    v.certificate.data["word"] = w
