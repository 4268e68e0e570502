import random

import pytest

from bassforge.textformat import ParseError, load, parse, parse_diagnostics, serialize
from bassforge.iso import find_isomorphism

import randgraphs
from corpus import fixture_graphs


@pytest.mark.parametrize("name, gamma", list(fixture_graphs()), ids=lambda x: x if isinstance(x, str) else "")
def test_fixture_round_trip(name, gamma):
    text = serialize(gamma)
    again = parse(text)
    assert serialize(again) == text
    if gamma.is_finite_groups():
        assert find_isomorphism(gamma, again) is not None


def test_random_round_trip():
    rng = random.Random(5)
    for _ in range(15):
        g = randgraphs.random_finite_graph(rng)
        assert serialize(parse(serialize(g))) == serialize(g)
        t = randgraphs.random_toral_graph(rng)
        assert serialize(parse(serialize(t))) == serialize(t)


def test_broken_fixture_diagnostics(fixture_path):
    gamma, diags = parse_diagnostics(open(fixture_path("broken.gog")).read())
    assert gamma is None
    assert [(d.line, d.column) for d in diags] == [(4, 12), (5, 21)]
    assert "undeclared group 'D8'" in diags[0].message
    assert "homomorphism" in diags[1].message
    with pytest.raises(ParseError) as exc:
        load(fixture_path("broken.gog"))
    assert str(exc.value).startswith("4:12: ")


@pytest.mark.parametrize("text, where, fragment", [
    ("vertex a : Q\n", (1, 12), "undeclared group"),
    ("group C = cyclic(2)\nvertex a : C\n$", (3, 1), "unexpected character"),
    ("group C = cyclic(2)\nvertex a : C\nedge e : C, a -> a, left = [g], right = [g, g]\n", (3, 33), "generator images"),
    ("", (1, 1), "no vertices"),
])
def test_diagnostics_point_at_the_problem(text, where, fragment):
    _, diags = parse_diagnostics(text)
    assert (diags[0].line, diags[0].column) == where
    assert fragment in diags[0].message


def test_names_that_need_quoting():
    text = ('group C = cyclic(2)\nvertex "odd name" : C\nvertex none2 : C\n'
            'edge "e 1" : C, "odd name" -> none2, left = [g], right = [g]\n')
    g = parse(text)
    assert [v.name for v in g.vertices] == ["odd name", "none2"]
    assert serialize(g) == text
