import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apa.game_model import (
    GameGraph,
    GameParseError,
    graph_from_json,
    graph_to_json,
    parse_pgsolver,
    restrict_priorities,
    serialize_pgsolver,
)
from apa.genbench import GenSpec, generate

import suite


@pytest.mark.parametrize("name", ["trap", "return", "triangle", "frontier", "selfloop_choice", "forced", "seven"])
def test_game_files_round_trip(name):
    G = suite.load(name)
    assert parse_pgsolver(serialize_pgsolver(G)) == G
    assert graph_from_json(graph_to_json(G)) == G


def test_parse_names_owner_priority():
    G = parse_pgsolver('parity 1;\n0 3 1 0,1 "a";\n1 0 0 0;\n')
    assert G.n == 2 and G.m == 3
    assert G.label(0) == "a" and G.label(1) == "v1"
    assert G.vertex_id("a") == 0 and G.vertex_id("1") == 1
    assert G.owner.tolist() == [1, 0]
    assert G.priority.tolist() == [3, 0]
    assert G.succ(0) == (0, 1)


def test_parse_accepts_start_comments_and_shared_lines():
    G = parse_pgsolver("parity 1; start 0; # comment\n0 0 0 1; 1 1 1 0;")
    assert G.edges() == [(0, 1), (1, 0)]


def test_undeclared_ids_are_dead():
    G = parse_pgsolver("parity 2;\n0 0 0 2;\n2 1 1 0;\n")
    assert G.alive.tolist() == [True, False, True]
    assert G.vertices() == [0, 2]
    with pytest.raises(ValueError):
        G.vertex_id("1")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("0 0 0 0;", "header"),
        ("parity 0;\n0 0 0;\n", "dead end"),
        ("parity 0;\n0 0 2 0;\n", "owner"),
        ("parity 1;\n0 0 0 1;\n", "undeclared successor"),
        ("parity 0;\n0 0 0 0;\n0 1 0 0;\n", "duplicate vertex"),
        ("parity 0;\n0 0 0 0,0;\n", "duplicate successor"),
        ("parity 0;\n1 0 0 1;\n", "exceeds"),
        ("parity 0;\n0 0 0 0\n", "malformed"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(GameParseError, match=fragment):
        parse_pgsolver(text)


def test_parse_error_reports_line():
    with pytest.raises(GameParseError) as info:
        parse_pgsolver("parity 1;\n0 0 0 1;\n1 0 0 0,0;\n")
    assert info.value.line == 3


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        GameGraph.build([0], [0], [[1]])
    with pytest.raises(ValueError):
        GameGraph.build([2], [0], [[0]])
    with pytest.raises(ValueError):
        GameGraph.build([0], [-1], [[0]])
    with pytest.raises(ValueError):
        GameGraph.build([0, 0], [0, 0], [[1], [0]], alive=[True, False])


def test_restrict_keeps_global_ids():
    G = suite.load("seven")
    H = G.restrict({0, 1, 2})
    assert H.n == G.n
    assert H.vertices() == [0, 1, 2]
    assert all(u in {0, 1, 2} and v in {0, 1, 2} for u, v in H.edges())
    assert set(H.edges()) == {e for e in G.edges() if set(e) <= {0, 1, 2}}


def test_restrict_priorities():
    assert restrict_priorities([5, 6, 7], {0, 2}) == {0: 5, 2: 7}
    assert restrict_priorities({0: 1, 3: 4}, {0, 1, 3}) == {0: 1, 3: 4}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10_000), st.sets(st.integers(0, 11)))
def test_restrict_properties(n, seed, keep):
    G = generate(GenSpec(n=n, seed=seed))
    keep = {v for v in keep if v < n}
    H = G.restrict(keep)
    assert set(H.vertices()) == keep
    assert set(H.edges()) == {(u, v) for u, v in G.edges() if u in keep and v in keep}
    assert parse_pgsolver(serialize_pgsolver(G)) == G
    counts = np.diff(H.indptr)
    assert counts.sum() == H.m


def test_with_priority():
    G = suite.load("trap")
    H = G.with_priority([4, 5])
    assert H.priority.tolist() == [4, 5]
    assert H.edges() == G.edges()
    with pytest.raises(ValueError):
        G.with_priority([1])
