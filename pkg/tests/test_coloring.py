import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vdcolor.coloring import (Coloring, ColoringError, Move, apply_move, build_table, conflict_count_direct,
                              format_coloring, lemma2_best_colour, move_delta, parse_coloring,
                              random_coloring)
from vdcolor.graph import from_edges
from vdcolor.instances import complete, path


def naive_gamma(g, colours, k):
    return [[sum(1 for w in g.adjacency[v] if colours[w] == c) for c in range(k)] for v in range(g.n)]


@st.composite
def states(draw, max_n=15, max_k=5):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    colours = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    return from_edges(n, edges), colours, k


def test_random_coloring_k1_is_zero():
    s = random_coloring(path(7), 1, random.Random(3))
    assert s.colours == (0,) * 7


def test_random_coloring_uniform_and_deterministic():
    g = from_edges(10_000, [])
    s = random_coloring(g, 2, random.Random(11))
    ones = sum(s.colours)
    # binomial(10^4, 1/2): sd = 50
    assert abs(ones - 5000) <= 4 * 50
    assert random_coloring(g, 2, random.Random(11)) == s


def test_random_coloring_rejects_k0():
    with pytest.raises(ColoringError):
        random_coloring(path(3), 0, random.Random(0))


def test_coloring_rejects_out_of_range():
    with pytest.raises(ColoringError):
        Coloring((0, 2), 2)


def test_k3_monochrome_table():
    t = build_table(complete(3), [0, 0, 0], 3)
    assert [row[0] for row in t.gamma] == [2, 2, 2]
    assert t.conflict_count == 3
    assert t.conflicting == {0, 1, 2}


def test_path_tables():
    t = build_table(path(3), [0, 1, 0], 2)
    assert t.conflict_count == 0 and t.conflicting == set()
    assert build_table(path(3), [0, 0, 0], 2).conflict_count == 2


def test_length_mismatch():
    with pytest.raises(ColoringError):
        build_table(path(3), [0, 1], 2)


def test_direct_count_examples():
    assert conflict_count_direct(path(4), [0, 1, 0, 1]) == 0
    assert conflict_count_direct(complete(4), [0, 0, 0, 0]) == 6


def test_move_delta_examples():
    assert move_delta(build_table(complete(3), [0, 0, 0], 3), 0, 1) == -2
    assert move_delta(build_table(from_edges(2, []), [0, 0], 3), 1, 2) == 0
    assert move_delta(build_table(path(3), [0, 0, 0], 2), 1, 1) == -2


def test_same_colour_is_not_a_move():
    t = build_table(path(3), [0, 0, 0], 2)
    with pytest.raises(ColoringError):
        move_delta(t, 0, 0)
    with pytest.raises(ColoringError):
        apply_move(t, 0, 0)


def test_apply_move_k3():
    t = build_table(complete(3), [0, 0, 0], 3)
    assert apply_move(t, Move(0, 1, -2)) == -2
    assert t.conflict_count == 1
    assert t.conflicting == {1, 2}


@settings(max_examples=300)
@given(states())
def test_table_matches_definitions(state):
    g, colours, k = state
    t = build_table(g, colours, k)
    assert t.gamma == naive_gamma(g, colours, k)
    for v in range(g.n):
        assert sum(t.gamma[v]) == g.degree(v)
        assert (v in t.conflicting) == (t.gamma[v][colours[v]] > 0)
    direct = conflict_count_direct(g, colours)
    assert t.conflict_count == direct
    assert sum(t.gamma[v][colours[v]] for v in t.conflicting) == 2 * direct
    assert t.move_count() == (k - 1) * len(t.conflicting)
    assert len(t.moves()) == t.move_count()


@settings(max_examples=300)
@given(states(), st.data())
def test_move_then_inverse_restores(state, data):
    g, colours, k = state
    if k < 2:
        return
    t = build_table(g, colours, k)
    before = t.copy()
    v = data.draw(st.integers(0, g.n - 1))
    c = data.draw(st.sampled_from([c for c in range(k) if c != colours[v]]))
    predicted = move_delta(t, v, c)
    assert apply_move(t, v, c) == predicted
    after = list(colours)
    after[v] = c
    assert t.conflict_count == conflict_count_direct(g, after)
    apply_move(t, v, colours[v])
    assert t == before


def test_long_random_move_sequence_matches_rebuild():
    rng = random.Random(5)
    n = 40
    g = from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.15])
    k = 4
    t = build_table(g, [rng.randrange(k) for _ in range(n)], k)
    for _ in range(10_000):
        v = rng.randrange(n)
        c = rng.choice([c for c in range(k) if c != t.colours[v]])
        apply_move(t, v, c)
    assert t == build_table(g, t.colours, k)


def test_lemma2_examples():
    # deg 4, row [3, 1], s(v) = 0
    g = from_edges(5, [(0, i) for i in range(1, 5)])
    t = build_table(g, [0, 0, 0, 0, 1], 2)
    assert lemma2_best_colour(t, 0) == (1, 1)
    assert lemma2_best_colour(build_table(from_edges(1, []), [0], 3), 0)[1] == 0
    # deg 5, k = 3, row [3, 1, 1], s(v) = 0
    g = from_edges(6, [(0, i) for i in range(1, 6)])
    t = build_table(g, [0, 0, 0, 0, 1, 2], 3)
    c, val = lemma2_best_colour(t, 0)
    assert val == 1 and c in (1, 2)


def test_lemma2_requires_two_colours():
    with pytest.raises(ColoringError):
        lemma2_best_colour(build_table(path(2), [0, 0], 1), 0)


def test_lemma2_random_tie_break_covers_all_minima():
    g = from_edges(6, [(0, i) for i in range(1, 6)])
    t = build_table(g, [0, 0, 0, 0, 1, 2], 3)
    rng = random.Random(0)
    assert {lemma2_best_colour(t, 0, rng)[0] for _ in range(200)} == {1, 2}


@settings(max_examples=500)
@given(states(max_k=5))
def test_lemma2_guarantee(state):
    g, colours, k = state
    if k < 2:
        return
    t = build_table(g, colours, k)
    for v in range(g.n):
        share = g.degree(v) // k
        if t.gamma[v][colours[v]] > share:
            _, val = lemma2_best_colour(t, v)
            assert val <= share < t.gamma[v][colours[v]]


def test_colouring_text_round_trip():
    s = Coloring((0, 2, 1, 1), 3)
    text = format_coloring(s)
    assert text.splitlines()[1] == "v 1 2"
    assert parse_coloring(text, 3) == s
    assert parse_coloring(text).colours == s.colours


@pytest.mark.parametrize("text", ["v 0 0\nv 0 1\n", "v 1 0\n", "x 0 0\n", "v 0 -1\n"])
def test_parse_coloring_errors(text):
    with pytest.raises(ColoringError):
        parse_coloring(text)
