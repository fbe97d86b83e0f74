from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hjlab.lines import (PEdge, active_intervals, dense_colouring, enumerate_lines,
                         enumerate_star_patterns, find_monochromatic_line, is_q_fold, line_image,
                         line_rank, pad_line, read_colouring, star_pattern_to_edge, substitute,
                         write_colouring)
from hjlab.words import alphabet, contract, word_index, words

from conftest import contract_oracle


def count_lines_oracle(m, n, q):
    """Strings over m letters and a star with 1..q star runs, counted by runs."""
    # dp[last_is_star][runs]
    dp = {(False, 0): 1}
    for _ in range(n):
        nxt = {}
        for (star, runs), c in dp.items():
            nxt[(False, runs)] = nxt.get((False, runs), 0) + c * m
            r2 = runs if star else runs + 1
            if r2 <= q:
                nxt[(True, r2)] = nxt.get((True, r2), 0) + c
        dp = nxt
    return sum(c for (_, runs), c in dp.items() if runs >= 1)


def test_substitute_and_runs():
    assert substitute("1*2*", 3) == "1323"
    assert active_intervals("**1*2**") == 3
    assert is_q_fold("**1**", 2) and not is_q_fold("*1*2*", 2)
    with pytest.raises(ValueError):
        substitute("1*", 4, m=3)


@pytest.mark.parametrize("m,n,q", [(2, 2, 1), (3, 2, 2), (3, 3, 1), (3, 4, 2), (2, 6, 3), (4, 3, 1)])
def test_line_counts(m, n, q):
    ls = list(enumerate_lines(m, n, q))
    assert len(ls) == count_lines_oracle(m, n, q)
    assert len(set(ls)) == len(ls)
    assert [line_rank(ell, m) for ell in ls] == sorted(line_rank(ell, m) for ell in ls)


def test_small_line_examples():
    assert len(list(enumerate_lines(3, 2, 2))) == 7
    # 37 lines of length 3 in total, three of which (*x*) need two runs
    assert len(list(enumerate_lines(3, 3, 1))) == 34
    assert list(enumerate_lines(2, 2, 1)) == ["1*", "2*", "*1", "*2", "**"]


def test_edge_from_one_star_two():
    e = star_pattern_to_edge("1*2", 3, 1)
    assert e == PEdge(frozenset({"12", "132"}), "1*2")
    assert e.order == 2


def test_degenerate_binary_edge():
    assert star_pattern_to_edge("1*2", 3, 1, m=2) is None


def test_star_pattern_edge_errors():
    with pytest.raises(ValueError):
        star_pattern_to_edge("1**2", 4, 1)
    with pytest.raises(ValueError):
        star_pattern_to_edge("1*2*3", 4, 2)
    with pytest.raises(ValueError):
        star_pattern_to_edge("*1*", 3, 1)
    with pytest.raises(ValueError):
        star_pattern_to_edge("123", 3, 1)


@pytest.mark.parametrize("m,n,q", [(3, 4, 1), (3, 4, 2), (2, 5, 2), (4, 3, 3)])
def test_star_patterns_brute(m, n, q):
    syms = alphabet(m) + "*"
    brute = set()
    for k in range(1, n + 1):
        for t in itertools.product(syms, repeat=k):
            s = "".join(t)
            if contract_oracle(s) == s and 1 <= s.count("*") <= q:
                brute.add(s)
    got = list(enumerate_star_patterns(m, n, q))
    assert len(got) == len(set(got))
    assert set(got) == brute


@given(st.text(alphabet="123*", min_size=1, max_size=10).filter(lambda s: "*" in s))
def test_padding_keeps_image(ell):
    sp = contract(ell)
    assert line_image(pad_line(sp, len(sp) + 3), 3) == line_image(ell, 3)


def first_mono_oracle(col, m, n, q):
    for ell in enumerate_lines(m, n, q):
        cs = {col[word_index(ell.replace("*", a), m)] for a in alphabet(m)}
        if len(cs) == 1:
            return ell
    return None


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.integers(1, 5), st.integers(1, 3), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_monochromatic_search_matches_brute_force(m, n, q, r, seed):
    col = np.random.default_rng(seed).integers(0, r, size=m**n)
    want = first_mono_oracle(col, m, n, q)
    assert find_monochromatic_line(col, m, n, q) == want
    assert find_monochromatic_line(col, m, n, q, threads=4) == want


def test_monochromatic_search_simple_cases():
    assert find_monochromatic_line(np.zeros(3**4, dtype=int), 3, 4, 1) == "111*"
    assert find_monochromatic_line([0, 1, 2], 3, 1, 1) is None
    mapping = {w: 0 for w in words(2, 2)}
    assert find_monochromatic_line(mapping, 2, 2, 1) == "1*"


def test_partial_colouring_rejected():
    with pytest.raises(ValueError):
        dense_colouring({"11": 0}, 2, 2)
    with pytest.raises(ValueError):
        dense_colouring([0, 1], 2, 2)


@pytest.mark.parametrize("binary", [False, True])
def test_colouring_file_roundtrip(binary):
    col = np.random.default_rng(3).integers(0, 3, size=3**4)
    data = write_colouring(col, 3, 4, 3, binary=binary)
    m, n, r, back = read_colouring(data, binary=binary)
    assert (m, n, r) == (3, 4, 3)
    assert (back == col).all()


def test_colouring_file_errors():
    with pytest.raises(ValueError):
        read_colouring("3 1 3\n0 1\n")
    with pytest.raises(ValueError):
        read_colouring("3 1 2\n0 1 2\n")
    with pytest.raises(ValueError):
        read_colouring("")
