from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from liedeform.errors import OutOfRange, TooLarge
from liedeform.exterior import (
    MAX_UNSHUFFLE,
    binom,
    comultiply,
    ordinal_of,
    perm_sign,
    s_index,
    sort_word,
    unshuffles,
    words,
)


def inversions(seq):
    return sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])


def test_binom_convention():
    assert binom(2, 3) == 0
    assert binom(4, 2) == 6
    assert binom(0, 0) == 1


@pytest.mark.parametrize("n,word", [(1, (1, 2)), (2, (1, 3)), (3, (2, 3))])
def test_s_index_examples(n, word):
    assert s_index(n, 2, dim=3) == word
    assert ordinal_of(word) == n


def test_top_word():
    assert ordinal_of((1, 2, 3), k=3) == 1
    assert s_index(1, 3, dim=3) == (1, 2, 3)


def test_out_of_range():
    with pytest.raises(OutOfRange):
        s_index(4, 2, dim=3)
    with pytest.raises(OutOfRange):
        ordinal_of((2, 1))


@pytest.mark.parametrize("dim", range(1, 9))
def test_s_index_ordinal_inverse(dim):
    for k in range(1, dim + 1):
        for n in range(1, binom(dim, k) + 1):
            w = s_index(n, k, dim)
            assert len(w) == k and list(w) == sorted(set(w)) and w[-1] <= dim
            assert ordinal_of(w, k) == n


@pytest.mark.parametrize("dim", range(1, 7))
def test_s_index_is_colex_order_preserving(dim):
    # the recursion enumerates words colexicographically (compare reversed words)
    for k in range(1, dim + 1):
        ws = [s_index(n, k, dim) for n in range(1, binom(dim, k) + 1)]
        assert ws == sorted(ws, key=lambda w: w[::-1])
        assert tuple(ws) == words(dim, k)


def test_s_index_is_not_lex_order_preserving_in_dim_4():
    ws = [s_index(n, 2, 4) for n in range(1, 7)]
    assert ws != sorted(ws)
    assert ws.index((2, 3)) < ws.index((1, 4))


@given(st.permutations(list(range(1, 7))))
def test_perm_sign_parity(p):
    assert perm_sign(p) == (-1) ** inversions(p)


def test_sort_word():
    assert sort_word((3, 1, 2)) == (1, (1, 2, 3))
    assert sort_word((2, 1)) == (-1, (1, 2))
    assert sort_word((3, 3)) == (0, None)


def test_unshuffle_examples():
    (u,) = unshuffles(1, 0)
    assert u.perm == (1,) and u.sign == 1
    assert [(s.first, s.rest, s.sign) for s in unshuffles(2, 1)] == [
        ((1, 2), (3,), 1),
        ((1, 3), (2,), -1),
        ((2, 3), (1,), 1),
    ]
    assert len(unshuffles(2, 2)) == 6


@pytest.mark.parametrize("k,l", [(a, b) for a in range(0, 6) for b in range(0, 6)])
def test_unshuffles_complete_and_signed(k, l):
    shs = unshuffles(k, l)
    assert len(shs) == binom(k + l, k)
    brute = {p for p in permutations(range(1, k + l + 1))
             if list(p[:k]) == sorted(p[:k]) and list(p[k:]) == sorted(p[k:])}
    assert {s.perm for s in shs} == brute
    for s in shs:
        assert s.sign == (-1) ** inversions(s.perm)
    assert [s.first for s in shs] == sorted(s.first for s in shs)


def test_unshuffle_guard():
    unshuffles(MAX_UNSHUFFLE - 1, 1)
    with pytest.raises(TooLarge):
        unshuffles(7, MAX_UNSHUFFLE - 6)


def test_comultiply_examples():
    assert comultiply((1, 2)) == [((1,), (2,), 1), ((2,), (1,), -1)]
    assert comultiply((1,)) == []
    terms = comultiply((1, 2, 3))
    assert len(terms) == 6
    assert sum(1 for left, _, _ in terms if len(left) == 1) == 3


def _apply_left(terms):
    out = {}
    for left, right, s in terms:
        for a, b, s2 in comultiply(left):
            key = (a, b, right)
            out[key] = out.get(key, 0) + s * s2
    return {k: v for k, v in out.items() if v}


def _apply_right(terms):
    out = {}
    for left, right, s in terms:
        for a, b, s2 in comultiply(right):
            # Koszul sign: moving Delta past `left` costs nothing (Delta has degree 0)
            key = (left, a, b)
            out[key] = out.get(key, 0) + s * s2
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_coassociativity(dim):
    for k in range(1, dim + 1):
        for w in words(dim, k):
            assert _apply_left(comultiply(w)) == _apply_right(comultiply(w))
