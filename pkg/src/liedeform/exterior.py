"""Basis words of the exterior powers of V and their combinatorics.

Words are tuples of strictly increasing 1-based indices.  The n-th word of
Lambda^k V (1-based) follows colexicographic order, so for N = 3 the words of
Lambda^2 V are (1,2), (1,3), (2,3).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb
from typing import NamedTuple

from .errors import OutOfRange, TooLarge

MAX_DIM = 8
MAX_UNSHUFFLE = 12


def binom(m: int, k: int) -> int:
    if m < 0 or k < 0 or m < k:
        return 0
    return comb(m, k)


def s_index(n: int, k: int, dim: int | None = None) -> tuple[int, ...]:
    """The n-th basis word of Lambda^k V.

    ``S(n,1) = (n)`` and ``S(n,k) = S(n - C(l-1,k), k-1) + (l,)`` where
    ``C(l-1,k) < n <= C(l,k)``.
    """
    if k < 0 or n < 1 or (k == 0 and n != 1):
        raise OutOfRange(f"no word number {n} in degree {k}")
    if dim is not None and n > binom(dim, k):
        raise OutOfRange(f"word {n} exceeds C({dim},{k}) = {binom(dim, k)}")
    if k == 0:
        return ()
    if k == 1:
        return (n,)
    l = k
    while binom(l, k) < n:
        l += 1
    return s_index(n - binom(l - 1, k), k - 1) + (l,)


def ordinal_of(word, k: int | None = None) -> int:
    """Inverse of :func:`s_index`: the 1-based position of ``word``."""
    word = tuple(word)
    if k is not None and len(word) != k:
        raise OutOfRange(f"{word} is not a word of length {k}")
    if any(a >= b for a, b in zip(word, word[1:])) or (word and word[0] < 1):
        raise OutOfRange(f"{word} is not strictly increasing")
    return 1 + sum(binom(i - 1, j) for j, i in enumerate(word, start=1))


@lru_cache(maxsize=None)
def words(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All basis words of Lambda^k V in ordinal order."""
    if k < 0 or k > dim:
        return ()
    return tuple(sorted(combinations(range(1, dim + 1), k), key=lambda w: w[::-1]))


@lru_cache(maxsize=None)
def word_index(dim: int, k: int) -> dict:
    """Map word -> 0-based column position."""
    return {w: i for i, w in enumerate(words(dim, k))}


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def sort_word(seq) -> tuple[int, tuple[int, ...] | None]:
    """Sign and sorted word of a wedge of basis vectors; (0, None) on repeats."""
    seq = tuple(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    return perm_sign(seq), tuple(sorted(seq))


class Unshuffle(NamedTuple):
    perm: tuple[int, ...]
    sign: int
    k: int

    @property
    def first(self):
        return self.perm[: self.k]

    @property
    def rest(self):
        return self.perm[self.k :]

    def __str__(self):
        s = "+" if self.sign > 0 else "-"
        return f"({','.join(map(str, self.first))}|{','.join(map(str, self.rest))}){s}"


@lru_cache(maxsize=None)
def unshuffles(k: int, l: int) -> tuple[Unshuffle, ...]:
    """Permutations of 1..k+l increasing on the first k and last l slots."""
    if k < 0 or l < 0:
        raise OutOfRange("negative block size")
    if k + l > MAX_UNSHUFFLE:
        raise TooLarge(f"unshuffles of size {k + l} exceed the guard {MAX_UNSHUFFLE}")
    n = k + l
    out = []
    for first in combinations(range(1, n + 1), k):
        rest = tuple(i for i in range(1, n + 1) if i not in first)
        perm = first + rest
        out.append(Unshuffle(perm, perm_sign(perm), k))
    return tuple(out)


def comultiply(word) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Reduced coproduct of a basis word as (left, right, sign) triples."""
    word = tuple(word)
    n = len(word)
    out = []
    for k in range(1, n):
        for sh in unshuffles(k, n - k):
            left = tuple(word[i - 1] for i in sh.first)
            right = tuple(word[i - 1] for i in sh.rest)
            out.append((left, right, sh.sign))
    return out
