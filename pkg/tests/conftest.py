from fractions import Fraction
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from liedeform.coder import Coderivation, extend_apply
from liedeform.exterior import comultiply
from liedeform.fixtures import catalog_entry
from liedeform.linalg import det

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

CATALOG7 = ("d1", "d2", "d_1_1", "d_lambda_mu", "d_1_0", "d_1_m1", "d3")

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def grid_strategy(dim=3, arity=2, elements=small_rationals):
    from liedeform.exterior import binom

    ncols = binom(dim, arity)
    return st.lists(
        st.lists(elements, min_size=ncols, max_size=ncols), min_size=dim, max_size=dim
    ).map(lambda g: Coderivation(dim, arity, g))


def random_invertible(rng: random.Random, n=3, lo=-3, hi=3):
    while True:
        G = [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]
        if det(G):
            return G


# both sides of the coderivation law on one word, as {(left, right): coeff}
def law_lhs(cod, word):
    out = {}
    for w, c in extend_apply(cod, word).items():
        for a, b, s in comultiply(w):
            out[(a, b)] = out.get((a, b), 0) + s * c
    return {k: v for k, v in out.items() if v}


def law_rhs(cod, word):
    out = {}
    for a, b, s in comultiply(word):
        if len(a) >= cod.arity:
            for w, c in extend_apply(cod, a).items():
                out[(w, b)] = out.get((w, b), 0) + s * c
        if len(b) >= cod.arity:
            koszul = (-1) ** (cod.degree * len(a))
            for w, c in extend_apply(cod, b).items():
                out[(a, w)] = out.get((a, w), 0) + koszul * s * c
    return {k: v for k, v in out.items() if v and len(k[0]) and len(k[1])}


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture(params=CATALOG7)
def catalog_algebra(request):
    return request.param, catalog_entry(request.param)
