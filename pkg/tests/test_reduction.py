from functools import reduce
from math import isqrt

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wrlat import GramMatrix, NotWellRounded, ValidationError, gauss_reduce, is_similar, is_wr, minimal_pairs, minimum
from wrlat import similarity_class_of, sublattice_gram
from wrlat.lattice import IDENTITY, det2, matmul


def brute_minimum(G):
    """Least nonzero value by exhaustive search over the provably sufficient box.

    Any vector of norm <= g11 satisfies y^2 <= g11^2 / det and x^2 <= g11 g22 / det.
    """
    a, b, c = G.entries
    det = G.det
    X = isqrt(a * c // det) + 1
    Y = isqrt(a * a // det) + 1
    x = np.arange(-X, X + 1, dtype=np.int64)[:, None]
    y = np.arange(-Y, Y + 1, dtype=np.int64)[None, :]
    vals = a * x * x + 2 * b * x * y + c * y * y
    vals[X, Y] = np.iinfo(np.int64).max
    return int(vals.min())


@st.composite
def grams(draw, bound=10_000):
    a = draw(st.integers(1, bound))
    c = draw(st.integers(1, bound))
    lim = isqrt(a * c - 1)
    b = draw(st.integers(-lim, lim))
    G = GramMatrix(a, b, c)
    # keep the exhaustive oracle affordable
    assume(G.det * 4_000_000 >= a * c * max(a, c) // 1)
    return G


GENERATORS = [((1, 1), (0, 1)), ((1, -1), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (0, -1))]
unimodular = st.lists(st.sampled_from(GENERATORS), max_size=12).map(lambda gs: reduce(matmul, gs, IDENTITY))


@settings(max_examples=300)
@given(grams())
def test_reduction_conditions_and_minimum(G):
    red, V = gauss_reduce(G)
    assert 0 <= 2 * red.g12 <= red.g11 <= red.g22
    assert abs(det2(V)) == 1
    assert sublattice_gram(G, V) == red
    assert red.det == G.det
    assert minimum(G) == brute_minimum(G)


@given(grams(bound=2000), unimodular)
def test_reduced_form_is_a_class_invariant(G, U):
    T = U
    assert gauss_reduce(sublattice_gram(G, T))[0] == gauss_reduce(G)[0]


@pytest.mark.parametrize(
    "entries, red, wr, pairs",
    [
        ((2, 1, 2), (2, 1, 2), True, 3),
        ((1, 0, 1), (1, 0, 1), True, 2),
        ((5, 3, 2), (1, 0, 1), True, 2),
        ((5, 1, 3), (3, 1, 5), False, 1),
        ((28, 4, 28), (28, 4, 28), True, 2),
        ((4, -2, 4), (4, 2, 4), True, 3),
        ((3, 1, 3), (3, 1, 3), True, 2),
    ],
)
def test_small_examples(entries, red, wr, pairs):
    G = GramMatrix(*entries)
    assert gauss_reduce(G)[0].entries == red
    assert is_wr(G) is wr
    assert minimal_pairs(G) == pairs


def test_similarity_class_examples():
    assert similarity_class_of(GramMatrix(28, 4, 28)).text == "1,4,7,3"
    assert similarity_class_of(GramMatrix(2, 1, 2)).text == "1,1,2,3"
    assert similarity_class_of(GramMatrix(12, 6, 12)).text == "1,1,2,3"
    assert similarity_class_of(GramMatrix(5, 0, 5)).text == "0,1,1,1"
    assert similarity_class_of(GramMatrix(9, 3, 9)).text == "1,2,3,2"
    with pytest.raises(NotWellRounded):
        similarity_class_of(GramMatrix(1, 0, 2))
    with pytest.raises(ValidationError):
        similarity_class_of((1, 0, 1))


POOL = [GramMatrix(a, b, c) for a in range(1, 8) for c in range(a, 8) for b in range(0, a // 2 + 1) if a * c > b * b]
POOL = (POOL * 2)[:100]


def test_is_similar_is_an_equivalence_relation():
    sim = [[is_similar(g, h) for h in POOL] for g in POOL]
    n = len(POOL)
    for i in range(n):
        assert sim[i][i]
        for j in range(n):
            assert sim[i][j] == sim[j][i]
            if sim[i][j]:
                assert all(sim[i][k] == sim[j][k] for k in range(n))


@given(grams(bound=500), st.integers(1, 50), unimodular)
def test_similarity_survives_scaling_and_basis_change(G, k, U):
    T = U
    assert is_similar(G, sublattice_gram(G.scaled(k), T))
