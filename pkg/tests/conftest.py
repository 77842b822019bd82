import itertools
import random

import pytest
from hypothesis import strategies as st

from fkfree.core import Digraph


def exact_power(matrix, k):
    """Naive integer matrix power; the oracle the bit-level code is checked against."""
    n = len(matrix)
    result = [row[:] for row in matrix]
    for _ in range(k - 1):
        result = [
            [sum(result[i][l] * matrix[l][j] for l in range(n)) for j in range(n)]
            for i in range(n)
        ]
    return result


def exact_fk_free(matrix, k):
    return max(max(row) for row in exact_power(matrix, k)) <= 1


def all_matrices(n, strict=False):
    slots = [(i, j) for i in range(n) for j in range(n) if not (strict and i == j)]
    for bits in itertools.product((0, 1), repeat=len(slots)):
        A = [[0] * n for _ in range(n)]
        for (i, j), b in zip(slots, bits):
            A[i][j] = b
        yield A


def random_digraph(rng, n, density=None, strict=False):
    p = rng.random() if density is None else density
    arcs = [(i, j) for i in range(n) for j in range(n) if rng.random() < p and not (strict and i == j)]
    return Digraph.from_arcs(n, arcs)


@st.composite
def digraphs(draw, min_n=1, max_n=6, strict=False):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    arcs = [(i, j) for i in range(n) for j in range(n) if bits[i * n + j] and not (strict and i == j)]
    return Digraph.from_arcs(n, arcs)


@pytest.fixture
def rng():
    return random.Random(20261016)
