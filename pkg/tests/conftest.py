import random

import pytest
from hypothesis import strategies as st

from clusterkit import seed_from_entries
from clusterkit.laurent import LaurentPoly, Monomial, VarId


@pytest.fixture
def a2():
    return seed_from_entries(["x1", "x2"], [False, False], [[0, 1], [-1, 0]])


@pytest.fixture
def a3():
    return seed_from_entries(
        ["x1", "x2", "x3"], [False] * 3, [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]
    )


@pytest.fixture
def b2():
    return seed_from_entries(["x1", "x2"], [False, False], [[0, 2], [-1, 0]])


@pytest.fixture
def markov():
    return seed_from_entries(
        ["x1", "x2", "x3"], [False] * 3, [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]
    )


@pytest.fixture
def qprime():
    """x1 -> [x2] -> x3 with x2 frozen (the running decomposition example)."""
    return seed_from_entries(
        ["x1", "x2", "x3"], [False, True, False], [[0, 1, 0], [0, -1, 0]]
    )


# -- hypothesis strategies ----------------------------------------------------

_VAR_POOL = [VarId(f"x{i}") for i in range(1, 5)]


@st.composite
def monomials(draw):
    exps = draw(
        st.dictionaries(st.sampled_from(_VAR_POOL), st.integers(-3, 3), max_size=3)
    )
    return Monomial.of(exps)


@st.composite
def laurent_polys(draw):
    terms = draw(
        st.dictionaries(monomials(), st.integers(-5, 5), max_size=5)
    )
    return LaurentPoly(terms)


def random_ssym_entries(rng: random.Random, n: int, m: int, bound: int = 3):
    """Random sign-skew-symmetric principal part with arbitrary frozen
    columns.  Not necessarily totally sign-skew-symmetric: suitable for
    matrix-level tests, but not as a seed to be mutated."""
    entries = [[0] * (n + m) for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                continue
            a = rng.randint(1, bound)
            b = -rng.randint(1, bound)
            if rng.random() < 0.5:
                a, b = b, a
            entries[i][j] = a
            entries[j][i] = b
    for i in range(n):
        for j in range(n, n + m):
            entries[i][j] = rng.randint(-bound, bound)
    return entries


def random_totally_ssym_entries(rng: random.Random, n: int, m: int, bound: int = 3):
    """Random totally sign-skew-symmetric principal part: either skew
    symmetric with arbitrary support, or a forest support with arbitrary
    opposite-sign pairs (forests are always skew-symmetrizable)."""
    entries = [[0] * (n + m) for _ in range(n)]
    if rng.random() < 0.5:
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    continue
                a = rng.randint(1, bound) * rng.choice([1, -1])
                entries[i][j] = a
                entries[j][i] = -a
    else:
        for j in range(1, n):
            if rng.random() < 0.25:
                continue  # leave j in its own tree
            i = rng.randrange(j)
            a = rng.randint(1, bound)
            b = -rng.randint(1, bound)
            if rng.random() < 0.5:
                a, b = b, a
            entries[i][j] = a
            entries[j][i] = b
    for i in range(n):
        for j in range(n, n + m):
            entries[i][j] = rng.randint(-bound, bound)
    return entries


def random_ssym_seed(rng: random.Random, n: int, m: int, bound: int = 3):
    """Random seed safe to mutate (totally sign-skew-symmetric matrix)."""
    names = [f"x{i}" for i in range(1, n + 1)] + [f"u{j}" for j in range(1, m + 1)]
    flags = [False] * n + [True] * m
    return seed_from_entries(names, flags, random_totally_ssym_entries(rng, n, m, bound))


@st.composite
def small_seeds(draw):
    """Hypothesis strategy over totally sign-skew-symmetric seeds: skew
    symmetric or forest-supported principal parts with frozen columns."""
    n = draw(st.integers(1, 4))
    m = draw(st.integers(0, 2))
    entries = [[0] * (n + m) for _ in range(n)]
    skew = draw(st.booleans())
    if skew:
        for i in range(n):
            for j in range(i + 1, n):
                a = draw(st.integers(-3, 3))
                entries[i][j] = a
                entries[j][i] = -a
    else:
        for j in range(1, n):
            attach = draw(st.integers(-1, j - 1))
            if attach < 0:
                continue
            a = draw(st.integers(1, 3))
            b = -draw(st.integers(1, 3))
            if draw(st.booleans()):
                a, b = b, a
            entries[attach][j] = a
            entries[j][attach] = b
    for i in range(n):
        for j in range(n, n + m):
            entries[i][j] = draw(st.integers(-3, 3))
    names = [f"x{i}" for i in range(1, n + 1)] + [f"u{j}" for j in range(1, m + 1)]
    return seed_from_entries(names, [False] * n + [True] * m, entries)
