"""Independent naive mutation-closure oracle.

Deliberately shares no code with the package: matrices are lists of lists,
cluster variables are exact rational numbers obtained by evaluating the
initial variables at fixed random points.  Two cluster variables are the
same Laurent polynomial iff they agree at every sample point (up to
astronomically unlikely collisions; three points with 60-bit entries), so
seeds deduplicate by sorted value tuples plus the matrix read through the
value-sorted permutation.
"""

from __future__ import annotations

import random
from fractions import Fraction

N_POINTS = 3


def _mutate_matrix(mat, k):
    n = len(mat)
    total = len(mat[0])
    out = [[0] * total for _ in range(n)]
    for j in range(n):
        for c in range(total):
            if j == k or c == k:
                out[j][c] = -mat[j][c]
            else:
                out[j][c] = mat[j][c] + (abs(mat[j][k]) * mat[k][c] + mat[j][k] * abs(mat[k][c])) // 2
    return out


def closure_counts(entries, n, m, seed_val=20260809, cap=100_000):
    """(number of exchangeable cluster variables, number of unlabeled seeds)."""
    rng = random.Random(seed_val)
    points = [
        [Fraction(rng.getrandbits(60) + 1) for _ in range(n + m)]
        for _ in range(N_POINTS)
    ]
    init_values = [tuple(pt[i] for pt in points) for i in range(n + m)]

    def seed_key(mat, values):
        order = sorted(range(n), key=lambda i: values[i])
        frozen = tuple(values[n + j] for j in range(m))
        permuted = tuple(
            tuple(mat[order[i]][order[j]] for j in range(n))
            + tuple(mat[order[i]][n + j] for j in range(m))
            for i in range(n)
        )
        return (tuple(values[i] for i in order), frozen, permuted)

    start = ([row[:] for row in entries], list(init_values))
    seen = {seed_key(*start)}
    variables = set(init_values[:n])
    frontier = [start]
    while frontier:
        mat, values = frontier.pop()
        for k in range(n):
            numerators = []
            for pi in range(N_POINTS):
                plus = Fraction(1)
                minus = Fraction(1)
                for t in range(n + m):
                    b = mat[k][t]
                    if b > 0:
                        plus *= values[t][pi] ** b
                    elif b < 0:
                        minus *= values[t][pi] ** (-b)
                numerators.append((plus + minus) / values[k][pi])
            new_values = list(values)
            new_values[k] = tuple(numerators)
            new_mat = _mutate_matrix(mat, k)
            key = seed_key(new_mat, new_values)
            if key in seen:
                continue
            seen.add(key)
            variables.add(new_values[k])
            if len(seen) > cap:
                raise RuntimeError("naive closure exceeded its cap")
            frontier.append((new_mat, new_values))
    return len(variables), len(seen)
