import random

import pytest

from clusterkit.errors import NotSignSkewSymmetric, UnknownDirection
from clusterkit.exchange import (
    ExtMatrix,
    Total,
    TotalityCounterexample,
    VerifiedToDepth,
    check_totally_sss,
    diagonal_unitization,
    is_acyclic,
    is_sign_skew_symmetric,
    mutate_matrix,
    principal_blocks,
    skew_symmetrizer,
)
from clusterkit.laurent import VarId

from conftest import random_ssym_entries

x1, x2, x3 = VarId("x1"), VarId("x2"), VarId("x3")


def square(entries, labels=None):
    n = len(entries)
    labels = tuple(VarId(l) for l in (labels or [f"x{i+1}" for i in range(n)]))
    return ExtMatrix.make(labels, labels, entries)


class TestMutateMatrix:
    def test_rank_two(self):
        b = square([[0, 1], [-1, 0]])
        assert mutate_matrix(b, x1).entries == ((0, -1), (1, 0))

    def test_rank_three_middle(self):
        b = square([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
        assert mutate_matrix(b, x2).entries == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))

    def test_involution_random(self):
        rng = random.Random(7)
        for _ in range(50):
            n, m = rng.randint(1, 5), rng.randint(0, 3)
            names = tuple(VarId(f"x{i}") for i in range(n))
            cols = names + tuple(VarId(f"u{j}") for j in range(m))
            b = ExtMatrix.make(names, cols, random_ssym_entries(rng, n, m))
            for k in names:
                assert mutate_matrix(mutate_matrix(b, k), k) == b

    def test_unknown_direction(self):
        b = square([[0, 1], [-1, 0]])
        with pytest.raises(UnknownDirection):
            mutate_matrix(b, VarId("zz"))

    def test_frozen_columns_mutate_too(self):
        rows = (x1,)
        cols = (x1, VarId("u1"))
        b = ExtMatrix.make(rows, cols, [[0, 2]])
        assert mutate_matrix(b, x1).entries == ((0, -2),)


class TestSignSkewSymmetric:
    def test_skew_symmetric(self):
        assert is_sign_skew_symmetric(square([[0, 1], [-1, 0]]))

    def test_same_sign_pair(self):
        assert not is_sign_skew_symmetric(square([[0, 1], [1, 0]]))

    def test_zero_matrix(self):
        assert is_sign_skew_symmetric(square([[0, 0], [0, 0]]))

    def test_nonzero_diagonal(self):
        assert not is_sign_skew_symmetric(square([[1, 1], [-1, 0]]))


class TestSkewSymmetrizer:
    def test_skew_symmetric_gets_ones(self):
        assert skew_symmetrizer(square([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])) == (1, 1, 1)

    def test_b2(self):
        assert skew_symmetrizer(square([[0, 2], [-1, 0]])) == (1, 2)

    def test_absent(self):
        assert skew_symmetrizer(square([[0, 1], [1, 0]])) is None

    def test_minimal_per_block(self):
        b = square([[0, 2, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
        assert skew_symmetrizer(b) == (1, 2, 1, 1)

    def test_preserved_by_mutation_with_same_d(self):
        rng = random.Random(11)
        for _ in range(40):
            n = rng.randint(2, 4)
            names = tuple(VarId(f"x{i}") for i in range(n))
            b = ExtMatrix.make(names, names, random_ssym_entries(rng, n, 0))
            d = skew_symmetrizer(b)
            if d is None:
                continue
            for k in names:
                assert skew_symmetrizer(mutate_matrix(b, k)) == d


class TestTotality:
    def test_skew_symmetric_total(self):
        assert check_totally_sss(square([[0, 1], [-1, 0]])) == Total()

    def test_symmetrizable_total(self):
        assert check_totally_sss(square([[0, 2], [-1, 0]])) == Total()

    def test_non_symmetrizable_bfs(self):
        # sign-skew-symmetric but not symmetrizable rank-3
        b = square([[0, 1, -1], [-1, 0, 1], [2, -1, 0]])
        assert skew_symmetrizer(b) is None
        verdict = check_totally_sss(b, depth=4)
        assert isinstance(verdict, (VerifiedToDepth, TotalityCounterexample))
        if isinstance(verdict, TotalityCounterexample):
            # replay the word to exhibit the violation
            cur = b
            fresh = dict()
            for step in verdict.seq:
                cur = mutate_matrix(cur, step)
            assert not is_sign_skew_symmetric(cur)

    def test_precondition(self):
        with pytest.raises(NotSignSkewSymmetric):
            check_totally_sss(square([[0, 1], [1, 0]]))


class TestDiagonalUnitization:
    def test_a2(self):
        assert diagonal_unitization(square([[0, 1], [-1, 0]])).entries == ((1, 1), (-1, 1))

    def test_a2_all_entries_nonzero(self):
        u = diagonal_unitization(square([[0, 1], [-1, 0]]))
        assert all(x != 0 for row in u.entries for x in row)

    def test_a3_keeps_zero_off_diagonal(self):
        u = diagonal_unitization(square([[0, 1, 0], [-1, 0, 1], [0, -1, 0]]))
        assert u.entries[0][2] == 0

    def test_changes_exactly_the_diagonal(self):
        rng = random.Random(3)
        for _ in range(20):
            n, m = rng.randint(1, 4), rng.randint(0, 2)
            names = tuple(VarId(f"x{i}") for i in range(n))
            cols = names + tuple(VarId(f"u{j}") for j in range(m))
            b = ExtMatrix.make(names, cols, random_ssym_entries(rng, n, m))
            u = diagonal_unitization(b)
            for i in range(n):
                for j in range(n + m):
                    if i == j:
                        assert u.entries[i][j] == 1
                    else:
                        assert u.entries[i][j] == b.entries[i][j]


class TestPrincipalBlocks:
    def test_connected_single_block(self):
        b = square([[0, 1], [-1, 0]])
        assert principal_blocks(b) == [((x1, x2), ())]

    def test_block_diagonal(self):
        b = square([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
        blocks = principal_blocks(b)
        assert [m for m, _ in blocks] == [
            (VarId("x1"), VarId("x2")),
            (VarId("x3"), VarId("x4")),
        ]

    def test_shared_frozen_column(self):
        rows = (x1, x3)
        cols = (x1, x3, x2)
        b = ExtMatrix.make(rows, cols, [[0, 0, 1], [0, 0, -1]])
        blocks = principal_blocks(b)
        assert blocks == [((x1,), (x2,)), ((x3,), (x2,))]

    def test_invariant_under_permutation(self):
        rng = random.Random(5)
        for _ in range(20):
            n = rng.randint(2, 5)
            names = [VarId(f"x{i}") for i in range(n)]
            b = ExtMatrix.make(tuple(names), tuple(names), random_ssym_entries(rng, n, 0))
            perm = list(range(n))
            rng.shuffle(perm)
            pnames = tuple(names[perm[i]] for i in range(n))
            pentries = [[b.entries[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
            pb = ExtMatrix.make(pnames, pnames, pentries)
            partition = {frozenset(m) for m, _ in principal_blocks(b)}
            ppartition = {frozenset(m) for m, _ in principal_blocks(pb)}
            assert partition == ppartition


class TestAcyclic:
    def test_path(self):
        assert is_acyclic(square([[0, 1, 0], [-1, 0, 1], [0, -1, 0]]))

    def test_markov_cycle(self):
        assert not is_acyclic(square([[0, 2, -2], [-2, 0, 2], [2, -2, 0]]))

    def test_empty(self):
        b = ExtMatrix.make((), (), [])
        assert is_acyclic(b)

    def test_precondition(self):
        with pytest.raises(NotSignSkewSymmetric):
            is_acyclic(square([[0, 1], [1, 0]]))
