"""Rooted-cluster-subalgebra census and finite-type classification.

The subalgebra census rests on two facts: a mixing-type sub-seed spec
(I0, I1) yields a rooted cluster subalgebra iff b_xy = 0 for every
x in X \\ (I0 u I1) and y in I1, and those specs are in bijection with the
zero submatrices (J0, J1) of the diagonal-unitization matrix via I1 = J1,
I0 = X \\ (J0 u J1).  W counts pairs (J0, J1), empty sides included, the
doubly-empty pair once; the closed form sums 2^(rows vanishing on J1) over
all column sets J1 and is cross-checked against brute force in the tests.

Finite-type closure enumerates seeds up to relabelling (unordered cluster
values plus the matrix under the value-sorted permutation).  The cap is a
work budget counted in polynomial terms: a mutation whose products would
overshoot the remaining budget aborts the closure with ExceededCap, which
keeps infinite-type inputs (whose values explode) decidable; closures that
finish within the budget report exact counts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations

from .errors import BadSpec, NotAcyclic, RankTooLarge
from .exchange import ExtMatrix, diagonal_unitization, is_acyclic, mutate_matrix
from .laurent import VarId
from .seeds import Seed, SubseedSpec, mutate_seed

__all__ = [
    "SubalgebraRecord",
    "Census",
    "FiniteType",
    "FiniteMutationClass",
    "ExceededCap",
    "is_rooted_subalgebra_spec",
    "count_zero_submatrices",
    "census",
    "finite_type",
    "dynkin_recognition",
    "finite_mutation_type",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 10_000

KIND_PURE = "pure"
KIND_PROPER_TRIVIAL = "proper-trivial"
KIND_PROPER_NONTRIVIAL = "proper-nontrivial"


@dataclass(frozen=True)
class SubalgebraRecord:
    spec: SubseedSpec
    kind: str


@dataclass(frozen=True)
class Census:
    pure_count: int
    total_count: int
    proper_count: int
    records: tuple[SubalgebraRecord, ...] | None = None


@dataclass(frozen=True)
class FiniteType:
    cluster_vars: int
    seeds: int


@dataclass(frozen=True)
class FiniteMutationClass:
    class_size: int


@dataclass(frozen=True)
class ExceededCap:
    cap: int


def is_rooted_subalgebra_spec(seed: Seed, spec: SubseedSpec) -> bool:
    """b_xy = 0 for every untouched exchangeable x and every deleted y."""
    exch = set(seed.exchangeable_ids())
    allv = set(seed.ids())
    if not spec.I0 <= exch or not spec.I1 <= allv or spec.I0 & spec.I1:
        raise BadSpec("spec must freeze exchangeables and delete cluster variables, disjointly")
    untouched = exch - spec.I0 - spec.I1
    return all(seed.b(x, y) == 0 for x in untouched for y in spec.I1)


def count_zero_submatrices(u: ExtMatrix) -> int:
    """W = sum over column sets J1 of 2^(number of rows vanishing on J1);
    the empty J1 contributes 2^n and empty row sets are always counted."""
    n, total = u.n, len(u.cols)
    row_masks = []
    for row in u.entries:
        mask = 0
        for j, x in enumerate(row):
            if x != 0:
                mask |= 1 << j
        row_masks.append(mask)
    w = 0
    for j1 in range(1 << total):
        z = sum(1 for mask in row_masks if mask & j1 == 0)
        w += 1 << z
    return w


def census(seed: Seed, list_records: bool = False) -> Census:
    """Counts (and optionally the records) of all rooted cluster subalgebra
    specs of the seed, via the zero-submatrix bijection."""
    u = diagonal_unitization(seed.matrix)
    n = u.n
    total = len(u.cols)
    w = count_zero_submatrices(u)
    pure = 1 << n
    records = None
    if list_records:
        x_ids = seed.exchangeable_ids()
        col_ids = u.cols
        row_masks = []
        for row in u.entries:
            mask = 0
            for j, x in enumerate(row):
                if x != 0:
                    mask |= 1 << j
            row_masks.append(mask)
        recs = []
        for j1 in range(1 << total):
            i1 = frozenset(col_ids[j] for j in range(total) if j1 >> j & 1)
            free_rows = [i for i in range(n) if row_masks[i] & j1 == 0]
            for pick in range(1 << len(free_rows)):
                j0 = {x_ids[free_rows[t]] for t in range(len(free_rows)) if pick >> t & 1}
                i0 = frozenset(set(x_ids) - j0 - i1)
                if not i1:
                    kind = KIND_PURE
                elif not j0:
                    kind = KIND_PROPER_TRIVIAL
                else:
                    kind = KIND_PROPER_NONTRIVIAL
                recs.append(SubalgebraRecord(SubseedSpec(i0, i1), kind))
        assert len(recs) == w
        records = tuple(recs)
    return Census(pure, w, w - pure, records)


# -- finite type ----------------------------------------------------------------


def _canonical_seed_key(seed: Seed) -> tuple:
    """Unordered-cluster canonical form: sort slots by value and read the
    matrix through that permutation (values within a seed are distinct)."""
    ex_ids = list(seed.exchangeable_ids())
    fr_ids = list(seed.frozen_ids())
    ex_sorted = sorted(ex_ids, key=lambda v: str(seed.value(v)))
    fr_sorted = sorted(fr_ids, key=lambda v: str(seed.value(v)))
    order = ex_sorted + fr_sorted
    entries = tuple(tuple(seed.b(x, y) for y in order) for x in ex_sorted)
    return (
        tuple(str(seed.value(v)) for v in ex_sorted),
        tuple(str(seed.value(v)) for v in fr_sorted),
        entries,
    )


def _mutation_cost(seed: Seed, x: VarId) -> int:
    """Upper bound on the term count of the exchange numerator."""
    plus = minus = 1
    for t in seed.ids():
        b = seed.b(x, t)
        if b > 0:
            plus *= max(len(seed.value(t)), 1) ** b
        elif b < 0:
            minus *= max(len(seed.value(t)), 1) ** (-b)
    return plus + minus


def finite_type(seed: Seed, cap: int = DEFAULT_CAP) -> FiniteType | ExceededCap:
    """Exhaustive mutation closure with exact counts, or ExceededCap when
    the term-count work budget runs out before the closure closes."""
    budget = cap
    seen = {_canonical_seed_key(seed)}
    cluster_values = {str(seed.value(v)) for v in seed.exchangeable_ids()}
    queue = deque([seed])
    while queue:
        cur = queue.popleft()
        for x in cur.exchangeable_ids():
            cost = _mutation_cost(cur, x)
            if cost > budget:
                return ExceededCap(cap)
            budget -= cost
            nxt = mutate_seed(cur, x)
            key = _canonical_seed_key(nxt)
            if key in seen:
                continue
            seen.add(key)
            for v in nxt.exchangeable_ids():
                cluster_values.add(str(nxt.value(v)))
            queue.append(nxt)
    return FiniteType(len(cluster_values), len(seen))


# -- Dynkin recognition -----------------------------------------------------------


def _cartan_counterpart(seed: Seed) -> tuple[tuple[int, ...], ...]:
    p = seed.matrix.principal()
    n = seed.n
    return tuple(
        tuple(2 if i == j else -abs(p[i][j]) for j in range(n)) for i in range(n)
    )


def _path_cartan(n: int, special: dict[tuple[int, int], int] | None = None):
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        a[i][i + 1] = -1
        a[i + 1][i] = -1
    for (i, j), v in (special or {}).items():
        a[i][j] = v
    return tuple(tuple(r) for r in a)


def _standard_cartans(n: int) -> list[tuple[str, tuple[tuple[int, ...], ...]]]:
    """Dynkin Cartan matrices of rank n, short-root-last convention for B."""
    out: list[tuple[str, tuple[tuple[int, ...], ...]]] = []
    if n >= 1:
        out.append((f"A{n}", _path_cartan(n)))
    if n == 2:
        out.append(("B2/C2", _path_cartan(2, {(1, 0): -2})))
        out.append(("G2", _path_cartan(2, {(1, 0): -3})))
    if n >= 3:
        out.append((f"B{n}", _path_cartan(n, {(n - 1, n - 2): -2})))
        out.append((f"C{n}", _path_cartan(n, {(n - 2, n - 1): -2})))
    if n >= 4:
        d = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n - 3):
            d[i][i + 1] = d[i + 1][i] = -1
        d[n - 3][n - 2] = d[n - 2][n - 3] = -1
        d[n - 3][n - 1] = d[n - 1][n - 3] = -1
        out.append((f"D{n}", tuple(tuple(r) for r in d)))
        if n == 4:
            out.append(("F4", _path_cartan(4, {(2, 1): -2, (1, 2): -1})))
    if n in (6, 7, 8):
        e = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        # path 0-1-2-...-(n-2), branch (n-1) attached to node 2
        for i in range(n - 2):
            e[i][i + 1] = e[i + 1][i] = -1
        e[2][n - 1] = e[n - 1][2] = -1
        out.append((f"E{n}", tuple(tuple(r) for r in e)))
    return out


def _permutation_equivalent(a, b, bound: int = 9) -> bool:
    n = len(a)
    if n != len(b):
        return False
    if n > bound:
        raise RankTooLarge(f"permutation matching is bounded at rank {bound}")
    row_profile = lambda mat, i: tuple(sorted(mat[i])) + tuple(sorted(mat[j][i] for j in range(n)))
    prof_a = [row_profile(a, i) for i in range(n)]
    prof_b = [row_profile(b, i) for i in range(n)]
    if sorted(prof_a) != sorted(prof_b):
        return False
    for perm in permutations(range(n)):
        if all(prof_a[i] == prof_b[perm[i]] for i in range(n)) and all(
            a[i][j] == b[perm[i]][perm[j]] for i in range(n) for j in range(n)
        ):
            return True
    return False


def dynkin_recognition(seed: Seed) -> str | None:
    """Label of the Cartan counterpart among the Dynkin series, up to
    simultaneous permutation; None when it matches none."""
    if not is_acyclic(seed.matrix):
        raise NotAcyclic("Dynkin recognition needs an acyclic principal part")
    cartan = _cartan_counterpart(seed)
    for label, std in _standard_cartans(seed.n):
        if _permutation_equivalent(cartan, std):
            return label
    return None


# -- finite mutation type ----------------------------------------------------------


def _canonical_matrix(p: tuple[tuple[int, ...], ...]) -> tuple:
    n = len(p)
    best = None
    for perm in permutations(range(n)):
        cand = tuple(tuple(p[perm[i]][perm[j]] for j in range(n)) for i in range(n))
        if best is None or cand < best:
            best = cand
    return best


def finite_mutation_type(
    b: ExtMatrix, cap: int = DEFAULT_CAP, allow_large_rank: bool = False
) -> FiniteMutationClass | ExceededCap:
    """BFS over principal parts modulo simultaneous permutation; exact class
    size when the closure closes within cap classes."""
    n = b.n
    if n > 8 and not allow_large_rank:
        raise RankTooLarge("canonical forms use full permutation search; rank > 8 needs an override")
    rows = tuple(VarId(f"r{i}") for i in range(n))
    principal = ExtMatrix(rows, rows, b.principal())
    seen = {_canonical_matrix(principal.principal())}
    queue = deque([principal])
    while queue:
        cur = queue.popleft()
        for k in cur.rows:
            nxt = mutate_matrix(cur, k)
            key = _canonical_matrix(nxt.principal())
            if key in seen:
                continue
            if len(seen) + 1 > cap:
                return ExceededCap(cap)
            seen.add(key)
            queue.append(nxt)
    return FiniteMutationClass(len(seen))
