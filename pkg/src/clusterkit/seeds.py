"""Seeds of geometric-type cluster algebras and their operations.

A seed is an ordered list of variables (exchangeable or frozen), each
carrying the exact Laurent value of that variable in the seed's initial
extended cluster, together with an extended exchange matrix whose rows are
the exchangeable variables and whose columns are the whole extended cluster
(exchangeable first, then frozen).

Values live in the ambient field of the seed the construction was rooted
at: mutation rewrites only the mutated slot, and pure sub-seeds (freezing
only) carry the surviving values unchanged.  Operations that change the
ambient ring — gluing, amalgamated sums, and deleting sub-seeds taken from
a non-initial seed — re-anchor all values, so every variable is again its
own initial value at the new root.

Fresh-id policy: mutating the variable with id ``base@k`` (or ``base``)
yields ``base@(k+1)``; the display name gains one prime per generation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadGlueSpec,
    BadSpec,
    InconsistentLabels,
    LaurentViolation,
    LengthMismatch,
    NameClash,
    NotDivisible,
    NotExchangeable,
    NotFrozen,
    NotSignSkewSymmetric,
    SequenceError,
)
from .exchange import ExtMatrix, is_sign_skew_symmetric, mutate_matrix, principal_blocks
from .laurent import LaurentPoly, VarId, fresh_var, is_valid_var_token

__all__ = [
    "SeedVar",
    "Seed",
    "SubseedSpec",
    "MutationSeq",
    "new_initial_seed",
    "seed_from_entries",
    "mutate_seed",
    "apply_sequence",
    "is_connected",
    "is_indecomposable",
    "decompose",
    "subseed",
    "amalgamated_sum",
    "amalgamate_partial",
    "glue",
    "seeds_isomorphic",
]

MutationSeq = tuple[VarId, ...]


@dataclass(frozen=True)
class SeedVar:
    vid: VarId
    frozen: bool
    value: LaurentPoly


@dataclass(frozen=True)
class Seed:
    vars: tuple[SeedVar, ...]
    matrix: ExtMatrix

    def __post_init__(self):
        ids = [v.vid for v in self.vars]
        if len(set(ids)) != len(ids):
            raise InconsistentLabels("duplicate variable ids in seed")
        for v in ids:
            if not is_valid_var_token(v.id):
                raise InconsistentLabels(
                    f"variable id {v.id!r} cannot appear in the polynomial grammar"
                )
        exchangeables = tuple(v.vid for v in self.vars if not v.frozen)
        frozens = tuple(v.vid for v in self.vars if v.frozen)
        if self.matrix.rows != exchangeables:
            raise InconsistentLabels("matrix rows must be the exchangeable variables in order")
        if self.matrix.cols != exchangeables + frozens:
            raise InconsistentLabels("matrix columns must be the extended cluster, exchangeable first")
        if not is_sign_skew_symmetric(self.matrix):
            raise NotSignSkewSymmetric("seed matrix must be sign-skew-symmetric")
        for v in self.vars:
            if v.frozen and v.value.is_single_variable() is None:
                raise InconsistentLabels(f"frozen variable {v.vid} must carry a single-variable value")

    # -- accessors ----------------------------------------------------------

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def m(self) -> int:
        return self.matrix.m

    def ids(self) -> tuple[VarId, ...]:
        return tuple(v.vid for v in self.vars)

    def exchangeable_ids(self) -> tuple[VarId, ...]:
        return self.matrix.rows

    def frozen_ids(self) -> tuple[VarId, ...]:
        return self.matrix.cols[self.matrix.n:]

    def var(self, vid: VarId) -> SeedVar:
        for v in self.vars:
            if v.vid == vid:
                return v
        raise KeyError(f"{vid} is not a variable of this seed")

    def has(self, vid: VarId) -> bool:
        return any(v.vid == vid for v in self.vars)

    def value(self, vid: VarId) -> LaurentPoly:
        return self.var(vid).value

    def is_trivial(self) -> bool:
        return self.n == 0

    def is_value_initial(self) -> bool:
        return all(v.value == LaurentPoly.var(v.vid) for v in self.vars)

    def rerooted(self) -> "Seed":
        """The same seed taken as a new root: every value becomes itself."""
        if self.is_value_initial():
            return self
        vars_ = tuple(SeedVar(v.vid, v.frozen, LaurentPoly.var(v.vid)) for v in self.vars)
        return Seed(vars_, self.matrix)

    def b(self, x: VarId, y: VarId) -> int:
        return self.matrix.entry(x, y)

    def same_as(self, other: "Seed") -> bool:
        """Semantic equality: same variables (id, frozen flag, value) and the
        same matrix entries indexed by labels; ordering is ignored."""
        if set(self.ids()) != set(other.ids()):
            return False
        for v in self.vars:
            w = other.var(v.vid)
            if w.frozen != v.frozen or w.value != v.value:
                return False
        if set(self.exchangeable_ids()) != set(other.exchangeable_ids()):
            return False
        for x in self.exchangeable_ids():
            for y in self.ids():
                if self.b(x, y) != other.b(x, y):
                    return False
        return True


def new_initial_seed(
    names: Sequence[str | VarId],
    frozen_flags: Sequence[bool],
    matrix: ExtMatrix,
) -> Seed:
    """Seed in which every variable's value is itself."""
    if len(names) != len(frozen_flags):
        raise InconsistentLabels("names and frozen flags must align")
    vids = [v if isinstance(v, VarId) else VarId(v) for v in names]
    vars_ = tuple(
        SeedVar(v, bool(f), LaurentPoly.var(v)) for v, f in zip(vids, frozen_flags)
    )
    return Seed(vars_, matrix)


def seed_from_entries(
    names: Sequence[str],
    frozen_flags: Sequence[bool],
    entries: Sequence[Sequence[int]],
) -> Seed:
    """Convenience constructor.

    entries[i][j] is indexed by declaration order: one row per exchangeable
    name (in order), one column per name (in order); columns are permuted
    internally into the exchangeable-first layout the matrix type requires.
    """
    vids = [VarId(n) for n in names]
    ex = tuple(v for v, f in zip(vids, frozen_flags) if not f)
    fr = tuple(v for v, f in zip(vids, frozen_flags) if f)
    col_order = [names.index(v.id) for v in ex + fr]
    permuted = [[row[j] for j in col_order] for row in entries]
    matrix = ExtMatrix.make(ex, ex + fr, permuted)
    return new_initial_seed(vids, frozen_flags, matrix)


def _replace_var(seed: Seed, pos: int, new: SeedVar, matrix: ExtMatrix) -> Seed:
    vars_ = list(seed.vars)
    vars_[pos] = new
    return Seed(tuple(vars_), matrix)


def mutate_seed(seed: Seed, x: VarId) -> Seed:
    """Mutation at the exchangeable variable x.

    The new value is (prod of values with b_xt > 0 + prod with b_xt < 0)
    divided exactly by the old value; the matrix mutates in direction x and
    the slot is relabelled with a fresh id.
    """
    if not seed.has(x):
        raise NotExchangeable(f"{x} is not a variable of the seed")
    if seed.var(x).frozen:
        raise NotExchangeable(f"{x} is frozen")
    plus = LaurentPoly.const(1)
    minus = LaurentPoly.const(1)
    for t in seed.ids():
        b = seed.b(x, t)
        if b > 0:
            plus = plus * seed.value(t) ** b
        elif b < 0:
            minus = minus * seed.value(t) ** (-b)
    try:
        new_value = (plus + minus).exact_div(seed.value(x))
    except NotDivisible as exc:
        raise LaurentViolation(str(exc)) from exc
    new_id = fresh_var(x)
    while seed.has(new_id):  # a user id may already look like base@k
        new_id = fresh_var(new_id)
    matrix = mutate_matrix(seed.matrix, x).relabel(x, new_id)
    pos = next(i for i, v in enumerate(seed.vars) if v.vid == x)
    return _replace_var(seed, pos, SeedVar(new_id, False, new_value), matrix)


def apply_sequence(seed: Seed, seq: Iterable[VarId]) -> Seed:
    cur = seed
    for i, step in enumerate(seq):
        if not cur.has(step) or cur.var(step).frozen:
            raise SequenceError(i, f"step {i}: {step} is not exchangeable at that point")
        cur = mutate_seed(cur, step)
    return cur


# -- connectivity ------------------------------------------------------------


def _connected_pairs(seed: Seed) -> dict[VarId, set[VarId]]:
    """Adjacency of the connected-pair graph: b_xy != 0 or b_yx != 0 with at
    least one of the two exchangeable."""
    adj: dict[VarId, set[VarId]] = {v: set() for v in seed.ids()}
    for x in seed.exchangeable_ids():
        for y in seed.ids():
            if x != y and seed.b(x, y) != 0:
                adj[x].add(y)
                adj[y].add(x)
    return adj


def is_connected(seed: Seed) -> bool:
    ids = seed.ids()
    if len(ids) <= 1:
        return True
    adj = _connected_pairs(seed)
    seen = {ids[0]}
    queue = deque([ids[0]])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(ids)


def is_indecomposable(seed: Seed) -> bool:
    """True iff every two extended-cluster variables are joined by a chain
    of connected pairs whose interior vertices are all exchangeable."""
    ids = seed.ids()
    if len(ids) <= 1:
        return True
    adj = _connected_pairs(seed)
    exchangeable = set(seed.exchangeable_ids())
    for x in ids:
        reach = {x}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            if v != x and v not in exchangeable:
                continue  # frozen vertices terminate chains
            for w in adj[v]:
                if w not in reach:
                    reach.add(w)
                    queue.append(w)
        if len(reach) != len(ids):
            return False
    return True


# -- mixing-type sub-seeds ----------------------------------------------------


@dataclass(frozen=True)
class SubseedSpec:
    """Freeze the exchangeable variables in I0, delete the variables in I1."""

    I0: frozenset[VarId]
    I1: frozenset[VarId]

    @staticmethod
    def of(I0: Iterable[VarId | str], I1: Iterable[VarId | str]) -> "SubseedSpec":
        coerce = lambda v: v if isinstance(v, VarId) else VarId(v)
        return SubseedSpec(frozenset(map(coerce, I0)), frozenset(map(coerce, I1)))


def _validate_spec(seed: Seed, spec: SubseedSpec) -> None:
    exch = set(seed.exchangeable_ids())
    allv = set(seed.ids())
    if not spec.I0 <= exch:
        raise BadSpec("I0 must consist of exchangeable variables")
    if not spec.I1 <= allv:
        raise BadSpec("I1 must consist of extended-cluster variables")
    if spec.I0 & spec.I1:
        raise BadSpec("I0 and I1 must be disjoint")


def subseed(seed: Seed, spec: SubseedSpec) -> Seed:
    """Mixing-type sub-seed: delete I1, freeze I0, restrict the matrix.

    Pure sub-seeds (empty I1) carry the surviving values unchanged: every
    column survives, so mutation inside the sub-seed computes the parent
    algebra's own exchanges and values stay Laurent over the parent's root.
    Deleting variables changes the exchange relations, so a sub-seed with
    nonempty I1 taken from a non-initial seed is re-anchored instead: the
    current extended cluster becomes the new root.  (The same happens in
    the rare pure case where a previously-mutated slot is frozen, since a
    frozen variable must be a single root variable.)
    """
    _validate_spec(seed, spec)
    survivors = [v for v in seed.vars if v.vid not in spec.I1]
    new_frozen = {v.vid: (v.frozen or v.vid in spec.I0) for v in survivors}
    if spec.I1:
        carry = seed.is_value_initial()
    else:
        carry = all(
            v.value.is_single_variable() is not None
            for v in survivors
            if new_frozen[v.vid]
        )
    out_vars = tuple(
        SeedVar(v.vid, new_frozen[v.vid], v.value if carry else LaurentPoly.var(v.vid))
        for v in survivors
    )
    ex = tuple(v.vid for v in out_vars if not v.frozen)
    fr = tuple(v.vid for v in out_vars if v.frozen)
    matrix = seed.matrix.restrict(ex, ex + fr)
    return Seed(out_vars, matrix)


def decompose(seed: Seed) -> list[Seed]:
    """Indecomposable partial sub-seeds whose amalgamated sum is the seed.

    One sub-seed per principal block (with its attached frozen columns),
    plus one trivial singleton per frozen variable not attached to any
    block; results follow first-occurrence order in the variable list.
    """
    blocks = principal_blocks(seed.matrix)
    attached: set[VarId] = set()
    for _, fr in blocks:
        attached.update(fr)
    pieces: list[tuple[int, Seed]] = []
    allv = set(seed.ids())
    order = {v: i for i, v in enumerate(seed.ids())}
    for members, fr in blocks:
        keep = set(members) | set(fr)
        piece = subseed(seed, SubseedSpec(frozenset(), frozenset(allv - keep)))
        pieces.append((min(order[v] for v in keep), piece))
    for f in seed.frozen_ids():
        if f not in attached:
            piece = subseed(seed, SubseedSpec(frozenset(), frozenset(allv - {f})))
            pieces.append((order[f], piece))
    pieces.sort(key=lambda t: t[0])
    return [p for _, p in pieces]


# -- amalgamated sums ---------------------------------------------------------


def amalgamated_sum(
    s1: Seed,
    s2: Seed,
    delta1: Sequence[VarId],
    delta2: Sequence[VarId],
    delta_names: Sequence[VarId | str],
) -> Seed:
    """Join two seeds along identified frozen subsets.

    Rows are X1 then X2; columns are X1, X2, the unmerged frozen variables
    of each seed, then the merged Delta columns, whose entries stack the two
    seeds' columns positionally.  All values are re-anchored.
    """
    if len(delta1) != len(delta2) or len(delta1) != len(delta_names):
        raise LengthMismatch("delta lists must have equal length")
    names = [v if isinstance(v, VarId) else VarId(v) for v in delta_names]
    for d, s in ((delta1, s1), (delta2, s2)):
        for v in d:
            if not s.has(v) or not s.var(v).frozen:
                raise NotFrozen(f"{v} is not a frozen variable of its seed")
    if len(set(delta1)) != len(delta1) or len(set(delta2)) != len(delta2):
        raise BadSpec("delta lists must not repeat variables")
    ex1, ex2 = s1.exchangeable_ids(), s2.exchangeable_ids()
    fr1 = tuple(v for v in s1.frozen_ids() if v not in set(delta1))
    fr2 = tuple(v for v in s2.frozen_ids() if v not in set(delta2))
    surviving = list(ex1) + list(ex2) + list(fr1) + list(fr2)
    if len(set(surviving)) != len(surviving):
        raise NameClash("seeds share variable ids outside the merged deltas")
    if len(set(names)) != len(names) or set(names) & set(surviving):
        raise NameClash("delta names collide")
    rows = tuple(ex1 + ex2)
    cols = tuple(list(rows) + list(fr1) + list(fr2) + names)

    def entry(x: VarId, y: VarId, dname_to_pair: dict) -> int:
        if y in dname_to_pair:
            y1, y2 = dname_to_pair[y]
            if s1.has(x):
                return s1.b(x, y1)
            return s2.b(x, y2)
        if s1.has(x) and s1.has(y):
            return s1.b(x, y)
        if s2.has(x) and s2.has(y):
            return s2.b(x, y)
        return 0

    pair_of = {name: (d1, d2) for name, d1, d2 in zip(names, delta1, delta2)}
    entries = tuple(tuple(entry(x, y, pair_of) for y in cols) for x in rows)
    matrix = ExtMatrix(rows, cols, entries)
    flags = [False] * (len(ex1) + len(ex2)) + [True] * (len(fr1) + len(fr2) + len(names))
    return new_initial_seed(list(rows) + list(fr1) + list(fr2) + names, flags, matrix)


def amalgamate_partial(s1: Seed, s2: Seed) -> Seed:
    """Amalgamated sum of two partial sub-seeds along their common frozen
    variables, keeping the shared ids (the paper's unadorned coproduct)."""
    common = [v for v in s1.frozen_ids() if v in set(s2.frozen_ids())]
    return amalgamated_sum(s1, s2, common, common, common)


# -- gluing -------------------------------------------------------------------


def glue(
    seed: Seed,
    s_set: Iterable[VarId],
    phi: Mapping[VarId, VarId],
    gluing_names: Mapping[VarId, VarId] | None = None,
    warnings: list[str] | None = None,
) -> Seed:
    """Glue each s in S with phi(s), replacing both by a gluing variable.

    phi must be injective on S and send frozen members of S to frozen
    variables.  Entry rule for an untouched row x and the gluing column of
    y2: b_x,y2 + b_x,phi(y2) when phi moves y2, else b_x,y2.  Gluing rows of
    exchangeable members keep the row of the S-representative.  Values are
    re-anchored.  Gluing exchangeable variables is legal but outside the
    morphism theory; a warning is recorded when it happens.
    """
    S = list(dict.fromkeys(s_set))
    if not S:
        return seed
    for s in S:
        if not seed.has(s):
            raise BadGlueSpec(f"{s} is not a variable of the seed")
        if s not in phi:
            raise BadGlueSpec(f"phi is undefined on {s}")
        if not seed.has(phi[s]):
            raise BadGlueSpec(f"phi({s}) = {phi[s]} is not a variable of the seed")
    images = [phi[s] for s in S]
    if len(set(images)) != len(images):
        raise BadGlueSpec("phi must be injective on S")
    for s in S:
        if phi[s] in S and phi[s] != s:
            raise BadGlueSpec("chained gluings (phi(S) meeting S) are not supported")
        if seed.var(s).frozen and not seed.var(phi[s]).frozen:
            raise BadGlueSpec(f"phi must send frozen {s} to a frozen variable")
    if any(not seed.var(s).frozen for s in S) and warnings is not None:
        warnings.append(
            "gluing exchangeable variables: outside the surjective-morphism theory"
        )

    def gname(s: VarId) -> VarId:
        if gluing_names and s in gluing_names:
            return gluing_names[s]
        return VarId(f"{s.id}~{phi[s].id}")

    replaced = set(S) | set(images)
    bar: dict[VarId, VarId] = {s: gname(s) for s in S}
    new_ids = [bar[s] for s in S]
    keep = [v for v in seed.vars if v.vid not in replaced]
    if len(set(new_ids)) != len(new_ids) or set(new_ids) & {v.vid for v in keep}:
        raise BadGlueSpec("gluing variable names collide")

    out_vars: list[SeedVar] = []
    for v in seed.vars:
        if v.vid in replaced:
            if v.vid in bar:  # emit the gluing variable at the S slot
                g = bar[v.vid]
                out_vars.append(SeedVar(g, v.frozen, LaurentPoly.var(g)))
            continue
        out_vars.append(SeedVar(v.vid, v.frozen, LaurentPoly.var(v.vid)))
    ex = tuple(v.vid for v in out_vars if not v.frozen)
    fr = tuple(v.vid for v in out_vars if v.frozen)
    cols = ex + fr
    rep = {bar[s]: s for s in S}

    def row_source(z: VarId) -> VarId:
        return rep.get(z, z)

    def col_entry(x_src: VarId, z: VarId) -> int:
        if z in rep:
            y2 = rep[z]
            if phi[y2] == y2:
                return seed.b(x_src, y2)
            return seed.b(x_src, y2) + seed.b(x_src, phi[y2])
        return seed.b(x_src, z)

    entries = []
    for x in ex:
        x_src = row_source(x)
        if x in rep:
            # glued row: take the S-representative's row values verbatim
            entries.append(tuple(seed.b(x_src, rep.get(z, z)) for z in cols))
        else:
            entries.append(tuple(col_entry(x_src, z) for z in cols))
    matrix = ExtMatrix(ex, cols, tuple(entries))
    return Seed(tuple(out_vars), matrix)


# -- seed isomorphism search --------------------------------------------------


def _abs_profile(seed: Seed, v: VarId) -> tuple:
    row = tuple(sorted(abs(seed.b(v, y)) for y in seed.ids())) if not seed.var(v).frozen else ()
    col = tuple(sorted(abs(seed.b(x, v)) for x in seed.exchangeable_ids()))
    return (seed.var(v).frozen, row, col)


def seeds_isomorphic(
    s1: Seed, s2: Seed, size_bound: int = 10, force: bool = False
) -> tuple[dict[VarId, VarId], str] | None:
    """Search for a bijection of extended clusters preserving |b_xy| and the
    exchangeable/frozen split.

    Returns (bijection, sign_class) with sign_class one of "positive",
    "negative" or "mixed" computed from entrywise signs under the found
    bijection, or None when no bijection exists.  Backtracking prunes by
    frozen flags and row/column absolute-value multisets; seeds larger than
    size_bound need force=True.
    """
    if len(s1.ids()) != len(s2.ids()) or s1.n != s2.n:
        return None
    if len(s1.ids()) > size_bound and not force:
        raise BadSpec(f"seed size exceeds the isomorphism search bound {size_bound}")
    src = list(s1.ids())
    profiles2: dict[VarId, tuple] = {v: _abs_profile(s2, v) for v in s2.ids()}
    profiles1: dict[VarId, tuple] = {v: _abs_profile(s1, v) for v in src}
    from collections import Counter

    if Counter(profiles1.values()) != Counter(profiles2.values()):
        return None

    assignment: dict[VarId, VarId] = {}
    used: set[VarId] = set()

    def consistent(v: VarId, w: VarId) -> bool:
        for u, t in assignment.items():
            if abs(s1.b(v, u)) != abs(s2.b(w, t)):
                return False
            if abs(s1.b(u, v)) != abs(s2.b(t, w)):
                return False
        return True

    def backtrack(i: int) -> bool:
        if i == len(src):
            return True
        v = src[i]
        for w in s2.ids():
            if w in used or profiles2[w] != profiles1[v]:
                continue
            if not consistent(v, w):
                continue
            assignment[v] = w
            used.add(w)
            if backtrack(i + 1):
                return True
            del assignment[v]
            used.remove(w)
        return False

    if not backtrack(0):
        return None
    has_pos = has_neg = False
    for x in s1.exchangeable_ids():
        for y in s1.ids():
            prod = s1.b(x, y) * s2.b(assignment[x], assignment[y])
            if prod > 0:
                has_pos = True
            elif prod < 0:
                has_neg = True
    if has_neg and has_pos:
        sign = "mixed"
    elif has_neg:
        sign = "negative"
    else:
        sign = "positive"
    return dict(assignment), sign
