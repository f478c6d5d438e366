"""Seed homomorphisms: verification, sign classes, images, mutation.

A seed homomorphism is a total map f of extended clusters with
(a) f(X) contained in the target's exchangeables, and
(b) over all adjacent pairs (x,y),(z,w) with x,z exchangeable and
    b_xz != 0 or x == z:
        (b'_{f(x)f(y)} b_xy)(b'_{f(z)f(w)} b_zw) >= 0
    and |b'_{f(x)f(y)}| >= |b_xy|.

Verification is verdict-style; the quadruple loop is the naive O(n^2 (n+m)^2)
enumeration, which is the documented hot loop of this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import NotAHomAfterMutation, NotBiadmissible, SourceTargetMismatch
from .laurent import VarId
from .seeds import Seed, SubseedSpec, mutate_seed, subseed

__all__ = [
    "SeedHom",
    "HomViolation",
    "SignClass",
    "check_seed_hom",
    "sign_classify",
    "image_seed",
    "hom_is_injective",
    "hom_is_surjective",
    "hom_is_isomorphism",
    "compose",
    "mutate_hom",
]


@dataclass(frozen=True)
class HomViolation:
    kind: str  # "not-total" | "unknown-image" | "image-not-exchangeable" | "sign" | "magnitude"
    detail: str
    witnesses: tuple[VarId, ...] = ()


@dataclass(frozen=True)
class SeedHom:
    source: Seed
    target: Seed
    mapping: tuple[tuple[VarId, VarId], ...]

    def __call__(self, v: VarId) -> VarId:
        for a, b in self.mapping:
            if a == v:
                return b
        raise KeyError(v)

    def as_dict(self) -> dict[VarId, VarId]:
        return dict(self.mapping)


class SignClass(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"
    MIXED = "mixed"


def _adjacent(seed: Seed, x: VarId, z: VarId) -> bool:
    return x == z or seed.b(x, z) != 0


def check_seed_hom(
    source: Seed, target: Seed, mapping: dict[VarId, VarId]
) -> SeedHom | HomViolation:
    """Verify the two homomorphism conditions; the report carries the first
    violated pair or quadruple in variable order."""
    for v in source.ids():
        if v not in mapping:
            return HomViolation("not-total", f"map is undefined on {v}", (v,))
        if not target.has(mapping[v]):
            return HomViolation("unknown-image", f"{mapping[v]} is not a target variable", (v,))
    for x in source.exchangeable_ids():
        if target.var(mapping[x]).frozen:
            return HomViolation(
                "image-not-exchangeable",
                f"exchangeable {x} maps to frozen {mapping[x]}",
                (x,),
            )
    f = mapping.__getitem__
    exch = source.exchangeable_ids()
    allv = source.ids()
    for x in exch:
        for y in allv:
            if abs(target.b(f(x), f(y))) < abs(source.b(x, y)):
                return HomViolation(
                    "magnitude",
                    f"|b'_({f(x)},{f(y)})| < |b_({x},{y})|",
                    (x, y),
                )
    for x in exch:
        for z in exch:
            if not _adjacent(source, x, z):
                continue
            for y in allv:
                pxy = target.b(f(x), f(y)) * source.b(x, y)
                if pxy == 0:
                    continue
                for w in allv:
                    pzw = target.b(f(z), f(w)) * source.b(z, w)
                    if pxy * pzw < 0:
                        return HomViolation(
                            "sign",
                            f"products at (({x},{y}),({z},{w})) have opposite signs",
                            (x, y, z, w),
                        )
    return SeedHom(source, target, tuple(sorted(mapping.items())))


def sign_classify(f: SeedHom) -> SignClass:
    """positive / negative per the definition; BOTH when every product is
    zero, MIXED when both strict signs occur."""
    has_pos = has_neg = False
    for x in f.source.exchangeable_ids():
        for y in f.source.ids():
            prod = f.target.b(f(x), f(y)) * f.source.b(x, y)
            if prod > 0:
                has_pos = True
            elif prod < 0:
                has_neg = True
    if has_pos and has_neg:
        return SignClass.MIXED
    if has_pos:
        return SignClass.POSITIVE
    if has_neg:
        return SignClass.NEGATIVE
    return SignClass.BOTH


def image_seed(f: SeedHom) -> Seed:
    """(f(X), f(X-tilde) \\ f(X), entries restricted from the target); equals
    the target's mixing-type sub-seed at (I0', I1') with I1' the unhit
    variables and I0' the exchangeables hit only from the frozen side."""
    hit = {f(v) for v in f.source.ids()}
    hit_exch = {f(x) for x in f.source.exchangeable_ids()}
    i1 = frozenset(v for v in f.target.ids() if v not in hit)
    i0 = frozenset(v for v in f.target.exchangeable_ids() if v not in hit_exch and v not in i1)
    return subseed(f.target, SubseedSpec(i0, i1))


def hom_is_injective(f: SeedHom) -> bool:
    """f restricts to a seed isomorphism onto its image seed: injective as a
    map and |b|-preserving."""
    images = [f(v) for v in f.source.ids()]
    if len(set(images)) != len(images):
        return False
    for x in f.source.exchangeable_ids():
        for y in f.source.ids():
            if abs(f.source.b(x, y)) != abs(f.target.b(f(x), f(y))):
                return False
    return True


def hom_is_surjective(f: SeedHom) -> bool:
    hit = {f(v) for v in f.source.ids()}
    hit_exch = {f(x) for x in f.source.exchangeable_ids()}
    return hit == set(f.target.ids()) and hit_exch == set(f.target.exchangeable_ids())


def hom_is_isomorphism(f: SeedHom) -> bool:
    return hom_is_injective(f) and hom_is_surjective(f)


def compose(g: SeedHom, f: SeedHom) -> SeedHom:
    """g after f.  The composite is re-verified; a verification failure is a
    bug (Seed is a category), hence a hard error."""
    if not f.target.same_as(g.source):
        raise SourceTargetMismatch("target of f does not match source of g")
    mapping = {v: g(f(v)) for v in f.source.ids()}
    out = check_seed_hom(f.source, g.target, mapping)
    if isinstance(out, HomViolation):
        raise RuntimeError(f"composite failed verification: {out.detail}")
    return out


def mutate_hom(f: SeedHom, y: VarId) -> SeedHom:
    """Mutation of a seed homomorphism at y: a hom between the two mutated
    seeds sending the fresh source variable to the fresh target variable.

    Existence is not guaranteed in general; when the transported map fails
    the homomorphism conditions, NotAHomAfterMutation is raised.
    """
    if not f.source.has(y) or f.source.var(y).frozen:
        raise NotBiadmissible(f"{y} is not exchangeable in the source")
    fy = f(y)
    if f.target.var(fy).frozen:
        raise NotBiadmissible(f"f({y}) = {fy} is not exchangeable in the target")
    new_source = mutate_seed(f.source, y)
    new_target = mutate_seed(f.target, fy)
    fresh_src = next(v for v in new_source.ids() if not f.source.has(v))
    fresh_tgt = next(v for v in new_target.ids() if not f.target.has(v))
    mapping = {v: f(v) for v in f.source.ids() if v != y}
    mapping[fresh_src] = fresh_tgt
    out = check_seed_hom(new_source, new_target, mapping)
    if isinstance(out, HomViolation):
        raise NotAHomAfterMutation(out.detail)
    return out
