"""Exact sparse Laurent-polynomial arithmetic over the integers.

A Laurent polynomial is a finite map from monomials to nonzero integer
coefficients.  A monomial is a finite map from variables to nonzero integer
exponents (negative exponents allowed); the empty monomial is the unit.
Values are canonical at all times: no zero coefficients, no zero exponents,
and term iteration follows a fixed graded-lexicographic order on variables,
which makes printing and hashing deterministic.

Coefficients are Python ints, so mutation towers can grow them without
overflow.  All values are immutable; operations are pure functions.

Text grammar (used verbatim by the CLI, the HTTP API and the explorer):
terms joined by " + " / " - ", each term ``coef*var^exp*...`` with factors
sorted by variable order; ``^1`` and a ``1*`` coefficient are omitted, the
zero polynomial prints as ``0`` and the unit monomial as ``1``.  The parser
accepts the same grammar (plus the unicode minus).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import NotDivisible, ParseError

__all__ = [
    "VarId",
    "Monomial",
    "LaurentPoly",
    "add",
    "mul",
    "pow",
    "exact_div",
    "specialize_one",
    "render",
    "parse",
]


@dataclass(frozen=True, order=True)
class VarId:
    """Stable identifier of a cluster variable.

    Ordering and equality are by the opaque ``id`` string.  The display name
    is derived: mutation appends ``@k`` to the base id, shown as k primes.
    """

    id: str

    @property
    def base(self) -> str:
        stem, _, suffix = self.id.rpartition("@")
        if stem and suffix.isdigit():
            return stem
        return self.id

    @property
    def generation(self) -> int:
        stem, _, suffix = self.id.rpartition("@")
        if stem and suffix.isdigit():
            return int(suffix)
        return 0

    @property
    def display_name(self) -> str:
        return self.base + "'" * self.generation

    def __str__(self) -> str:
        return self.id


def fresh_var(v: VarId) -> VarId:
    """Next-generation id for the variable produced by mutating ``v``."""
    return VarId(f"{v.base}@{v.generation + 1}")


@dataclass(frozen=True)
class Monomial:
    """Product of variables with nonzero integer exponents."""

    exps: tuple[tuple[VarId, int], ...]

    @staticmethod
    def of(exponents: Mapping[VarId, int]) -> "Monomial":
        items = tuple(sorted((v, e) for v, e in exponents.items() if e != 0))
        return Monomial(items)

    @staticmethod
    def unit() -> "Monomial":
        return Monomial(())

    def as_dict(self) -> dict[VarId, int]:
        return dict(self.exps)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def vars(self) -> Iterator[VarId]:
        return (v for v, _ in self.exps)

    def mul(self, other: "Monomial") -> "Monomial":
        out = self.as_dict()
        for v, e in other.exps:
            out[v] = out.get(v, 0) + e
        return Monomial.of(out)

    def pow(self, k: int) -> "Monomial":
        return Monomial(tuple((v, e * k) for v, e in self.exps)) if k else Monomial.unit()

    def divides(self, other: "Monomial") -> bool:
        """Componentwise <= against ``other`` (both sides exponent-0 padded)."""
        them = other.as_dict()
        mine = self.as_dict()
        for v in set(mine) | set(them):
            if mine.get(v, 0) > them.get(v, 0):
                return False
        return True

    def div(self, other: "Monomial") -> "Monomial":
        out = self.as_dict()
        for v, e in other.exps:
            out[v] = out.get(v, 0) - e
        return Monomial.of(out)

    def __lt__(self, other: "Monomial") -> bool:
        return _grlex_less(self, other)


def _grlex_less(a: Monomial, b: Monomial) -> bool:
    if a.degree != b.degree:
        return a.degree < b.degree
    da, db = a.as_dict(), b.as_dict()
    for v in sorted(set(da) | set(db)):
        ea, eb = da.get(v, 0), db.get(v, 0)
        if ea != eb:
            # bigger exponent on the earliest differing variable wins
            return ea < eb
    return False


class LaurentPoly:
    """Canonical integer-coefficient sparse Laurent polynomial."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        cleaned = {}
        if terms:
            for mono, coef in terms.items():
                if coef:
                    cleaned[mono] = coef
        self._terms = cleaned

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def const(c: int) -> "LaurentPoly":
        return LaurentPoly({Monomial.unit(): int(c)})

    @staticmethod
    def var(v: VarId, exp: int = 1) -> "LaurentPoly":
        return LaurentPoly({Monomial.of({v: exp}): 1})

    # -- inspection --------------------------------------------------------

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        """Terms in descending graded-lex order."""
        return iter(sorted(self._terms.items(), key=lambda t: t[0], reverse=True))

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {Monomial.unit(): 1}

    def variables(self) -> set[VarId]:
        out: set[VarId] = set()
        for mono in self._terms:
            out.update(mono.vars())
        return out

    def is_single_variable(self) -> VarId | None:
        """The variable v when the value is exactly v, else None."""
        if len(self._terms) != 1:
            return None
        (mono, coef), = self._terms.items()
        if coef == 1 and len(mono.exps) == 1 and mono.exps[0][1] == 1:
            return mono.exps[0][0]
        return None

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for mono, coef in other._terms.items():
            out[mono] = out.get(mono, 0) + coef
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[Monomial, int] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = ma.mul(mb)
                out[m] = out.get(m, 0) + ca * cb
        return LaurentPoly(out)

    def scale(self, c: int) -> "LaurentPoly":
        return LaurentPoly({m: c * k for m, k in self._terms.items()})

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("pow exponent must be nonnegative")
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def leading_term(self) -> tuple[Monomial, int]:
        mono = max(self._terms)
        return mono, self._terms[mono]

    def monomial_gcd(self) -> Monomial:
        """Componentwise minimum exponent over all terms (absent = 0)."""
        if not self._terms:
            return Monomial.unit()
        mins: dict[VarId, int] = {}
        seen_in_all: dict[VarId, int] = {}
        for mono in self._terms:
            for v, e in mono.exps:
                seen_in_all[v] = seen_in_all.get(v, 0) + 1
                mins[v] = min(mins.get(v, e), e)
        total = len(self._terms)
        out = {}
        for v, e in mins.items():
            # a variable missing from some term has exponent 0 there
            out[v] = min(e, 0) if seen_in_all[v] < total else e
        return Monomial.of(out)

    def shift(self, mono: Monomial) -> "LaurentPoly":
        return LaurentPoly({m.mul(mono): c for m, c in self._terms.items()})

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Quotient r with r * divisor == self, over integer Laurent polys.

        Denominators are cleared by shifting both operands down to their
        monomial gcds, then ordinary sparse division eliminates leading terms
        under the graded-lex order; any failure to divide raises NotDivisible.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero()
        gp, gq = self.monomial_gcd(), divisor.monomial_gcd()
        p = self.shift(gp.pow(-1))
        q = divisor.shift(gq.pow(-1))
        lt_q_mono, lt_q_coef = q.leading_term()
        quotient: dict[Monomial, int] = {}
        rest = p
        while not rest.is_zero():
            mono, coef = rest.leading_term()
            if coef % lt_q_coef != 0 or not lt_q_mono.divides(mono):
                raise NotDivisible(f"({self}) is not divisible by ({divisor})")
            t_mono = mono.div(lt_q_mono)
            t_coef = coef // lt_q_coef
            quotient[t_mono] = t_coef
            rest = rest - q.shift(t_mono).scale(t_coef)
        return LaurentPoly(quotient).shift(gp.div(gq))

    def specialize_one(self, v: VarId) -> "LaurentPoly":
        """Substitute v -> 1 (any exponent), re-canonicalising the result."""
        out: dict[Monomial, int] = {}
        for mono, coef in self._terms.items():
            stripped = Monomial.of({w: e for w, e in mono.exps if w != v})
            out[stripped] = out.get(stripped, 0) + coef
        return LaurentPoly(out)


# -- module-level operation aliases (the contract surface) ------------------


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def pow(p: LaurentPoly, k: int) -> LaurentPoly:  # noqa: A001 - contract name
    return p**k


def exact_div(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p.exact_div(q)


def specialize_one(p: LaurentPoly, v: VarId) -> LaurentPoly:
    return p.specialize_one(v)


# -- text grammar ------------------------------------------------------------


def _render_body(coef: int, mono: Monomial) -> str:
    if not mono.exps:
        return str(coef)
    factors = "*".join(v.id if e == 1 else f"{v.id}^{e}" for v, e in mono.exps)
    return factors if coef == 1 else f"{coef}*{factors}"


def render(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for mono, coef in p.terms():
        if not pieces:
            pieces.append(("-" if coef < 0 else "") + _render_body(abs(coef), mono))
        else:
            pieces.append((" - " if coef < 0 else " + ") + _render_body(abs(coef), mono))
    return "".join(pieces)


_VAR_TOKEN = re.compile(r"^[^\s+\-*^0-9][^\s+\-*^]*$")
_INT_TOKEN = re.compile(r"^-?\d+$")


def is_valid_var_token(text: str) -> bool:
    """Whether an id can appear in the text grammar unambiguously."""
    return bool(_VAR_TOKEN.match(text))


def _parse_term(text: str) -> tuple[Monomial, int]:
    coef = 1
    exps: dict[VarId, int] = {}
    for factor in text.split("*"):
        factor = factor.strip()
        if not factor:
            raise ParseError(f"empty factor in term {text!r}")
        if _INT_TOKEN.match(factor):
            coef *= int(factor)
            continue
        name, caret, exp = factor.partition("^")
        name = name.strip()
        if not _VAR_TOKEN.match(name):
            raise ParseError(f"bad variable token {name!r}")
        if caret:
            if not _INT_TOKEN.match(exp.strip()):
                raise ParseError(f"bad exponent in factor {factor!r}")
            e = int(exp)
        else:
            e = 1
        v = VarId(name)
        exps[v] = exps.get(v, 0) + e
    return Monomial.of(exps), coef


def parse(text: str) -> LaurentPoly:
    """Parse the rendering grammar back into a canonical polynomial."""
    src = text.replace("−", "-").strip()
    if not src:
        raise ParseError("empty polynomial text")
    # Split into signed terms.  A +/- separates terms unless it directly
    # follows "^" or "*" (an exponent or coefficient sign); the grammar has
    # no parentheses.
    terms: list[tuple[int, str]] = []
    sign = 1
    i = 0
    if src[0] in "+-":
        sign = -1 if src[0] == "-" else 1
        i = 1
    buf: list[str] = []
    while i < len(src):
        ch = src[i]
        prev = "".join(buf).rstrip()
        if ch in "+-" and prev and prev[-1] not in "*^":
            terms.append((sign, prev))
            sign = -1 if ch == "-" else 1
            buf = []
        else:
            buf.append(ch)
        i += 1
    terms.append((sign, "".join(buf)))
    out = LaurentPoly.zero()
    for sgn, body in terms:
        body = body.strip()
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        mono, coef = _parse_term(body)
        out = out + LaurentPoly({mono: sgn * coef})
    return out
