"""JSON schemas (cluster-seed/v1) for seeds, homs and morphisms.

Matrix fragment: {"rows": [ids], "cols": [ids], "entries": [[int]]}.
Seed: {"format": "cluster-seed/v1", "vars": [{"id", "frozen", "value"?}],
"matrix": fragment}; values use the polynomial text grammar and are omitted
when a variable is its own value, so initial seeds round-trip tersely.
Serialisation is canonical (sorted keys, no spaces) so identical payloads
are byte-identical.
"""

from __future__ import annotations

import json

from .errors import ParseError
from .exchange import ExtMatrix
from .laurent import LaurentPoly, VarId, parse, render
from .seeds import Seed, SeedVar

FORMAT = "cluster-seed/v1"

__all__ = [
    "FORMAT",
    "matrix_to_dict",
    "matrix_from_dict",
    "seed_to_dict",
    "seed_from_dict",
    "hom_to_dict",
    "hom_parts_from_dict",
    "morph_to_dict",
    "morph_parts_from_dict",
    "canonical_json",
]


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def matrix_to_dict(m: ExtMatrix) -> dict:
    return {
        "rows": [v.id for v in m.rows],
        "cols": [v.id for v in m.cols],
        "entries": [list(r) for r in m.entries],
    }


def matrix_from_dict(d: dict) -> ExtMatrix:
    try:
        rows = tuple(VarId(str(x)) for x in d["rows"])
        cols = tuple(VarId(str(x)) for x in d["cols"])
        entries = tuple(tuple(int(x) for x in row) for row in d["entries"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix fragment: {exc}") from exc
    return ExtMatrix(rows, cols, entries)


def seed_to_dict(seed: Seed) -> dict:
    vars_out = []
    for v in seed.vars:
        entry: dict = {"id": v.vid.id, "frozen": v.frozen}
        if v.value != LaurentPoly.var(v.vid):
            entry["value"] = render(v.value)
        vars_out.append(entry)
    return {"format": FORMAT, "vars": vars_out, "matrix": matrix_to_dict(seed.matrix)}


def seed_from_dict(d: dict) -> Seed:
    if not isinstance(d, dict) or d.get("format") != FORMAT:
        raise ParseError(f"seed payload must declare format {FORMAT!r}")
    try:
        raw_vars = d["vars"]
        matrix = matrix_from_dict(d["matrix"])
    except KeyError as exc:
        raise ParseError(f"seed payload missing {exc}") from exc
    vars_: list[SeedVar] = []
    for rv in raw_vars:
        vid = VarId(str(rv["id"]))
        frozen = bool(rv["frozen"])
        value = parse(rv["value"]) if "value" in rv else LaurentPoly.var(vid)
        vars_.append(SeedVar(vid, frozen, value))
    return Seed(tuple(vars_), matrix)


def hom_to_dict(source: Seed, target: Seed, mapping: dict[VarId, VarId]) -> dict:
    return {
        "source": seed_to_dict(source),
        "target": seed_to_dict(target),
        "map": {a.id: b.id for a, b in mapping.items()},
    }


def hom_parts_from_dict(d: dict) -> tuple[Seed, Seed, dict[VarId, VarId]]:
    try:
        source = seed_from_dict(d["source"])
        target = seed_from_dict(d["target"])
        mapping = {VarId(str(k)): VarId(str(v)) for k, v in d["map"].items()}
    except KeyError as exc:
        raise ParseError(f"hom payload missing {exc}") from exc
    return source, target, mapping


def morph_to_dict(source: Seed, target: Seed, mapping: dict[VarId, "VarId | int"]) -> dict:
    out_map = {}
    for a, b in mapping.items():
        out_map[a.id] = b if isinstance(b, int) else b.id
    return {
        "source": seed_to_dict(source),
        "target": seed_to_dict(target),
        "map": out_map,
    }


def morph_parts_from_dict(d: dict) -> tuple[Seed, Seed, dict[VarId, "VarId | int"]]:
    try:
        source = seed_from_dict(d["source"])
        target = seed_from_dict(d["target"])
        mapping: dict[VarId, VarId | int] = {}
        for k, v in d["map"].items():
            if isinstance(v, bool):
                raise ParseError("morphism images must be variable ids or integers")
            mapping[VarId(str(k))] = v if isinstance(v, int) else VarId(str(v))
    except KeyError as exc:
        raise ParseError(f"morphism payload missing {exc}") from exc
    return source, target, mapping
