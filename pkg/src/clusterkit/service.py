"""Stateless evaluation core shared by the CLI and the HTTP API.

A request is self-contained: {"seed": ..., "seq": [ids], "action": {...}}.
The seed is replayed through the mutation sequence, the action is applied
to the replayed state, and the response carries {"result", "diagnostics",
"replay"}.  No session state exists anywhere, so identical requests yield
byte-identical responses.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import morphisms as morph_mod
from .census import DEFAULT_CAP as CENSUS_CAP
from .census import FiniteMutationClass, FiniteType
from .census import census as run_census
from .census import finite_mutation_type, finite_type
from .errors import BadSpec, ClusterError, NotGlueable, ParseError
from .exchange import Total, VerifiedToDepth, check_totally_sss
from .homs import HomViolation, check_seed_hom, sign_classify
from .io import (
    canonical_json,
    hom_parts_from_dict,
    morph_parts_from_dict,
    morph_to_dict,
    seed_from_dict,
    seed_to_dict,
)
from .laurent import VarId
from .seeds import SubseedSpec, apply_sequence, decompose, glue, mutate_seed, subseed

__all__ = ["evaluate", "serve", "DEPTH_DEFAULTS", "DEPTH_CAPS"]

DEPTH_DEFAULTS = {"cm3": 4, "glueable": 6, "totality": 5}
DEPTH_CAPS = {"cm3": 8, "glueable": 10, "totality": 8}


def _depth(request: dict, kind: str, diagnostics: list[str]) -> int:
    depths = request.get("depths") or {}
    value = depths.get(kind, DEPTH_DEFAULTS[kind])
    if not isinstance(value, int) or value < 0:
        raise BadSpec(f"depth {kind!r} must be a nonnegative integer")
    if value > DEPTH_CAPS[kind]:
        diagnostics.append(f"depth {kind} clamped to the server cap {DEPTH_CAPS[kind]}")
        value = DEPTH_CAPS[kind]
    return value


def _cm3_verdict_dict(v) -> dict:
    if isinstance(v, morph_mod.CM3Verified):
        return {"status": "verified-to-depth", "depth": v.depth}
    return {
        "status": "counterexample",
        "seq": [s.id for s in v.seq],
        "variable": v.variable.id,
        "reason": v.reason,
    }


def _spec_from_payload(payload: dict) -> SubseedSpec:
    freeze = [VarId(str(x)) for x in payload.get("freeze", [])]
    delete = [VarId(str(x)) for x in payload.get("delete", [])]
    return SubseedSpec(frozenset(freeze), frozenset(delete))


def evaluate(request: dict) -> dict:
    """Apply one action to a replayed seed state; pure over the request."""
    if not isinstance(request, dict):
        raise ParseError("request must be a JSON object")
    action = request.get("action")
    if not isinstance(action, dict) or len(action) != 1:
        raise ParseError("action must be a single-key object")
    (name, payload), = action.items()
    diagnostics: list[str] = []

    replay = None
    if "seed" in request and request["seed"] is not None:
        seed = seed_from_dict(request["seed"])
        seq = tuple(VarId(str(x)) for x in request.get("seq") or [])
        replay = apply_sequence(seed, seq)
    needs_seed = {
        "mutate", "subseed", "glue", "enumerate", "classify", "check_total", "specialise",
    }
    if replay is None and (name in needs_seed or (name == "decompose" and not (
        isinstance(payload, dict) and "morphism" in payload
    ))):
        raise ParseError(f"action {name!r} needs a seed in the request")

    if name == "mutate":
        result = {"seed": seed_to_dict(mutate_seed(replay, VarId(str(payload))))}
    elif name == "subseed":
        result = {"seed": seed_to_dict(subseed(replay, _spec_from_payload(payload)))}
    elif name == "glue":
        y1, y2 = (VarId(str(x)) for x in payload["pair"])
        force = bool(payload.get("force")) if isinstance(payload, dict) else False
        both_frozen = (
            replay.has(y1)
            and replay.has(y2)
            and replay.var(y1).frozen
            and replay.var(y2).frozen
        )
        if both_frozen and not force:
            depth = _depth(request, "glueable", diagnostics)
            verdict = morph_mod.glueable(replay, y1, y2, depth)
            if isinstance(verdict, morph_mod.GlueableFailed):
                raise NotGlueable(
                    f"column signs split at {verdict.variable} after"
                    f" {list(s.id for s in verdict.seq)}",
                    verdict.variable.id,
                    [s.id for s in verdict.seq],
                )
            diagnostics.append(f"glueable verified to depth {verdict.depth}")
        out = glue(replay, [y1], {y1: y2}, warnings=diagnostics)
        result = {"seed": seed_to_dict(out)}
    elif name == "enumerate":
        want_records = bool(payload.get("records")) if isinstance(payload, dict) else False
        c = run_census(replay, list_records=want_records)
        result = {"pure": c.pure_count, "total": c.total_count, "proper": c.proper_count}
        if c.records is not None:
            result["records"] = [
                {
                    "freeze": sorted(v.id for v in r.spec.I0),
                    "delete": sorted(v.id for v in r.spec.I1),
                    "kind": r.kind,
                }
                for r in c.records
            ]
    elif name == "classify":
        cap = payload.get("cap", CENSUS_CAP) if isinstance(payload, dict) else CENSUS_CAP
        ft = finite_type(replay, cap)
        fm = finite_mutation_type(replay.matrix, cap)
        result = {
            "finite_type": "finite" if isinstance(ft, FiniteType) else "exceeded-cap",
            "cluster_vars": getattr(ft, "cluster_vars", None),
            "seeds": getattr(ft, "seeds", None),
            "mutation_class": fm.class_size if isinstance(fm, FiniteMutationClass) else "exceeded-cap",
        }
    elif name == "check_total":
        depth = _depth(request, "totality", diagnostics)
        verdict = check_totally_sss(replay.matrix, depth)
        if isinstance(verdict, Total):
            result = {"status": "total"}
        elif isinstance(verdict, VerifiedToDepth):
            result = {"status": "verified-to-depth", "depth": verdict.depth}
        else:
            result = {
                "status": "counterexample",
                "seq": [s.id for s in verdict.seq],
                "pair": [verdict.pair[0].id, verdict.pair[1].id],
            }
    elif name == "check_hom":
        source, target, mapping = hom_parts_from_dict(payload)
        out = check_seed_hom(source, target, mapping)
        if isinstance(out, HomViolation):
            result = {
                "valid": False,
                "violation": {
                    "kind": out.kind,
                    "detail": out.detail,
                    "witnesses": [w.id for w in out.witnesses],
                },
            }
        else:
            result = {"valid": True, "sign_class": sign_classify(out).value}
    elif name == "check_morphism":
        source, target, mapping = morph_parts_from_dict(payload)
        m = morph_mod.MorphSpec(source, target, mapping)
        report = morph_mod.check_cm12(m)
        result = {
            "cm1_violations": [v.id for v in report.cm1_violations],
            "cm2_violations": [v.id for v in report.cm2_violations],
        }
        if report.ok:
            depth = _depth(request, "cm3", diagnostics)
            result["cm3"] = _cm3_verdict_dict(morph_mod.check_cm3(m, depth))
    elif name == "decompose":
        if isinstance(payload, dict) and "morphism" in payload:
            source, target, mapping = morph_parts_from_dict(payload["morphism"])
            m = morph_mod.MorphSpec(source, target, mapping)
            dec = morph_mod.decompose_surjective(m)
            result = {
                "gluing_steps": [
                    {
                        "pair": [s.pair[0].id, s.pair[1].id],
                        "gluing_var": s.gluing_var.id,
                        "seed": seed_to_dict(s.seed),
                    }
                    for s in dec.gluing_steps
                ],
                "final_iso": {a.id: b.id for a, b in dec.final_iso},
            }
        else:
            result = {"seeds": [seed_to_dict(p) for p in decompose(replay)]}
    elif name == "specialise":
        at = [VarId(str(x)) for x in payload["at"]]
        depth = _depth(request, "cm3", diagnostics)
        m = morph_mod.specialisation(replay, at, depth)
        result = {
            "morphism": morph_to_dict(m.source, m.target, m.mapping),
            "surjectivity": m.surjectivity,
        }
        if m.cm3 is not None:
            result["cm3"] = _cm3_verdict_dict(m.cm3)
    else:
        raise ParseError(f"unknown action {name!r}")

    return {
        "result": result,
        "diagnostics": diagnostics,
        "replay": seed_to_dict(replay) if replay is not None else None,
    }


class _Handler(BaseHTTPRequestHandler):
    server_version = "clusterkit/0.1"

    def _send(self, status: int, payload: dict) -> None:
        body = canonical_json(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):  # noqa: N802 - http.server API
        if self.path == "/api/v1/health":
            self._send(200, {"ok": True})
        else:
            self._send(404, {"error": {"code": "not-found", "message": self.path}})

    def do_POST(self):  # noqa: N802 - http.server API
        if self.path != "/api/v1/eval":
            self._send(404, {"error": {"code": "not-found", "message": self.path}})
            return
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        try:
            request = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self._send(400, {"error": {"code": "malformed-json", "message": str(exc)}})
            return
        try:
            self._send(200, evaluate(request))
        except ClusterError as exc:
            self._send(422, {"error": exc.payload()})
        except Exception as exc:  # noqa: BLE001 - a bug must still answer
            self._send(500, {"error": {"code": "internal-error", "message": str(exc)}})

    def log_message(self, *args):  # silence per-request stderr noise
        pass


def serve(port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Build the HTTP server; callers run serve_forever on it."""
    return ThreadingHTTPServer((host, port), _Handler)
