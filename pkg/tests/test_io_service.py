import json
import subprocess
import sys
import threading
import urllib.request

import pytest

from clusterkit.io import (
    canonical_json,
    matrix_from_dict,
    matrix_to_dict,
    morph_parts_from_dict,
    morph_to_dict,
    seed_from_dict,
    seed_to_dict,
)
from clusterkit.laurent import VarId
from clusterkit.seeds import mutate_seed
from clusterkit.service import evaluate, serve

A2_JSON = {
    "format": "cluster-seed/v1",
    "vars": [{"id": "x1", "frozen": False}, {"id": "x2", "frozen": False}],
    "matrix": {"rows": ["x1", "x2"], "cols": ["x1", "x2"], "entries": [[0, 1], [-1, 0]]},
}


class TestJson:
    def test_seed_round_trip_bit_exact(self, a2):
        d = seed_to_dict(a2)
        assert canonical_json(d) == canonical_json(seed_to_dict(seed_from_dict(d)))

    def test_mutated_seed_round_trip(self, a2):
        t = mutate_seed(a2, VarId("x1"))
        d = seed_to_dict(t)
        assert d["vars"][0] == {"id": "x1@1", "frozen": False, "value": "x1^-1*x2 + x1^-1"}
        back = seed_from_dict(d)
        assert back.same_as(t)
        assert canonical_json(seed_to_dict(back)) == canonical_json(d)

    def test_matrix_fragment(self, a3):
        d = matrix_to_dict(a3.matrix)
        assert matrix_from_dict(d) == a3.matrix

    def test_morph_round_trip(self, a2):
        mapping = {VarId("x1"): VarId("x1"), VarId("x2"): 3}
        d = morph_to_dict(a2, a2, mapping)
        src, tgt, back = morph_parts_from_dict(json.loads(canonical_json(d)))
        assert back == mapping


class TestEvaluate:
    def test_mutate_action(self):
        request = {"seed": A2_JSON, "seq": [], "action": {"mutate": "x1"}}
        out = evaluate(request)
        new_vars = out["result"]["seed"]["vars"]
        assert new_vars[0]["value"] == "x1^-1*x2 + x1^-1"
        assert out["replay"]["vars"] == A2_JSON["vars"]

    def test_census_action(self):
        out = evaluate({"seed": A2_JSON, "seq": [], "action": {"enumerate": {}}})
        assert out["result"] == {"pure": 4, "total": 7, "proper": 3}

    def test_determinism(self):
        request = {"seed": A2_JSON, "seq": ["x1"], "action": {"mutate": "x2"}}
        a = canonical_json(evaluate(request))
        b = canonical_json(evaluate(request))
        assert a == b

    def test_replay_applies_before_action(self):
        request = {"seed": A2_JSON, "seq": ["x1"], "action": {"mutate": "x2"}}
        out = evaluate(request)
        assert out["replay"]["vars"][0]["id"] == "x1@1"

    def test_depth_clamped_with_diagnostic(self, a2):
        request = {
            "seed": A2_JSON,
            "seq": [],
            "action": {"check_total": {}},
            "depths": {"totality": 99},
        }
        out = evaluate(request)
        assert any("clamped" in d for d in out["diagnostics"])

    def test_classify_action(self):
        out = evaluate({"seed": A2_JSON, "seq": [], "action": {"classify": {}}})
        assert out["result"] == {
            "finite_type": "finite",
            "cluster_vars": 5,
            "seeds": 5,
            "mutation_class": 1,
        }


@pytest.fixture(scope="module")
def httpd():
    server = serve(0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


def _post(server, path, body: bytes):
    port = server.server_address[1]
    req = urllib.request.Request(
        f"http://127.0.0.1:{port}{path}", data=body, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


class TestHttp:
    def test_health(self, httpd):
        port = httpd.server_address[1]
        with urllib.request.urlopen(f"http://127.0.0.1:{port}/api/v1/health") as resp:
            assert resp.status == 200
            assert json.loads(resp.read()) == {"ok": True}

    def test_eval_mutate(self, httpd):
        body = canonical_json({"seed": A2_JSON, "seq": [], "action": {"mutate": "x1"}}).encode()
        status, payload = _post(httpd, "/api/v1/eval", body)
        assert status == 200
        out = json.loads(payload)
        assert out["result"]["seed"]["vars"][0]["value"] == "x1^-1*x2 + x1^-1"

    def test_byte_identical_responses(self, httpd):
        body = canonical_json({"seed": A2_JSON, "seq": ["x1"], "action": {"mutate": "x2"}}).encode()
        _, first = _post(httpd, "/api/v1/eval", body)
        _, second = _post(httpd, "/api/v1/eval", body)
        assert first == second

    def test_malformed_json_400(self, httpd):
        status, payload = _post(httpd, "/api/v1/eval", b"{nope")
        assert status == 400
        assert json.loads(payload)["error"]["code"] == "malformed-json"

    def test_inadmissible_seq_422_with_index(self, httpd):
        body = canonical_json(
            {"seed": A2_JSON, "seq": ["x1", "x1"], "action": {"mutate": "x2"}}
        ).encode()
        status, payload = _post(httpd, "/api/v1/eval", body)
        assert status == 422
        err = json.loads(payload)["error"]
        assert err["code"] == "sequence-error" and err["index"] == 1


def run_cli(args, files: dict[str, dict], tmp_path):
    paths = {}
    for name, content in files.items():
        p = tmp_path / name
        p.write_text(json.dumps(content))
        paths[name] = str(p)
    argv = [a if a not in paths else paths[a] for a in args]
    return subprocess.run(
        [sys.executable, "-m", "clusterkit", *argv],
        capture_output=True,
        text=True,
        timeout=120,
    )


class TestCli:
    def test_mutate(self, tmp_path):
        out = run_cli(["mutate", "--seed", "a2.json", "--at", "x1"], {"a2.json": A2_JSON}, tmp_path)
        assert out.returncode == 0
        payload = json.loads(out.stdout)
        assert payload["vars"][0]["value"] == "x1^-1*x2 + x1^-1"

    def test_census(self, tmp_path):
        out = run_cli(["census", "--seed", "a2.json"], {"a2.json": A2_JSON}, tmp_path)
        assert out.returncode == 0
        assert json.loads(out.stdout) == {"pure": 4, "total": 7, "proper": 3}

    def test_domain_error_exit_1(self, tmp_path):
        out = run_cli(["mutate", "--seed", "a2.json", "--at", "zz"], {"a2.json": A2_JSON}, tmp_path)
        assert out.returncode == 1
        assert json.loads(out.stderr)["error"]["code"] == "not-exchangeable"

    def test_unknown_flag_exit_2(self, tmp_path):
        out = run_cli(["mutate", "--seed", "a2.json", "--wat"], {"a2.json": A2_JSON}, tmp_path)
        assert out.returncode == 2

    def test_check_hom_cli(self, tmp_path):
        hom = {"source": A2_JSON, "target": A2_JSON, "map": {"x1": "x1", "x2": "x2"}}
        out = run_cli(["check-hom", "--hom", "hom.json"], {"hom.json": hom}, tmp_path)
        assert out.returncode == 0
        assert json.loads(out.stdout) == {"valid": True, "sign_class": "positive"}

    def test_cli_and_http_share_output(self, tmp_path, httpd):
        out = run_cli(["mutate", "--seed", "a2.json", "--at", "x1"], {"a2.json": A2_JSON}, tmp_path)
        body = canonical_json({"seed": A2_JSON, "seq": [], "action": {"mutate": "x1"}}).encode()
        _, payload = _post(httpd, "/api/v1/eval", body)
        assert json.loads(out.stdout) == json.loads(payload)["result"]["seed"]


SPLIT_PAIR_JSON = {
    "format": "cluster-seed/v1",
    "vars": [
        {"id": "x", "frozen": False},
        {"id": "y1", "frozen": True},
        {"id": "y2", "frozen": True},
    ],
    "matrix": {"rows": ["x"], "cols": ["x", "y1", "y2"], "entries": [[0, 1, -1]]},
}


class TestGlueAction:
    def test_non_glueable_pair_fails_with_offending_variable(self):
        request = {"seed": SPLIT_PAIR_JSON, "seq": [], "action": {"glue": {"pair": ["y1", "y2"]}}}
        with pytest.raises(Exception) as err:
            evaluate(request)
        payload = err.value.payload()
        assert payload["code"] == "not-glueable"
        assert payload["variable"] == "x"
        assert payload["seq"] == []

    def test_force_bypasses_the_check(self):
        request = {
            "seed": SPLIT_PAIR_JSON,
            "seq": [],
            "action": {"glue": {"pair": ["y1", "y2"], "force": True}},
        }
        out = evaluate(request)
        glued = out["result"]["seed"]
        assert glued["matrix"]["entries"] == [[0, 0]]

    def test_glueable_pair_notes_verified_depth(self):
        good = dict(SPLIT_PAIR_JSON)
        good = json.loads(json.dumps(SPLIT_PAIR_JSON))
        good["matrix"]["entries"] = [[0, 1, 1]]
        out = evaluate({"seed": good, "seq": [], "action": {"glue": {"pair": ["y1", "y2"]}}})
        assert any("glueable verified" in d for d in out["diagnostics"])


class TestServeCli:
    def test_serve_subprocess_health_and_eval(self):
        import socket
        import time

        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            port = probe.getsockname()[1]
        proc = subprocess.Popen(
            [sys.executable, "-m", "clusterkit", "serve", "--port", str(port)],
            stderr=subprocess.DEVNULL,
        )
        try:
            deadline = time.monotonic() + 15
            last_err = None
            while time.monotonic() < deadline:
                try:
                    with urllib.request.urlopen(
                        f"http://127.0.0.1:{port}/api/v1/health", timeout=1
                    ) as resp:
                        assert json.loads(resp.read()) == {"ok": True}
                        break
                except Exception as exc:  # noqa: BLE001 - retry until deadline
                    last_err = exc
                    time.sleep(0.1)
            else:
                raise AssertionError(f"server never became healthy: {last_err}")
            body = canonical_json(
                {"seed": A2_JSON, "seq": [], "action": {"enumerate": {}}}
            ).encode()
            req = urllib.request.Request(
                f"http://127.0.0.1:{port}/api/v1/eval",
                data=body,
                headers={"Content-Type": "application/json"},
            )
            with urllib.request.urlopen(req, timeout=5) as resp:
                payload = json.loads(resp.read())
            assert payload["result"] == {"pure": 4, "total": 7, "proper": 3}
        finally:
            proc.terminate()
            proc.wait(timeout=10)


class TestInternalErrorAnswers500:
    def test_bug_shaped_request_gets_json_500(self, httpd):
        # a structurally valid request whose payload type explodes deep
        # inside evaluation must still produce a JSON error response
        body = canonical_json(
            {"seed": A2_JSON, "seq": [], "action": {"glue": {"pair": "x1"}}}
        ).encode()
        status, payload = _post(httpd, "/api/v1/eval", body)
        assert status in (422, 500)
        assert "error" in json.loads(payload)
