"""HTTP session service: endpoints, errors, cache isolation, CLI parity."""

import json
import signal
import socket
import subprocess
import sys
import time
import urllib.error
import urllib.request

import pytest

from cherrypick.cli import main as cli_main
from cherrypick.service import BoundService

from conftest import ADVERSE_EVENTS, GASTRO


@pytest.fixture(scope="module")
def service():
    svc = BoundService(port=0, quiet=True).start()
    yield svc
    svc.shutdown()


def request(service, method, path, body=None):
    url = service.base_url + path
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method)
    if data:
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, resp.read(), dict(resp.headers)
    except urllib.error.HTTPError as err:
        return err.code, err.read(), dict(err.headers)


def make_adverse_session(service, alpha=0.05, test=None):
    payload = {
        "hypotheses": {
            "names": [n for n, _ in ADVERSE_EVENTS],
            "pvalues": [p for _, p in ADVERSE_EVENTS],
        },
        "test": test or {"kind": "fisher"},
        "alpha": alpha,
    }
    status, body, _ = request(service, "POST", "/sessions", payload)
    assert status == 201
    return json.loads(body)["id"]


class TestLifecycle:
    def test_health_probe(self, service):
        status, body, _ = request(service, "GET", "/healthz")
        assert status == 200 and body == b"ok"

    def test_create_and_query_bound(self, service):
        sid = make_adverse_session(service)
        gastro = ",".join(GASTRO)
        status, body, _ = request(service, "GET",
                                  f"/sessions/{sid}/bound?set={gastro}")
        assert status == 200
        doc = json.loads(body)
        assert doc["f_lower"] == 1
        assert doc["provenance"] == "exact"

    def test_deleted_session_is_gone(self, service):
        sid = make_adverse_session(service)
        status, _, _ = request(service, "DELETE", f"/sessions/{sid}")
        assert status == 204
        status, _, _ = request(service, "GET", f"/sessions/{sid}/curve")
        assert status == 404

    def test_cors_headers_present(self, service):
        _, _, headers = request(service, "GET", "/healthz")
        assert headers.get("Access-Control-Allow-Origin") == "*"


class TestErrors:
    def test_unknown_session(self, service):
        status, body, _ = request(service, "GET", "/sessions/nope/bound?set=top:1")
        assert status == 404
        assert "error" in json.loads(body)

    def test_empty_set_is_400(self, service):
        sid = make_adverse_session(service)
        status, _, _ = request(service, "GET", f"/sessions/{sid}/bound?set=")
        assert status == 400
        status, _, _ = request(service, "GET", f"/sessions/{sid}/bound")
        assert status == 400

    def test_unknown_name_is_400(self, service):
        sid = make_adverse_session(service)
        status, _, _ = request(service, "GET", f"/sessions/{sid}/bound?set=Zzz")
        assert status == 400

    def test_bad_body_is_400(self, service):
        status, _, _ = request(service, "POST", "/sessions", {"nope": 1})
        assert status == 400

    def test_defining_unavailable_above_cap_is_404(self, service):
        payload = {
            "hypotheses": {
                "names": [f"H{i}" for i in range(30)],
                "pvalues": [0.5] * 30,
            },
            "test": {"kind": "fisher"},
            "alpha": 0.05,
        }
        status, body, _ = request(service, "POST", "/sessions", payload)
        sid = json.loads(body)["id"]
        status, _, _ = request(service, "GET", f"/sessions/{sid}/defining")
        assert status == 404

    def test_method_unavailable_is_422(self, service):
        payload = {
            "hypotheses": {
                "names": [f"H{i}" for i in range(30)],
                "pvalues": [0.5] * 30,
            },
            "test": {"kind": "hommel"},
            "alpha": 0.05,
        }
        _, body, _ = request(service, "POST", "/sessions", payload)
        sid = json.loads(body)["id"]
        status, _, _ = request(service, "GET", f"/sessions/{sid}/bound?set=top:2")
        assert status == 422


class TestParityAndCaching:
    def test_bound_body_matches_cli_bytes(self, service, tmp_path, capsys):
        path = tmp_path / "adverse.csv"
        path.write_text("name,p\n" + "".join(f"{n},{p}\n" for n, p in ADVERSE_EVENTS))
        cli_main(["bound", "--input", str(path), "--set", ",".join(GASTRO)])
        cli_out = capsys.readouterr().out
        sid = make_adverse_session(service)
        _, body, _ = request(service, "GET",
                             f"/sessions/{sid}/bound?set={','.join(GASTRO)}")
        assert body.decode() == cli_out

    def test_curve_body_matches_cli_bytes(self, service, tmp_path, capsys):
        path = tmp_path / "adverse.csv"
        path.write_text("name,p\n" + "".join(f"{n},{p}\n" for n, p in ADVERSE_EVENTS))
        cli_main(["curve", "--input", str(path), "--format", "json"])
        cli_out = capsys.readouterr().out
        sid = make_adverse_session(service)
        _, body, _ = request(service, "GET", f"/sessions/{sid}/curve")
        assert body.decode() == cli_out

    def test_estimate_matches_cli(self, service, tmp_path, capsys):
        path = tmp_path / "adverse.csv"
        path.write_text("name,p\n" + "".join(f"{n},{p}\n" for n, p in ADVERSE_EVENTS))
        cli_main(["estimate", "--input", str(path), "--set", "top:16"])
        cli_out = capsys.readouterr().out
        sid = make_adverse_session(service)
        _, body, _ = request(service, "GET", f"/sessions/{sid}/estimate?set=top:16")
        assert body.decode() == cli_out
        assert json.loads(body)["estimate_t_half"] == 2

    def test_repeated_query_hits_memo(self, service):
        sid = make_adverse_session(service)
        _, first, _ = request(service, "GET", f"/sessions/{sid}/bound?set=top:6")
        _, second, _ = request(service, "GET", f"/sessions/{sid}/bound?set=top:6")
        assert first == second

    def test_sessions_do_not_share_caches(self, service):
        sid_a = make_adverse_session(service, alpha=0.05)
        sid_b = make_adverse_session(service, alpha=0.20)
        _, body_a, _ = request(service, "GET", f"/sessions/{sid_a}/bound?set=top:6")
        _, body_b, _ = request(service, "GET", f"/sessions/{sid_b}/bound?set=top:6")
        doc_a, doc_b = json.loads(body_a), json.loads(body_b)
        assert doc_a["alpha"] == 0.05 and doc_b["alpha"] == 0.2
        assert doc_b["f_lower"] >= doc_a["f_lower"]
        assert doc_a != doc_b

    def test_snapshot_recreates_identical_session(self, service):
        sid = make_adverse_session(service)
        _, snap, _ = request(service, "GET", f"/sessions/{sid}/snapshot")
        doc = json.loads(snap)
        status, body, _ = request(service, "POST", "/sessions", {
            "hypotheses": doc["hypotheses"],
            "test": doc["test"],
            "alpha": doc["alpha"],
        })
        assert status == 201
        sid2 = json.loads(body)["id"]
        _, a, _ = request(service, "GET", f"/sessions/{sid}/bound?set=top:10")
        _, b, _ = request(service, "GET", f"/sessions/{sid2}/bound?set=top:10")
        assert a == b

    def test_defining_endpoint(self, service):
        sid = make_adverse_session(service)
        _, body, _ = request(service, "GET", f"/sessions/{sid}/defining")
        doc = json.loads(body)
        assert doc["count"] == len(doc["defining"])
        assert all(isinstance(s, list) for s in doc["defining"])

    def test_serve_command_stops_on_sigterm(self):
        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            port = probe.getsockname()[1]
        proc = subprocess.Popen(
            [sys.executable, "-m", "cherrypick.cli", "serve",
             "--port", str(port), "--quiet"])
        try:
            deadline = time.time() + 10
            while time.time() < deadline:
                try:
                    with urllib.request.urlopen(
                            f"http://127.0.0.1:{port}/healthz", timeout=1) as resp:
                        assert resp.read() == b"ok"
                    break
                except OSError:
                    time.sleep(0.1)
            else:
                pytest.fail("service never came up")
            proc.send_signal(signal.SIGTERM)
            assert proc.wait(timeout=10) == 0
        finally:
            if proc.poll() is None:
                proc.kill()

    def test_serve_rejects_invalid_port(self, capsys):
        assert cli_main(["serve", "--port", "99999"]) == 2
        assert "invalid port" in capsys.readouterr().err

    def test_static_ui_serving(self, tmp_path):
        (tmp_path / "index.html").write_text("<html><body>ui</body></html>")
        (tmp_path / "assets").mkdir()
        (tmp_path / "assets" / "app.js").write_text("console.log(1)")
        svc = BoundService(port=0, quiet=True, ui_dir=tmp_path).start()
        try:
            status, body, headers = request(svc, "GET", "/")
            assert status == 200 and b"ui" in body
            assert "text/html" in headers["Content-Type"]
            status, body, _ = request(svc, "GET", "/assets/app.js")
            assert status == 200 and b"console" in body
            status, _, _ = request(svc, "GET", "/assets/../secret")
            assert status == 404
            # API routes still win over static files
            status, _, _ = request(svc, "GET", "/healthz")
            assert status == 200
        finally:
            svc.shutdown()

    def test_constant_family_session(self, service):
        payload = {
            "hypotheses": {
                "names": ["a", "b", "c", "d"],
                "pvalues": [0.001, 0.02, 0.3, 0.9],
            },
            "test": {"kind": "constant", "thresholds": [0.005, 0.01, 0.05, 0.1],
                     "calibration_alpha": 0.05},
            "alpha": 0.05,
        }
        status, body, _ = request(service, "POST", "/sessions", payload)
        assert status == 201
        sid = json.loads(body)["id"]
        status, body, _ = request(service, "GET", f"/sessions/{sid}/curve")
        assert status == 200
        assert len(json.loads(body)["points"]) == 4
