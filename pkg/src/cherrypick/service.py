"""HTTP/JSON session service for interactive exploration.

Load the data once into a session, then answer any number of what-if bound
queries cheaply: the closure lattice (small n) is computed once per level
and identical queries are served from a memo table. Bodies mirror the CLI
JSON output byte for byte so golden files work across both front ends.
"""

from __future__ import annotations

import json
import mimetypes
import secrets
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .bounds import bound_report, curve_dict, curve_report, estimate_report
from .closure import ClosureResult, defining_rejections, run_closure
from .errors import (CherrypickError, ConvergenceError, InputError,
                     NoApplicableMethod, ParseError)
from .hypotheses import FULL_CLOSURE_CAP, HypothesisSet, make_hypotheses
from .localtests import LocalTest, make_test
from .selection import parse_set_spec

ESTIMATE_LEVEL = 0.5


class _NotFound(Exception):
    pass


class Session:
    """Immutable analysis state plus lazily built caches."""

    def __init__(self, sid: str, hyps: HypothesisSet, test: LocalTest,
                 alpha: float, test_config: dict):
        self.sid = sid
        self.hyps = hyps
        self.test = test
        self.alpha = alpha
        self.test_config = test_config
        self.created = time.time()
        self._closures: dict[float, ClosureResult] = {}
        self._memo: dict[str, bytes] = {}
        self._lock = threading.Lock()

    def closure_at(self, level: float) -> Optional[ClosureResult]:
        if self.hyps.n > FULL_CLOSURE_CAP:
            return None
        with self._lock:
            if level not in self._closures:
                self._closures[level] = run_closure(self.hyps, self.test, level)
            return self._closures[level]

    def memo_get(self, key: str) -> Optional[bytes]:
        with self._lock:
            return self._memo.get(key)

    def memo_put(self, key: str, value: bytes):
        with self._lock:
            self._memo.setdefault(key, value)

    def snapshot(self) -> dict:
        hyp_block = {"names": list(self.hyps.names)}
        if self.hyps.pvalues is not None:
            hyp_block["pvalues"] = list(self.hyps.pvalues)
        if self.hyps.zscores is not None:
            hyp_block["zscores"] = list(self.hyps.zscores)
        return {
            "id": self.sid,
            "alpha": self.alpha,
            "hypotheses": hyp_block,
            "test": self.test_config,
            "created": self.created,
        }


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, payload: dict) -> Session:
        if not isinstance(payload, dict):
            raise InputError("body must be a JSON object")
        hyp_block = payload.get("hypotheses")
        if not isinstance(hyp_block, dict) or "names" not in hyp_block:
            raise InputError("body needs hypotheses.names")
        hyps = make_hypotheses(
            hyp_block["names"],
            pvalues=hyp_block.get("pvalues"),
            zscores=hyp_block.get("zscores"),
        )
        test_config = payload.get("test") or {"kind": "fisher"}
        if not isinstance(test_config, dict) or "kind" not in test_config:
            raise InputError("test config needs a kind")
        test = make_test(test_config["kind"],
                         thresholds=test_config.get("thresholds"),
                         calibration_alpha=test_config.get("calibration_alpha"))
        alpha = float(payload.get("alpha", 0.05))
        if not 0.0 < alpha < 1.0:
            raise InputError(f"alpha must be in (0, 1), got {alpha}")
        sid = secrets.token_hex(8)
        session = Session(sid, hyps, test, alpha, test_config)
        with self._lock:
            self._sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise KeyError(sid)
        return session

    def delete(self, sid: str):
        with self._lock:
            if sid not in self._sessions:
                raise KeyError(sid)
            del self._sessions[sid]


def _render(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode()


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "cherrypick"

    # --- plumbing -----------------------------------------------------

    @property
    def store(self) -> SessionStore:
        return self.server.store

    def _cors_headers(self):
        self.send_header("Access-Control-Allow-Origin", self.server.cors_origin)
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _reply(self, status: int, body: bytes, content_type="application/json"):
        self.send_response(status)
        self._cors_headers()
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _reply_json(self, status: int, obj):
        self._reply(status, _render(obj))

    def _error(self, status: int, message: str):
        self._reply_json(status, {"error": message})

    def log_message(self, fmt, *args):
        if not self.server.quiet:
            super().log_message(fmt, *args)

    def _dispatch(self, method: str):
        try:
            self._route(method)
        except (ParseError, InputError) as exc:
            self._error(400, str(exc))
        except _NotFound as exc:
            self._error(404, str(exc))
        except KeyError:
            self._error(404, "unknown session")
        except NoApplicableMethod as exc:
            self._error(422, str(exc))
        except ConvergenceError as exc:
            self._error(500, f"numeric failure: {exc}")
        except CherrypickError as exc:
            self._error(400, str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            self._error(500, f"internal error: {exc}")

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_DELETE(self):
        self._dispatch("DELETE")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors_headers()
        self.send_header("Content-Length", "0")
        self.end_headers()

    # --- routing ------------------------------------------------------

    def _route(self, method: str):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}

        if method == "GET" and parts == ["healthz"]:
            self._reply(200, b"ok", content_type="text/plain")
            return
        if method == "POST" and parts == ["sessions"]:
            self._create_session()
            return
        if method == "GET" and self.server.ui_dir is not None \
                and (not parts or parts[0] != "sessions"):
            self._serve_static(parts)
            return
        if len(parts) >= 2 and parts[0] == "sessions":
            sid = parts[1]
            if method == "DELETE" and len(parts) == 2:
                self.store.delete(sid)
                self._reply(204, b"")
                return
            if method == "GET" and len(parts) == 3:
                session = self.store.get(sid)
                self._session_endpoint(session, parts[2], query)
                return
        self._error(404, "no such route")

    def _serve_static(self, parts):
        """Serve the bundled UI build (index.html plus hashed assets)."""
        root = self.server.ui_dir
        rel = "/".join(parts) or "index.html"
        target = (root / rel).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            self._error(404, "no such file")
            return
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self._reply(200, target.read_bytes(), content_type=ctype)

    def _create_session(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            payload = json.loads(raw.decode() or "{}")
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON body: {exc}") from None
        session = self.store.create(payload)
        self._reply_json(201, {
            "id": session.sid,
            "n": session.hyps.n,
            "alpha": session.alpha,
            "test": session.test.describe(),
        })

    def _session_endpoint(self, session: Session, endpoint: str, query: dict):
        memo_key = f"{endpoint}?{json.dumps(query, sort_keys=True)}"
        cached = session.memo_get(memo_key)
        if cached is not None:
            self._reply(200, cached)
            return
        if endpoint == "bound":
            body = self._bound_body(session, query)
        elif endpoint == "curve":
            body = self._curve_body(session)
        elif endpoint == "defining":
            body = self._defining_body(session)
        elif endpoint == "estimate":
            body = self._estimate_body(session, query)
        elif endpoint == "snapshot":
            body = _render(session.snapshot())
        else:
            self._error(404, f"unknown endpoint {endpoint!r}")
            return
        session.memo_put(memo_key, body)
        self._reply(200, body)

    def _bound_body(self, session, query) -> bytes:
        spec = query.get("set")
        if not spec:
            raise InputError("missing set parameter")
        R = parse_set_spec(spec, session.hyps)
        report = bound_report(session.hyps, session.test, R, session.alpha,
                              closure_cache=session.closure_at(session.alpha))
        return _render(report.as_dict())

    def _curve_body(self, session) -> bytes:
        curve, provenance = curve_report(
            session.hyps, session.test, session.alpha,
            closure_cache=session.closure_at(session.alpha))
        return _render(curve_dict(curve, provenance))

    def _defining_body(self, session) -> bytes:
        if session.hyps.n > FULL_CLOSURE_CAP:
            raise _NotFound(
                f"defining rejections need the exact closure (n <= {FULL_CLOSURE_CAP})")
        result = session.closure_at(session.alpha)
        sets = [s.names(session.hyps) for s in defining_rejections(result)]
        return _render({"alpha": session.alpha, "count": len(sets), "defining": sets})

    def _estimate_body(self, session, query) -> bytes:
        spec = query.get("set")
        if not spec:
            raise InputError("missing set parameter")
        R = parse_set_spec(spec, session.hyps)
        report = estimate_report(
            session.hyps, session.test, R, session.alpha,
            closure_cache=session.closure_at(session.alpha),
            estimate_cache=session.closure_at(ESTIMATE_LEVEL))
        return _render(report)


class BoundService:
    """Embeddable server handle: start(), base_url, shutdown()."""

    def __init__(self, host="127.0.0.1", port=0, cors_origin="*", quiet=True,
                 ui_dir=None):
        self.httpd = ThreadingHTTPServer((host, port), _Handler)
        self.httpd.store = SessionStore()
        self.httpd.cors_origin = cors_origin
        self.httpd.quiet = quiet
        self.httpd.ui_dir = Path(ui_dir) if ui_dir else None
        self._thread: Optional[threading.Thread] = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    @property
    def base_url(self) -> str:
        host = self.httpd.server_address[0]
        return f"http://{host}:{self.port}"

    def start(self):
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def shutdown(self):
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread:
            self._thread.join(timeout=5)


def serve(host: str, port: int, cors_origin: str = "*", quiet: bool = False,
          ui_dir=None):
    """Blocking entry point used by the CLI; stops cleanly on SIGINT/SIGTERM."""
    import signal

    service = BoundService(host, port, cors_origin=cors_origin, quiet=quiet,
                           ui_dir=ui_dir)
    stop = threading.Event()

    def handle_signal(signum, frame):
        stop.set()

    signal.signal(signal.SIGTERM, handle_signal)
    signal.signal(signal.SIGINT, handle_signal)
    service.start()
    if not quiet:
        print(f"listening on {service.base_url}", flush=True)
    try:
        while not stop.wait(0.2):
            pass
    finally:
        service.shutdown()
