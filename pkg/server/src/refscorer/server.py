"""HTTP surface: POST /v1/score and GET /v1/info.

Wire format: UTF-8 JSON; probabilities travel as natural-log values. Raw
mode scores each request string with the backend's own tokenizer. In
pretokenized mode the token list is joined with single spaces and scored
the same way, so the response carries one record per backend token, not
per submitted token. Inference is serialized behind a lock; requests are
otherwise stateless.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from refscorer.model import CharLmBackend


def score_payload(backend: CharLmBackend, payload: dict) -> dict:
    mode = payload.get("mode")
    texts = payload.get("texts")
    if mode not in ("pretokenized", "raw"):
        raise ValueError(f"unknown mode: {mode!r}")
    if not isinstance(texts, list) or not texts:
        raise ValueError("non-empty texts required")
    results = []
    for text in texts:
        if mode == "raw":
            if not isinstance(text, str):
                raise ValueError("raw mode requires string texts")
        else:
            if not isinstance(text, list) or not text:
                raise ValueError("each pretokenized text must be a non-empty list")
            text = " ".join(str(t) for t in text)
        if not text:
            raise ValueError("empty text")
        results.append(backend.score_text(text))
    return {"backend": backend.info(), "results": results}


def make_handler(backend: CharLmBackend | None):
    lock = threading.Lock()

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):
            pass

        def _send(self, status: int, payload: dict):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            if self.path != "/v1/info":
                self._send(400, {"error": f"unknown path: {self.path}"})
                return
            if backend is None:
                self._send(503, {"error": "model not loaded"})
                return
            self._send(200, backend.info())

        def do_POST(self):
            if self.path != "/v1/score":
                self._send(400, {"error": f"unknown path: {self.path}"})
                return
            if backend is None:
                self._send(503, {"error": "model not loaded"})
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
                with lock:
                    response = score_payload(backend, payload)
            except (ValueError, KeyError, TypeError, UnicodeDecodeError) as exc:
                self._send(400, {"error": str(exc)})
                return
            self._send(200, response)

    return Handler


class RefServer:
    """Threaded server bound to an ephemeral port; context manager for tests."""

    def __init__(self, backend: CharLmBackend | None, host: str = "127.0.0.1", port: int = 0):
        self._httpd = ThreadingHTTPServer((host, port), make_handler(backend))
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)
        return False


def serve_forever(backend: CharLmBackend, host: str, port: int) -> None:
    httpd = ThreadingHTTPServer((host, port), make_handler(backend))
    httpd.serve_forever()
