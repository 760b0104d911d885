"""Loopback HTTP server exposing a local scorer over the /v1 wire protocol.

Intended for protocol conformance testing and for serving an n-gram model
to remote clients. Probabilities are transmitted as natural-log values.
"""

from __future__ import annotations

import json
import math
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from fpscore.scorer import LocalScorer
from fpscore.tokenizer import tokenize


def _score_payload(scorer: LocalScorer, payload: dict) -> dict:
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
            tokens = tokenize(text)
        else:
            if not isinstance(text, list) or not text:
                raise ValueError("each pretokenized text must be a non-empty list")
            tokens = [str(t) for t in text]
        if not tokens:
            raise ValueError("text tokenized to nothing")
        records = []
        for ts in scorer.score(tokens):
            records.append(
                {
                    "token": ts.surface,
                    "logp_actual": math.log(ts.p_actual),
                    "logp_max": math.log(ts.p_max),
                    "rank": ts.rank,
                    "entropy_nats": ts.entropy_nats,
                }
            )
        results.append(records)
    info = scorer.info()
    return {
        "backend": {
            "name": info.backend_name,
            "vocab_size": info.vocab_size,
            "fingerprint": info.model_fingerprint,
        },
        "results": results,
    }


def make_handler(scorer: LocalScorer | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):  # quiet by default
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
            if scorer is None:
                self._send(503, {"error": "model not loaded"})
                return
            info = scorer.info()
            self._send(
                200,
                {
                    "name": info.backend_name,
                    "vocab_size": info.vocab_size,
                    "fingerprint": info.model_fingerprint,
                },
            )

        def do_POST(self):
            if self.path != "/v1/score":
                self._send(400, {"error": f"unknown path: {self.path}"})
                return
            if scorer is None:
                self._send(503, {"error": "model not loaded"})
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
                response = _score_payload(scorer, payload)
            except (ValueError, KeyError, TypeError, UnicodeDecodeError) as exc:
                self._send(400, {"error": str(exc)})
                return
            self._send(200, response)

    return Handler


class ScorerServer:
    """Threaded loopback server; use as a context manager in tests."""

    def __init__(self, scorer: LocalScorer | None, host: str = "127.0.0.1", port: int = 0):
        self._httpd = ThreadingHTTPServer((host, port), make_handler(scorer))
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


def serve_forever(scorer: LocalScorer, host: str, port: int) -> None:
    httpd = ThreadingHTTPServer((host, port), make_handler(scorer))
    httpd.serve_forever()
