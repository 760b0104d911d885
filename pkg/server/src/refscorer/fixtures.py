"""Record request/response fixture pairs for offline conformance testing.

The requests file is a JSON list of /v1/score request bodies. Each entry is
replayed through the real request handler and the pair is written as
``score-NN.request.json`` / ``score-NN.response.json``; the /v1/info body
is recorded alongside. Responses are serialized exactly as the server
would put them on the wire, so re-recording with the same cached model
yields identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from refscorer.model import CharLmBackend
from refscorer.server import score_payload


def record_fixtures(requests_path, out_dir, backend: CharLmBackend) -> list[Path]:
    with open(requests_path, encoding="utf-8") as fh:
        bodies = json.load(fh)
    if not isinstance(bodies, list) or not bodies:
        raise ValueError("requests file must hold a non-empty JSON list")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, body in enumerate(bodies):
        response = score_payload(backend, body)
        req_path = out / f"score-{i:02d}.request.json"
        resp_path = out / f"score-{i:02d}.response.json"
        req_path.write_text(
            json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        resp_path.write_bytes(json.dumps(response).encode("utf-8"))
        written.extend([req_path, resp_path])
    info_path = out / "info.response.json"
    info_path.write_bytes(json.dumps(backend.info()).encode("utf-8"))
    written.append(info_path)
    return written
