"""Scoring backends: local n-gram scorer and the remote wire-protocol client.

Both return per-position TokenScore records with the same definitions:
p_actual is the probability of the observed token given its left context,
p_max the highest probability of any vocabulary token there, rank counts
strictly-greater tokens plus one, entropy is in nats.

The wire protocol is HTTP/1.1 + UTF-8 JSON (POST /v1/score, GET /v1/info);
probabilities travel as natural-log values to avoid underflow and are
converted back on the client.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import requests

from fpscore.ngram import NgramModel
from fpscore.tokenizer import encode, tokenize
from fpscore.types import ScorerInfo, TokenScore

DEFAULT_TIMEOUT_SECS = 30.0
_BATCH_SIZE = 32

VALID_INCLUDE = ("p_actual", "p_max", "rank", "entropy")


class ScorerError(Exception):
    """Raised for remote transport failures and malformed responses."""


@dataclass(frozen=True)
class ScoreRequest:
    """A batchable scoring request.

    mode "pretokenized" sends token lists; mode "raw" sends plain strings
    and lets the server tokenize with its own tokenizer.
    """

    mode: str
    texts: tuple
    include: tuple = VALID_INCLUDE

    def __post_init__(self):
        if self.mode not in ("pretokenized", "raw"):
            raise ValueError(f"unknown mode: {self.mode!r}")
        if not self.texts:
            raise ValueError("non-empty texts required")
        if self.mode == "pretokenized" and any(not t for t in self.texts):
            raise ValueError("each pretokenized text must be non-empty")
        bad = [i for i in self.include if i not in VALID_INCLUDE]
        if bad:
            raise ValueError(f"unknown include fields: {bad}")

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "texts": [list(t) if isinstance(t, tuple) else t for t in self.texts],
            "include": list(self.include),
        }


@dataclass(frozen=True)
class ScoreResponse:
    """Parsed server response: per-text token scores plus backend identity."""

    backend: ScorerInfo
    results: tuple[tuple[TokenScore, ...], ...]


class LocalScorer:
    """Scores token sequences directly against an in-process n-gram model.

    Pure function of (model, tokens); safe for concurrent readers.
    """

    def __init__(self, model: NgramModel):
        self.model = model

    def info(self) -> ScorerInfo:
        return ScorerInfo(
            backend_name=f"ngram-{self.model.n}",
            vocab_size=self.model.vocab_size,
            model_fingerprint=self.model.fingerprint,
        )

    def score(self, tokens) -> list[TokenScore]:
        """Score a sequence of surfaces or ids; OOV surfaces map to UNK."""
        if not tokens:
            raise ValueError("empty token sequence")
        if isinstance(tokens[0], str):
            surfaces = list(tokens)
            ids = encode(surfaces, self.model.vocab)
        else:
            ids = list(tokens)
            surfaces = [self.model.vocab.surface_of(i) for i in ids]
        scores = []
        for i, token_id in enumerate(ids):
            dist = self.model.next_distribution(ids[:i])
            p_actual = float(dist[token_id])
            p_max = float(dist.max())
            rank = 1 + int(np.count_nonzero(dist > p_actual))
            entropy = float(-(dist * np.log(dist)).sum())
            scores.append(
                TokenScore(
                    p_actual=p_actual,
                    p_max=p_max,
                    rank=rank,
                    entropy_nats=entropy,
                    fp=p_actual / p_max,
                    surface=surfaces[i],
                )
            )
        return scores


def parse_score_response(payload: dict) -> ScoreResponse:
    """Validate and convert a /v1/score JSON body into TokenScore records."""
    try:
        backend = payload["backend"]
        info = ScorerInfo(
            backend_name=str(backend["name"]),
            vocab_size=int(backend["vocab_size"]),
            model_fingerprint=str(backend["fingerprint"]),
        )
        results = []
        for text in payload["results"]:
            scores = []
            for rec in text:
                logp_actual = float(rec["logp_actual"])
                logp_max = float(rec["logp_max"])
                rank = int(rec["rank"])
                entropy = float(rec["entropy_nats"])
                if not all(map(math.isfinite, (logp_actual, logp_max, entropy))):
                    raise ScorerError("malformed response: non-finite numeric field")
                if logp_actual > logp_max + 1e-12:
                    raise ScorerError("malformed response: logp_actual > logp_max")
                if rank < 1:
                    raise ScorerError("malformed response: rank < 1")
                if entropy < 0:
                    raise ScorerError("malformed response: negative entropy")
                scores.append(
                    TokenScore(
                        p_actual=math.exp(logp_actual),
                        p_max=math.exp(logp_max),
                        rank=rank,
                        entropy_nats=entropy,
                        fp=math.exp(logp_actual - logp_max),
                        surface=str(rec.get("token", "")),
                    )
                )
            results.append(tuple(scores))
    except ScorerError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScorerError(f"malformed response: {exc}") from exc
    return ScoreResponse(backend=info, results=tuple(results))


def _timeout() -> float:
    env = os.environ.get("FPSCORE_REMOTE_TIMEOUT_SECS")
    return float(env) if env else DEFAULT_TIMEOUT_SECS


class RemoteScorer:
    """Client for a scorer server speaking the /v1 wire protocol.

    Batches of at most 32 texts per call; responses are reassembled in
    request order, so completion order never affects output. One reconnect
    attempt is made on transport failure, then the error propagates.
    """

    def __init__(self, base_url: str, session: requests.Session | None = None):
        self.base_url = base_url.rstrip("/")
        self._session = session or requests.Session()

    def _post_score(self, body: dict) -> dict:
        url = f"{self.base_url}/v1/score"
        last_exc = None
        for _attempt in range(2):
            try:
                resp = self._session.post(url, json=body, timeout=_timeout())
                break
            except requests.RequestException as exc:
                last_exc = exc
        else:
            raise ScorerError(f"remote unreachable: {last_exc}") from last_exc
        if resp.status_code != 200:
            try:
                detail = resp.json().get("error", resp.text)
            except (ValueError, AttributeError):
                detail = resp.text
            raise ScorerError(f"server error {resp.status_code}: {detail}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ScorerError(f"malformed response: {exc}") from exc

    def remote_score(self, request: ScoreRequest) -> ScoreResponse:
        texts = request.texts
        backend = None
        results: list = []
        for start in range(0, len(texts), _BATCH_SIZE):
            batch = ScoreRequest(
                mode=request.mode,
                texts=texts[start: start + _BATCH_SIZE],
                include=request.include,
            )
            parsed = parse_score_response(self._post_score(batch.to_json()))
            if backend is None:
                backend = parsed.backend
            results.extend(parsed.results)
        return ScoreResponse(backend=backend, results=tuple(results))

    def info(self) -> ScorerInfo:
        url = f"{self.base_url}/v1/info"
        try:
            resp = self._session.get(url, timeout=_timeout())
        except requests.RequestException as exc:
            raise ScorerError(f"remote unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise ScorerError(f"server error {resp.status_code}")
        try:
            backend = resp.json()
            return ScorerInfo(
                backend_name=str(backend["name"]),
                vocab_size=int(backend["vocab_size"]),
                model_fingerprint=str(backend["fingerprint"]),
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise ScorerError(f"malformed response: {exc}") from exc

    def score(self, tokens) -> list[TokenScore]:
        """Score one sequence; surfaces go pretokenized, a string goes raw."""
        if isinstance(tokens, str):
            request = ScoreRequest(mode="raw", texts=(tokens,))
        else:
            request = ScoreRequest(mode="pretokenized", texts=(tuple(tokens),))
        return list(self.remote_score(request).results[0])
