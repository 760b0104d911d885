"""Interpolated n-gram language model with Laplace-smoothed unigram base.

Provides the full next-token distribution needed for probability-fraction
scoring, plus seeded top-k sampling for synthetic text generation. The
distribution is strictly positive and exactly normalized: every order is a
convex combination of proper distributions.

BOS is a context-only padding symbol (id -1) and is never predicted; EOS is
part of the prediction vocabulary, so generation terminates.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from fpscore.tokenizer import EOS_ID, Vocabulary

BOS_ID = -1

_MAGIC = "FPLM"
_VERSION = 1


class ModelFileError(Exception):
    """Raised for corrupt or incompatible model files."""


@dataclass(frozen=True)
class NgramModel:
    """Trained interpolated n-gram model. Immutable; concurrent reads are safe.

    count_tables[o] maps a length-(o-1) context tuple to {token_id: count};
    contexts may contain BOS_ID padding.
    """

    n: int
    lam: float
    alpha: float
    vocab: Vocabulary
    count_tables: tuple[dict, ...]  # index o-1 holds order-o table
    fingerprint: str
    _unigram: np.ndarray = field(default=None, repr=False, compare=False)
    _context_totals: tuple[dict, ...] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        counts = self.count_tables[0][()]
        vp = len(self.vocab)
        t = sum(counts.values())
        uni = np.full(vp, self.alpha, dtype=np.float64)
        for w, c in counts.items():
            uni[w] += c
        uni /= t + self.alpha * vp
        totals = tuple(
            {ctx: sum(tbl.values()) for ctx, tbl in table.items()}
            for table in self.count_tables
        )
        object.__setattr__(self, "_unigram", uni)
        object.__setattr__(self, "_context_totals", totals)

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def next_distribution(self, context: list[int]) -> np.ndarray:
        """Full next-token distribution given a (possibly short) context.

        Recursive interpolation: orders whose context was never seen fall
        through to the next shorter order; the base is the Laplace unigram.
        """
        padded = [BOS_ID] * max(0, self.n - 1 - len(context)) + list(
            context[-(self.n - 1):] if self.n > 1 else []
        )
        p = self._unigram
        for o in range(2, self.n + 1):
            ctx = tuple(padded[len(padded) - (o - 1):])
            table = self.count_tables[o - 1].get(ctx)
            if not table:
                continue
            total = self._context_totals[o - 1][ctx]
            q = p * (1.0 - self.lam)
            lam_over_total = self.lam / total
            for w, c in table.items():
                q[w] += c * lam_over_total
            p = q
        return p if p is not self._unigram else p.copy()

    def generate_topk(
        self,
        seed: int,
        k: int,
        max_len: int,
        prompt: list[int] | None = None,
    ) -> list[int]:
        """Sample a continuation with top-k decoding.

        Keeps the k most probable tokens at each step (ties broken by lower
        id), renormalizes, and samples with a generator seeded by `seed`.
        Stops at EOS or when the sequence reaches max_len tokens. Fully
        deterministic given (model, seed, k, prompt).
        """
        if not 1 <= k <= self.vocab_size:
            raise ValueError("k must be in [1, prediction vocab size]")
        rng = np.random.default_rng(seed)
        out = list(prompt or [])
        while len(out) < max_len:
            dist = self.next_distribution(out)
            top = np.lexsort((np.arange(len(dist)), -dist))[:k]
            probs = dist[top]
            probs = probs / probs.sum()
            token = int(top[rng.choice(len(top), p=probs)])
            if token == EOS_ID:
                break
            out.append(token)
        return out


def _canonical_body(n, lam, alpha, vocab: Vocabulary, count_tables) -> str:
    counts_ser = {}
    for o, table in enumerate(count_tables, start=1):
        counts_ser[str(o)] = {
            ",".join(map(str, ctx)): {str(w): c for w, c in sorted(tbl.items())}
            for ctx, tbl in sorted(table.items())
        }
    body = {
        "magic": _MAGIC,
        "version": _VERSION,
        "n": n,
        "lambda": lam,
        "alpha": alpha,
        "min_count": vocab.min_count,
        "vocab": list(vocab.surfaces),
        "counts": counts_ser,
    }
    return json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _fingerprint(body: str) -> str:
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


def train(
    corpus: list[list[int]],
    vocab: Vocabulary,
    n: int,
    lam: float = 0.75,
    alpha: float = 1.0,
) -> NgramModel:
    """Count n-grams of every order 1..n over BOS-padded, EOS-terminated samples.

    Counting is exact and order-independent over samples.
    """
    if not corpus:
        raise ValueError("empty corpus")
    if not 1 <= n <= 5:
        raise ValueError("order must be in [1,5]")
    if not 0.0 < lam < 1.0:
        raise ValueError("interpolation weight must be in (0,1)")
    if alpha <= 0.0:
        raise ValueError("unigram smoothing must be > 0")

    tables: list[dict] = [{} for _ in range(n)]
    for sample in corpus:
        padded = [BOS_ID] * (n - 1) + list(sample) + [EOS_ID]
        for i in range(n - 1, len(padded)):
            w = padded[i]
            for o in range(1, n + 1):
                ctx = tuple(padded[i - (o - 1): i])
                tbl = tables[o - 1].setdefault(ctx, {})
                tbl[w] = tbl.get(w, 0) + 1

    body = _canonical_body(n, lam, alpha, vocab, tables)
    return NgramModel(
        n=n,
        lam=lam,
        alpha=alpha,
        vocab=vocab,
        count_tables=tuple(tables),
        fingerprint=_fingerprint(body),
    )


def save(model: NgramModel, path) -> None:
    """Write the model as gzipped canonical JSON with an embedded checksum."""
    body = _canonical_body(model.n, model.lam, model.alpha, model.vocab, model.count_tables)
    record = '{"body":%s,"checksum":"%s"}' % (body, _fingerprint(body))
    with gzip.open(path, "wb") as fh:
        fh.write(record.encode("utf-8"))


def load(path) -> NgramModel:
    """Load a model file, verifying magic, version, and checksum."""
    try:
        with gzip.open(path, "rb") as fh:
            record = json.loads(fh.read().decode("utf-8"))
    except (OSError, EOFError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFileError(f"corrupt file: {exc}") from exc
    if not isinstance(record, dict) or "body" not in record or "checksum" not in record:
        raise ModelFileError("corrupt file: missing body or checksum")
    body = record["body"]
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    if _fingerprint(canonical) != record["checksum"]:
        raise ModelFileError("corrupt file: checksum failure")
    if body.get("magic") != _MAGIC:
        raise ModelFileError("corrupt file: bad magic")
    if body.get("version") != _VERSION:
        raise ModelFileError(f"version mismatch: {body.get('version')}")
    vocab = Vocabulary(surfaces=tuple(body["vocab"]), min_count=body["min_count"])
    tables: list[dict] = []
    for o in range(1, body["n"] + 1):
        table = {}
        for ctx_key, tbl in body["counts"][str(o)].items():
            ctx = tuple(int(x) for x in ctx_key.split(",")) if ctx_key else ()
            table[ctx] = {int(w): c for w, c in tbl.items()}
        tables.append(table)
    return NgramModel(
        n=body["n"],
        lam=body["lambda"],
        alpha=body["alpha"],
        vocab=vocab,
        count_tables=tuple(tables),
        fingerprint=record["checksum"],
    )
