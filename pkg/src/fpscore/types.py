"""Shared domain types for probability-fraction scoring.

All types are immutable after construction and safe to share between
concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class ClassLabel(Enum):
    """Naturalness class of a text sample."""

    H = "h"  # perceived human-written
    M = "m"  # perceived machine-generated
    U = "u"  # undefined (dual-threshold middle interval only)


@dataclass(frozen=True)
class Token:
    """A surface word with its vocabulary index."""

    surface: str
    id: int


@dataclass(frozen=True)
class TokenScore:
    """Per-position scoring record under a language-model backend.

    fp is the fraction between the actual token's probability and the
    highest probability any vocabulary token has at that position.
    """

    p_actual: float
    p_max: float
    rank: int
    entropy_nats: float
    fp: float
    surface: str = ""


@dataclass(frozen=True)
class ScorerInfo:
    """Stable identity of a scoring backend.

    The fingerprint must be stable across save/load of the same model;
    scores are only comparable between identical fingerprints.
    """

    backend_name: str
    vocab_size: int
    model_fingerprint: str


@dataclass(frozen=True)
class SampleScore:
    """One text sample's token scores plus its average fraction."""

    sample_id: str
    k: int
    token_scores: tuple[TokenScore, ...]
    fp_s: float
    backend: ScorerInfo


@dataclass(frozen=True)
class ThresholdConfig:
    """Single or dual decision boundaries with calibration provenance."""

    mode: str  # "single" | "dual"
    fp_t: float | None = None
    fp_l: float | None = None
    fp_r: float | None = None
    calibration_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("single", "dual"):
            raise ValueError(f"unknown threshold mode: {self.mode!r}")
        if self.mode == "single":
            if self.fp_t is None or not (0.0 < self.fp_t < 1.0):
                raise ValueError("single mode requires fp_t in (0,1)")
        else:
            if self.fp_l is None or self.fp_r is None:
                raise ValueError("dual mode requires fp_l and fp_r")
            if not (0.0 < self.fp_l <= self.fp_r < 1.0):
                raise ValueError("dual mode requires 0 < fp_l <= fp_r < 1")


@dataclass(frozen=True)
class CorpusResult:
    """Classification counts and scores for one evaluated system."""

    n: int
    n_h: int
    n_m: int
    n_u: int
    h_score: float
    m_score: float
    mean_fp: float

    def __post_init__(self):
        if self.n_h + self.n_m + self.n_u != self.n:
            raise ValueError("class counts must sum to n")


_REL_TOL = 1e-9


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=_REL_TOL, abs_tol=1e-12)


def validate_token_score(ts: TokenScore, vocab_size: int | None = None) -> list[str]:
    """Check one TokenScore against its invariants; violations are data."""
    violations = []
    if not (0.0 < ts.p_actual <= 1.0):
        violations.append(f"p_actual out of (0,1]: {ts.p_actual}")
    if not (0.0 < ts.p_max <= 1.0):
        violations.append(f"p_max out of (0,1]: {ts.p_max}")
    if ts.p_actual > ts.p_max and not _close(ts.p_actual, ts.p_max):
        violations.append(f"p_actual > p_max: {ts.p_actual} > {ts.p_max}")
    if not (0.0 < ts.fp <= 1.0):
        violations.append(f"fp out of (0,1]: {ts.fp}")
    if ts.p_max > 0 and not _close(ts.fp, ts.p_actual / ts.p_max):
        violations.append("fp != p_actual / p_max")
    if ts.rank < 1:
        violations.append(f"rank < 1: {ts.rank}")
    if (ts.rank == 1) != _close(ts.p_actual, ts.p_max):
        violations.append("rank = 1 must hold exactly when p_actual = p_max")
    if ts.entropy_nats < -1e-12:
        violations.append(f"negative entropy: {ts.entropy_nats}")
    if vocab_size is not None and ts.entropy_nats > math.log(vocab_size) + 1e-9:
        violations.append(f"entropy exceeds ln(vocab size): {ts.entropy_nats}")
    return violations


def validate_sample_score(score: SampleScore, vocab_size: int | None = None) -> list[str]:
    """Check a SampleScore and every token score it holds.

    Returns an empty list when all invariants hold; otherwise a list of
    human-readable violations. Never raises.
    """
    violations = []
    if score.k != len(score.token_scores):
        violations.append(f"k != len(token_scores): {score.k} != {len(score.token_scores)}")
    if score.k < 1:
        violations.append("empty sample")
    if score.token_scores:
        mean_fp = sum(ts.fp for ts in score.token_scores) / len(score.token_scores)
        if not _close(score.fp_s, mean_fp):
            violations.append(f"fp_s != mean of token fps: {score.fp_s} != {mean_fp}")
    vs = vocab_size if vocab_size is not None else score.backend.vocab_size or None
    for i, ts in enumerate(score.token_scores):
        for v in validate_token_score(ts, vs):
            violations.append(f"token {i}: {v}")
    return violations
