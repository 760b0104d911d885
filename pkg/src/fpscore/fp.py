"""Probability-fraction computation: per token, per sample, per corpus.

Corpus aggregation averages per-sample fractions rather than pooling all
tokens, so each sample carries equal weight regardless of length.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from fpscore.types import SampleScore, TokenScore


@dataclass(frozen=True)
class FpSummary:
    """Moments of a set of fraction values (sample stdev, n-1 denominator)."""

    count: int
    mean: float
    stdev: float
    min: float
    max: float
    degenerate: bool = False  # single-value set; stdev reported as 0

    def render(self) -> str:
        """Mean with parenthesized standard deviation, e.g. "0.101 (0.093)"."""
        return f"{self.mean:.3f} ({self.stdev:.3f})"


def token_fp(p_actual: float, p_max: float) -> float:
    """Fraction between a token's probability and the position maximum."""
    if not (0.0 < p_actual <= p_max <= 1.0):
        raise ValueError(f"invalid probability pair: ({p_actual}, {p_max})")
    return p_actual / p_max


def sample_fp(token_scores: list[TokenScore]) -> float:
    """Arithmetic mean of the token fractions of one sample."""
    if not token_scores:
        raise ValueError("empty sample")
    return sum(ts.fp for ts in token_scores) / len(token_scores)


def score_sample(scorer, tokens, sample_id: str) -> SampleScore:
    """Score one token sequence and assemble the full sample record."""
    if not tokens:
        raise ValueError("empty sample")
    token_scores = tuple(scorer.score(tokens))
    return SampleScore(
        sample_id=sample_id,
        k=len(token_scores),
        token_scores=token_scores,
        fp_s=sample_fp(list(token_scores)),
        backend=scorer.info(),
    )


def summarize(values: list[float]) -> FpSummary:
    """Moments of a list of fraction values."""
    if not values:
        raise ValueError("empty value list")
    if len(values) == 1:
        return FpSummary(
            count=1, mean=values[0], stdev=0.0,
            min=values[0], max=values[0], degenerate=True,
        )
    return FpSummary(
        count=len(values),
        mean=statistics.fmean(values),
        stdev=statistics.stdev(values),
        min=min(values),
        max=max(values),
    )


def corpus_mean_fp(samples: list[SampleScore]) -> FpSummary:
    """Summary over per-sample fp_s values (not per-token pooling)."""
    if not samples:
        raise ValueError("empty sample list")
    return summarize([s.fp_s for s in samples])
