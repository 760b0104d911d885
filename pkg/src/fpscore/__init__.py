"""Token probability-fraction scoring and text naturalness evaluation."""

from fpscore.types import (
    ClassLabel,
    CorpusResult,
    SampleScore,
    ScorerInfo,
    ThresholdConfig,
    Token,
    TokenScore,
    validate_sample_score,
)

__version__ = "0.1.0"

__all__ = [
    "ClassLabel",
    "CorpusResult",
    "SampleScore",
    "ScorerInfo",
    "ThresholdConfig",
    "Token",
    "TokenScore",
    "validate_sample_score",
]
