"""Threshold calibration, sample classification, and h/m scores.

Boundary values go to the non-human class: a sample exactly at the single
threshold is classified m, and one exactly on a dual boundary falls into
the undefined class. This is the conservative choice; it never inflates a
system's h-score.
"""

from __future__ import annotations

import json
import statistics

from fpscore.fp import summarize
from fpscore.types import ClassLabel, CorpusResult, ThresholdConfig

_EPS = 1e-9


def classify_single(fp_s: float, fp_t: float) -> ClassLabel:
    """Two-class discretization: h below the threshold, m otherwise."""
    if not (0.0 < fp_s <= 1.0):
        raise ValueError(f"fp_s out of (0,1]: {fp_s}")
    if not (0.0 < fp_t < 1.0):
        raise ValueError(f"fp_t out of (0,1): {fp_t}")
    return ClassLabel.H if fp_s < fp_t else ClassLabel.M


def classify_dual(fp_s: float, fp_l: float, fp_r: float) -> ClassLabel:
    """Three-class discretization with an undefined middle interval."""
    if not (0.0 < fp_s <= 1.0):
        raise ValueError(f"fp_s out of (0,1]: {fp_s}")
    if not (0.0 < fp_l <= fp_r < 1.0):
        raise ValueError(f"invalid boundaries: ({fp_l}, {fp_r})")
    if fp_s < fp_l:
        return ClassLabel.H
    if fp_s <= fp_r:
        return ClassLabel.U
    return ClassLabel.M


def classify(fp_s: float, thresholds: ThresholdConfig) -> ClassLabel:
    if thresholds.mode == "single":
        return classify_single(fp_s, thresholds.fp_t)
    return classify_dual(fp_s, thresholds.fp_l, thresholds.fp_r)


def h_score_two_class(n_h: int, n_m: int) -> tuple[float, float]:
    """Fraction of outputs perceived human-written vs machine-generated."""
    if n_h < 0 or n_m < 0:
        raise ValueError("negative counts")
    total = n_h + n_m
    if total == 0:
        raise ValueError("no classified samples")
    h = n_h / total
    return h, 1.0 - h


def h_score_three_class(n_h: int, n_m: int, n_u: int) -> tuple[float, float]:
    """Three-class variant; undefined samples dilute both scores (h + m <= 1)."""
    if min(n_h, n_m, n_u) < 0:
        raise ValueError("negative counts")
    total = n_h + n_m + n_u
    if total == 0:
        raise ValueError("no classified samples")
    return n_h / total, n_m / total


def _misclassified(fp_t, natural_fps, synthetic_fps, w_nat, w_syn) -> float:
    errors = w_nat * sum(1 for v in natural_fps if classify_single(v, fp_t) is ClassLabel.M)
    errors += w_syn * sum(1 for v in synthetic_fps if classify_single(v, fp_t) is ClassLabel.H)
    return errors


def calibrate_single(
    natural_fps: list[float],
    synthetic_fps: list[float],
    weight_natural: float = 1.0,
    weight_synthetic: float = 1.0,
) -> ThresholdConfig:
    """Choose the single threshold minimizing calibration-set error.

    Candidates are midpoints between adjacent values of the pooled sorted
    list; ties go to the smallest candidate.
    """
    if not natural_fps or not synthetic_fps:
        raise ValueError("both calibration sets must be non-empty")
    pooled = sorted(set(natural_fps) | set(synthetic_fps))
    candidates = [
        (a + b) / 2.0 for a, b in zip(pooled, pooled[1:])
    ] or [pooled[0]]
    candidates = [c for c in candidates if 0.0 < c < 1.0] or [0.5]
    best_t, best_err = None, None
    for cand in candidates:
        err = _misclassified(cand, natural_fps, synthetic_fps, weight_natural, weight_synthetic)
        if best_err is None or err < best_err:
            best_t, best_err = cand, err
    n_total = len(natural_fps) + len(synthetic_fps)
    meta = {
        "natural": _set_meta(natural_fps),
        "synthetic": _set_meta(synthetic_fps),
        "calibration_errors": best_err,
        "calibration_accuracy": 1.0 - best_err / n_total,
    }
    return ThresholdConfig(mode="single", fp_t=best_t, calibration_meta=meta)


def calibrate_dual(
    natural_fps: list[float],
    synthetic_fps: list[float],
    c: float = 1.0,
) -> ThresholdConfig:
    """Set dual boundaries from the two populations' means and spreads.

    Left boundary = mean(natural) + c*stdev(natural); right boundary =
    mean(synthetic) - c*stdev(synthetic). Overlapping boundaries collapse to
    a single threshold at their midpoint, flagged as degenerate.
    """
    if c <= 0.0:
        raise ValueError("c must be > 0")
    if len(natural_fps) < 2 or len(synthetic_fps) < 2:
        raise ValueError("each calibration set needs >= 2 values")
    mu_n, sd_n = statistics.fmean(natural_fps), statistics.stdev(natural_fps)
    mu_s, sd_s = statistics.fmean(synthetic_fps), statistics.stdev(synthetic_fps)
    fp_l = min(max(mu_n + c * sd_n, _EPS), 1.0 - _EPS)
    fp_r = min(max(mu_s - c * sd_s, _EPS), 1.0 - _EPS)
    meta = {
        "natural": _set_meta(natural_fps),
        "synthetic": _set_meta(synthetic_fps),
        "c": c,
    }
    if fp_l > fp_r:
        meta["degenerate_overlap"] = True
        midpoint = min(max((fp_l + fp_r) / 2.0, _EPS), 1.0 - _EPS)
        return ThresholdConfig(mode="single", fp_t=midpoint, calibration_meta=meta)
    return ThresholdConfig(mode="dual", fp_l=fp_l, fp_r=fp_r, calibration_meta=meta)


def _set_meta(values: list[float]) -> dict:
    s = summarize(list(values))
    return {"count": s.count, "mean": s.mean, "stdev": s.stdev}


def evaluate_system(sample_fps: list[float], thresholds: ThresholdConfig) -> CorpusResult:
    """Classify every sample and compute the system's h/m scores."""
    if not sample_fps:
        raise ValueError("empty sample list")
    counts = {ClassLabel.H: 0, ClassLabel.M: 0, ClassLabel.U: 0}
    for fp_s in sample_fps:
        counts[classify(fp_s, thresholds)] += 1
    n_h, n_m, n_u = counts[ClassLabel.H], counts[ClassLabel.M], counts[ClassLabel.U]
    if thresholds.mode == "single":
        h, m = h_score_two_class(n_h, n_m)
    else:
        h, m = h_score_three_class(n_h, n_m, n_u)
    return CorpusResult(
        n=len(sample_fps),
        n_h=n_h,
        n_m=n_m,
        n_u=n_u,
        h_score=h,
        m_score=m,
        mean_fp=statistics.fmean(sample_fps),
    )


def save_thresholds(config: ThresholdConfig, path) -> None:
    payload = {
        "mode": config.mode,
        "fp_t": config.fp_t,
        "fp_l": config.fp_l,
        "fp_r": config.fp_r,
        "calibration_meta": config.calibration_meta,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_thresholds(path) -> ThresholdConfig:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return ThresholdConfig(
        mode=payload["mode"],
        fp_t=payload.get("fp_t"),
        fp_l=payload.get("fp_l"),
        fp_r=payload.get("fp_r"),
        calibration_meta=payload.get("calibration_meta", {}),
    )
