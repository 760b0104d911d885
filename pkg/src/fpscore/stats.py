"""Paired comparison of generated vs reference fraction scores.

Significance uses a two-sided paired sign-flip permutation test on the
per-pair differences: exact enumeration of all sign assignments for small
n, seeded Monte Carlo resampling otherwise. Distribution-free and exactly
computable at small n.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

EXACT_LIMIT = 20
MC_RESAMPLES = 20_000
ALPHA = 0.05
_TOL = 1e-12

DAGGER = "†"


@dataclass(frozen=True)
class PairedComparison:
    """Exceedance fraction, mean difference, and permutation significance."""

    n_pairs: int
    frac_greater: float
    mean_diff: float
    rel_diff_pct: float
    p_value: float
    significant: bool
    test_meta: dict


def paired_compare(gen_fps, gold_fps, seed: int = 0) -> PairedComparison:
    """Compare paired generated/reference fraction scores.

    Pairs are matched by index. frac_greater counts strict inequalities
    only; ties are reported in test_meta. Exact enumeration when
    n <= 20, else 20,000 seeded sign-flips with add-one smoothing.
    """
    gen = np.asarray(gen_fps, dtype=np.float64)
    gold = np.asarray(gold_fps, dtype=np.float64)
    if gen.shape != gold.shape or gen.ndim != 1:
        raise ValueError("gen and gold must be equal-length 1-d sequences")
    n = len(gen)
    if n < 2:
        raise ValueError("need at least 2 pairs")

    diffs = gen - gold
    ties = int(np.count_nonzero(diffs == 0.0))
    frac_greater = float(np.count_nonzero(diffs > 0.0)) / n
    mean_diff = float(diffs.mean())
    gold_mean = float(gold.mean())
    rel_diff_pct = 100.0 * mean_diff / gold_mean if gold_mean != 0.0 else float("nan")

    observed = abs(mean_diff)
    if n <= EXACT_LIMIT:
        # Enumerate subset sums: a sign assignment flips the subset's terms,
        # giving mean (S - 2*subset_sum) / n.
        sums = np.zeros(1, dtype=np.float64)
        for d in diffs:
            sums = np.concatenate([sums, sums + d])
        total = diffs.sum()
        resampled = np.abs(total - 2.0 * sums) / n
        p_value = float(np.count_nonzero(resampled >= observed - _TOL)) / len(sums)
        meta = {"mode": "exact", "resamples": int(len(sums)), "ties": ties}
    else:
        rng = np.random.default_rng(seed)
        signs = rng.integers(0, 2, size=(MC_RESAMPLES, n)) * 2 - 1
        resampled = np.abs((signs * diffs).mean(axis=1))
        hits = int(np.count_nonzero(resampled >= observed - _TOL))
        p_value = (1 + hits) / (1 + MC_RESAMPLES)
        meta = {
            "mode": "monte_carlo",
            "seed": seed,
            "resamples": MC_RESAMPLES,
            "ties": ties,
        }

    return PairedComparison(
        n_pairs=n,
        frac_greater=frac_greater,
        mean_diff=mean_diff,
        rel_diff_pct=rel_diff_pct,
        p_value=p_value,
        significant=p_value < ALPHA,
        test_meta=meta,
    )


def _fmt_diff(value: float) -> str:
    text = f"{value:.3f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def render_row(comparison: PairedComparison) -> dict:
    """Render one comparison in the mean-difference table convention."""
    dagger = DAGGER if comparison.significant else ""
    return {
        "exceeds": f"{comparison.frac_greater * 100:.2f} %",
        "diff": f"{_fmt_diff(comparison.mean_diff)}{dagger}({comparison.rel_diff_pct:.2f} %)",
    }


def summary_table(trials) -> list[dict]:
    """One row per (generator, discriminator) cell.

    trials: iterable of (generator label, discriminator label,
    PairedComparison). Labels are rendered verbatim.
    """
    trials = list(trials)
    if not trials:
        raise ValueError("need at least one trial")
    rows = []
    for gen_label, disc_label, comparison in trials:
        cell = render_row(comparison)
        rows.append(
            {
                "generator": gen_label,
                "discriminator": disc_label,
                "fp_gen_gt_fp_gold": cell["exceeds"],
                "fp_gen_minus_fp_gold": cell["diff"],
                "p_value": f"{comparison.p_value:.6g}",
            }
        )
    return rows


_COLUMNS = ["generator", "discriminator", "fp_gen_gt_fp_gold", "fp_gen_minus_fp_gold", "p_value"]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def rows_to_text(rows: list[dict]) -> str:
    widths = {c: max(len(c), *(len(r[c]) for r in rows)) for c in _COLUMNS}
    lines = ["  ".join(c.ljust(widths[c]) for c in _COLUMNS)]
    for r in rows:
        lines.append("  ".join(r[c].ljust(widths[c]) for c in _COLUMNS))
    return "\n".join(lines) + "\n"
