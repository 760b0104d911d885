"""Desk-scale generator/discriminator size study.

Crosses small/large n-gram generators with small/large n-gram
discriminators. For each held-out natural sample, a prompt is truncated and
a synthetic continuation of matching length is produced with top-k
sampling; both members of the pair are scored with every discriminator.
Model "size" is realized as n-gram order.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from fpscore import ngram, report, stats
from fpscore.fp import FpSummary, summarize
from fpscore.scorer import LocalScorer
from fpscore.tokenizer import build_vocab, encode, read_corpus


@dataclass(frozen=True)
class StudyConfig:
    corpus_path: str
    split_fraction: float = 0.9
    generator_orders: dict = field(default_factory=lambda: {"small": 2, "large": 4})
    discriminator_orders: dict = field(default_factory=lambda: {"small": 2, "large": 5})
    top_k: int = 5
    samples_per_arm: int = 300
    sample_length: int = 30
    prompt_length: int = 5
    min_count: int = 2
    # Study default leans harder on low-order statistics than the model
    # default: a heavily interpolated high-order discriminator over-rewards
    # memorized held-out phrases at desk scale.
    lam: float = 0.35
    alpha: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for order in (*self.generator_orders.values(), *self.discriminator_orders.values()):
            if not 1 <= order <= 5:
                raise ValueError(f"order out of [1,5]: {order}")
        if not 0.0 < self.split_fraction < 1.0:
            raise ValueError("split fraction must be in (0,1)")
        if self.samples_per_arm < 2 or self.sample_length < 2:
            raise ValueError("counts must be >= 2")
        if self.prompt_length >= self.sample_length:
            raise ValueError("prompt must be shorter than the sample")

    @classmethod
    def from_file(cls, path) -> "StudyConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(**raw)


@dataclass(frozen=True)
class CellResult:
    comparison: stats.PairedComparison
    gen_summary: FpSummary
    gold_summary: FpSummary


@dataclass(frozen=True)
class StudyResult:
    grid: dict  # (generator label, discriminator label) -> CellResult
    verdicts: dict  # hypothesis -> "reject" | "fail to reject"
    trend: dict  # informational cross-size mean-difference trend
    backend_info: dict  # discriminator label -> ScorerInfo


def _derived_seed(*parts) -> int:
    digest = hashlib.sha256(":".join(map(str, parts)).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _split(samples: list, config: StudyConfig) -> tuple[list, list]:
    # Deterministic seeded shuffle, then contiguous split.
    import numpy as np

    order = np.random.default_rng(_derived_seed(config.seed, "split")).permutation(len(samples))
    shuffled = [samples[i] for i in order]
    cut = int(len(shuffled) * config.split_fraction)
    return shuffled[:cut], shuffled[cut:]


def _score_fps(scorer: LocalScorer, samples: list[list[int]], workers: int | None) -> list[float]:
    def one(ids):
        scores = scorer.score(ids)
        return sum(ts.fp for ts in scores) / len(scores)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, samples))
    return [one(ids) for ids in samples]


def run_size_study(config: StudyConfig, workers: int | None = None) -> StudyResult:
    """Train all models, generate paired samples, and fill the study grid."""
    samples = read_corpus(config.corpus_path)
    train_samples, heldout = _split(samples, config)
    if not train_samples or not heldout:
        raise ValueError("corpus too small for the requested split")

    vocab = build_vocab(train_samples, min_count=config.min_count)
    if len(vocab) <= 4:
        raise ValueError("degenerate vocabulary")
    train_ids = [encode(s, vocab) for s in train_samples]

    natural = [
        encode(s, vocab)[: config.sample_length]
        for s in heldout
        if len(s) >= config.sample_length
    ][: config.samples_per_arm]
    if len(natural) < config.samples_per_arm:
        raise ValueError(
            f"corpus too small: only {len(natural)} held-out samples of "
            f"length >= {config.sample_length}"
        )

    orders = sorted(
        set(config.generator_orders.values()) | set(config.discriminator_orders.values())
    )
    models = {
        o: ngram.train(train_ids, vocab, n=o, lam=config.lam, alpha=config.alpha)
        for o in orders
    }

    synthetic: dict[str, list[list[int]]] = {}
    for gen_label, gen_order in sorted(config.generator_orders.items()):
        gen_model = models[gen_order]
        arm = []
        for idx, nat in enumerate(natural):
            prompt = nat[: config.prompt_length]
            seed = _derived_seed(config.seed, "gen", gen_label, idx)
            arm.append(
                gen_model.generate_topk(
                    seed=seed, k=config.top_k, max_len=len(nat), prompt=prompt
                )
            )
        synthetic[gen_label] = arm

    grid: dict = {}
    backend_info: dict = {}
    for disc_label, disc_order in sorted(config.discriminator_orders.items()):
        scorer = LocalScorer(models[disc_order])
        backend_info[disc_label] = scorer.info()
        gold_fps = _score_fps(scorer, natural, workers)
        gold_summary = summarize(gold_fps)
        for gen_label in sorted(config.generator_orders):
            gen_fps = _score_fps(scorer, synthetic[gen_label], workers)
            comparison = stats.paired_compare(
                gen_fps, gold_fps, seed=_derived_seed(config.seed, "cmp", gen_label, disc_label)
            )
            grid[(gen_label, disc_label)] = CellResult(
                comparison=comparison,
                gen_summary=summarize(gen_fps),
                gold_summary=gold_summary,
            )

    all_significant = all(cell.comparison.significant for cell in grid.values())
    verdicts = {
        "H1": "reject" if all_significant else "fail to reject",
        "H2": "reject" if all_significant else "fail to reject",
    }

    trend = {}
    for gen_label in sorted(config.generator_orders):
        diffs = {
            disc_label: grid[(gen_label, disc_label)].comparison.mean_diff
            for disc_label in sorted(config.discriminator_orders)
        }
        ordered = sorted(
            config.discriminator_orders.items(), key=lambda kv: kv[1]
        )
        increasing = all(
            diffs[a[0]] <= diffs[b[0]] for a, b in zip(ordered, ordered[1:])
        )
        trend[gen_label] = {
            "mean_diff_by_discriminator": diffs,
            "larger_discriminator_larger_diff": increasing,
        }

    return StudyResult(grid=grid, verdicts=verdicts, trend=trend, backend_info=backend_info)


def write_study_outputs(result: StudyResult, out_dir) -> None:
    """Emit the mean/difference tables and the verdict record."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    fp_grid = {
        key: {"gen": cell.gen_summary, "gold": cell.gold_summary}
        for key, cell in result.grid.items()
    }
    report.emit_fp_table(fp_grid, out / "fp_means.csv")

    trials = [
        (gen_label, disc_label, cell.comparison)
        for (gen_label, disc_label), cell in sorted(result.grid.items())
    ]
    rows = stats.summary_table(trials)
    (out / "fp_differences.csv").write_text(stats.rows_to_csv(rows), encoding="utf-8")
    (out / "fp_differences.txt").write_text(stats.rows_to_text(rows), encoding="utf-8")

    study = {
        "verdicts": result.verdicts,
        "trend": result.trend,
        "backends": {
            label: {
                "name": info.backend_name,
                "vocab_size": info.vocab_size,
                "fingerprint": info.model_fingerprint,
            }
            for label, info in sorted(result.backend_info.items())
        },
        "cells": {
            f"{g}/{d}": {
                "n_pairs": cell.comparison.n_pairs,
                "frac_greater": cell.comparison.frac_greater,
                "mean_diff": cell.comparison.mean_diff,
                "rel_diff_pct": cell.comparison.rel_diff_pct,
                "p_value": cell.comparison.p_value,
                "significant": cell.comparison.significant,
                "gen_mean": cell.gen_summary.mean,
                "gold_mean": cell.gold_summary.mean,
            }
            for (g, d), cell in sorted(result.grid.items())
        },
    }
    (out / "study.json").write_text(
        json.dumps(study, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
