"""Command-line surface tying the scoring pipeline together."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fpscore import naturalness, ngram, report, stats
from fpscore.experiment import StudyConfig, run_size_study, write_study_outputs
from fpscore.fp import score_sample
from fpscore.scorer import LocalScorer, RemoteScorer, ScorerError
from fpscore.serve import serve_forever
from fpscore.tokenizer import build_vocab, encode, read_corpus, tokenize
from fpscore.types import ScorerInfo, SampleScore, TokenScore


class CliError(Exception):
    pass


def _make_backend(spec: str):
    if spec.startswith("ngram:"):
        return LocalScorer(ngram.load(spec[len("ngram:"):]))
    if spec.startswith("remote:"):
        return RemoteScorer(spec[len("remote:"):])
    raise CliError(f"unknown backend spec: {spec!r} (use ngram:<file> or remote:<url>)")


def _log_backend(info: ScorerInfo) -> None:
    print(
        f"backend: {info.backend_name} vocab={info.vocab_size} "
        f"fingerprint={info.model_fingerprint}",
        file=sys.stderr,
    )


def _cmd_train(args) -> int:
    samples = read_corpus(args.corpus)
    if not samples:
        raise CliError("empty corpus")
    vocab = build_vocab(samples, min_count=args.min_count)
    ids = [encode(s, vocab) for s in samples]
    model = ngram.train(ids, vocab, n=args.order, lam=args.lam, alpha=args.alpha)
    ngram.save(model, args.out)
    print(f"trained order-{args.order} model: vocab={len(vocab)} fingerprint={model.fingerprint}")
    return 0


def _cmd_generate(args) -> int:
    model = ngram.load(args.model)
    lines = []
    for i in range(args.count):
        ids = model.generate_topk(
            seed=args.seed * 1_000_003 + i, k=args.k, max_len=args.max_len, prompt=[]
        )
        lines.append(" ".join(model.vocab.surface_of(t) for t in ids))
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {args.count} synthetic samples to {args.out}")
    return 0


def _cmd_score(args) -> int:
    scorer = _make_backend(args.backend)
    info = scorer.info()
    _log_backend(info)
    texts = [
        line for line in Path(args.texts).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if not texts:
        raise CliError("no texts to score")
    raw = args.raw or isinstance(scorer, RemoteScorer)

    def one(item):
        idx, text = item
        tokens = text if raw and isinstance(scorer, RemoteScorer) else tokenize(text)
        if not tokens:
            raise CliError(f"line {idx + 1} tokenized to nothing")
        return score_sample(scorer, tokens, sample_id=f"sample-{idx:06d}")

    items = list(enumerate(texts))
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            samples = list(pool.map(one, items))
    else:
        samples = [one(item) for item in items]
    report.emit_jsonl(samples, args.out)
    print(f"scored {len(samples)} samples -> {args.out}")
    return 0


def _load_fps(path) -> tuple[list[float], str]:
    records = report.read_jsonl(path)
    if not records:
        raise CliError(f"no score records in {path}")
    fingerprints = {r["backend"]["fingerprint"] for r in records}
    if len(fingerprints) > 1:
        raise CliError(f"mixed backend fingerprints in {path}")
    return [r["fp_s"] for r in records], fingerprints.pop()


def _cmd_calibrate(args) -> int:
    natural, fp_nat = _load_fps(args.natural)
    synthetic, fp_syn = _load_fps(args.synthetic)
    if fp_nat != fp_syn:
        raise CliError("natural and synthetic sets were scored with different backends")
    if args.mode == "single":
        config = naturalness.calibrate_single(natural, synthetic)
    else:
        config = naturalness.calibrate_dual(natural, synthetic, c=args.c)
    config.calibration_meta["backend_fingerprint"] = fp_nat
    naturalness.save_thresholds(config, args.out)
    print(f"calibrated {config.mode} thresholds -> {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    fps, fingerprint = _load_fps(args.scores)
    thresholds = naturalness.load_thresholds(args.thresholds)
    calibrated_fp = thresholds.calibration_meta.get("backend_fingerprint")
    if calibrated_fp and calibrated_fp != fingerprint and not args.allow_backend_mismatch:
        raise CliError(
            "threshold file was calibrated with a different backend "
            f"({calibrated_fp} != {fingerprint}); pass --allow-backend-mismatch to override"
        )
    result = naturalness.evaluate_system(fps, thresholds)
    print(f"backend fingerprint: {fingerprint}", file=sys.stderr)
    print(
        f"n={result.n} n_h={result.n_h} n_m={result.n_m} n_u={result.n_u} "
        f"h_score={result.h_score:.6g} m_score={result.m_score:.6g} "
        f"mean_fp={result.mean_fp:.6g}"
    )
    return 0


def _cmd_compare(args) -> int:
    gen, fp_gen = _load_fps(args.gen)
    gold, fp_gold = _load_fps(args.gold)
    if fp_gen != fp_gold:
        raise CliError("gen and gold sets were scored with different backends")
    print(f"backend fingerprint: {fp_gen}", file=sys.stderr)
    comparison = stats.paired_compare(gen, gold, seed=args.seed)
    rows = stats.summary_table([(args.gen_label, args.gold_label, comparison)])
    sys.stdout.write(stats.rows_to_text(rows))
    return 0


def _cmd_experiment(args) -> int:
    config = StudyConfig.from_file(args.config)
    result = run_size_study(config, workers=args.workers)
    write_study_outputs(result, args.out)
    for label, info in sorted(result.backend_info.items()):
        _log_backend(info)
    print(f"study outputs -> {args.out}; verdicts: {result.verdicts}")
    return 0


def _sample_from_record(rec: dict) -> SampleScore:
    # Rendering-only reconstruction: p_actual/p_max are not persisted,
    # only their ratio.
    scores = tuple(
        TokenScore(
            p_actual=t["fp"],
            p_max=1.0,
            rank=t["rank"],
            entropy_nats=t["entropy_nats"],
            fp=t["fp"],
            surface=t["surface"],
        )
        for t in rec["tokens"]
    )
    return SampleScore(
        sample_id=rec["sample_id"],
        k=rec["k"],
        token_scores=scores,
        fp_s=rec["fp_s"],
        backend=ScorerInfo(
            backend_name=rec["backend"]["name"],
            vocab_size=0,
            model_fingerprint=rec["backend"]["fingerprint"],
        ),
    )


def _cmd_report(args) -> int:
    records = report.read_jsonl(args.scores)
    if not records:
        raise CliError(f"no score records in {args.scores}")
    if args.sample_id:
        matches = [r for r in records if r["sample_id"] == args.sample_id]
        if not matches:
            raise CliError(f"sample id not found: {args.sample_id}")
        rec = matches[0]
    else:
        rec = records[0]
    report.emit_heatmap(_sample_from_record(rec), args.out)
    print(f"heatmap -> {args.out}")
    return 0


def _cmd_serve(args) -> int:
    model = ngram.load(args.model)
    scorer = LocalScorer(model)
    _log_backend(scorer.info())
    print(f"serving on {args.host}:{args.port}", file=sys.stderr)
    serve_forever(scorer, args.host, args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpscore")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train an n-gram model from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--lam", type=float, default=0.75)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("generate", help="sample a synthetic corpus with top-k decoding")
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-len", type=int, default=30)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("score", help="score texts, one per line, to a .jsonl file")
    p.add_argument("--backend", required=True, help="ngram:<model-file> or remote:<url>")
    p.add_argument("--texts", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--raw", action="store_true", help="send raw strings to remote backends")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("calibrate", help="fit thresholds from two scored sets")
    p.add_argument("--natural", required=True)
    p.add_argument("--synthetic", required=True)
    p.add_argument("--mode", choices=["single", "dual"], default="single")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("evaluate", help="classify a scored set and report h/m scores")
    p.add_argument("--scores", required=True)
    p.add_argument("--thresholds", required=True)
    p.add_argument("--allow-backend-mismatch", action="store_true")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("compare", help="paired comparison of two scored sets")
    p.add_argument("--gen", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--gen-label", default="gen")
    p.add_argument("--gold-label", default="gold")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("experiment", help="run the generator/discriminator size study")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("report", help="render a per-token heatmap page")
    p.add_argument("--scores", required=True)
    p.add_argument("--sample-id", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="serve an n-gram model over the wire protocol")
    p.add_argument("--model", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8471)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, OSError, ValueError, ScorerError, ngram.ModelFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
