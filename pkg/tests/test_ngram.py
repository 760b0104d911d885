import gzip
import math

import numpy as np
import pytest

import oracles
from fpscore import ngram
from fpscore.tokenizer import EOS_ID, UNK_ID, build_vocab, encode


@pytest.fixture(scope="module")
def unigram_model():
    corpus = [["a", "a", "b"]]
    vocab = build_vocab(corpus, min_count=1)
    ids = [encode(s, vocab) for s in corpus]
    return ngram.train(ids, vocab, n=1, lam=0.5, alpha=1.0), vocab, ids


def test_unigram_laplace_values(unigram_model):
    model, vocab, _ids = unigram_model
    dist = model.next_distribution([])
    # 4 counted tokens (a, a, b, EOS), Laplace over 4 prediction types
    assert dist[vocab.id_of("a")] == pytest.approx(0.375, abs=1e-12)
    assert dist[UNK_ID] == pytest.approx(0.125, abs=1e-12)
    assert dist[EOS_ID] == pytest.approx(0.25, abs=1e-12)


def test_distribution_sums_to_one(unigram_model, tiny_bigram_model):
    model1, _v, _i = unigram_model
    model2, ids = tiny_bigram_model
    assert model1.next_distribution([]).sum() == pytest.approx(1.0, abs=1e-9)
    for ctx in ([], [2], [2, 3], [0, 1, 2]):
        assert model2.next_distribution(ctx).sum() == pytest.approx(1.0, abs=1e-9)


def test_unseen_context_falls_back_to_unigram(tiny_bigram_model):
    model, _ids = tiny_bigram_model
    unigram = model.next_distribution([])  # BOS-padded context seen once, differs
    unseen = model.next_distribution([UNK_ID])  # UNK never appears as context
    base = model._unigram
    np.testing.assert_allclose(unseen, base, atol=0)
    assert (unigram != base).any()  # BOS context carries bigram mass


def test_strictly_positive(tiny_bigram_model):
    model, _ids = tiny_bigram_model
    for ctx in ([], [2], [4, 4], [3, 2]):
        assert model.next_distribution(ctx).min() > 0.0


def test_bigram_matches_brute_force_oracle(tiny_bigram_model):
    model, ids = tiny_bigram_model
    v = model.vocab_size
    for ctx in ([], [2], [3], [4], [2, 3], [0]):
        expected = oracles.full_distribution(ids, ctx, n=2, vocab_size=v, lam=0.75, alpha=1.0)
        got = model.next_distribution(ctx)
        np.testing.assert_allclose(got, expected, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize(
    "corpus_words",
    [
        [["a", "b", "a", "b", "a", "c"]],
        [["the", "cat", "sat"], ["the", "cat", "ran"], ["a", "dog", "sat"]],
        [["x"] * 20, ["x", "y"] * 10, ["z", "x", "y", "z"] * 5],
    ],
)
def test_oracle_equivalence_small_corpora(corpus_words, n):
    vocab = build_vocab(corpus_words, min_count=1)
    ids = [encode(s, vocab) for s in corpus_words]
    model = ngram.train(ids, vocab, n=n, lam=0.75, alpha=1.0)
    rng = np.random.default_rng(7)
    contexts = [[]] + [
        list(rng.integers(0, len(vocab), size=rng.integers(1, 4))) for _ in range(8)
    ]
    for ctx in contexts:
        expected = oracles.full_distribution(ids, ctx, n=n, vocab_size=len(vocab))
        got = model.next_distribution(ctx)
        np.testing.assert_allclose(got, expected, atol=1e-12)
        assert got.sum() == pytest.approx(1.0, abs=1e-9)


def test_training_order_independent():
    corpus = [["a", "b"], ["b", "c"], ["c", "a", "b"]]
    vocab = build_vocab(corpus, min_count=1)
    ids = [encode(s, vocab) for s in corpus]
    m1 = ngram.train(ids, vocab, n=2)
    m2 = ngram.train(list(reversed(ids)), vocab, n=2)
    assert m1.fingerprint == m2.fingerprint
    np.testing.assert_array_equal(m1.next_distribution([2]), m2.next_distribution([2]))


def test_train_input_validation():
    vocab = build_vocab([["a"]], min_count=1)
    with pytest.raises(ValueError):
        ngram.train([], vocab, n=2)
    ids = [encode(["a"], vocab)]
    for bad in (dict(n=0), dict(n=6), dict(lam=0.0), dict(lam=1.0), dict(alpha=0.0)):
        with pytest.raises(ValueError):
            ngram.train(ids, vocab, **{"n": 2, "lam": 0.5, "alpha": 1.0, **bad})


def test_topk_k1_is_argmax(tiny_bigram_model):
    model, _ids = tiny_bigram_model
    out = model.generate_topk(seed=123, k=1, max_len=8, prompt=[2])
    ctx = [2]
    for token in out[1:]:
        dist = model.next_distribution(ctx)
        assert token == int(np.lexsort((np.arange(len(dist)), -dist))[0])
        ctx.append(token)


def test_topk_deterministic(tiny_bigram_model):
    model, _ids = tiny_bigram_model
    a = model.generate_topk(seed=42, k=3, max_len=20, prompt=[2])
    b = model.generate_topk(seed=42, k=3, max_len=20, prompt=[2])
    assert a == b
    c = model.generate_topk(seed=43, k=3, max_len=20, prompt=[2])
    assert isinstance(c, list)


def test_topk_empirical_frequencies_match_renormalized(tiny_bigram_model):
    model, _ids = tiny_bigram_model
    k = 3
    prompt = [2]  # context "a"
    dist = model.next_distribution(prompt)
    top = np.lexsort((np.arange(len(dist)), -dist))[:k]
    expected = dist[top] / dist[top].sum()

    counts = {int(t): 0 for t in top}
    draws = 10_000
    for seed in range(draws):
        out = model.generate_topk(seed=seed, k=k, max_len=2, prompt=list(prompt))
        token = out[1] if len(out) > 1 else EOS_ID
        counts[token] = counts.get(token, 0) + 1
    for t, p in zip(top, expected):
        assert counts[int(t)] / draws == pytest.approx(p, abs=0.02)


def test_save_load_roundtrip(tmp_path, tiny_bigram_model):
    model, _ids = tiny_bigram_model
    path = tmp_path / "model.fplm"
    ngram.save(model, path)
    loaded = ngram.load(path)
    assert loaded.fingerprint == model.fingerprint
    rng = np.random.default_rng(0)
    for _ in range(100):
        ctx = list(rng.integers(0, model.vocab_size, size=rng.integers(0, 3)))
        np.testing.assert_array_equal(
            model.next_distribution(ctx), loaded.next_distribution(ctx)
        )


def test_truncated_file_rejected(tmp_path, tiny_bigram_model):
    model, _ids = tiny_bigram_model
    path = tmp_path / "model.fplm"
    ngram.save(model, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(ngram.ModelFileError, match="corrupt"):
        ngram.load(path)


def test_tampered_payload_fails_checksum(tmp_path, tiny_bigram_model):
    model, _ids = tiny_bigram_model
    path = tmp_path / "model.fplm"
    ngram.save(model, path)
    text = gzip.decompress(path.read_bytes()).decode()
    tampered = text.replace('"alpha":1.0', '"alpha":2.0', 1)
    path.write_bytes(gzip.compress(tampered.encode()))
    with pytest.raises(ngram.ModelFileError, match="checksum"):
        ngram.load(path)


def test_entropy_bound_holds(tiny_bigram_model):
    model, _ids = tiny_bigram_model
    dist = model.next_distribution([2])
    entropy = float(-(dist * np.log(dist)).sum())
    assert 0.0 <= entropy <= math.log(model.vocab_size) + 1e-12
