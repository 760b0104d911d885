import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fpscore import ngram
from fpscore.tokenizer import build_vocab, encode


@pytest.fixture(scope="session")
def tiny_bigram_model():
    """Bigram model over the corpus [[a,b,a,b,a,c]] used across tests."""
    corpus = [["a", "b", "a", "b", "a", "c"]]
    vocab = build_vocab(corpus, min_count=1)
    ids = [encode(s, vocab) for s in corpus]
    model = ngram.train(ids, vocab, n=2, lam=0.75, alpha=1.0)
    return model, ids


@pytest.fixture(scope="session")
def prose_corpus_path(tmp_path_factory):
    """A ~1 MB deterministic English prose corpus built from stdlib docs."""
    from corpus_util import build_prose_corpus

    path = tmp_path_factory.mktemp("corpus") / "prose.txt"
    build_prose_corpus(path, target_bytes=1_000_000)
    return path
