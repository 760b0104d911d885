"""Deterministic word-level tokenization and vocabulary construction.

Matches the pre-tokenized, lowercased style of news-corpus data: lowercase
everything, split on whitespace, peel leading/trailing punctuation off as
single-character tokens. Apostrophes are never split, so already
space-separated clitics like "'s" survive and "dog's" stays one token.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field

UNK_ID = 0
EOS_ID = 1
UNK_SURFACE = "<unk>"
EOS_SURFACE = "</s>"

_APOSTROPHES = {"'", "’"}


def _is_punct(ch: str) -> bool:
    if ch in _APOSTROPHES:
        return False
    return unicodedata.category(ch).startswith("P")


def _split_word(word: str) -> list[str]:
    """Peel maximal leading/trailing punctuation runs into 1-char tokens."""
    start = 0
    end = len(word)
    while start < end and _is_punct(word[start]):
        start += 1
    while end > start and _is_punct(word[end - 1]):
        end -= 1
    out = list(word[:start])
    if end > start:
        out.append(word[start:end])
    out.extend(word[end:])
    return out


def tokenize(text: str) -> list[str]:
    """Lowercase and split text into surface tokens. Empty text -> []."""
    tokens: list[str] = []
    for word in text.lower().split():
        tokens.extend(_split_word(word))
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    """Finite surface vocabulary with reserved UNK (id 0) and EOS (id 1).

    Ids are contiguous from 0; out-of-vocabulary surfaces encode to UNK.
    """

    surfaces: tuple[str, ...]
    min_count: int
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.surfaces[:2] != (UNK_SURFACE, EOS_SURFACE):
            raise ValueError("vocabulary must reserve UNK (id 0) and EOS (id 1)")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.surfaces)})

    def __len__(self) -> int:
        return len(self.surfaces)

    def id_of(self, surface: str) -> int:
        return self._index.get(surface, UNK_ID)

    def surface_of(self, token_id: int) -> str:
        return self.surfaces[token_id]

    def __contains__(self, surface: str) -> bool:
        return surface in self._index


def build_vocab(corpus: list[list[str]], min_count: int = 1) -> Vocabulary:
    """Build a vocabulary from tokenized samples.

    Keeps every surface with frequency >= min_count. Ordering is
    deterministic: descending frequency, ties broken lexicographically.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if not corpus or all(not sample for sample in corpus):
        raise ValueError("empty corpus")
    counts = Counter()
    for sample in corpus:
        counts.update(sample)
    kept = sorted(
        (s for s, c in counts.items() if c >= min_count),
        key=lambda s: (-counts[s], s),
    )
    return Vocabulary(surfaces=(UNK_SURFACE, EOS_SURFACE, *kept), min_count=min_count)


def encode(tokens: list[str], vocab: Vocabulary) -> list[int]:
    """Map surfaces to vocabulary ids; out-of-vocabulary surfaces to UNK."""
    return [vocab.id_of(t) for t in tokens]


def unk_fraction(tokens: list[str], vocab: Vocabulary) -> float:
    """Fraction of tokens that encode to UNK; 0.0 for empty input."""
    if not tokens:
        return 0.0
    return sum(1 for t in tokens if t not in vocab) / len(tokens)


def read_corpus(path) -> list[list[str]]:
    """Read a UTF-8 one-sample-per-line corpus file; blank lines skipped."""
    samples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            toks = tokenize(line)
            if toks:
                samples.append(toks)
    return samples
