"""Deterministic desk-scale English prose corpus.

Built from the docstrings of installed scientific Python packages, parsed
statically (no imports). Sentences are grouped into multi-sentence samples
and near-duplicate phrasing is dropped via token-shingle dedup, so the
held-out split is genuinely unseen text rather than repeated boilerplate.
Fully deterministic for a fixed set of installed package versions.
"""

from __future__ import annotations

import ast
import glob
import os
import re
import sysconfig

from fpscore.tokenizer import tokenize

_PACKAGES = [
    "sklearn", "numpy", "scipy", "pandas",
    "matplotlib", "statsmodels", "networkx", "sympy",
]

_WORD_RE = re.compile(r"[a-zA-Z][a-zA-Z',.;:!?()\"-]*$")

SAMPLE_MIN_TOKENS = 45
_SHINGLE = 8


def _iter_docstrings():
    base = sysconfig.get_paths()["purelib"]
    for pkg in _PACKAGES:
        pattern = os.path.join(base, pkg, "**", "*.py")
        for path in sorted(glob.glob(pattern, recursive=True)):
            try:
                with open(path, encoding="utf-8", errors="ignore") as fh:
                    tree = ast.parse(fh.read())
            except (OSError, SyntaxError, ValueError):
                continue
            for node in ast.walk(tree):
                if isinstance(node, (ast.Module, ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
                    doc = ast.get_docstring(node)
                    if doc:
                        yield doc


def _prose_sentences(char_budget: int):
    seen = set()
    chars = 0
    for doc in _iter_docstrings():
        text = " ".join(doc.split())
        for sent in re.split(r"(?<=[.!?]) +", text):
            sent = sent.strip()
            words = sent.split()
            if len(sent) < 30 or len(words) < 6:
                continue
            if not sent[0].isalpha():
                continue
            alpha = sum(1 for w in words if _WORD_RE.match(w))
            if alpha / len(words) < 0.8:
                continue
            if sent in seen:
                continue
            seen.add(sent)
            chars += len(sent)
            yield sent
        if chars > char_budget:
            return


def build_prose_corpus(path, target_bytes: int = 1_000_000) -> None:
    """Write a one-sample-per-line corpus of ~target_bytes to `path`."""
    shingles: set = set()
    samples = []
    total = 0
    current: list[str] = []
    current_tokens = 0
    for sent in _prose_sentences(char_budget=5 * target_bytes):
        toks = tokenize(sent)
        current.append(" ".join(toks))
        current_tokens += len(toks)
        if current_tokens < SAMPLE_MIN_TOKENS:
            continue
        chunk = " ".join(current).split()
        current, current_tokens = [], 0
        probes = [tuple(chunk[j: j + _SHINGLE]) for j in range(0, len(chunk) - _SHINGLE, 4)]
        if any(p in shingles for p in probes):
            continue
        shingles.update(tuple(chunk[j: j + _SHINGLE]) for j in range(len(chunk) - _SHINGLE))
        line = " ".join(chunk)
        samples.append(line)
        total += len(line) + 1
        if total >= target_bytes:
            break

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(samples) + "\n")
