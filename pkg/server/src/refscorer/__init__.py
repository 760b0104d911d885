"""Reference scorer server: a small causal LM behind the /v1 wire protocol."""

from refscorer.model import CharLmBackend, CharTokenizer, load_or_train
from refscorer.server import RefServer, serve_forever

__all__ = [
    "CharLmBackend",
    "CharTokenizer",
    "RefServer",
    "load_or_train",
    "serve_forever",
]
