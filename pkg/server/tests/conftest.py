import pathlib

import pytest

from refscorer.model import load_or_train

# Repo-local cache so the one-time training cost is paid once, not per run.
_CACHE = pathlib.Path(__file__).parent / ".model-cache"


@pytest.fixture(scope="session")
def backend():
    return load_or_train(_CACHE)
