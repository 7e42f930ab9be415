import pytest

from kakokei.cli import bundled_lexicon_path
from kakokei.dataset import Lexicon, generate_pairs, ingest_lexicon


@pytest.fixture(scope="session")
def bundled_lexicon() -> Lexicon:
    return ingest_lexicon(bundled_lexicon_path())


@pytest.fixture(scope="session")
def bundled_pairs(bundled_lexicon):
    return generate_pairs(bundled_lexicon.entries)
