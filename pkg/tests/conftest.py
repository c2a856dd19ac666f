import io
from pathlib import Path

import pytest

from cdwsd import load_lexicon
from cdwsd.lexicon import parse_compact_lexicon

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def fig1_path() -> Path:
    return DATA_DIR / "fig1.lex"


@pytest.fixture(scope="session")
def fig1_net(fig1_path):
    return load_lexicon(fig1_path)


def compact(text: str):
    """Parse an inline compact-format lexicon (indentation stripped)."""
    lines = [line.strip("\n") for line in text.strip("\n").split("\n")]
    return parse_compact_lexicon(io.StringIO("\n".join(lines) + "\n"))
