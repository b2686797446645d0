import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

import lexicluster

DATA_DIR = pathlib.Path(lexicluster.__file__).parent / "data"


@pytest.fixture
def data_dir() -> pathlib.Path:
    return DATA_DIR


@pytest.fixture
def sample_corpus_dir() -> pathlib.Path:
    return DATA_DIR / "sample_corpus"


@pytest.fixture
def lexicon_path() -> pathlib.Path:
    return DATA_DIR / "lexicon.tsv"


@pytest.fixture
def stopwords_path() -> pathlib.Path:
    return DATA_DIR / "stopwords.txt"
