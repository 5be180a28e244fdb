import numpy as np
import pytest

from support import build_fixture_corpus


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def word_corpus(tmp_path):
    return build_fixture_corpus(tmp_path / "word", level="word")


@pytest.fixture
def subword_corpus(tmp_path):
    return build_fixture_corpus(tmp_path / "sub", level="subword")
