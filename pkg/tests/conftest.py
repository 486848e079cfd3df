from pathlib import Path

import pytest

from eventlens.config import load_context
from eventlens.core import Sentence, load_ontology
from eventlens.tokenization import (
    LabelStats,
    RuleSubwordTokenizer,
    WHITESPACE_DELIMITED,
    tokenize,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def ontology():
    return load_ontology(str(FIXTURES / "ontology.json"))


@pytest.fixture(scope="session")
def label_stats():
    return LabelStats.load(str(FIXTURES / "label_stats.tsv"))


@pytest.fixture(scope="session")
def context():
    return load_context(str(FIXTURES / "config.json"))


def make_sentence(text: str, index: int = 0, char_base: int = 0) -> Sentence:
    return Sentence(index=index, text=text, char_base=char_base)


def word_tokens(text: str):
    """Whole-word Subword tokens (no chunking), for decode-level tests."""
    sentence = make_sentence(text)
    return tokenize(sentence, RuleSubwordTokenizer(chunk=10_000), WHITESPACE_DELIMITED)


def subword_tokens(text: str, chunk: int = 3, lang_class: str = WHITESPACE_DELIMITED):
    sentence = make_sentence(text)
    return tokenize(sentence, RuleSubwordTokenizer(chunk=chunk), lang_class)
