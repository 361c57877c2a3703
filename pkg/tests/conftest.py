import pathlib

import pytest

from sltk import textpipe

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def toy_corpus():
    text = (FIXTURES / "toy_corpus.tsv").read_text(encoding="utf-8")
    return textpipe.parse_tsv(text)


@pytest.fixture(scope="session")
def toy_models(toy_corpus):
    from sltk import processors

    return {
        f"proc.{key}": processors.train_processor(task, toy_corpus, seed=0)
        for key, task in [
            ("tagger", "tag"), ("lemmatizer", "lemma"), ("chunker", "chunk"),
            ("parser", "parse"), ("syllabifier", "syllabify"), ("lts", "lts"),
            ("stress", "stress"),
        ]
    }
