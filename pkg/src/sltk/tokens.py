"""Core text units shared by the pipeline, the TTS front-end and the indexer."""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass
class Token:
    """One text unit with the standard attribute set plus a custom table.

    ``syllables`` are (start, end) character spans into ``wordform``;
    ``stress`` is a 0-based syllable index; ``dep_head`` is a 1-based token
    index with 0 meaning the artificial root.
    """

    wordform: str
    lemma: str | None = None
    pos: str | None = None
    transcription: list[str] | None = None
    syllables: list[tuple[int, int]] | None = None
    stress: int | None = None
    chunk: str | None = None
    dep_head: int | None = None
    dep_label: str | None = None
    custom: dict[str, str] = field(default_factory=dict)

    def syllable_texts(self) -> list[str] | None:
        if self.syllables is None:
            return None
        return [self.wordform[a:b] for a, b in self.syllables]

    def copy(self) -> "Token":
        return replace(
            self,
            transcription=list(self.transcription) if self.transcription else self.transcription,
            syllables=list(self.syllables) if self.syllables else self.syllables,
            custom=dict(self.custom),
        )


@dataclass
class Sentence:
    tokens: list[Token]
    raw: str = ""
    id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def copy(self) -> "Sentence":
        return Sentence([t.copy() for t in self.tokens], self.raw, self.id)


_PUNCT = set(".,;:!?\"'()[]{}«»„”“-–—…/")


def is_punct(wordform: str) -> bool:
    return bool(wordform) and all(c in _PUNCT for c in wordform)


def validate_token(token: Token, sentence_len: int | None = None,
                   index_1based: int | None = None) -> None:
    """Assert the structural invariants; raises ValueError on violation."""
    if not token.wordform:
        raise ValueError("empty wordform")
    if token.syllables is not None:
        expected = 0
        for a, b in token.syllables:
            if a != expected or b <= a:
                raise ValueError(f"syllable spans do not partition {token.wordform!r}")
            expected = b
        if expected != len(token.wordform):
            raise ValueError(f"syllable spans do not cover {token.wordform!r}")
    if token.stress is not None:
        if token.syllables is None or not 0 <= token.stress < len(token.syllables):
            raise ValueError("stress must index an existing syllable")
    if token.dep_head is not None and sentence_len is not None:
        if not 0 <= token.dep_head <= sentence_len:
            raise ValueError("dep_head out of range")
        if index_1based is not None and token.dep_head == index_1based:
            raise ValueError("token cannot head itself")


def validate_sentence(sentence: Sentence) -> None:
    for i, tok in enumerate(sentence.tokens, start=1):
        validate_token(tok, len(sentence.tokens), i)
