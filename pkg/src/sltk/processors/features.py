"""Frozen feature templates, one per task.

Positions beyond a boundary yield the sentinel ``__PAD__``.  Template
changes are breaking changes for every trained model, so keep them frozen
and bump the model format version when they move.
"""

from __future__ import annotations

from sltk.tokens import Sentence

PAD = "__PAD__"
NONE = "__NONE__"

VOWELS = set("aeiouăâîáéíóú")


def has_vowel(word: str) -> bool:
    return any(c in VOWELS for c in word.lower())


def _wordform(sentence: Sentence, i: int) -> str:
    if 0 <= i < len(sentence.tokens):
        return sentence.tokens[i].wordform
    return PAD


def _wordform_low(sentence: Sentence, i: int) -> str:
    w = _wordform(sentence, i)
    return w if w == PAD else w.lower()


def _pos(sentence: Sentence, i: int) -> str:
    if 0 <= i < len(sentence.tokens):
        return sentence.tokens[i].pos or NONE
    return PAD


def tagger_features(sentence: Sentence, i: int) -> dict[str, str]:
    word = sentence.tokens[i].wordform
    low = word.lower()
    feats = {f"w{d:+d}": _wordform_low(sentence, i + d) for d in range(-2, 3)}
    for k in range(1, 5):
        feats[f"suf{k}"] = low[-k:]
    for k in range(1, 3):
        feats[f"pre{k}"] = low[:k]
    feats["cap"] = str(int(word[:1].isupper()))
    feats["digit"] = str(int(any(c.isdigit() for c in word)))
    feats["t-1"] = _pos(sentence, i - 1)
    feats["t-2"] = _pos(sentence, i - 2)
    return feats


def lemma_features(sentence: Sentence, i: int) -> dict[str, str]:
    word = sentence.tokens[i].wordform.lower()
    feats = {"w0": word, "pos": _pos(sentence, i)}
    for k in range(1, 5):
        feats[f"suf{k}"] = word[-k:]
    return feats


def chunk_features(sentence: Sentence, i: int) -> dict[str, str]:
    feats = {f"p{d:+d}": _pos(sentence, i + d) for d in range(-2, 3)}
    for d in (-1, 0, 1):
        feats[f"w{d:+d}"] = _wordform_low(sentence, i + d)
    return feats


def _char(word: str, i: int) -> str:
    if 0 <= i < len(word):
        return word[i]
    return PAD


def char_window_features(word: str, i: int) -> dict[str, str]:
    # shared by the syllabifier and letter-to-sound: characters +/-3
    return {f"c{d:+d}": _char(word.lower(), i + d) for d in range(-3, 4)}


def stress_features(word: str, syllables: list[str], i: int) -> dict[str, str]:
    return {
        "syl": syllables[i].lower(),
        "prev": syllables[i - 1].lower() if i > 0 else PAD,
        "next": syllables[i + 1].lower() if i + 1 < len(syllables) else PAD,
        "ord": str(i),
        "nsyl": str(len(syllables)),
    }


def parser_features(sentence: Sentence, state) -> dict[str, str]:
    # 12 classic stack/buffer wordform and POS slots; index 0 is the root
    def word_at(idx: int | None) -> str:
        if idx is None:
            return PAD
        if idx == 0:
            return "__ROOT__"
        return sentence.tokens[idx - 1].wordform.lower()

    def pos_at(idx: int | None) -> str:
        if idx is None:
            return PAD
        if idx == 0:
            return "__ROOT__"
        return sentence.tokens[idx - 1].pos or NONE

    def stack(k: int) -> int | None:
        return state.stack[-1 - k] if len(state.stack) > k else None

    def buffer(k: int) -> int | None:
        return state.buffer[k] if len(state.buffer) > k else None

    feats = {}
    for k in range(3):
        feats[f"s{k}w"] = word_at(stack(k))
        feats[f"s{k}p"] = pos_at(stack(k))
        feats[f"b{k}w"] = word_at(buffer(k))
        feats[f"b{k}p"] = pos_at(buffer(k))
    return feats


def extract_features(task: str, sentence: Sentence, position) -> dict[str, str]:
    """Deterministic feature vector for ``task`` at ``position``.

    ``position`` is a token index for tag/lemma/chunk, a (token index,
    character index) pair for syllabify/lts, a (token index, syllable index)
    pair for stress, and a :class:`ParserState` for parse.
    """
    if task == "tag":
        return tagger_features(sentence, position)
    if task == "lemma":
        return lemma_features(sentence, position)
    if task == "chunk":
        return chunk_features(sentence, position)
    if task in ("syllabify", "lts"):
        ti, ci = position
        return char_window_features(sentence.tokens[ti].wordform, ci)
    if task == "stress":
        ti, si = position
        token = sentence.tokens[ti]
        return stress_features(token.wordform, token.syllable_texts() or [], si)
    if task == "parse":
        return parser_features(sentence, position)
    raise ValueError(f"unknown task {task!r}")


def to_bag(features: dict[str, str]) -> frozenset[str]:
    return frozenset(f"{k}={v}" for k, v in features.items())
