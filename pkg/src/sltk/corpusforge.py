"""Recording-corpus construction: sentence cleaning, orthography correction,
triphone balancing and rarity-first ordering.

Cleaning applies rules (a)-(h) in order and rejects on the first failure:

  a  longer than ``max_words`` words
  b  non-printable characters (after stripping the line)
  c  forbidden characters or substrings
  d  contains digits
  e  all caps
  f  fewer than three words (single words are kept when in the lexicon)
  g  lexicon coverage below threshold (capitalized non-initial tokens exempt;
     a word counts as covered when a diacritic-restored variant is known)
  h  too many words covered only via diacritic restoration

Balancing keeps any sentence with a rare triphone (count strictly below the
rarity threshold), discards sentences with only very frequent triphones
(every count above the H-index of the initial distribution), keeps the rest,
and finally sorts rarest-first.  All decisions use the initial histogram.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from sltk.errors import ToolkitError
from sltk.tokens import is_punct

DEFAULT_FORBIDDEN_CHARACTERS = "½¾●○()[]{}<>/\\\"«»„”“”;*_|~^@#$%&="
DEFAULT_FORBIDDEN_SUBSTRINGS = ("Sos.", "Cal.", ".ro", ".uk", "www.", "http")
DEFAULT_PREFIXES = ("re", "ne", "pre", "supra", "sub", "semi", "anti", "auto")

BOUNDARY = "#"


@dataclass
class CleaningConfig:
    max_words: int = 20
    forbidden_characters: str = DEFAULT_FORBIDDEN_CHARACTERS
    forbidden_substrings: tuple[str, ...] = DEFAULT_FORBIDDEN_SUBSTRINGS
    lexicon: frozenset[str] | None = None
    lexicon_coverage: float = 0.90
    diacritics_threshold: float = 0.90
    prefixes: tuple[str, ...] = DEFAULT_PREFIXES


@dataclass
class CandidateSentence:
    id: str
    raw: str
    tokens: list[str]
    phonemes: list[str] | None = None
    rejection: str | None = None
    evidence: str = ""


def candidate_from_line(sent_id: str, raw: str) -> CandidateSentence:
    from sltk.textpipe import tokenize_word

    tokens: list[str] = []
    for chunk in raw.split():
        tokens.extend(tokenize_word(chunk))
    return CandidateSentence(sent_id, raw, tokens)


_DIACRITIC_SOURCES = {
    "ă": "a", "â": "a", "î": "i", "ș": "s", "ş": "s", "ț": "t", "ţ": "t",
}


def strip_diacritics(word: str) -> str:
    return "".join(_DIACRITIC_SOURCES.get(c, c) for c in word)


def _dediacritized_index(lexicon: frozenset[str]) -> dict[str, str]:
    index: dict[str, str] = {}
    for word in sorted(lexicon):
        stripped = strip_diacritics(word)
        if stripped != word:
            index.setdefault(stripped, word)
    return index


class _Coverage:
    """Lexicon membership with a diacritic-restoration fallback."""

    def __init__(self, lexicon: frozenset[str]):
        self.lexicon = lexicon
        self.restorable = _dediacritized_index(lexicon)

    def direct(self, word: str) -> bool:
        return word.lower() in self.lexicon

    def via_restoration(self, word: str) -> bool:
        return not self.direct(word) and word.lower() in self.restorable

    def covered(self, word: str) -> bool:
        return self.direct(word) or word.lower() in self.restorable


def _word_tokens(tokens: list[str]) -> list[str]:
    return [t for t in tokens if not is_punct(t)]


def _first_failure(sent: CandidateSentence, config: CleaningConfig,
                   coverage: _Coverage | None) -> tuple[str, str] | None:
    words = _word_tokens(sent.tokens)
    text = sent.raw.strip()

    if len(words) > config.max_words:
        return "a", f"{len(words)} words"
    for c in text:
        if not c.isprintable():
            return "b", f"non-printable U+{ord(c):04X}"
    for c in config.forbidden_characters:
        if c in text:
            return "c", f"character {c!r}"
    for sub in config.forbidden_substrings:
        if sub in text:
            return "c", f"substring {sub!r}"
    if any(c.isdigit() for c in text):
        return "d", "contains digits"
    letters = [c for c in text if c.isalpha()]
    if letters and all(c.isupper() for c in letters):
        return "e", "all caps"
    if len(words) < 3:
        if len(words) == 1 and coverage is not None and coverage.direct(words[0]):
            pass
        else:
            return "f", f"{len(words)} words"
    if coverage is not None:
        # capitalized non-initial tokens stand in for proper nouns
        checkable = [
            w for i, w in enumerate(words)
            if not (i > 0 and w[:1].isupper())
        ]
        if checkable:
            in_lex = sum(coverage.covered(w) for w in checkable)
            if in_lex / len(checkable) < config.lexicon_coverage:
                return "g", f"{in_lex}/{len(checkable)} in lexicon"
            lacking = sum(coverage.via_restoration(w) for w in checkable)
            if lacking / len(checkable) > 1.0 - config.diacritics_threshold:
                return "h", f"{lacking}/{len(checkable)} lack diacritics"
    return None


def clean(sentences: list[CandidateSentence],
          config: CleaningConfig) -> tuple[list[CandidateSentence], list[CandidateSentence]]:
    """Apply rules (a)-(h) in order; the first failing rule rejects."""
    if config.lexicon is None:
        raise ToolkitError("E_NO_LEXICON", "rules (f)-(h) need a lexicon")
    coverage = _Coverage(config.lexicon)
    kept, rejected = [], []
    for sent in sentences:
        sent.raw = sent.raw.strip()
        failure = _first_failure(sent, config, coverage)
        if failure is None:
            kept.append(sent)
        else:
            sent.rejection, sent.evidence = failure
            rejected.append(sent)
    return kept, rejected


def correct_diacritics(word: str, lexicon: frozenset[str],
                       prefixes: tuple[str, ...] = DEFAULT_PREFIXES) -> str:
    """Old-orthography correction of word-internal i-of-i to i-of-a.

    The lexicon wins when it knows the corrected form; otherwise every
    word-internal "î" is rewritten except immediately after a known prefix.
    Word-initial and word-final "î" never change.  Idempotent and
    length-preserving.
    """
    if "î" not in word:
        return word
    chars = list(word)
    variant = "".join(
        "â" if c == "î" and 0 < i < len(chars) - 1 else c
        for i, c in enumerate(chars)
    )
    if variant.lower() in lexicon:
        return variant
    out = []
    for i, c in enumerate(chars):
        if c == "î" and 0 < i < len(chars) - 1:
            if any(word[:i].lower() == p for p in prefixes):
                out.append(c)
            else:
                out.append("â")
        else:
            out.append(c)
    return "".join(out)


@dataclass
class TriphoneTable:
    counts: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def h_index(self) -> int:
        return h_index(self)


def sentence_triphones(phonemes: list[str],
                       boundary: str = BOUNDARY) -> list[tuple[str, str, str]]:
    padded = [boundary, *phonemes, boundary]
    return [tuple(padded[i:i + 3]) for i in range(len(padded) - 2)]


def triphone_histogram(sentences: list[CandidateSentence],
                       boundary: str = BOUNDARY) -> TriphoneTable:
    table = TriphoneTable()
    for sent in sentences:
        if not sent.phonemes:
            import warnings
            warnings.warn(f"sentence {sent.id} has no phonetization; skipped")
            continue
        table.counts.update(sentence_triphones(sent.phonemes, boundary))
    return table


def h_index(table: TriphoneTable) -> int:
    """Largest h such that at least h triphone types have count >= h."""
    counts = sorted(table.counts.values(), reverse=True)
    h = 0
    for i, c in enumerate(counts, start=1):
        if c >= i:
            h = i
        else:
            break
    return h


def select_balanced(sentences: list[CandidateSentence], table: TriphoneTable,
                    rare_threshold: int = 100,
                    boundary: str = BOUNDARY) -> list[CandidateSentence]:
    """Keep rare-triphone sentences, drop only-very-frequent ones, keep the rest.

    Decisions use only the initial histogram; strictly-below semantics for the
    rarity threshold, strictly-above the H-index for "very frequent".
    """
    h = h_index(table)
    kept = []
    for sent in sentences:
        if not sent.phonemes:
            raise ToolkitError("E_NO_PHONES", f"sentence {sent.id} is not phonetized")
        counts = [table.counts[t] for t in sentence_triphones(sent.phonemes, boundary)]
        if any(c < rare_threshold for c in counts):
            kept.append(sent)
        elif all(c > h for c in counts):
            continue
        else:
            kept.append(sent)
    return kept


def sort_rarity(sentences: list[CandidateSentence], table: TriphoneTable,
                boundary: str = BOUNDARY) -> list[CandidateSentence]:
    """Ascending by the sentence's least common triphone count, ties by id."""
    return sorted(
        sentences,
        key=lambda s: (
            min(table.counts[t] for t in sentence_triphones(s.phonemes, boundary)),
            s.id,
        ),
    )


# --- phonetization helper (lexicon first, naive letter mapping fallback) ---

_LETTER_PHONES = {
    "a": "a", "ă": "@", "â": "a@", "î": "a@", "b": "b", "c": "k", "d": "d",
    "e": "e", "f": "f", "g": "g", "h": "h", "i": "i", "j": "zh", "k": "k",
    "l": "l", "m": "m", "n": "n", "o": "o", "p": "p", "q": "k", "r": "r",
    "s": "s", "ș": "sh", "ş": "sh", "t": "t", "ț": "ts", "ţ": "ts", "u": "u",
    "v": "v", "w": "v", "x": "k s", "y": "i", "z": "z",
}


def phonetize(tokens: list[str],
              pron_lexicon: dict[str, list[str]] | None = None) -> list[str]:
    """Phoneme sequence for a token list: pronunciation lexicon first,
    deterministic letter mapping as the fallback; punctuation is silent."""
    phones: list[str] = []
    for token in tokens:
        if is_punct(token):
            continue
        low = token.lower()
        if pron_lexicon and low in pron_lexicon:
            phones.extend(pron_lexicon[low])
            continue
        for c in low:
            mapped = _LETTER_PHONES.get(c)
            if mapped:
                phones.extend(mapped.split())
    return phones


def export_table_tsv(table: TriphoneTable) -> str:
    lines = [
        f"{a}\t{b}\t{c}\t{n}"
        for (a, b, c), n in sorted(table.counts.items())
    ]
    return "\n".join(lines) + ("\n" if lines else "")
