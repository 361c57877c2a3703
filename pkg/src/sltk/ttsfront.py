"""Context-label construction for the synthesis back end.

Each phone of a sentence becomes one label: an ordered list of ``KEY=value``
feature tokens joined by ``/``.  Tokens never contain spaces or the
delimiter.  In state mode every phone expands into five labels that differ
only in their trailing ``STATE=`` token.

Category order (fixed):
  phone window P2 P1 P0 N1 N2; articulatory attributes for the same five
  slots; frequent-syllable identity; stress flag; syllable position in word
  and sentence; total syllables; syllable distance from previous and to next
  punctuation; sentence type; previous and next punctuation identity; word
  count; previous/current/next part of speech; word and syllable position
  inside the chunk; optional state index.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from sltk.errors import ToolkitError
from sltk.phones import BOUNDARY_PHONE, articulation
from sltk.processors.tasks import align_letters
from sltk.tokens import Sentence, Token, is_punct

STATES_PER_PHONE = 5

_PUNCT_NAMES = {
    ".": "period", ",": "comma", "?": "question", "!": "exclam",
    ":": "colon", ";": "semicolon", "-": "dash", "(": "paren", ")": "paren",
    "„": "quote", "”": "quote", '"': "quote", "'": "quote",
}

_SLOTS = ("P2", "P1", "P0", "N1", "N2")


@dataclass
class SyllableFreqTable:
    counts: Counter = field(default_factory=Counter)
    threshold: int = 5

    def frequent(self, syllable: str) -> bool:
        return self.counts[syllable.lower()] >= self.threshold


@dataclass
class ContextLabel:
    phone: str
    features: list[str]
    state: int | None = None

    def render(self) -> str:
        return "/".join(self.features)


def syllable_freq_table(sentences: list[Sentence], threshold: int = 5) -> SyllableFreqTable:
    table = SyllableFreqTable(threshold=threshold)
    for sentence in sentences:
        for token in sentence.tokens:
            if is_punct(token.wordform):
                continue
            texts = token.syllable_texts()
            if texts is None:
                raise ToolkitError(
                    "E_GOLD_MISSING",
                    f"token {token.wordform!r} is not syllabified")
            table.counts.update(t.lower() for t in texts)
    return table


def _punct_name(wordform: str) -> str:
    return _PUNCT_NAMES.get(wordform, "other")


def _sanitize(value) -> str:
    # free-text values (pos tags, syllables) must not break the token format
    return str(value).replace("/", "_").replace(" ", "_")


def _sentence_type(sentence: Sentence) -> str:
    for token in reversed(sentence.tokens):
        if token.wordform == "?":
            return "int"
        if token.wordform == "!":
            return "excl"
        if is_punct(token.wordform):
            return "decl"
    return "decl"


@dataclass
class _Phone:
    phone: str
    word_i: int            # index into the word-token list
    syl_in_word: int       # syllable ordinal inside the word, 0-based
    syl_global: int        # syllable ordinal inside the sentence, 0-based


def _phone_table(sentence: Sentence) -> tuple[list[_Phone], list[Token], list[int]]:
    """Flatten the sentence into phones annotated with word and syllable
    indices.  Phones attach to syllables through the letter alignment."""
    words = [t for t in sentence.tokens if not is_punct(t.wordform)]
    phones: list[_Phone] = []
    syl_counts: list[int] = []
    syl_global = 0
    for wi, token in enumerate(words):
        for attr in ("pos", "chunk", "transcription", "syllables"):
            if getattr(token, attr) is None:
                raise ToolkitError(
                    "E_STAGE_DEPENDENCY",
                    f"token {token.wordform!r} lacks {attr}")
        groups = align_letters(token.wordform, token.transcription)
        spans = token.syllables
        syl_counts.append(len(spans))
        for li, group in enumerate(groups):
            syl_i = next(
                (k for k, (a, b) in enumerate(spans) if a <= li < b),
                len(spans) - 1)
            for phone in group:
                phones.append(_Phone(phone, wi, syl_i, syl_global + syl_i))
        syl_global += len(spans)
    return phones, words, syl_counts


def _chunk_groups(words: list[Token]) -> list[tuple[int, int]]:
    """(ordinal, size) of each word inside its maximal same-chunk run."""
    runs: list[list[int]] = []
    for i, token in enumerate(words):
        if runs and words[runs[-1][-1]].chunk == token.chunk:
            runs[-1].append(i)
        else:
            runs.append([i])
    out: list[tuple[int, int]] = [(0, 0)] * len(words)
    for run in runs:
        for ord_, i in enumerate(run):
            out[i] = (ord_, len(run))
    return out


def _punct_anchors(sentence: Sentence, words: list[Token]):
    """For each word index: name of the nearest punctuation before and after,
    and the count of words between the word and each anchor boundary."""
    prev_name, next_name = [], []
    prev_words, next_words = [], []
    name, since = "start", 0
    wi = 0
    for token in sentence.tokens:
        if is_punct(token.wordform):
            name, since = _punct_name(token.wordform), 0
        else:
            prev_name.append(name)
            prev_words.append(since)
            since += 1
            wi += 1
    name, until = "end", 0
    rev_names, rev_counts = [], []
    for token in reversed(sentence.tokens):
        if is_punct(token.wordform):
            name, until = _punct_name(token.wordform), 0
        else:
            rev_names.append(name)
            rev_counts.append(until)
            until += 1
    next_name = list(reversed(rev_names))
    next_words = list(reversed(rev_counts))
    return prev_name, next_name, prev_words, next_words


def build_labels(sentence: Sentence, table: SyllableFreqTable,
                 state_mode: bool = True) -> list[ContextLabel]:
    phones, words, syl_counts = _phone_table(sentence)
    if not phones:
        return []
    total_syl = sum(syl_counts)
    syl_start = [0]
    for c in syl_counts:
        syl_start.append(syl_start[-1] + c)
    chunk_pos = _chunk_groups(words)
    p_name, n_name, p_wdist, n_wdist = _punct_anchors(sentence, words)
    sent_type = _sentence_type(sentence)
    total_words = len(words)

    labels: list[ContextLabel] = []
    for i, ph in enumerate(phones):
        window = [
            phones[i + off].phone if 0 <= i + off < len(phones) else BOUNDARY_PHONE
            for off in (-2, -1, 0, 1, 2)
        ]
        feats = [f"{slot}={p}" for slot, p in zip(_SLOTS, window)]
        for slot, p in zip(_SLOTS, window):
            art = articulation(p)
            feats.append(f"{slot}K={art.kind}")
            feats.append(f"{slot}PL={art.place}")
            feats.append(f"{slot}MN={art.manner}")
            feats.append(f"{slot}V={1 if art.voiced else 0}")

        token = words[ph.word_i]
        syllables = token.syllable_texts() or []
        syl_text = syllables[ph.syl_in_word] if syllables else ""
        if syl_text and table.frequent(syl_text):
            feats.append(f"SYL={_sanitize(syl_text.lower())}")
        stressed = token.stress is not None and token.stress == ph.syl_in_word
        feats.append(f"STR={1 if stressed else 0}")
        feats.append(f"SPW={ph.syl_in_word + 1}_{len(syllables)}")
        feats.append(f"SPS={ph.syl_global + 1}_{total_syl}")
        feats.append(f"TSS={total_syl}")
        # syllable distance to punctuation: syllables of the words between
        # the anchor and this word, plus the offset inside this word
        dpp = syl_start[ph.word_i] - syl_start[ph.word_i - p_wdist[ph.word_i]] \
            + ph.syl_in_word
        wn = ph.word_i + n_wdist[ph.word_i]
        dnp = syl_start[wn + 1] - syl_start[ph.word_i] - ph.syl_in_word - 1
        feats.append(f"DPP={dpp}")
        feats.append(f"DNP={dnp}")
        feats.append(f"ST={sent_type}")
        feats.append(f"PPU={p_name[ph.word_i]}")
        feats.append(f"NPU={n_name[ph.word_i]}")
        feats.append(f"TWC={total_words}")
        ppos = words[ph.word_i - 1].pos if ph.word_i > 0 else BOUNDARY_PHONE
        npos = (words[ph.word_i + 1].pos if ph.word_i + 1 < len(words)
                else BOUNDARY_PHONE)
        feats.append(f"PPOS={_sanitize(ppos)}")
        feats.append(f"CPOS={_sanitize(token.pos)}")
        feats.append(f"NPOS={_sanitize(npos)}")
        ord_, size = chunk_pos[ph.word_i]
        feats.append(f"WPC={ord_ + 1}_{size}")
        chunk_syl_before = syl_start[ph.word_i] - syl_start[ph.word_i - ord_]
        chunk_syl_total = (syl_start[ph.word_i - ord_ + size]
                           - syl_start[ph.word_i - ord_])
        feats.append(f"SPC={chunk_syl_before + ph.syl_in_word + 1}_{chunk_syl_total}")

        if state_mode:
            for state in range(1, STATES_PER_PHONE + 1):
                labels.append(ContextLabel(
                    ph.phone, feats + [f"STATE={state}"], state))
        else:
            labels.append(ContextLabel(ph.phone, list(feats)))
    return labels


def format_labels(utterances: list[list[ContextLabel]]) -> str:
    """One label per line, blank line between utterances."""
    blocks = ["\n".join(lab.render() for lab in labels) for labels in utterances]
    return "\n\n".join(blocks) + "\n"
