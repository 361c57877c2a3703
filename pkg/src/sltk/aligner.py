"""Time-aligned corpora: label-file parsing, text/alignment realignment via
dynamic programming, and per-phoneme statistics.

All internal durations are integer milliseconds; the 100 ns HTK convention
is converted at the file boundary only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from sltk.errors import ToolkitError
from sltk.phones import DEFAULT_INVENTORY
from sltk.tokens import Token, is_punct

HTK_UNITS_PER_MS = 10_000


@dataclass(frozen=True)
class PhonemeSegment:
    phoneme: str
    start_ms: int
    end_ms: int


@dataclass
class AlignedWord:
    surface: str
    segments: list[PhonemeSegment]

    @property
    def start_ms(self) -> int:
        return self.segments[0].start_ms

    @property
    def end_ms(self) -> int:
        return self.segments[-1].end_ms


@dataclass
class AlignedUtterance:
    id: str
    audio_file: str
    words: list[AlignedWord]
    tokens: list[Token] = field(default_factory=list)
    token_spans: list[tuple[int, int] | None] = field(default_factory=list)


# --- lab files ---

def parse_lab(text: str, units: str = "htk100ns",
              inventory: frozenset[str] = DEFAULT_INVENTORY) -> list[PhonemeSegment]:
    if units not in ("htk100ns", "ms"):
        raise ValueError(f"unknown units {units!r}")
    segments: list[PhonemeSegment] = []
    prev_end = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ToolkitError("E_LAB_ORDER", f"malformed record at line {lineno}")
        start_raw, end_raw, symbol = parts
        try:
            start, end = int(start_raw), int(end_raw)
        except ValueError:
            raise ToolkitError("E_LAB_ORDER", f"non-integer time at line {lineno}")
        if units == "htk100ns":
            start //= HTK_UNITS_PER_MS
            end //= HTK_UNITS_PER_MS
        if end < start or start < prev_end:
            raise ToolkitError("E_LAB_ORDER", f"non-monotone times at line {lineno}")
        if symbol not in inventory:
            raise ToolkitError("E_UNKNOWN_PHONEME", f"{symbol!r} at line {lineno}")
        segments.append(PhonemeSegment(symbol, start, end))
        prev_end = end
    return segments


def serialize_lab(segments: list[PhonemeSegment], units: str = "htk100ns") -> str:
    lines = []
    for seg in segments:
        if units == "htk100ns":
            lines.append(f"{seg.start_ms * HTK_UNITS_PER_MS} "
                         f"{seg.end_ms * HTK_UNITS_PER_MS} {seg.phoneme}")
        else:
            lines.append(f"{seg.start_ms} {seg.end_ms} {seg.phoneme}")
    return "\n".join(lines) + ("\n" if lines else "")


# --- realignment ---

def _normalize(word: str) -> str:
    return word.casefold()


def _strip(word: str) -> str:
    from sltk.corpusforge import strip_diacritics
    return strip_diacritics(_normalize(word))


def match_cost(token: str, word: str) -> int:
    if _normalize(token) == _normalize(word):
        return 0
    if _strip(token) == _strip(word):
        return 0
    return 1


def realign(tokens: list[str],
            words: list[AlignedWord]) -> tuple[list[tuple[int, int] | None], int]:
    """Globally align raw tokens against alignment-source words.

    Costs: 0 for a normalized match (casefold, then diacritic-stripped),
    0 for dropping a punctuation token or skipping a punctuation word,
    1 otherwise.  Ties prefer match over deletion over insertion.  Tokens
    consumed diagonally inherit the word's time span; dropped tokens get
    none.  Returns (per-token spans, total cost).
    """
    n, m = len(tokens), len(words)
    INF = float("inf")
    cost = [[INF] * (m + 1) for _ in range(n + 1)]
    move: list[list[str | None]] = [[None] * (m + 1) for _ in range(n + 1)]
    cost[n][m] = 0
    del_cost = [0 if is_punct(t) else 1 for t in tokens]
    ins_cost = [0 if is_punct(w.surface) else 1 for w in words]
    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if i == n and j == m:
                continue
            best, action = INF, None
            # preference order encoded by strict inequality scan: match first
            if i < n and j < m:
                c = match_cost(tokens[i], words[j].surface) + cost[i + 1][j + 1]
                if c < best:
                    best, action = c, "match"
            if i < n:
                c = del_cost[i] + cost[i + 1][j]
                if c < best:
                    best, action = c, "del"
            if j < m:
                c = ins_cost[j] + cost[i][j + 1]
                if c < best:
                    best, action = c, "ins"
            cost[i][j] = best
            move[i][j] = action

    spans: list[tuple[int, int] | None] = [None] * n
    i = j = 0
    while (i, j) != (n, m):
        action = move[i][j]
        if action == "match":
            spans[i] = (words[j].start_ms, words[j].end_ms)
            i, j = i + 1, j + 1
        elif action == "del":
            i += 1
        else:
            j += 1
    return spans, int(cost[0][0])


def realign_utterance(utterance: AlignedUtterance) -> AlignedUtterance:
    spans, _ = realign([t.wordform for t in utterance.tokens], utterance.words)
    utterance.token_spans = spans
    return utterance


# --- statistics ---

@dataclass
class PhonemeStats:
    occurrences: dict[str, int] = field(default_factory=dict)
    total_ms: dict[str, int] = field(default_factory=dict)

    def add(self, phoneme: str, duration_ms: int, count: int = 1) -> None:
        self.occurrences[phoneme] = self.occurrences.get(phoneme, 0) + count
        self.total_ms[phoneme] = self.total_ms.get(phoneme, 0) + duration_ms

    def mean_ms(self, phoneme: str) -> float:
        return round_half_up(self.total_ms[phoneme] / self.occurrences[phoneme])

    def total_hours(self) -> float:
        return round_half_up(sum(self.total_ms.values()) / 3_600_000)


def round_half_up(value: float, places: int = 2) -> float:
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def corpus_stats(utterances: list[AlignedUtterance],
                 group_key=lambda u: "all") -> dict[str, PhonemeStats]:
    groups: dict[str, PhonemeStats] = {}
    for utt in utterances:
        stats = groups.setdefault(group_key(utt), PhonemeStats())
        for word in utt.words:
            for seg in word.segments:
                stats.add(seg.phoneme, seg.end_ms - seg.start_ms)
    return groups


def format_stats_tsv(stats: PhonemeStats) -> str:
    lines = []
    for phoneme in sorted(stats.occurrences):
        lines.append(f"{phoneme}\t{stats.occurrences[phoneme]}"
                     f"\t{stats.total_ms[phoneme]}\t{stats.mean_ms(phoneme):.2f}")
    lines.append(f"#total_hours\t{stats.total_hours():.2f}")
    return "\n".join(lines) + "\n"


def load_grouped_stats_tsv(text: str) -> dict[str, PhonemeStats]:
    """Read the shipped per-group fixtures: columns
    ``phoneme  group  occurrences  total_ms  [mean_ms]``."""
    groups: dict[str, PhonemeStats] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#") or line.startswith("phoneme\t"):
            continue
        parts = line.split("\t")
        phoneme, group, occ, total = parts[0], parts[1], int(parts[2]), int(parts[3])
        groups.setdefault(group, PhonemeStats()).add(phoneme, total, occ)
    return groups
