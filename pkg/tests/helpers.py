"""Independent brute-force oracles shared by unit and acceptance tests."""

import random

from sltk.corpusforge import CandidateSentence, sentence_triphones


def h_index_oracle(counts):
    """Try every candidate h from 0 to the number of types."""
    values = list(counts.values())
    best = 0
    for h in range(len(values) + 1):
        if sum(1 for v in values if v >= h) >= h:
            best = h
    return best


def select_oracle(sentences, counts, rare_threshold, h):
    kept = []
    for s in sentences:
        tri = [counts[t] for t in sentence_triphones(s.phonemes)]
        if any(c < rare_threshold for c in tri):
            kept.append(s)
        elif all(c > h for c in tri):
            pass
        else:
            kept.append(s)
    return kept


def random_phonetized_corpus(rng: random.Random, max_sentences=500, max_phonemes=20):
    phones = [f"p{i}" for i in range(rng.randint(2, max_phonemes))]
    n = rng.randint(1, max_sentences)
    return [
        CandidateSentence(
            f"s{i:04d}", "", [],
            phonemes=[rng.choice(phones) for _ in range(rng.randint(1, 12))])
        for i in range(n)
    ]


def edit_cost_oracle(tokens, words, match):
    """Exponential-time minimal alignment cost; small inputs only.

    ``match(a, b)`` gives the substitution cost; dropping or inserting a
    punctuation item costs 0, any other drop or insertion costs 1.
    """
    from functools import lru_cache

    from sltk.tokens import is_punct

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == len(tokens) and j == len(words):
            return 0
        best = float("inf")
        if i < len(tokens):
            best = min(best, (0 if is_punct(tokens[i]) else 1) + rec(i + 1, j))
        if j < len(words):
            best = min(best, (0 if is_punct(words[j]) else 1) + rec(i, j + 1))
        if i < len(tokens) and j < len(words):
            best = min(best, match(tokens[i], words[j]) + rec(i + 1, j + 1))
        return best

    return rec(0, 0)
