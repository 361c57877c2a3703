#!/usr/bin/env python3
"""Index a tiny annotated corpus in memory and run a few concordance queries,
printing keyword-in-context lines for each hit."""

from sltk import queryservice as qs

CORPUS = [
    {
        "id": "u1", "audio": "u1.wav",
        "tokens": [
            {"wordform": "Ana", "lemma": "ana", "pos": "Np", "span": [0, 310]},
            {"wordform": "are", "lemma": "avea", "pos": "V3", "span": [310, 520]},
            {"wordform": "mere", "lemma": "măr", "pos": "Ncfp", "span": [520, 900]},
            {"wordform": ".", "lemma": ".", "pos": "PERIOD", "span": [900, 950]},
        ],
    },
    {
        "id": "u2", "audio": "u2.wav",
        "tokens": [
            {"wordform": "Copilul", "lemma": "copil", "pos": "Ncms", "span": [0, 480]},
            {"wordform": "are", "lemma": "avea", "pos": "V3", "span": [480, 700]},
            {"wordform": "o", "lemma": "un", "pos": "Ti", "span": [700, 760]},
            {"wordform": "carte", "lemma": "carte", "pos": "Ncfs", "span": [760, 1200]},
        ],
    },
]

QUERIES = [
    '[lemma="avea"]',
    '[pos="Nc*"]',
    '[word="are"] [pos="Nc*"]',
]


def main() -> None:
    index = qs.build_index([qs.utterance_from_json(u) for u in CORPUS])
    for text in QUERIES:
        hits, total = qs.search(index, qs.parse_query(text))
        print(f"{text}   ({total} hits)")
        for hit in hits:
            match = " ".join(t["wordform"] for t in hit.tokens)
            print(f"  {hit.utterance}  {' '.join(hit.left):>20} "
                  f"[{match}] {' '.join(hit.right)}")
        print()


if __name__ == "__main__":
    main()
