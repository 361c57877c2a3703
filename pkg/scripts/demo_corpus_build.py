#!/usr/bin/env python3
"""Recording-corpus construction walkthrough on a tiny embedded sentence set:
clean, correct diacritics, build the triphone histogram, balance and order."""

from sltk import corpusforge as cf

LEXICON = frozenset("""
ana are mere câte cărți casa casă este mare mari copilul merge la școală
azi toată lumea vine acasă frumos foarte carte citește el ea o și
""".split())

RAW = [
    "Ana are mere .",
    "Copilul merge la școală .",
    "Cîte cărți are Ana ?",
    "Are 3 mere .",
    "TOATĂ LUMEA VINE AZI",
    "Toată lumea vine azi .",
    "El citește o carte foarte frumos .",
    "Casa este mare .",
    "xy",
]


def main() -> None:
    sentences = [cf.candidate_from_line(f"s{i}", line)
                 for i, line in enumerate(RAW)]
    config = cf.CleaningConfig(lexicon=LEXICON)
    kept, rejected = cf.clean(sentences, config)
    print("=== cleaning ===")
    for s in kept:
        print(f"  keep    {s.raw}")
    for s in rejected:
        print(f"  rule {s.rejection}  {s.raw!r}  ({s.evidence})")

    print("\n=== diacritic correction ===")
    for s in kept:
        corrected = [cf.correct_diacritics(t, LEXICON) for t in s.tokens]
        if corrected != s.tokens:
            print(f"  {' '.join(s.tokens)}  ->  {' '.join(corrected)}")
        s.tokens = corrected

    for s in kept:
        s.phonemes = cf.phonetize(s.tokens)
    table = cf.triphone_histogram(kept)
    h = cf.h_index(table)
    print(f"\n=== balancing ===\n  {len(table.counts)} triphone types, "
          f"h-index {h}")
    selected = cf.sort_rarity(cf.select_balanced(kept, table, 2), table)
    for s in selected:
        rarest = min(table.counts[t] for t in cf.sentence_triphones(s.phonemes))
        print(f"  rarity {rarest}  {s.raw}")


if __name__ == "__main__":
    main()
