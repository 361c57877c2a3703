#!/usr/bin/env python3
"""Train the annotation processors on the toy treebank, annotate a fresh
sentence, build context labels and synthesize it with a toy voice.

Writes /tmp/sltk_demo.wav.
"""

import math
from pathlib import Path

import numpy as np

from sltk import ttsback
from sltk.learners.regtree import RegLeaf, RegTree
from sltk.processors.tasks import train_processor
from sltk.textpipe import parse_config, run_pipeline
from sltk.ttsfront import build_labels, format_labels, syllable_freq_table

TOY = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "toy_corpus.tsv"

CONFIG = """\
[Input]
input.basic-tokenizer
[Pipeline]
proc.tagger
proc.lemmatizer
proc.chunker
proc.parser
proc.syllabifier
proc.lts
proc.stress
[Output]
out.tsv
"""

STAGE_TASK = {
    "proc.tagger": "tag", "proc.lemmatizer": "lemma", "proc.chunker": "chunk",
    "proc.parser": "parse", "proc.syllabifier": "syllabify",
    "proc.lts": "lts", "proc.stress": "stress",
}


def const_tree(mean, voiced_fraction=None):
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    leaf = RegLeaf(mean, np.zeros_like(mean), 1, voiced_fraction)
    return RegTree(leaf, mean.shape[0])


def main() -> None:
    from sltk.textpipe import parse_tsv

    corpus = parse_tsv(TOY.read_text(encoding="utf-8"))
    models = {stage: train_processor(task, corpus)
              for stage, task in STAGE_TASK.items()}
    print(f"trained {len(models)} processors on {len(corpus)} sentences")

    sentences = run_pipeline(parse_config(CONFIG), models, "Ana are mere.")
    sentence = sentences[0]
    for token in sentence.tokens:
        print(f"  {token.wordform:8} {token.pos or '_':4} "
              f"{'-'.join(token.syllable_texts() or []):10} "
              f"{' '.join(token.transcription or [])}")

    table = syllable_freq_table(corpus, threshold=1)
    labels = build_labels(sentence, table)
    print(f"{len(labels)} state labels; first:")
    print(" ", labels[0].render()[:100], "...")

    voice = ttsback.VoiceModel(
        duration=const_tree([6.0]),
        lf0=const_tree([math.log(115.0)], voiced_fraction=1.0),
        mgc=const_tree(np.zeros(25)),
    )
    wav = ttsback.synthesize(voice, labels, seed=0)
    out = Path("/tmp/sltk_demo.wav")
    out.write_bytes(wav)
    print(f"wrote {out} ({len(wav)} bytes)")
    print("label file preview ->", format_labels([labels]).count("\n"), "lines")


if __name__ == "__main__":
    main()
