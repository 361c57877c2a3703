"""Command-line entry point: one subcommand per toolkit capability.

Exit codes: 0 success, 1 operational error (the error id goes to standard
error), 2 usage error.  Values from ``--config`` (an INI file with one
section per subcommand) act as flag defaults and are overridden by explicit
flags.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from sltk.errors import ToolkitError

TASK_STAGES = {
    "tag": "proc.tagger",
    "lemma": "proc.lemmatizer",
    "chunk": "proc.chunker",
    "parse": "proc.parser",
    "syllabify": "proc.syllabifier",
    "lts": "proc.lts",
    "stress": "proc.stress",
}


def _pmap(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def _load_lexicon(path):
    return frozenset(w for w in _read(path).split() if w)


# --- subcommand bodies ---

def cmd_clean(args):
    from sltk import corpusforge as cf

    lines = [ln for ln in _read(args.input).splitlines() if ln.strip()]
    sentences = _pmap(
        lambda pair: cf.candidate_from_line(f"s{pair[0]:06d}", pair[1]),
        list(enumerate(lines)), args.jobs)
    config = cf.CleaningConfig(lexicon=_load_lexicon(args.lexicon),
                               max_words=args.max_words)
    kept, rejected = cf.clean(sentences, config)
    if args.correct:
        for sent in kept:
            sent.tokens = [cf.correct_diacritics(t, config.lexicon)
                           for t in sent.tokens]
    _write(args.out, "\n".join(" ".join(s.tokens) for s in kept) + "\n")
    if args.rejected:
        _write(args.rejected, "".join(
            f"{s.id}\t{s.rejection}\t{s.evidence}\t{s.raw}\n" for s in rejected))
    print(f"kept {len(kept)} of {len(sentences)}", file=sys.stderr)
    return 0


def cmd_balance(args):
    from sltk import corpusforge as cf

    sentences = []
    for i, line in enumerate(_read(args.input).splitlines()):
        if not line.strip():
            continue
        sent = cf.candidate_from_line(f"s{i:06d}", line)
        sent.phonemes = cf.phonetize(sent.tokens)
        sentences.append(sent)
    table = cf.triphone_histogram(sentences)
    kept = cf.select_balanced(sentences, table, args.rare_threshold)
    ordered = cf.sort_rarity(kept, table)
    _write(args.out, "\n".join(s.raw for s in ordered) + "\n")
    if args.table:
        _write(args.table, cf.export_table_tsv(table))
    print(f"selected {len(ordered)} of {len(sentences)} "
          f"(h-index {cf.h_index(table)})", file=sys.stderr)
    return 0


def cmd_stats(args):
    from sltk import aligner

    stats = aligner.PhonemeStats()
    for lab in sorted(Path(args.lab_dir).glob("*.lab")):
        for seg in aligner.parse_lab(_read(lab), units=args.units):
            stats.add(seg.phoneme, seg.end_ms - seg.start_ms)
    _write(args.out, aligner.format_stats_tsv(stats))
    return 0


def cmd_align(args):
    from sltk import aligner

    def one(line):
        doc = json.loads(line)
        words = [
            aligner.AlignedWord(w["surface"], [
                aligner.PhonemeSegment(p, s, e) for p, s, e in w["segments"]])
            for w in doc["words"]
        ]
        spans, cost = aligner.realign(doc["tokens"], words)
        doc["spans"] = [list(s) if s else None for s in spans]
        doc["cost"] = cost
        return json.dumps(doc, ensure_ascii=False)

    lines = [ln for ln in _read(args.input).splitlines() if ln.strip()]
    _write(args.out, "\n".join(_pmap(one, lines, args.jobs)) + "\n")
    return 0


def cmd_train(args):
    from sltk.learners import save_model
    from sltk.processors.tasks import train_processor
    from sltk.textpipe import parse_tsv

    corpus = parse_tsv(_read(args.corpus))
    model = train_processor(args.task, corpus, backend=args.backend,
                            epochs=args.epochs, seed=args.seed)
    save_model(model, args.out)
    return 0


def cmd_annotate(args):
    from sltk.learners import load_model
    from sltk.textpipe import (check_dependencies, format_tsv, parse_config,
                               run_pipeline)

    config = parse_config(_read(args.config_file))
    check_dependencies(config)
    models = {}
    model_dir = Path(args.models)
    for task, stage in TASK_STAGES.items():
        if stage in config.stages:
            models[stage] = load_model(model_dir / f"{task}.flmd")
    sentences = run_pipeline(config, models, _read(args.input))
    _write(args.out, format_tsv(sentences))
    return 0


def cmd_tts_label(args):
    from sltk.textpipe import parse_tsv
    from sltk.ttsfront import build_labels, format_labels, syllable_freq_table

    corpus = parse_tsv(_read(args.corpus))
    table = syllable_freq_table(corpus, threshold=args.syllable_threshold)
    labelled = [build_labels(s, table, state_mode=not args.phone_level)
                for s in corpus]
    _write(args.out, format_labels(labelled))
    return 0


def _parse_label_file(text):
    from sltk.ttsfront import ContextLabel

    labels = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        feats = line.split("/")
        phone = next((f[3:] for f in feats if f.startswith("P0=")), "")
        state = next((int(f[6:]) for f in feats if f.startswith("STATE=")), None)
        labels.append(ContextLabel(phone, feats, state))
    return labels


def cmd_synth(args):
    from sltk.ttsback import load_voice, synthesize

    voice = load_voice(args.voice)
    labels = _parse_label_file(_read(args.labels))
    Path(args.out).write_bytes(synthesize(voice, labels, seed=args.seed))
    return 0


def cmd_index(args):
    from sltk import queryservice as qs

    index = qs.build_index(qs.read_jsonl(_read(args.corpus)),
                           name=args.name, audio_base=args.audio_dir or "")
    qs.save_snapshot(index, args.snapshot)
    print(f"indexed {len(index.utterances)} utterances", file=sys.stderr)
    return 0


def cmd_serve(args):
    from sltk import queryservice as qs

    if args.snapshot:
        index = qs.load_snapshot(args.snapshot)
    elif args.corpus:
        index = qs.build_index(qs.read_jsonl(_read(args.corpus)))
    else:
        print("serve: --snapshot or --corpus required", file=sys.stderr)
        return 2
    host, _, port = args.bind.partition(":")
    qs.serve(index, host=host or "127.0.0.1", port=int(port or 8000),
             audio_dir=args.audio_dir,
             cors_origins=args.cors_origin)
    return 0


# --- parser wiring ---

def build_parser():
    parser = argparse.ArgumentParser(
        prog="sltk", description="speech-language toolkit")
    parser.add_argument("--config", help="INI file with per-subcommand defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="filter raw sentences by cleaning rules")
    p.add_argument("--input", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rejected")
    p.add_argument("--max-words", type=int, default=20)
    p.add_argument("--correct", action="store_true",
                   help="also apply diacritic correction to kept sentences")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("balance", help="triphone-balance a sentence set")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--table", help="write the triphone histogram TSV here")
    p.add_argument("--rare-threshold", type=int, default=100)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("stats", help="per-phoneme duration statistics")
    p.add_argument("--lab-dir", required=True)
    p.add_argument("--units", choices=("htk100ns", "ms"), default="htk100ns")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("align", help="realign tokens with aligned words")
    p.add_argument("--input", required=True, help="JSONL: tokens + words")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("train", help="train one annotation model")
    p.add_argument("--task", required=True, choices=sorted(TASK_STAGES))
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("annotate", help="run an annotation pipeline")
    p.add_argument("--config-file", required=True, dest="config_file")
    p.add_argument("--models", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("tts-label", help="build synthesis context labels")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--syllable-threshold", type=int, default=5)
    p.add_argument("--phone-level", action="store_true")
    p.set_defaults(func=cmd_tts_label)

    p = sub.add_parser("synth", help="synthesize speech from labels")
    p.add_argument("--voice", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("index", help="build a corpus search snapshot")
    p.add_argument("--corpus", required=True, help="JSONL utterances")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--name", default="")
    p.add_argument("--audio-dir")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("serve", help="run the query HTTP service")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--corpus")
    p.add_argument("--snapshot")
    p.add_argument("--audio-dir")
    p.add_argument("--cors-origin", action="append", default=["*"])
    p.set_defaults(func=cmd_serve)

    return parser


def _apply_config_defaults(parser, argv):
    if "--config" not in argv:
        return
    idx = argv.index("--config")
    path = argv[idx + 1]
    ini = configparser.ConfigParser()
    ini.read(path)
    command = next((a for a in argv if not a.startswith("-") and a != path), None)
    if command and ini.has_section(command):
        for action in parser._subparsers._group_actions[0].choices[command]._actions:
            key = action.dest.replace("_", "-")
            if ini.has_option(command, key):
                raw = ini.get(command, key)
                value = action.type(raw) if callable(action.type) else raw
                parser._subparsers._group_actions[0].choices[command].set_defaults(
                    **{action.dest: value})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_defaults(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ToolkitError as err:
        print(str(err), file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"E_IO: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
