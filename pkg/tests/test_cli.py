import json
import math
from pathlib import Path

import numpy as np
import pytest

from sltk.cli import main

FIXTURES = Path(__file__).parent / "fixtures"

LEXICON_WORDS = ("ana are mere merge la casa mare câte cărți copilul "
                 "școală azi vine acasă").split()


@pytest.fixture()
def lexicon(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("\n".join(LEXICON_WORDS), encoding="utf-8")
    return path


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2
    assert main([]) == 2


def test_missing_required_flag_is_usage_error():
    assert main(["clean", "--input", "x"]) == 2


def test_clean_roundtrip(tmp_path, lexicon, capsys):
    src = tmp_path / "raw.txt"
    src.write_text("Ana are mere .\nAre 3 mere .\nCopilul merge la școală .\n",
                   encoding="utf-8")
    out = tmp_path / "kept.txt"
    rej = tmp_path / "rejected.tsv"
    code = main(["clean", "--input", str(src), "--lexicon", str(lexicon),
                 "--out", str(out), "--rejected", str(rej)])
    assert code == 0
    kept = out.read_text(encoding="utf-8").splitlines()
    assert kept == ["Ana are mere .", "Copilul merge la școală ."]
    line = rej.read_text(encoding="utf-8").splitlines()[0]
    assert line.split("\t")[1] == "d"


def test_clean_jobs_flag_deterministic(tmp_path, lexicon):
    src = tmp_path / "raw.txt"
    src.write_text("\n".join(["Ana are mere ."] * 20), encoding="utf-8")
    outs = []
    for jobs in ("1", "4"):
        out = tmp_path / f"kept{jobs}.txt"
        assert main(["clean", "--input", str(src), "--lexicon", str(lexicon),
                     "--out", str(out), "--jobs", jobs]) == 0
        outs.append(out.read_text(encoding="utf-8"))
    assert outs[0] == outs[1]


def test_balance(tmp_path):
    src = tmp_path / "sents.txt"
    src.write_text("\n".join(["ana are mere"] * 30 + ["zahăr brut"]),
                   encoding="utf-8")
    out = tmp_path / "picked.txt"
    table = tmp_path / "table.tsv"
    code = main(["balance", "--input", str(src), "--out", str(out),
                 "--table", str(table), "--rare-threshold", "5"])
    assert code == 0
    picked = out.read_text(encoding="utf-8").splitlines()
    assert picked[0] == "zahăr brut"  # rarest triphones first
    assert table.read_text(encoding="utf-8").count("\n") > 3


def test_stats_golden(tmp_path):
    lab = tmp_path / "labs"
    lab.mkdir()
    (lab / "u1.lab").write_text("0 800000 a\n800000 1400000 n\n",
                                encoding="utf-8")
    (lab / "u2.lab").write_text("0 1200000 a\n", encoding="utf-8")
    out = tmp_path / "stats.tsv"
    code = main(["stats", "--lab-dir", str(lab), "--units", "htk100ns",
                 "--out", str(out)])
    assert code == 0
    assert out.read_text(encoding="utf-8") == (
        "a\t2\t200\t100.00\n"
        "n\t1\t60\t60.00\n"
        "#total_hours\t0.00\n")


def test_stats_bad_lab_is_operational_error(tmp_path, capsys):
    lab = tmp_path / "labs"
    lab.mkdir()
    (lab / "bad.lab").write_text("0 100 qq\n", encoding="utf-8")
    code = main(["stats", "--lab-dir", str(lab), "--units", "ms",
                 "--out", str(tmp_path / "x.tsv")])
    assert code == 1
    assert "E_UNKNOWN_PHONEME" in capsys.readouterr().err


def test_align(tmp_path):
    doc = {
        "id": "u1",
        "tokens": ["Ana", "are", "mere", "."],
        "words": [["ana", [["a", 0, 80], ["n", 80, 120], ["a", 120, 180]]],
                  ["are", [["a", 180, 260], ["r", 260, 300], ["e", 300, 360]]],
                  ["mere", [["m", 360, 420], ["e", 420, 470], ["r", 470, 520],
                            ["e", 520, 600]]]],
    }
    doc["words"] = [{"surface": s, "segments": segs} for s, segs in doc["words"]]
    src = tmp_path / "in.jsonl"
    src.write_text(json.dumps(doc) + "\n", encoding="utf-8")
    out = tmp_path / "out.jsonl"
    assert main(["align", "--input", str(src), "--out", str(out)]) == 0
    result = json.loads(out.read_text(encoding="utf-8"))
    assert result["cost"] == 0
    assert result["spans"] == [[0, 180], [180, 360], [360, 600], None]


def test_train_annotate_pipeline(tmp_path, capsys):
    corpus = FIXTURES / "toy_corpus.tsv"
    models = tmp_path / "models"
    models.mkdir()
    for task in ("tag", "lemma", "chunk", "syllabify", "lts",
                 "stress", "parse"):
        code = main(["train", "--task", task, "--corpus", str(corpus),
                     "--out", str(models / f"{task}.flmd"), "--seed", "0"])
        assert code == 0, task
    config = tmp_path / "pipe.ini"
    config.write_text(
        "[Input]\ninput.basic-tokenizer\n[Pipeline]\nproc.tagger\n"
        "proc.lemmatizer\nproc.chunker\nproc.parser\nproc.syllabifier\n"
        "proc.lts\nproc.stress\n[Output]\nout.tsv\n", encoding="utf-8")
    raw = tmp_path / "raw.txt"
    raw.write_text("Ana are mere.", encoding="utf-8")
    out = tmp_path / "annotated.tsv"
    code = main(["annotate", "--config-file", str(config),
                 "--models", str(models), "--input", str(raw),
                 "--out", str(out)])
    assert code == 0
    golden = (FIXTURES / "golden_pipeline.tsv").read_text(encoding="utf-8")
    assert out.read_text(encoding="utf-8") == golden


def test_tts_label_and_synth_determinism(tmp_path):
    labels_path = tmp_path / "labels.txt"
    code = main(["tts-label", "--corpus", str(FIXTURES / "toy_corpus.tsv"),
                 "--out", str(labels_path), "--syllable-threshold", "1"])
    assert code == 0
    text = labels_path.read_text(encoding="utf-8")
    assert "STATE=1" in text and "//" not in text

    from sltk import ttsback as tb
    from sltk.learners.regtree import RegLeaf, RegTree

    def const_tree(mean, vf=None):
        m = np.atleast_1d(np.asarray(mean, float))
        return RegTree(RegLeaf(m, np.zeros_like(m), 1, vf), m.shape[0])

    voice_path = tmp_path / "voice.flmd"
    tb.save_voice(tb.VoiceModel(const_tree([2.0]),
                                const_tree([math.log(110)], 1.0),
                                const_tree(np.zeros(25))), voice_path)
    wavs = []
    for name in ("a.wav", "b.wav"):
        out = tmp_path / name
        code = main(["synth", "--voice", str(voice_path),
                     "--labels", str(labels_path), "--out", str(out),
                     "--seed", "7"])
        assert code == 0
        wavs.append(out.read_bytes())
    assert wavs[0] == wavs[1]
    assert wavs[0][:4] == b"RIFF"


def test_index_and_query_snapshot(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(json.dumps({
        "id": "u1", "audio": "u1.wav",
        "tokens": [{"wordform": "Ana", "lemma": "ana", "pos": "Np",
                    "span": [0, 300]},
                   {"wordform": "are", "lemma": "avea", "pos": "V3",
                    "span": [300, 520]}],
    }) + "\n", encoding="utf-8")
    snapshot = tmp_path / "c.flix"
    assert main(["index", "--corpus", str(corpus),
                 "--snapshot", str(snapshot)]) == 0
    from sltk import queryservice as qs
    index = qs.load_snapshot(snapshot)
    hits, total = qs.search(index, qs.parse_query('[lemma="avea"]'))
    assert total == 1 and hits[0].start == 1


def test_config_file_defaults(tmp_path, lexicon):
    src = tmp_path / "raw.txt"
    src.write_text("Ana are mere .\n", encoding="utf-8")
    out = tmp_path / "kept.txt"
    ini = tmp_path / "defaults.ini"
    ini.write_text(f"[clean]\nmax-words = 2\nlexicon = {lexicon}\n",
                   encoding="utf-8")
    # config sets max-words 2 -> the 3-word sentence is rejected by rule a
    code = main(["--config", str(ini), "clean", "--input", str(src),
                 "--lexicon", str(lexicon), "--out", str(out)])
    assert code == 0
    assert out.read_text(encoding="utf-8").strip() == ""
    # explicit flag overrides the config value
    code = main(["--config", str(ini), "clean", "--input", str(src),
                 "--lexicon", str(lexicon), "--out", str(out),
                 "--max-words", "20"])
    assert code == 0
    assert out.read_text(encoding="utf-8").strip() == "Ana are mere ."
