import csv
import io
import json
import math

import pytest

from conftest import DATA, pyphen_dict
from sylseg.cli import main

TOY_TRAIN = str(DATA / "toy" / "train.txt")
TOY_TEST = str(DATA / "toy" / "test.txt")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_segment_syllable_example_sentence(tmp_path, capsys):
    src = tmp_path / "s.txt"
    src.write_text("A syllable contains a single vowel unit\n", encoding="utf-8")
    out = tmp_path / "s.syl"
    code, stdout, _ = run(capsys, "segment", src, "-o", out, "--scheme", "syllable", "--lang", "en")
    assert code == 0
    assert out.read_bytes() == "A @ syl la ble @ con tains @ a @ sin gle @ vow el @ u nit\n".encode()
    side = json.loads((tmp_path / "s.syl.stats.json").read_text())
    assert side["scheme"]["label"] == "syl-en" and side["chars"] == 33
    assert "syl-en" in stdout


def test_segment_is_byte_identical(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run(capsys, "segment", DATA / "multilingual_ru.txt", "-o", out, "--scheme", "syllable",
                   "--lang", "ru")[0] == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_config_errors_exit_1(tmp_path, capsys):
    code, _, err = run(capsys, "segment", TOY_TRAIN, "-o", tmp_path / "x", "--scheme", "syllable", "--lang", "xx")
    assert code == 1 and "rules file" in err
    code, _, err = run(capsys, "segment", TOY_TRAIN, "-o", tmp_path / "x", "--scheme", "hyphen")
    assert code == 1 and "--dict" in err
    code, _, _ = run(capsys, "segment", tmp_path / "missing.txt", "-o", tmp_path / "x", "--scheme", "char")
    assert code == 1
    code, _, _ = run(capsys, "train-bpe", TOY_TRAIN, "-o", tmp_path / "m")
    assert code == 1


def test_data_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.seg"
    bad.write_text("a b\n@ c\n", encoding="utf-8")
    code, _, err = run(capsys, "segment", bad, "-o", tmp_path / "x", "--scheme", "external")
    assert code == 2 and ":2:" in err
    raw = tmp_path / "raw.txt"
    raw.write_bytes(b"ok\n\xff\n")
    code, _, err = run(capsys, "segment", raw, "-o", tmp_path / "x", "--scheme", "char")
    assert code == 2 and "offset 3" in err
    assert not (tmp_path / "x").exists()


def test_scheme_mismatch_exit_2(tmp_path, capsys):
    run(capsys, "segment", TOY_TRAIN, "-o", tmp_path / "tr.char", "--scheme", "char")
    run(capsys, "segment", TOY_TEST, "-o", tmp_path / "te.syl", "--scheme", "syllable", "--lang", "en")
    run(capsys, "train-lm", tmp_path / "tr.char", "-o", tmp_path / "m.kn", "--order", "3")
    code, _, err = run(capsys, "eval", tmp_path / "m.kn", tmp_path / "te.syl")
    assert code == 2 and "char" in err


def test_sidecar_needed_or_kind(tmp_path, capsys):
    seg = tmp_path / "plain.txt"
    seg.write_text("a b @ c\n", encoding="utf-8")
    code, _, err = run(capsys, "train-lm", seg, "-o", tmp_path / "m.kn")
    assert code == 1 and "--kind" in err
    assert run(capsys, "train-lm", seg, "-o", tmp_path / "m.kn", "--kind", "external")[0] == 0


def test_char_eval_reports_exp_cross_entropy(tmp_path, capsys):
    run(capsys, "segment", TOY_TRAIN, "-o", tmp_path / "tr", "--scheme", "char")
    src = tmp_path / "one.txt"
    src.write_text("library\nchildren\n", encoding="utf-8")
    run(capsys, "segment", src, "-o", tmp_path / "te", "--scheme", "char")
    run(capsys, "train-lm", tmp_path / "tr", "-o", tmp_path / "m.kn")
    code, out, _ = run(capsys, "eval", tmp_path / "m.kn", tmp_path / "te")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == "scheme\tcross_entropy\tseg_len\tchar_len\tppl_c"
    label, ce, seg, chars, ppl = row.split("\t")
    assert label == "char" and seg == chars == "15"
    assert float(ppl) == pytest.approx(math.exp(float(ce)), rel=1e-5)


def test_bpe_sweep_and_apply(tmp_path, capsys):
    code, out, _ = run(capsys, "train-bpe", DATA / "multilingual_en.txt", "-o", tmp_path / "sw", "--sweep",
                       "--syllabary", "300")
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "sw").iterdir())
    assert names == sorted(f"merges.{n}.txt" for n in (2500, 5000, 7500, 10000, 300))
    code, _, _ = run(capsys, "apply-bpe", DATA / "multilingual_en.txt", "--merges", tmp_path / "sw" / "merges.300.txt",
                     "-o", tmp_path / "en.bpe")
    assert code == 0
    side = json.loads((tmp_path / "en.bpe.stats.json").read_text())
    assert side["scheme"]["label"] == "bpe-300" and side["types"] <= 300


def test_overlap_and_growth(tmp_path, capsys):
    run(capsys, "segment", DATA / "multilingual_es.txt", "-o", tmp_path / "es.syl", "--scheme", "syllable",
        "--lang", "es")
    code, out, _ = run(capsys, "overlap", tmp_path / "es.syl", tmp_path / "es.syl")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and row["ratio_ab"] == row["ratio_ba"] == "1.000000"
    assert row["scheme_a"] == "syl-es"
    code, _, _ = run(capsys, "growth", tmp_path / "es.syl", "--interval", "500", "--csv", tmp_path / "g.csv",
                     "--svg", tmp_path / "g.svg")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "g.csv").read_text())))
    assert rows[0]["tokens_seen"] == "500" and (tmp_path / "g.svg").exists()


def test_hyphen_scheme(tmp_path, capsys):
    d = pyphen_dict("hyph_es.dic")
    code, _, _ = run(capsys, "segment", DATA / "multilingual_es.txt", "-o", tmp_path / "es.hyph",
                     "--scheme", "hyphen", "--dict", d)
    assert code == 0
    assert json.loads((tmp_path / "es.hyph.stats.json").read_text())["scheme"]["label"] == "hyph-es"


def test_stats_command(tmp_path, capsys):
    code, out, _ = run(capsys, "stats", "--corpus", "toy", "--train", TOY_TRAIN, "--test", TOY_TEST,
                       "--scheme", "word", "--scheme", "char", "-o", tmp_path / "s.csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["split"], r["scheme"]) for r in rows] == [
        ("train", "word"), ("test", "word"), ("train", "char"), ("test", "char")]
    assert (tmp_path / "s.csv").read_text() == out


def pipeline(tmp_path, capsys):
    results = tmp_path / "results.csv"
    run(capsys, "train-bpe", TOY_TRAIN, "-o", tmp_path / "m.txt", "--vocab", "60")
    variants = [("char", []), ("syllable", ["--lang", "en"]), ("bpe", ["--merges", tmp_path / "m.txt"])]
    for scheme, extra in variants:
        for split, src in (("train", TOY_TRAIN), ("test", TOY_TEST)):
            assert run(capsys, "segment", src, "-o", tmp_path / f"{split}.{scheme}", "--scheme", scheme, *extra)[0] == 0
        assert run(capsys, "train-lm", tmp_path / f"train.{scheme}", "-o", tmp_path / f"{scheme}.kn",
                   "--order", "3")[0] == 0
        assert run(capsys, "eval", tmp_path / f"{scheme}.kn", tmp_path / f"test.{scheme}", "--results", results,
                   "--corpus", "toy")[0] == 0
    return results.read_text(encoding="utf-8")


def test_end_to_end_golden(tmp_path, capsys):
    first = pipeline(tmp_path / "a", capsys)
    assert first == pipeline(tmp_path / "b", capsys)
    assert first == (DATA / "golden_results.csv").read_text(encoding="utf-8")
    row = next(csv.DictReader(io.StringIO(first)))
    assert list(row) == ["corpus", "char", "syl-en", "bpe-60"]
