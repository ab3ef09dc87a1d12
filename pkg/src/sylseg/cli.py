"""Command-line entry point.

Exit codes: 0 success, 1 usage/configuration error, 2 data error.
Every segmented file gets a ``<file>.stats.json`` sidecar holding its
scheme and token/type counts; later commands read the scheme from it.
"""

from __future__ import annotations

import csv
import io
import json
import re
import sys
from pathlib import Path

import click

from . import analysis, bpe, corpus, hyphenate, lm, syllabify
from ._io import atomic_write_text
from .core import (
    Scheme, SchemeKind, UnitStream, build_vocabulary, decode_stream, encode_stream, to_char_stream,
)
from .errors import ConfigError, DataError

SCHEMES = ["char", "syllable", "hyphen", "bpe", "external", "morph", "word"]
EXISTING = click.Path(exists=True, dir_okay=False, path_type=Path)


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".stats.json")


def write_stream(stream: UnitStream, out: Path) -> dict:
    atomic_write_text(out, encode_stream(stream))
    v = build_vocabulary(stream)
    info = {
        "scheme": stream.scheme.to_dict(),
        "sentences": len(stream),
        "tokens": v.n_tokens,
        "types": v.n_types,
        "units": v.total_tokens,
        "chars": stream.char_length(),
    }
    atomic_write_text(sidecar_path(out), json.dumps(info, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    return info


def read_stream(path: Path, scheme: Scheme | None = None) -> UnitStream:
    if scheme is None:
        side = sidecar_path(path)
        if not side.exists():
            raise ConfigError(f"{path}: no {side.name} sidecar; pass --kind (and --lang/--vocab) to name the scheme")
        scheme = Scheme.from_dict(json.loads(side.read_text(encoding="utf-8"))["scheme"])
    return decode_stream(path.read_bytes(), scheme)


def _scheme_opts(kind, lang, vocab, label) -> Scheme | None:
    if kind is None:
        return None
    return Scheme(SchemeKind(kind), lang or "", vocab or 0, label or "")


def _dict_language(path: Path) -> str:
    m = re.match(r"hyph_([a-z]{2,3})", path.name)
    return m.group(1) if m else ""


def make_segmenter(scheme: str, lang: str | None, dict_path: Path | None, merges: Path | None,
                   rules: Path | None):
    """Return ``words -> UnitStream`` for the word-level schemes."""
    if scheme == "char":
        return to_char_stream
    if scheme == "word":
        return analysis.word_stream
    if scheme == "syllable":
        if rules is not None:
            table = syllabify.load_rules(rules)
        elif lang:
            table = syllabify.get_rules(lang)
        else:
            raise ConfigError("--scheme syllable needs --lang (en, es, ru, fi, tr) or --rules FILE")
        return lambda words: syllabify.syllabify_stream(words, table)
    if scheme == "hyphen":
        if dict_path is None:
            raise ConfigError("--scheme hyphen needs --dict PATH to a hyph_xx.dic pattern file "
                              "(LibreOffice and pyphen ship them)")
        language = lang or _dict_language(dict_path)
        trie = hyphenate.load_patterns(dict_path, language)
        return lambda words: hyphenate.hyphenate_stream(words, trie, language or "xx")
    if scheme == "bpe":
        if merges is None:
            raise ConfigError("--scheme bpe needs --merges FILE (create one with train-bpe)")
        table = bpe.load_merges(merges)
        return lambda words: bpe.encode_stream(words, table)
    raise ConfigError(f"scheme {scheme!r} does not segment words")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Subword segmentation and character-level perplexity toolkit."""


input_format = click.option("--format", "fmt", type=click.Choice(["auto", "raw", "conllu"]), default="auto",
                            show_default=True, help="Input word format.")


@cli.command()
@click.argument("input", type=EXISTING)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
@click.option("--scheme", type=click.Choice(SCHEMES), required=True)
@click.option("--lang")
@click.option("--dict", "dict_path", type=EXISTING, help="Hyphenation pattern file.")
@click.option("--merges", type=EXISTING, help="BPE merge table.")
@click.option("--rules", type=EXISTING, help="Syllabification rules override file.")
@click.option("--label", help="Scheme label for external/morph input.")
@input_format
def segment(input, output, scheme, lang, dict_path, merges, rules, label, fmt):
    """Write INPUT in the @-boundary format under one scheme."""
    if scheme == "external":
        stream = corpus.read_segmented(input, label or "external")
    elif scheme == "morph":
        stream = corpus.lemma_morph_split(list(corpus.iter_conllu(input)), label or "morph-approx")
    else:
        seg = make_segmenter(scheme, lang, dict_path, merges, rules)
        stream = seg(corpus.read_words(input, fmt))
    info = write_stream(stream, output)
    click.echo(f"{output}\t{info['scheme']['label']}\ttokens={info['tokens']}\ttypes={info['types']}")


@cli.command("train-bpe")
@click.argument("input", type=EXISTING)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True,
              help="Merge file, or a directory with --sweep.")
@click.option("--vocab", type=int, help="Target vocabulary size.")
@click.option("--sweep", is_flag=True, help="Train 2500/5000/7500/10000 plus --syllabary.")
@click.option("--syllabary", type=int, help="Syllabary size used by --sweep.")
@click.option("--min-frequency", type=int, default=2, show_default=True)
@input_format
def train_bpe_cmd(input, output, vocab, sweep, syllabary, min_frequency, fmt):
    """Learn BPE merges from the words of INPUT."""
    counts = bpe.count_words(corpus.read_words(input, fmt))
    if sweep:
        if syllabary is None:
            raise ConfigError("--sweep needs --syllabary N")
        for table in bpe.sweep(counts, syllabary, min_frequency=min_frequency):
            path = output / f"merges.{table.target_vocab}.txt"
            bpe.save_merges(table, path)
            click.echo(f"{path}\tmerges={len(table.merges)}")
        return
    if vocab is None:
        raise ConfigError("train-bpe needs --vocab N or --sweep")
    table = bpe.train_bpe(counts, vocab, min_frequency)
    bpe.save_merges(table, output)
    click.echo(f"{output}\tmerges={len(table.merges)}")


@cli.command("apply-bpe")
@click.argument("input", type=EXISTING)
@click.option("--merges", type=EXISTING, required=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
@input_format
def apply_bpe_cmd(input, merges, output, fmt):
    """Segment INPUT with a merge table."""
    table = bpe.load_merges(merges)
    info = write_stream(bpe.encode_stream(corpus.read_words(input, fmt), table), output)
    click.echo(f"{output}\t{info['scheme']['label']}\ttokens={info['tokens']}\ttypes={info['types']}")


scheme_kind = click.option("--kind", type=click.Choice([k.value for k in SchemeKind]),
                           help="Scheme of the input when it has no sidecar.")


@cli.command("train-lm")
@click.argument("input", type=EXISTING)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
@click.option("--order", type=click.IntRange(1), default=5, show_default=True)
@scheme_kind
@click.option("--lang")
@click.option("--vocab", type=int)
@click.option("--label")
def train_lm_cmd(input, output, order, kind, lang, vocab, label):
    """Train the Kneser-Ney model on an @-format file."""
    stream = read_stream(input, _scheme_opts(kind, lang, vocab, label))
    model = lm.train(stream, order)
    lm.save_model(model, output)
    click.echo(f"{output}\torder={order}\tvocab={len(model.vocab)}")


def _update_results(path: Path, corpus_name: str, label: str, value: float) -> None:
    rows: dict[str, dict[str, str]] = {}
    columns: list[str] = []
    if path.exists():
        reader = csv.DictReader(io.StringIO(path.read_text(encoding="utf-8")))
        columns = [c for c in (reader.fieldnames or []) if c != "corpus"]
        for r in reader:
            rows[r["corpus"]] = {k: v for k, v in r.items() if k != "corpus"}
    if label not in columns:
        columns.append(label)
    rows.setdefault(corpus_name, {})[label] = f"{value:.4f}"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["corpus", *columns], lineterminator="\n", restval="")
    w.writeheader()
    for name, r in rows.items():
        w.writerow({"corpus": name, **r})
    atomic_write_text(path, buf.getvalue())


@cli.command("eval")
@click.argument("model_path", type=EXISTING)
@click.argument("input", type=EXISTING)
@click.option("--results", type=click.Path(path_type=Path), help="Corpus x scheme ppl_c table to update.")
@click.option("--corpus", "corpus_name", default="corpus", show_default=True)
@scheme_kind
@click.option("--lang")
@click.option("--vocab", type=int)
@click.option("--label")
def eval_cmd(model_path, input, results, corpus_name, kind, lang, vocab, label):
    """Score INPUT and report ppl_c."""
    model = lm.load_model(model_path)
    report = lm.score(model, read_stream(input, _scheme_opts(kind, lang, vocab, label)))
    click.echo("scheme\tcross_entropy\tseg_len\tchar_len\tppl_c")
    click.echo(f"{report.scheme.label}\t{report.cross_entropy_nats_per_unit:.6f}\t{report.total_units}\t"
               f"{report.total_chars}\t{report.ppl_c:.6f}")
    if results is not None:
        _update_results(results, corpus_name, report.scheme.label, report.ppl_c)


@cli.command()
@click.argument("a", type=EXISTING)
@click.argument("b", type=EXISTING)
@click.option("--csv", "csv_out", type=click.Path(path_type=Path))
def overlap(a, b, csv_out):
    """Type overlap of two @-format files: (A&B)/B and (A&B)/A."""
    sa = decode_stream(a.read_bytes(), Scheme(SchemeKind.EXTERNAL, label=_label_for(a)))
    sb = decode_stream(b.read_bytes(), Scheme(SchemeKind.EXTERNAL, label=_label_for(b)))
    rep = analysis.overlap(sa, sb)
    text = analysis.to_csv([rep.row()], analysis.OVERLAP_FIELDS)
    if csv_out:
        atomic_write_text(csv_out, text)
    click.echo(text, nl=False)


def _label_for(path: Path) -> str:
    side = sidecar_path(path)
    if side.exists():
        return json.loads(side.read_text(encoding="utf-8"))["scheme"]["label"]
    return path.stem


@cli.command()
@click.argument("inputs", type=EXISTING, nargs=-1, required=True)
@click.option("--interval", type=click.IntRange(1), default=1000, show_default=True)
@click.option("--csv", "csv_out", type=click.Path(path_type=Path))
@click.option("--svg", "svg_out", type=click.Path(path_type=Path))
def growth(inputs, interval, csv_out, svg_out):
    """Cumulative type counts for each @-format file."""
    curves = []
    for path in inputs:
        stream = decode_stream(path.read_bytes(), Scheme(SchemeKind.EXTERNAL, label=_label_for(path)))
        curves.append(analysis.growth(stream, interval))
    text = analysis.to_csv(analysis.growth_rows(curves), analysis.GROWTH_FIELDS)
    if csv_out:
        atomic_write_text(csv_out, text)
    else:
        click.echo(text, nl=False)
    if svg_out:
        analysis.plot_growth(curves, svg_out)


@cli.command()
@click.option("--corpus", "corpus_name", required=True)
@click.option("--train", type=EXISTING, required=True)
@click.option("--valid", type=EXISTING)
@click.option("--test", type=EXISTING)
@click.option("--scheme", "schemes", type=click.Choice(SCHEMES[:4] + ["word"]), multiple=True)
@click.option("--lang")
@click.option("--dict", "dict_path", type=EXISTING)
@click.option("--merges", type=EXISTING)
@click.option("--rules", type=EXISTING)
@click.option("-o", "--output", type=click.Path(path_type=Path))
@input_format
def stats(corpus_name, train, valid, test, schemes, lang, dict_path, merges, rules, output, fmt):
    """Token/type counts per split and scheme as CSV."""
    segmenters = {}
    for s in schemes:
        seg = make_segmenter(s, lang, dict_path, merges, rules)
        segmenters[seg([["x"]]).scheme.label] = seg
    corp = corpus.load_corpus(corpus_name, train, valid, test, fmt)
    text = analysis.to_csv(analysis.stats(corp, segmenters), analysis.STATS_FIELDS)
    if output:
        atomic_write_text(output, text)
    click.echo(text, nl=False)


def main(argv: list[str] | None = None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="sylseg", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except (DataError, UnicodeDecodeError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
