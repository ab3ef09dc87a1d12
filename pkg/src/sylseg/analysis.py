"""Overlap ratios, vocabulary growth, corpus statistics and type/token ratios.

CSV headers are fixed (see the ``*_FIELDS`` constants) so downstream
scripts can rely on them.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .core import BOUNDARY, Scheme, SchemeKind, UnitStream, Vocabulary, build_vocabulary, segment_words
from .corpus import SPLITS, Corpus
from .errors import ConfigError, DataError

OVERLAP_FIELDS = ["scheme_a", "scheme_b", "a_types", "b_types", "intersection", "ratio_ab", "ratio_ba"]
GROWTH_FIELDS = ["scheme", "tokens_seen", "types_seen"]
STATS_FIELDS = ["corpus", "split", "scheme", "tokens", "types", "ttr"]
TTR_GAIN_FIELDS = ["corpus", "syl_ttr", "word_ttr", "ppl_c_char", "ppl_c_syl", "delta_ppl_c_char_syl"]

WORD = Scheme(SchemeKind.EXTERNAL, label="word")


@dataclass(frozen=True)
class OverlapReport:
    scheme_a: str
    scheme_b: str
    a_types: int
    b_types: int
    intersection: int
    ratio_ab: Fraction  # (A & B) / B
    ratio_ba: Fraction  # (A & B) / A

    def row(self) -> dict:
        d = dict(self.__dict__)
        d["ratio_ab"] = f"{float(self.ratio_ab):.6f}"
        d["ratio_ba"] = f"{float(self.ratio_ba):.6f}"
        return d


@dataclass(frozen=True)
class GrowthCurve:
    scheme: str
    sample_points: tuple[tuple[int, int], ...]


def _types(v: Vocabulary | UnitStream | Iterable[str]) -> set[str]:
    if isinstance(v, UnitStream):
        v = build_vocabulary(v)
    if isinstance(v, Vocabulary):
        return v.content_types
    return {u for u in v if u != BOUNDARY}


def _label(v, default: str) -> str:
    return v.scheme.label if isinstance(v, UnitStream) else default


def overlap(vocab_a, vocab_b, label_a: str | None = None, label_b: str | None = None) -> OverlapReport:
    """Type overlap of two segmentations, ignoring frequencies and ``@``."""
    a, b = _types(vocab_a), _types(vocab_b)
    inter = len(a & b)
    return OverlapReport(
        label_a or _label(vocab_a, "A"), label_b or _label(vocab_b, "B"), len(a), len(b), inter,
        Fraction(inter, len(b)) if b else Fraction(0),
        Fraction(inter, len(a)) if a else Fraction(0),
    )


def growth(stream: UnitStream, interval: int = 1000) -> GrowthCurve:
    if interval < 1:
        raise ConfigError("interval must be >= 1")
    seen: set[str] = set()
    points: list[tuple[int, int]] = []
    n = 0
    for toks in stream.sentences:
        for tok in toks:
            if tok == BOUNDARY:
                continue
            seen.add(tok)
            n += 1
            if n % interval == 0:
                points.append((n, len(seen)))
    if not points or points[-1][0] != n:
        points.append((n, len(seen)))
    return GrowthCurve(stream.scheme.label, tuple(points))


def ttr(stream: UnitStream | Vocabulary) -> float:
    v = stream if isinstance(stream, Vocabulary) else build_vocabulary(stream)
    if v.n_tokens == 0:
        raise DataError("type/token ratio of an empty stream")
    return v.n_types / v.n_tokens


def word_stream(words: Iterable[Sequence[str]]) -> UnitStream:
    return segment_words(words, lambda w: (w,), WORD)


Segmenter = Callable[[list[list[str]]], UnitStream]


def stats(corpus: Corpus, schemes: Mapping[str, Segmenter]) -> list[dict]:
    """Token and type counts (``@`` excluded) for every split and scheme."""
    rows = []
    for label, segment in schemes.items():
        for split in SPLITS:
            sents = corpus.splits[split]
            if not sents:
                continue
            v = build_vocabulary(segment(sents))
            rows.append({
                "corpus": corpus.name, "split": split, "scheme": label,
                "tokens": v.n_tokens, "types": v.n_types,
                "ttr": f"{v.n_types / v.n_tokens:.6f}" if v.n_tokens else "",
            })
    return rows


def ttr_gain_rows(entries: Iterable[Mapping]) -> list[dict]:
    """Rows pairing syllable type/token ratio with the char-vs-syllable ppl_c gain."""
    rows = []
    for e in entries:
        rows.append({
            "corpus": e["corpus"],
            "syl_ttr": f"{float(e['syl_ttr']):.6f}",
            "word_ttr": f"{float(e['word_ttr']):.6f}",
            "ppl_c_char": f"{float(e['ppl_c_char']):.6f}",
            "ppl_c_syl": f"{float(e['ppl_c_syl']):.6f}",
            "delta_ppl_c_char_syl": f"{float(e['ppl_c_char']) - float(e['ppl_c_syl']):.6f}",
        })
    return rows


def to_csv(rows: Iterable[Mapping], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r[k] for k in fields})
    return buf.getvalue()


def growth_rows(curves: Iterable[GrowthCurve]) -> list[dict]:
    return [{"scheme": c.scheme, "tokens_seen": x, "types_seen": y} for c in curves for x, y in c.sample_points]


# plots ----------------------------------------------------------------------

def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "sylseg"
    matplotlib.rcParams["svg.fonttype"] = "none"
    return plt


def _save_svg(fig, path: str | os.PathLike) -> None:
    from ._io import atomic_write_bytes

    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    atomic_write_bytes(path, buf.getvalue())


def plot_growth(curves: Sequence[GrowthCurve], path: str | os.PathLike, title: str = "") -> None:
    plt = _figure()
    fig, ax = plt.subplots(figsize=(6, 4))
    for c in curves:
        xs, ys = zip(*c.sample_points)
        ax.plot(xs, ys, label=c.scheme)
    ax.set_xlabel("tokens")
    ax.set_ylabel("types")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    _save_svg(fig, path)
    plt.close(fig)


def plot_overlap(groups: Sequence[str], ratios: Mapping[str, Sequence[float]], path: str | os.PathLike,
                 normalise: bool = True, title: str = "") -> None:
    """Stacked-area chart: one band per scheme, one x position per group."""
    plt = _figure()
    labels = list(ratios)
    data = [list(map(float, ratios[k])) for k in labels]
    if normalise:
        totals = [sum(col) or 1.0 for col in zip(*data)]
        data = [[100 * v / t for v, t in zip(row, totals)] for row in data]
    fig, ax = plt.subplots(figsize=(max(4, len(groups) * 0.5 + 2), 4))
    ax.stackplot(range(len(groups)), *data, labels=labels)
    ax.set_xticks(range(len(groups)))
    ax.set_xticklabels(groups, rotation=45)
    ax.set_ylabel("overlap (%)" if normalise else "overlap ratio")
    if title:
        ax.set_title(title)
    ax.legend(fontsize="small")
    fig.tight_layout()
    _save_svg(fig, path)
    plt.close(fig)
