"""Interpolated modified Kneser-Ney n-gram model over unit streams.

The model is open-vocabulary: a unit never seen in training is scored as
``p(NEW | context) * p_spell(unit)``, where ``p_spell`` is a character-level
KN model over unit spellings.  ``NEW`` is trained from singleton units: every
occurrence of a unit type seen once adds one ``NEW`` count in its context.

Probabilities are natural-log throughout.
"""

from __future__ import annotations

import gzip
import json
import math
import os
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import BOUNDARY, Scheme, UnitStream
from .errors import ConfigError, DataError, SchemeMismatchError

# Units never contain whitespace, so these can't collide with real units.
BOS = " BOS"
EOS = " EOS"
NEW = " NEW"
UNK = " UNK"

DISCOUNT_MIN = 1e-3
DISCOUNT_MAX = 0.999
DISCOUNT_FALLBACK = 0.5
UNSEEN_CHAR_PROB = 1e-9
FORMAT_VERSION = 1

Context = tuple[str, ...]


def ppl_c(cross_entropy: float, seg_len: int, char_len: int) -> float:
    """Character-level perplexity from a per-unit cross-entropy (nats)."""
    if seg_len < 0 or char_len < 0:
        raise ValueError("lengths must be non-negative")
    return math.exp(cross_entropy * (seg_len + 1) / (char_len + 1))


def modified_kn_discounts(count_of_counts: Counter[int] | dict[int, int]) -> tuple[float, float, float]:
    """D1, D2, D3+ from count-of-counts, clamped into [DISCOUNT_MIN, DISCOUNT_MAX]."""
    n = [count_of_counts.get(i, 0) for i in range(5)]
    out = []
    denom = n[1] + 2 * n[2]
    for k in (1, 2, 3):
        if denom == 0 or n[k] == 0:
            d = DISCOUNT_FALLBACK
        else:
            d = k - (k + 1) * n[1] * n[k + 1] / (denom * n[k])
        out.append(min(max(d, DISCOUNT_MIN), DISCOUNT_MAX))
    return out[0], out[1], out[2]


def _marginalize(top: dict[Context, dict[str, int]], k: int) -> dict[Context, dict[str, int]]:
    """Raw counts of the k-grams ending each top-order n-gram."""
    out: dict[Context, dict[str, int]] = defaultdict(dict)
    for ctx, row in top.items():
        sub = ctx[len(ctx) - (k - 1):] if k > 1 else ()
        dst = out[sub]
        for w, c in row.items():
            dst[w] = dst.get(w, 0) + c
    return dict(out)


@dataclass(frozen=True)
class EvalReport:
    cross_entropy_nats_per_unit: float
    total_units: int
    total_chars: int
    ppl_c: float
    scheme: Scheme
    predictions: int = 0

    def row(self) -> dict:
        return {
            "scheme": self.scheme.label,
            "cross_entropy": self.cross_entropy_nats_per_unit,
            "seg_len": self.total_units,
            "char_len": self.total_chars,
            "ppl_c": self.ppl_c,
        }


class NgramModel:
    """Trained model.  Build with :func:`train` or :func:`load_model`."""

    def __init__(self, order: int, top_counts: dict[Context, dict[str, int]], scheme: Scheme | None,
                 unit_counts: dict[str, int], spelling: "NgramModel | None" = None, open_vocab: bool = True):
        if order < 1:
            raise ConfigError("order must be >= 1")
        self.order = order
        self.scheme = scheme
        self.top_counts = top_counts
        self.unit_counts = dict(unit_counts)
        self.spelling = spelling
        self.open_vocab = open_vocab
        self._build()

    def _build(self) -> None:
        n = self.order
        levels: dict[int, dict[Context, dict[str, int]]] = {n: self.top_counts}
        for k in range(n - 1, 0, -1):
            higher = levels[k + 1]
            cur: dict[Context, dict[str, int]] = defaultdict(dict)
            for ctx, row in higher.items():
                sub = ctx[1:]
                dst = cur[sub]
                left_bos = bool(sub) and sub[0] == BOS
                for w, c in row.items():
                    # n-grams starting with BOS have no left extensions: keep raw counts
                    dst[w] = dst.get(w, 0) + (c if left_bos else 1)
            levels[k] = dict(cur)
        self.levels = levels
        self.discounts: dict[int, tuple[float, float, float]] = {}
        self.stats: dict[int, dict[Context, tuple[int, float]]] = {}
        for k, table in levels.items():
            coc: Counter[int] = Counter()
            for row in table.values():
                for c in row.values():
                    if c <= 4:
                        coc[c] += 1
            d = self.discounts[k] = modified_kn_discounts(coc)
            st = {}
            for ctx, row in table.items():
                total = sum(row.values())
                mass = sum(d[0] if c == 1 else d[1] if c == 2 else d[2] for c in row.values())
                st[ctx] = (total, mass / total)
            self.stats[k] = st
        vocab = set(levels[1].get((), {}))
        vocab.update((EOS, NEW) if self.open_vocab else (EOS,))
        self.vocab: tuple[str, ...] = tuple(sorted(vocab))
        self.index = {w: i for i, w in enumerate(self.vocab)}
        self._known = {w for w in self.vocab if w not in (EOS, NEW)}

    # probabilities -------------------------------------------------------

    def _discount(self, k: int, c: int) -> float:
        d = self.discounts[k]
        return d[0] if c == 1 else d[1] if c == 2 else d[2]

    def prob(self, unit: str, context: Sequence[str] = ()) -> float:
        """p(unit | context) for a vocabulary member; 0 for anything else."""
        if unit not in self.index:
            return 0.0
        ctx = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        if len(ctx) < self.order - 1:
            ctx = (BOS,) * (self.order - 1 - len(ctx)) + ctx
        p = 1.0 / len(self.vocab)
        for k in range(1, self.order + 1):
            sub = ctx[len(ctx) - (k - 1):] if k > 1 else ()
            row = self.levels[k].get(sub)
            if row is None:
                continue
            total, gamma = self.stats[k][sub]
            c = row.get(unit, 0)
            p = (c - self._discount(k, c) if c else 0.0) / total + gamma * p
        return p

    def distribution(self, context: Sequence[str] = ()) -> np.ndarray:
        """Vector of p(u | context) over ``self.vocab``."""
        ctx = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        if len(ctx) < self.order - 1:
            ctx = (BOS,) * (self.order - 1 - len(ctx)) + ctx
        vec = np.full(len(self.vocab), 1.0 / len(self.vocab))
        for k in range(1, self.order + 1):
            sub = ctx[len(ctx) - (k - 1):] if k > 1 else ()
            row = self.levels[k].get(sub)
            if row is None:
                continue
            total, gamma = self.stats[k][sub]
            vec *= gamma
            for w, c in row.items():
                vec[self.index[w]] += (c - self._discount(k, c)) / total
        return vec

    def contexts(self, k: int | None = None) -> list[Context]:
        """Observed contexts at order ``k`` (default: the top order)."""
        return list(self.levels[k or self.order])

    def known(self, unit: str) -> bool:
        return unit in self._known

    def spelling_logprob(self, unit: str) -> float:
        if self.spelling is None:
            raise DataError("model has no spelling model")
        return self.spelling.sequence_logprob(list(unit))

    def sequence_logprob(self, tokens: Sequence[str]) -> float:
        """log p(tokens + EOS) for a closed-vocabulary (spelling) model."""
        hist: list[str] = []
        total = []
        for tok in [*tokens, EOS]:
            if tok in self.index:
                total.append(math.log(self.prob(tok, hist)))
                hist.append(tok)
            else:
                total.append(math.log(UNSEEN_CHAR_PROB))
                hist.append(UNK)
        return math.fsum(total)

    def unit_logprob(self, unit: str, history: Sequence[str]) -> tuple[float, str]:
        """(log p, history token) for one predicted unit."""
        if unit == EOS or unit in self._known:
            return math.log(self.prob(unit, history)), unit
        if not self.open_vocab:
            return math.log(UNSEEN_CHAR_PROB), UNK
        return math.log(self.prob(NEW, history)) + self.spelling_logprob(unit), NEW

    def truncated(self, order: int) -> "NgramModel":
        """The same data seen by a lower-order model."""
        if not 1 <= order <= self.order:
            raise ConfigError(f"order must be in 1..{self.order}")
        if order == self.order:
            return self
        return NgramModel(order, _marginalize(self.top_counts, order), self.scheme, self.unit_counts,
                          self.spelling, self.open_vocab)


def _top_counts(sequences: Iterable[Sequence[str]], order: int, new_for: set[str] | None) -> dict[Context, dict[str, int]]:
    top: dict[Context, dict[str, int]] = defaultdict(dict)
    for toks in sequences:
        padded = [BOS] * (order - 1) + list(toks) + [EOS]
        for i in range(order - 1, len(padded)):
            ctx = tuple(padded[i - order + 1:i])
            w = padded[i]
            row = top[ctx]
            row[w] = row.get(w, 0) + 1
            if new_for and w in new_for:
                row[NEW] = row.get(NEW, 0) + 1
    return dict(top)


def train_spelling(units: Iterable[str], order: int = 5) -> NgramModel:
    spellings = sorted(set(units))
    if not spellings:
        raise DataError("no units to learn spellings from")
    top = _top_counts((list(u) for u in spellings), order, None)
    return NgramModel(order, top, None, Counter(ch for u in spellings for ch in u), open_vocab=False)


def train(stream: UnitStream, order: int = 5, spelling_order: int = 5) -> NgramModel:
    if not len(stream):
        raise DataError("cannot train on an empty stream")
    counts: Counter[str] = Counter()
    for toks in stream.sentences:
        counts.update(toks)
    singletons = {u for u, c in counts.items() if c == 1 and u != BOUNDARY}
    top = _top_counts(stream.sentences, order, singletons)
    spelling = train_spelling(counts, spelling_order)
    return NgramModel(order, top, stream.scheme, counts, spelling)


def score(model: NgramModel, stream: UnitStream) -> EvalReport:
    """Cross-entropy per predicted unit and the character-level perplexity.

    Predicted units are all stream tokens (``@`` included) plus one end of
    sentence per line.  The segmentation length excludes the ends of
    sentence; the ``+1`` of the perplexity formula stands in for them.
    """
    if model.scheme is not None and stream.scheme.kind != model.scheme.kind:
        raise SchemeMismatchError(
            f"model was trained on {model.scheme.kind.value} units, stream is {stream.scheme.kind.value}")
    logps: list[float] = []
    units = 0
    for toks in stream.sentences:
        hist: list[str] = []
        for tok in [*toks, EOS]:
            lp, h = model.unit_logprob(tok, hist)
            logps.append(lp)
            hist.append(h)
        units += len(toks)
    if not logps:
        raise DataError("cannot score an empty stream")
    ce = -math.fsum(logps) / len(logps)
    chars = stream.char_length()
    return EvalReport(ce, units, chars, ppl_c(ce, units, chars), stream.scheme, len(logps))


# serialization -------------------------------------------------------------

def _dump(model: NgramModel) -> dict:
    return {
        "order": model.order,
        "open_vocab": model.open_vocab,
        "scheme": model.scheme.to_dict() if model.scheme else None,
        "unit_counts": sorted(model.unit_counts.items()),
        "top_counts": [[list(ctx), sorted(row.items())] for ctx, row in sorted(model.top_counts.items())],
        "spelling": _dump(model.spelling) if model.spelling else None,
    }


def _undump(d: dict) -> NgramModel:
    top = {tuple(ctx): dict((w, c) for w, c in row) for ctx, row in d["top_counts"]}
    return NgramModel(
        d["order"], top, Scheme.from_dict(d["scheme"]) if d["scheme"] else None,
        dict((u, c) for u, c in d["unit_counts"]),
        _undump(d["spelling"]) if d["spelling"] else None,
        d["open_vocab"],
    )


def dumps_model(model: NgramModel) -> bytes:
    doc = {"format": "sylseg-kn", "version": FORMAT_VERSION, "model": _dump(model)}
    text = json.dumps(doc, ensure_ascii=False, separators=(",", ":"))
    return gzip.compress(text.encode("utf-8"), mtime=0)


def loads_model(data: bytes) -> NgramModel:
    try:
        doc = json.loads(gzip.decompress(data).decode("utf-8"))
    except (OSError, ValueError) as exc:
        raise DataError(f"not a model file: {exc}") from None
    if doc.get("format") != "sylseg-kn" or doc.get("version") != FORMAT_VERSION:
        raise DataError("unsupported model format or version")
    return _undump(doc["model"])


def save_model(model: NgramModel, path: str | os.PathLike) -> None:
    from ._io import atomic_write_bytes

    atomic_write_bytes(path, dumps_model(model))


def load_model(path: str | os.PathLike) -> NgramModel:
    return loads_model(Path(path).read_bytes())
