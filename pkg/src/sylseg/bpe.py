"""Byte-pair encoding: trainer, encoder, vocabulary sweep and merge files.

Merges never cross word boundaries and there is no end-of-word symbol;
boundaries live in the ``@`` tokens of the stream format instead.
"""

from __future__ import annotations

import heapq
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .core import Scheme, SchemeKind, UnitStream, segment_words
from .errors import ConfigError, ParseError

Pair = tuple[str, str]
SWEEP_SIZES = (2500, 5000, 7500, 10000)


@dataclass(frozen=True)
class MergeTable:
    merges: tuple[Pair, ...]
    target_vocab: int
    alphabet: frozenset[str]
    frequencies: tuple[int, ...] = field(default=(), compare=False)  # pair count when merged

    def __post_init__(self):
        object.__setattr__(self, "merges", tuple(tuple(m) for m in self.merges))
        if len(self.alphabet) + len(self.merges) > self.target_vocab:
            raise ConfigError("merge table is larger than its target vocabulary")

    @property
    def vocab(self) -> set[str]:
        return set(self.alphabet) | {a + b for a, b in self.merges}

    def __len__(self):
        return len(self.alphabet) + len(self.merges)

    def truncate(self, target_vocab: int) -> "MergeTable":
        keep = target_vocab - len(self.alphabet)
        if keep < 1:
            raise ConfigError(f"target vocabulary {target_vocab} must exceed the alphabet size {len(self.alphabet)}")
        return MergeTable(self.merges[:keep], target_vocab, self.alphabet, self.frequencies[:keep])


def count_words(sentences: Iterable[Sequence[str]]) -> Counter[str]:
    counts: Counter[str] = Counter()
    for sent in sentences:
        counts.update(sent)
    return counts


def merge_symbols(symbols: Sequence[str], pair: Pair) -> list[str]:
    """Merge every non-overlapping occurrence of ``pair``, leftmost first."""
    a, b = pair
    out: list[str] = []
    i, n = 0, len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == a and symbols[i + 1] == b:
            out.append(a + b)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _pairs(symbols: Sequence[str]) -> Counter[Pair]:
    return Counter(zip(symbols, symbols[1:]))


def train_bpe(word_counts: Mapping[str, int], target_vocab: int, min_frequency: int = 2) -> MergeTable:
    """Greedy BPE.  Ties on frequency go to the lexicographically smallest pair."""
    counts = {w: c for w, c in word_counts.items() if c > 0}
    if not counts:
        raise ConfigError("BPE needs a non-empty word list")
    if any(not w for w in counts):
        raise ConfigError("empty word in BPE input")
    alphabet = frozenset(ch for w in counts for ch in w)
    if target_vocab <= len(alphabet):
        raise ConfigError(f"target vocabulary {target_vocab} must exceed the alphabet size {len(alphabet)}")

    words = sorted(counts)
    freqs = [counts[w] for w in words]
    symbols = [list(w) for w in words]
    pair_counts: Counter[Pair] = Counter()
    where: dict[Pair, set[int]] = defaultdict(set)
    for idx, syms in enumerate(symbols):
        for pair, k in _pairs(syms).items():
            pair_counts[pair] += k * freqs[idx]
            where[pair].add(idx)
    heap = [(-c, p) for p, c in pair_counts.items()]
    heapq.heapify(heap)

    merges: list[Pair] = []
    freqs_out: list[int] = []
    while len(alphabet) + len(merges) < target_vocab and heap:
        neg, pair = heapq.heappop(heap)
        if pair_counts.get(pair, 0) != -neg:
            continue  # stale entry
        if -neg < min_frequency:
            break
        merges.append(pair)
        freqs_out.append(-neg)
        touched: set[Pair] = set()
        for idx in sorted(where.pop(pair, ())):
            old = symbols[idx]
            new = merge_symbols(old, pair)
            f = freqs[idx]
            for p, k in _pairs(old).items():
                pair_counts[p] -= k * f
                touched.add(p)
            for p, k in _pairs(new).items():
                pair_counts[p] += k * f
                where[p].add(idx)
                touched.add(p)
            symbols[idx] = new
        for p in touched:
            c = pair_counts.get(p, 0)
            if c <= 0:
                pair_counts.pop(p, None)
                where.pop(p, None)
            elif p != pair:
                heapq.heappush(heap, (-c, p))
        pair_counts.pop(pair, None)
    return MergeTable(tuple(merges), target_vocab, alphabet, tuple(freqs_out))


class Encoder:
    """Applies a merge table in table order; caches per word."""

    def __init__(self, table: MergeTable):
        self.table = table
        self.ranks = {pair: r for r, pair in reversed(list(enumerate(table.merges)))}
        self._cache: dict[str, tuple[str, ...]] = {}

    def __call__(self, word: str) -> tuple[str, ...]:
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        syms = list(word)
        last = -1
        while len(syms) > 1:
            best = None
            for pair in zip(syms, syms[1:]):
                r = self.ranks.get(pair)
                if r is not None and r > last and (best is None or r < best):
                    best = r
            if best is None:
                break
            syms = merge_symbols(syms, self.table.merges[best])
            last = best
        out = self._cache[word] = tuple(syms)
        return out


def encode_word(word: str, table: MergeTable) -> list[str]:
    return list(Encoder(table)(word))


def encode_stream(words: Iterable[Sequence[str]], table: MergeTable) -> UnitStream:
    scheme = Scheme(SchemeKind.BPE, parameter=table.target_vocab)
    return segment_words(words, Encoder(table), scheme)


def sweep(word_counts: Mapping[str, int], syllabary_size: int, sizes: Sequence[int] = SWEEP_SIZES,
          min_frequency: int = 2) -> list[MergeTable]:
    """Tables for every size in ``sizes`` plus the syllabary size.

    The greedy loop makes smaller tables prefixes of larger ones, so a
    single training run at the largest size serves the whole sweep.
    """
    targets = list(dict.fromkeys([*sizes, syllabary_size]))
    full = train_bpe(word_counts, max(targets), min_frequency)
    return [full.truncate(t) for t in targets]


def save_merges(table: MergeTable, path: str | os.PathLike) -> None:
    from ._io import atomic_write_text

    atomic_write_text(path, dumps_merges(table))


def dumps_merges(table: MergeTable) -> str:
    lines = ["version 1", f"target_vocab={table.target_vocab}", "alphabet=" + "".join(sorted(table.alphabet))]
    lines += [f"{a} {b}" for a, b in table.merges]
    return "\n".join(lines) + "\n"


def load_merges(path: str | os.PathLike, target_vocab: int | None = None) -> MergeTable:
    """Read a merge file.

    One-field ``key=value`` lines carry metadata; two-field lines are
    merges.  Files without metadata get an alphabet made of the
    single-symbol operands and a target equal to the table size.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if not lines or lines[0].strip() != "version 1":
        raise ParseError("merge file must start with 'version 1'", 1, str(path))
    meta: dict[str, str] = {}
    merges: list[Pair] = []
    for lineno, line in enumerate(lines[1:], 2):
        fields = line.split()
        if not fields:
            continue
        if len(fields) == 2:
            merges.append((fields[0], fields[1]))
        elif len(fields) == 1 and "=" in fields[0]:
            key, _, value = fields[0].partition("=")
            meta[key] = value
        else:
            raise ParseError("expected 'left right'", lineno, str(path))
    if "alphabet" in meta:
        alphabet = frozenset(meta["alphabet"])
    else:
        alphabet = frozenset(ch for a, b in merges for ch in a + b)
    if target_vocab is None:
        target_vocab = int(meta["target_vocab"]) if "target_vocab" in meta else len(alphabet) + len(merges)
    return MergeTable(tuple(merges), target_vocab, alphabet)
