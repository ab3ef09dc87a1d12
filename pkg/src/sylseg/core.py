"""Unit streams, the ``@``-boundary text format, and vocabularies.

A stream stores every sentence as a list of words, each word a tuple of
pieces.  The flat view (``UnitStream.sentences``) interleaves the literal
boundary token ``@`` between words; this is what gets written to disk and
what the language model consumes.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import ConfigError, InputDecodeError, ParseError

BOUNDARY = "@"
_ESCAPED = re.compile(r"\\*@")


class SchemeKind(str, Enum):
    CHAR = "char"
    SYLLABLE = "syllable"
    HYPHEN = "hyphen"
    BPE = "bpe"
    EXTERNAL = "external"


@dataclass(frozen=True)
class Scheme:
    kind: SchemeKind
    language: str = ""
    parameter: int = 0
    label: str = ""

    def __post_init__(self):
        kind = SchemeKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is SchemeKind.BPE:
            if self.parameter < 2:
                raise ConfigError(f"BPE scheme needs a vocabulary size >= 2, got {self.parameter}")
        elif self.parameter != 0:
            raise ConfigError(f"{kind.value} scheme takes no parameter")
        if kind in (SchemeKind.SYLLABLE, SchemeKind.HYPHEN) and not self.language:
            raise ConfigError(f"{kind.value} scheme needs a language")
        if not self.label:
            object.__setattr__(self, "label", _default_label(kind, self.language, self.parameter))

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "language": self.language,
                "parameter": self.parameter, "label": self.label}

    @classmethod
    def from_dict(cls, d: dict) -> "Scheme":
        return cls(SchemeKind(d["kind"]), d.get("language", ""), int(d.get("parameter", 0)),
                   d.get("label", ""))


def _default_label(kind: SchemeKind, language: str, parameter: int) -> str:
    if kind is SchemeKind.CHAR:
        return "char"
    if kind is SchemeKind.BPE:
        return f"bpe-{parameter}"
    if kind is SchemeKind.SYLLABLE:
        return f"syl-{language}"
    if kind is SchemeKind.HYPHEN:
        return f"hyph-{language}"
    return "external"


CHAR = Scheme(SchemeKind.CHAR)


def escape_unit(unit: str) -> str:
    # A content unit that looks like the boundary gets one extra backslash.
    return "\\" + unit if _ESCAPED.fullmatch(unit) else unit


def unescape_unit(token: str) -> str:
    return token[1:] if token != BOUNDARY and _ESCAPED.fullmatch(token) else token


def _check_piece(piece: str) -> None:
    if not piece:
        raise ValueError("empty unit")
    if any(ch.isspace() for ch in piece):
        raise ValueError(f"unit contains whitespace: {piece!r}")


@dataclass(frozen=True)
class UnitStream:
    """Sentence-aligned segmentation of a corpus under one scheme."""

    scheme: Scheme
    words: tuple[tuple[tuple[str, ...], ...], ...]
    _flat: tuple[tuple[str, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        frozen = tuple(tuple(tuple(w) for w in sent) for sent in self.words)
        for sent in frozen:
            if not sent:
                raise ValueError("empty sentence")
            for word in sent:
                if not word:
                    raise ValueError("word with no units")
                for piece in word:
                    _check_piece(piece)
        object.__setattr__(self, "words", frozen)
        flat = []
        for sent in frozen:
            toks: list[str] = []
            for i, word in enumerate(sent):
                if i:
                    toks.append(BOUNDARY)
                toks.extend(escape_unit(p) for p in word)
            flat.append(tuple(toks))
        object.__setattr__(self, "_flat", tuple(flat))

    @classmethod
    def from_sentences(cls, scheme: Scheme, sentences: Iterable[Sequence[str]]) -> "UnitStream":
        """Build from flat token lists (boundaries as ``@``, content escaped)."""
        return cls(scheme, tuple(_split_tokens(toks) for toks in sentences))

    @property
    def sentences(self) -> tuple[tuple[str, ...], ...]:
        return self._flat

    def __len__(self) -> int:
        return len(self.words)

    def source_words(self) -> list[list[str]]:
        return [["".join(word) for word in sent] for sent in self.words]

    def with_scheme(self, scheme: Scheme) -> "UnitStream":
        return UnitStream(scheme, self.words)

    def char_length(self) -> int:
        """Number of scalar values in the underlying words (no boundaries)."""
        return sum(len(p) for sent in self.words for word in sent for p in word)

    def unit_length(self) -> int:
        """Number of units including boundary tokens."""
        return sum(len(s) for s in self._flat)


def _split_tokens(tokens: Sequence[str], line: int | None = None) -> tuple[tuple[str, ...], ...]:
    if not tokens:
        raise ParseError("empty sentence", line)
    if tokens[0] == BOUNDARY:
        raise ParseError("sentence starts with a boundary", line)
    if tokens[-1] == BOUNDARY:
        raise ParseError("sentence ends with a boundary", line)
    words: list[tuple[str, ...]] = []
    cur: list[str] = []
    for tok in tokens:
        if tok == BOUNDARY:
            if not cur:
                raise ParseError("consecutive boundaries", line)
            words.append(tuple(cur))
            cur = []
        elif not tok:
            raise ParseError("empty unit", line)
        else:
            cur.append(unescape_unit(tok))
    words.append(tuple(cur))
    return tuple(words)


def _decode_bytes(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputDecodeError(exc.start) from None


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _split_punct(token: str) -> list[str]:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    out = list(token[:start])
    if start < end:
        out.append(token[start:end])
    out.extend(token[end:])
    return out


def tokenize_words(text: str | bytes, split_punct: bool = True) -> list[list[str]]:
    """Split raw text into sentences (lines) of words.

    Leading and trailing punctuation marks become separate tokens, one per
    mark; word-internal punctuation such as apostrophes stays put.
    """
    if isinstance(text, bytes):
        text = _decode_bytes(text)
    sentences = []
    for line in text.split("\n"):
        words: list[str] = []
        for tok in line.split():
            words.extend(_split_punct(tok) if split_punct else [tok])
        if words:
            sentences.append(words)
    return sentences


def _check_words(words: Iterable[Sequence[str]]) -> list[list[str]]:
    out = []
    for sent in words:
        sent = list(sent)
        for w in sent:
            if not w:
                raise ValueError("empty word")
        out.append(sent)
    return out


def segment_words(words: Iterable[Sequence[str]], splitter, scheme: Scheme) -> UnitStream:
    """Apply ``splitter(word) -> pieces`` to every word; caches per word type."""
    cache: dict[str, tuple[str, ...]] = {}
    out = []
    for sent in _check_words(words):
        seg = []
        for w in sent:
            pieces = cache.get(w)
            if pieces is None:
                pieces = cache[w] = tuple(splitter(w))
            seg.append(pieces)
        if seg:
            out.append(tuple(seg))
    return UnitStream(scheme, tuple(out))


def to_char_stream(words: Iterable[Sequence[str]]) -> UnitStream:
    return segment_words(words, tuple, CHAR)


def encode_stream(stream: UnitStream) -> str:
    return "".join(" ".join(toks) + "\n" for toks in stream.sentences)


def decode_stream(text: str | bytes, scheme: Scheme) -> UnitStream:
    if isinstance(text, bytes):
        text = _decode_bytes(text)
    sentences = []
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        tokens = line.split(" ")
        for tok in tokens:
            if tok and any(ch.isspace() for ch in tok):
                raise ParseError(f"unit contains whitespace: {tok!r}", lineno)
        sentences.append(_split_tokens(tokens, lineno))
    return UnitStream(scheme, tuple(sentences))


class Vocabulary:
    """Unit counts with dense ids, ordered by descending count then code points."""

    def __init__(self, counts: dict[str, int]):
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        self.counts: dict[str, int] = dict(ordered)
        self.ids: dict[str, int] = {u: i for i, (u, _) in enumerate(ordered)}
        self.total_tokens = sum(self.counts.values())

    def __len__(self):
        return len(self.counts)

    def __contains__(self, unit):
        return unit in self.counts

    def __iter__(self):
        return iter(self.counts)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and list(self.counts.items()) == list(other.counts.items())

    def count(self, unit: str) -> int:
        return self.counts.get(unit, 0)

    @property
    def content_types(self) -> set[str]:
        return {u for u in self.counts if u != BOUNDARY}

    @property
    def n_types(self) -> int:
        return len(self.counts) - (BOUNDARY in self.counts)

    @property
    def n_tokens(self) -> int:
        return self.total_tokens - self.counts.get(BOUNDARY, 0)


def build_vocabulary(stream: UnitStream | Iterable[Sequence[str]]) -> Vocabulary:
    sentences = stream.sentences if isinstance(stream, UnitStream) else stream
    counts: Counter[str] = Counter()
    for toks in sentences:
        counts.update(toks)
    return Vocabulary(dict(counts))
