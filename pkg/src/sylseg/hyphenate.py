"""Liang pattern hyphenation over hunspell-style ``hyph_*.dic`` files."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .core import Scheme, SchemeKind, UnitStream, _decode_bytes, segment_words
from .errors import ParseError, UnsupportedEncodingError

_ENCODING_LINE = re.compile(
    r"(?i)(utf-?8|iso-?8859-?\d+|koi8-?[ru]|microsoft-cp\d+|cp\d+|windows-\d+|tis-?620|us-ascii|iscii-devanagari)"
)
_HEX = re.compile(r"\^\^([0-9a-f]{2})")
_IGNORED = ("COMPOUNDLEFTHYPHENMIN", "COMPOUNDRIGHTHYPHENMIN", "NEXTLEVEL", "NOHYPHEN")

Weights = tuple[int, ...]


@dataclass
class PatternTrie:
    """Compiled patterns.  Node dicts map a letter to the child node; the
    ``None`` key holds the weight vector of a pattern ending there."""

    root: dict = field(default_factory=dict)
    left_min: int = 2
    right_min: int = 2
    language: str = ""
    n_patterns: int = 0

    def __post_init__(self):
        if self.left_min < 1 or self.right_min < 1:
            raise ValueError("left_min and right_min must be >= 1")

    def add(self, letters: str, weights: Sequence[int]) -> None:
        if len(weights) != len(letters) + 1:
            raise ValueError("need one weight per gap, including both ends")
        if not any(weights):
            return
        node = self.root
        for ch in letters:
            node = node.setdefault(ch, {})
        old = node.get(None)
        if old is None:
            self.n_patterns += 1
            node[None] = tuple(weights)
        else:
            node[None] = tuple(map(max, old, weights))

    def patterns(self) -> Iterable[tuple[str, Weights]]:
        stack = [("", self.root)]
        while stack:
            prefix, node = stack.pop()
            for key, child in node.items():
                if key is None:
                    yield prefix, child
                else:
                    stack.append((prefix + key, child))


def parse_pattern(text: str) -> tuple[str, Weights]:
    """``"a1b2c"`` -> ``("abc", (0, 1, 2, 0))``."""
    letters: list[str] = []
    weights = [0]
    pending_digit = False
    for ch in text:
        if ch.isdigit() and ch.isascii():
            if pending_digit:
                raise ValueError(f"adjacent digits in pattern {text!r}")
            weights[-1] = int(ch)
            pending_digit = True
        else:
            letters.append(ch)
            weights.append(0)
            pending_digit = False
    if not letters:
        raise ValueError(f"pattern {text!r} has no letters")
    return "".join(letters), tuple(weights)


def _fold(ch: str, turkish: bool) -> str:
    if turkish and ch in "Iİ":
        return "ı" if ch == "I" else "i"
    low = ch.lower()
    return low if len(low) == 1 else ch


def _fold_word(word: str, turkish: bool) -> str:
    return "".join(_fold(ch, turkish) for ch in word)


def load_patterns(path: str | os.PathLike, language: str = "") -> PatternTrie:
    """Parse a pattern dictionary.

    Non-standard replacement rules (``.../ck=k,1,2``) keep only their
    break weights; the substitution itself is dropped.
    """
    raw = Path(path).read_bytes()
    text = _decode_bytes(raw)
    lines = text.split("\n")
    trie = PatternTrie(language=language)
    turkish = language == "tr"
    start = 0
    if lines and _ENCODING_LINE.fullmatch(lines[0].strip()):
        enc = lines[0].strip().lower().replace("-", "")
        if enc != "utf8":
            raise UnsupportedEncodingError(f"{path}: declared encoding {lines[0].strip()!r} is not UTF-8")
        start = 1
    for lineno, line in enumerate(lines[start:], start + 1):
        line = line.strip()
        if not line or line.startswith(("%", "#")):
            continue
        head = line.split()[0]
        if head in ("LEFTHYPHENMIN", "RIGHTHYPHENMIN"):
            try:
                value = int(line.split()[1])
            except (IndexError, ValueError):
                raise ParseError(f"bad {head} header", lineno, str(path)) from None
            if value < 1:
                raise ParseError(f"{head} must be >= 1", lineno, str(path))
            if head == "LEFTHYPHENMIN":
                trie.left_min = value
            else:
                trie.right_min = value
            continue
        if head.startswith(_IGNORED):
            continue
        for token in line.split():
            token = _HEX.sub(lambda m: chr(int(m.group(1), 16)), token)
            token = token.split("/", 1)[0]
            try:
                letters, weights = parse_pattern(token)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, str(path)) from None
            trie.add(_fold_word(letters, turkish), weights)
    return trie


def break_points(word: str, trie: PatternTrie) -> list[int]:
    """Offsets ``p`` such that a break falls between ``word[p-1]`` and ``word[p]``."""
    work = "." + _fold_word(word, trie.language == "tr") + "."
    points = [0] * (len(work) + 1)
    root = trie.root
    for i in range(len(work)):
        node = root
        for ch in work[i:]:
            node = node.get(ch)
            if node is None:
                break
            weights = node.get(None)
            if weights is not None:
                for j, wt in enumerate(weights):
                    if wt > points[i + j]:
                        points[i + j] = wt
    n = len(word)
    return [p for p in range(trie.left_min, n - trie.right_min + 1) if points[p + 1] % 2]


def hyphenate_word(word: str, trie: PatternTrie) -> list[str]:
    if not word:
        raise ValueError("empty word")
    bounds = [0] + break_points(word, trie) + [len(word)]
    return [word[a:b] for a, b in zip(bounds, bounds[1:])]


def hyphenate_stream(words: Iterable[Sequence[str]], trie: PatternTrie, language: str | None = None) -> UnitStream:
    scheme = Scheme(SchemeKind.HYPHEN, language=language or trie.language or "xx")
    return segment_words(words, lambda w: hyphenate_word(w, trie), scheme)
