"""Readers for CoNLL-U treebanks, raw text and pre-segmented files."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple

from .core import Scheme, SchemeKind, UnitStream, _decode_bytes, decode_stream, tokenize_words
from .errors import DataError, ParseError

SPLITS = ("train", "valid", "test")


class Token(NamedTuple):
    form: str
    lemma: str


@dataclass(frozen=True)
class Corpus:
    name: str
    splits: dict[str, list[list[str]]]
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        missing = [s for s in SPLITS if s not in self.splits]
        if missing:
            raise DataError(f"corpus {self.name!r} lacks splits: {', '.join(missing)}")
        if not self.splits["train"]:
            raise DataError(f"corpus {self.name!r} has an empty train split")
        for split, sents in self.splits.items():
            if any(not s for s in sents):
                raise DataError(f"corpus {self.name!r}: empty sentence in {split}")

    def __getitem__(self, split: str) -> list[list[str]]:
        return self.splits[split]


def _read_text(path: str | os.PathLike) -> str:
    return _decode_bytes(Path(path).read_bytes())


def iter_conllu(path: str | os.PathLike) -> Iterator[list[Token]]:
    """Yield one list of word tokens per sentence.

    Multiword range lines (``1-2``) and empty nodes (``1.1``) are skipped;
    the syntactic words they cover are kept.
    """
    text = _read_text(path)
    sent: list[Token] = []
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line.strip():
            if sent:
                yield sent
                sent = []
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(f"expected 10 tab-separated columns, found {len(cols)}", lineno, str(path))
        tid = cols[0]
        if "-" in tid or "." in tid:
            continue
        if not tid.isdigit():
            raise ParseError(f"bad token id {tid!r}", lineno, str(path))
        sent.append(Token(cols[1], cols[2]))
    if sent:
        yield sent


def read_conllu(path: str | os.PathLike) -> list[list[str]]:
    return [[t.form for t in sent] for sent in iter_conllu(path)]


def read_raw(path: str | os.PathLike) -> list[list[str]]:
    return tokenize_words(Path(path).read_bytes())


def read_segmented(path: str | os.PathLike, scheme: Scheme | str = "external") -> UnitStream:
    """Load an ``@``-format file.  A bare string is used as the scheme label."""
    if isinstance(scheme, str):
        scheme = Scheme(SchemeKind.EXTERNAL, label=scheme)
    try:
        return decode_stream(Path(path).read_bytes(), scheme)
    except ParseError as exc:
        raise ParseError(str(exc).strip(), exc.line, str(path)) from None


def lemma_morph_split(sentences: list[list[Token]], label: str = "morph-approx") -> UnitStream:
    """Approximate morpheme pieces from lemmas.

    ``walked``/``walk`` gives ``walk ed``; when the lemma is not a proper
    prefix of the form the form stays whole.
    """

    def split(tok: Token) -> tuple[str, ...]:
        form, lemma = tok
        if lemma and lemma != "_" and len(lemma) < len(form) and form.startswith(lemma):
            return (lemma, form[len(lemma):])
        return (form,)

    words = tuple(tuple(split(t) for t in sent) for sent in sentences if sent)
    return UnitStream(Scheme(SchemeKind.EXTERNAL, label=label), words)


def read_words(path: str | os.PathLike, fmt: str = "auto") -> list[list[str]]:
    if fmt == "auto":
        fmt = "conllu" if str(path).endswith((".conllu", ".conll")) else "raw"
    if fmt == "conllu":
        return read_conllu(path)
    if fmt == "raw":
        return read_raw(path)
    raise ValueError(f"unknown input format {fmt!r}")


def load_corpus(name: str, train, valid=None, test=None, fmt: str = "auto") -> Corpus:
    """Read the three splits; missing valid/test splits are left empty."""
    paths = {"train": train, "valid": valid, "test": test}
    splits = {s: (read_words(p, fmt) if p else []) for s, p in paths.items()}
    return Corpus(name, splits, {s: str(p) for s, p in paths.items() if p})
