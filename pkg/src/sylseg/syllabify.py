"""Rule-based syllabification for English, Spanish, Russian, Finnish, Turkish.

One algorithm serves every language:

1. find vowel nuclei, grouping adjacent vowels that form a listed diphthong;
2. split each consonant cluster between two nuclei so that the longest
   legal onset (or a single consonant) opens the next syllable.

Language tables switch on a handful of extra behaviours (``extra`` flags),
e.g. English silent final ``e`` or the Russian soft sign.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .core import Scheme, SchemeKind, UnitStream, segment_words
from .errors import ConfigError, ParseError

SEPARATORS = frozenset("-'’‐")


@dataclass(frozen=True)
class LanguageRules:
    language: str
    vowels: frozenset[str]
    diphthongs: frozenset[str] = frozenset()
    inseparable_onsets: frozenset[str] = frozenset()
    digraphs: frozenset[str] = frozenset()
    extra: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.vowels:
            raise ConfigError(f"{self.language}: empty vowel set")
        for d in self.diphthongs:
            if not all(ch in self.vowels for ch in d):
                raise ConfigError(f"{self.language}: diphthong {d!r} contains a non-vowel")
        for group in (self.inseparable_onsets, self.digraphs):
            for c in group:
                if any(ch in self.vowels for ch in c):
                    raise ConfigError(f"{self.language}: cluster {c!r} contains a vowel")

    def has(self, flag: str) -> bool:
        return flag in self.extra


def _fs(s: str) -> frozenset[str]:
    return frozenset(s.split())


ENGLISH = LanguageRules(
    "en",
    vowels=_fs("a e i o u y"),
    diphthongs=_fs("ai au ay ea ee ei ey ie oa oe oi oo ou oy ue ui eu"),
    inseparable_onsets=_fs(
        "bl br cl cr dr fl fr gl gr pl pr sc sk sl sm sn sp st sw tr tw wr "
        "thr str spr scr spl shr sch"
    ),
    digraphs=_fs("th sh ch ph wh ck"),
    extra=_fs("y_glide w_glide qu silent_e cle middle_split coda_ck_x"),
)

_ES_STRONG = "a e o á é ó í ú"
_ES_WEAK = "i u ü y"


def _spanish_diphthongs() -> frozenset[str]:
    strong_plain = "a e o á é ó".split()
    weak = _ES_WEAK.split()
    pairs = {w + s for w in weak for s in strong_plain}
    pairs |= {s + w for s in strong_plain for w in weak}
    pairs |= {a + b for a in weak for b in weak if a != b and a[0] != b[0]}
    return frozenset(pairs)


SPANISH = LanguageRules(
    "es",
    vowels=frozenset(_ES_STRONG.split() + _ES_WEAK.split()),
    diphthongs=_spanish_diphthongs(),
    inseparable_onsets=_fs("pl bl fl cl kl gl pr br fr cr kr gr tr dr"),
    digraphs=_fs("ch ll rr"),
    extra=_fs("y_glide qu chain_diphthongs"),
)

RUSSIAN = LanguageRules(
    "ru",
    vowels=frozenset("аеёиоуыэюя"),
    extra=_fs("soft_sign j_coda"),
)

_FI_DIPHTHONGS = "ai ei oi ui yi äi öi au eu iu ou ey iy äy öy uo yö ie"
FINNISH = LanguageRules(
    "fi",
    vowels=frozenset("aeiouyäö"),
    diphthongs=frozenset(_FI_DIPHTHONGS.split() + [v + v for v in "aeiouyäö"]),
)

TURKISH = LanguageRules(
    "tr",
    vowels=frozenset("aeıioöuüâîû"),
    extra=_fs("turkish_case"),
)

BUILTIN_RULES: dict[str, LanguageRules] = {r.language: r for r in (ENGLISH, SPANISH, RUSSIAN, FINNISH, TURKISH)}


def get_rules(language: str) -> LanguageRules:
    try:
        return BUILTIN_RULES[language]
    except KeyError:
        raise ConfigError(
            f"no syllabification rules for {language!r} (have: {', '.join(sorted(BUILTIN_RULES))}); "
            "supply a rules file or use the hyphen scheme"
        ) from None


_RULE_KEYS = {"language", "vowels", "diphthongs", "onsets", "digraphs", "extra"}


def load_rules(path: str | os.PathLike, base: LanguageRules | None = None) -> LanguageRules:
    """Read a ``key: value value ...`` rules file.

    Keys: language, vowels, diphthongs, onsets, digraphs, extra.  Keys not
    given fall back to ``base`` (or to the built-in table for the language).
    """
    values: dict[str, list[str]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _RULE_KEYS:
            raise ParseError(f"expected one of {sorted(_RULE_KEYS)} followed by ':'", lineno, str(path))
        values[key] = rest.split()
    lang = values.get("language", [base.language if base else ""])
    if len(lang) != 1 or not lang[0]:
        raise ParseError("rules file must name exactly one language", None, str(path))
    language = lang[0]
    if base is None:
        base = BUILTIN_RULES.get(language)
    if base is None:
        base = LanguageRules(language, vowels=frozenset(values.get("vowels", ())) or frozenset("aeiou"))
    changes = {"language": language}
    for key, attr in (("vowels", "vowels"), ("diphthongs", "diphthongs"), ("onsets", "inseparable_onsets"),
                      ("digraphs", "digraphs"), ("extra", "extra")):
        if key in values:
            changes[attr] = frozenset(values[key])
    return replace(base, **changes)


def _lower(word: str, rules: LanguageRules) -> str:
    # Per-scalar folding keeps indices aligned with the original word.
    out = []
    for ch in word:
        if rules.has("turkish_case") and ch in "Iİ":
            out.append("ı" if ch == "I" else "i")
            continue
        low = ch.lower()
        out.append(low if len(low) == 1 else ch)
    return "".join(out)


def _vowel_mask(w: str, rules: LanguageRules) -> list[bool]:
    n = len(w)
    mask = [ch in rules.vowels for ch in w]
    if rules.has("qu"):
        for i in range(n - 1):
            if w[i] == "q" and w[i + 1] == "u":
                mask[i + 1] = False
    if rules.has("y_glide"):
        for i, ch in enumerate(w):
            if ch == "y" and i + 1 < n and mask[i + 1]:
                mask[i] = False
    if rules.has("w_glide"):
        for i in range(1, n):
            if w[i] == "w" and mask[i - 1] and w[i - 1] in "aeo":
                followed_by_vowel = i + 1 < n and mask[i + 1]
                if w[i - 1] != "a" or not followed_by_vowel:
                    mask[i] = True
    return mask


def _english_tail(w: str, mask: list[bool], onsets: frozenset[str]) -> tuple[int | None, int | None]:
    """Return (silent_e_index, cle_onset_index) for English endings."""
    n = len(w)
    first_vowel = next((i for i, v in enumerate(mask) if v), None)
    if first_vowel is None:
        return None, None
    # consonant + "le" / "les"
    for suffix in ("le", "les"):
        k = n - len(suffix)
        if k >= 2 and w.endswith(suffix) and not mask[k - 1] and w[k - 1] != "l" and any(mask[: k - 1]):
            onset = k - 1
            if w[k - 1] == "k" and w[k - 2] == "c":
                onset = k
            return None, onset
    e = None
    if n >= 3 and w.endswith("e") and not mask[n - 2]:
        e = n - 1
    elif n >= 4 and w.endswith("es") and not mask[n - 3] and w[n - 3] not in "sxzcgh":
        e = n - 2
    elif n >= 4 and w.endswith("ed") and not mask[n - 3] and w[n - 3] not in "td":
        e = n - 2
    if e is not None and e < n - 1 and w[e - 2:e] in onsets:
        # "hundred", "sacred": the cluster needs the vowel
        e = None
    if e is not None and mask[e] and any(mask[: e - 1]):
        return e, None
    return None, None


def find_nuclei(word: str, rules: LanguageRules) -> list[tuple[int, int]]:
    """Spans ``[start, end)`` of the vowel nuclei of ``word``."""
    w = _lower(word, rules)
    spans, _ = _analyse(w, rules)
    return spans


def _analyse(w: str, rules: LanguageRules) -> tuple[list[tuple[int, int]], int | None]:
    mask = _vowel_mask(w, rules)
    cle_onset = None
    if rules.has("silent_e") or rules.has("cle"):
        silent, cle_onset = _english_tail(w, mask, rules.inseparable_onsets)
        if silent is not None and rules.has("silent_e"):
            mask[silent] = False
    spans: list[tuple[int, int]] = []
    i, n = 0, len(w)
    chain = rules.has("chain_diphthongs")
    glide = rules.has("w_glide")
    while i < n:
        if not mask[i]:
            i += 1
            continue
        j = i + 1
        if chain:
            while j < n and mask[j] and w[j - 1] + w[j] in rules.diphthongs:
                j += 1
        elif j < n and mask[j] and (w[i:j + 1] in rules.diphthongs or glide and w[j] == "w"):
            j += 1
        spans.append((i, j))
        i = j
    return spans, cle_onset


def _atoms(w: str, start: int, end: int, rules: LanguageRules) -> list[tuple[int, int]]:
    atoms: list[tuple[int, int]] = []
    i = start
    while i < end:
        if rules.has("qu") and w[i] == "q" and i + 1 < end and w[i + 1] == "u":
            atoms.append((i, i + 2))
            i += 2
            continue
        if i + 1 < end and w[i:i + 2] in rules.digraphs:
            atoms.append((i, i + 2))
            i += 2
            continue
        if rules.has("soft_sign") and w[i] in "ьъ" and atoms:
            atoms[-1] = (atoms[-1][0], i + 1)
            i += 1
            continue
        atoms.append((i, i + 1))
        i += 1
    return atoms


def _split_cluster(w: str, start: int, end: int, rules: LanguageRules) -> int:
    """Index in ``[start, end]`` where the next syllable begins."""
    if start == end:
        return start
    atoms = _atoms(w, start, end, rules)
    if rules.has("j_coda"):
        while atoms and w[atoms[0][0]] == "й":
            atoms = atoms[1:]
        if not atoms:
            return end
    if rules.has("coda_ck_x") and len(atoms) == 1 and w[atoms[0][0]:atoms[0][1]] in ("ck", "x"):
        return end
    if rules.has("middle_split") and len(atoms) == 2:
        return atoms[1][0]
    best = atoms[-1][0]
    for k in range(len(atoms) - 2, -1, -1):
        if w[atoms[k][0]:end] in rules.inseparable_onsets:
            best = atoms[k][0]
    return best


def _syllabify_part(word: str, rules: LanguageRules) -> list[str]:
    w = _lower(word, rules)
    spans, cle_onset = _analyse(w, rules)
    if len(spans) <= 1:
        return [word]
    cuts = []
    for k, ((_, end), (nxt, _)) in enumerate(zip(spans, spans[1:])):
        if k == len(spans) - 2 and cle_onset is not None and end <= cle_onset <= nxt:
            cuts.append(cle_onset)
        else:
            cuts.append(_split_cluster(w, end, nxt, rules))
    bounds = [0] + cuts + [len(word)]
    return [word[a:b] for a, b in zip(bounds, bounds[1:]) if b > a]


def syllabify_word(word: str, rules: LanguageRules) -> list[str]:
    if not word:
        raise ValueError("empty word")
    if not any(ch in SEPARATORS for ch in word):
        return _syllabify_part(word, rules)
    out: list[str] = []
    pending = ""
    part = ""
    for ch in [*word, None]:
        if ch is None or ch in SEPARATORS:
            if part:
                sylls = _syllabify_part(part, rules)
                sylls[0] = pending + sylls[0]
                pending = ""
                out.extend(sylls)
                part = ""
            if ch is None:
                break
            if out:
                out[-1] += ch
            else:
                pending += ch
        else:
            part += ch
    if pending:
        out.append(pending)
    return out


def syllabify_stream(words: Iterable[Sequence[str]], rules: LanguageRules) -> UnitStream:
    scheme = Scheme(SchemeKind.SYLLABLE, language=rules.language)
    return segment_words(words, lambda w: syllabify_word(w, rules), scheme)
