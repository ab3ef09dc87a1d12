from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA
from sylseg.bpe import (
    Encoder, MergeTable, count_words, dumps_merges, encode_stream, encode_word, load_merges, merge_symbols,
    save_merges, sweep, train_bpe,
)
from sylseg.core import encode_stream as encode_text
from sylseg.corpus import read_raw
from sylseg.errors import ConfigError, ParseError

FIXTURE = {"low": 5, "lower": 2, "newest": 6, "widest": 3}


def brute_force_bpe(word_counts, target, min_frequency=2):
    """Recount every pair from scratch after each merge."""
    segs = {w: list(w) for w in word_counts}
    alphabet = {ch for w in word_counts for ch in w}
    merges, freqs = [], []
    while len(alphabet) + len(merges) < target:
        counts = Counter()
        for w, syms in segs.items():
            for pair in zip(syms, syms[1:]):
                counts[pair] += word_counts[w]
        if not counts:
            break
        best = max(counts.values())
        if best < min_frequency:
            break
        pair = min(p for p, c in counts.items() if c == best)
        merges.append(pair)
        freqs.append(best)
        segs = {w: merge_symbols(s, pair) for w, s in segs.items()}
    return merges, freqs


def apply_in_order(word, merges):
    syms = list(word)
    for pair in merges:
        syms = merge_symbols(syms, pair)
    return syms


def test_fixture_first_merge():
    table = train_bpe(FIXTURE, 11)
    assert table.merges[0] == ("e", "s")
    assert table.frequencies[0] == 9


def test_fixture_matches_oracle():
    alphabet = len({ch for w in FIXTURE for ch in w})
    table = train_bpe(FIXTURE, alphabet + 50)
    merges, freqs = brute_force_bpe(FIXTURE, alphabet + 50)
    assert list(table.merges) == merges
    assert list(table.frequencies) == freqs
    for w in FIXTURE:
        assert encode_word(w, table) == apply_in_order(w, table.merges)


def test_single_word_repeated():
    table = train_bpe({"aa": 3}, 2)
    assert table.merges == (("a", "a"),)
    assert encode_word("aa", table) == ["aa"]


def test_min_frequency_stops_training():
    table = train_bpe({"abc": 1}, 10)
    assert table.merges == ()
    assert encode_word("abc", table) == ["a", "b", "c"]


def test_target_must_exceed_alphabet():
    with pytest.raises(ConfigError):
        train_bpe(FIXTURE, 5)
    with pytest.raises(ConfigError):
        train_bpe({}, 5)


def test_empty_table_encodes_to_characters():
    table = MergeTable((), 5, frozenset("ab"))
    assert encode_word("abba", table) == list("abba")


def test_encode_stream_scheme():
    table = train_bpe(FIXTURE, 20)
    s = encode_stream([["newest", "low"]], table)
    assert s.scheme.label == "bpe-20"
    assert s.source_words() == [["newest", "low"]]


def test_merge_file_round_trip(tmp_path):
    table = train_bpe(FIXTURE, 20)
    path = tmp_path / "m.txt"
    save_merges(table, path)
    assert load_merges(path) == table
    assert path.read_text(encoding="utf-8") == dumps_merges(table)
    assert path.read_text(encoding="utf-8").startswith("version 1\n")


def test_merge_file_without_metadata(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("version 1\ne s\nes t\n", encoding="utf-8")
    table = load_merges(path)
    assert table.alphabet == frozenset("est")
    assert encode_word("test", table) == ["t", "est"]


def test_merge_file_errors(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("e s\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_merges(path)
    path.write_text("version 1\na b c\n", encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_merges(path)
    assert info.value.line == 2


def test_sweep_matches_direct_training():
    counts = count_words(read_raw(DATA / "multilingual_en.txt"))
    tables = sweep(counts, syllabary_size=120, sizes=(80, 200, 120))
    assert [t.target_vocab for t in tables] == [80, 200, 120]
    for t in tables:
        assert len(t) <= t.target_vocab
        assert t == train_bpe(counts, t.target_vocab)


def test_default_sweep_sizes_include_syllabary():
    counts = count_words(read_raw(DATA / "multilingual_tr.txt"))
    tables = sweep(counts, syllabary_size=2595)
    assert [t.target_vocab for t in tables] == [2500, 5000, 7500, 10000, 2595]


def test_fixture_corpus_lossless():
    words = read_raw(DATA / "multilingual_fi.txt")
    table = train_bpe(count_words(words), 300)
    s = encode_stream(words, table)
    assert s.source_words() == words
    assert encode_text(s)


word_counts = st.dictionaries(st.text(st.sampled_from("abcde"), min_size=1, max_size=7), st.integers(1, 6),
                              min_size=1, max_size=12)


@given(word_counts, st.integers(1, 25), st.randoms())
@settings(max_examples=80, deadline=None)
def test_oracle_and_determinism(counts, extra, rnd):
    alphabet = len({ch for w in counts for ch in w})
    target = alphabet + extra
    table = train_bpe(counts, target)
    merges, freqs = brute_force_bpe(counts, target)
    assert list(table.merges) == merges
    assert list(table.frequencies) == freqs
    items = list(counts.items())
    rnd.shuffle(items)
    assert train_bpe(dict(items), target) == table
    enc = Encoder(table)
    vocab = table.vocab
    for w in counts:
        pieces = enc(w)
        assert "".join(pieces) == w
        assert set(pieces) <= vocab
        assert list(pieces) == apply_in_order(w, table.merges)
