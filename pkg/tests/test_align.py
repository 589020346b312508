from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from samsa import (
    Alignment,
    DuplicateSource,
    ParseError,
    RangeError,
    align_identical,
    load_alignment,
)


# ---------------------------------------------------------------------------
# Alignment type


def test_pairs_and_lookup():
    a = Alignment({(0, 2), (3, 1)})
    assert a.output_for(0) == 2
    assert a.output_for(3) == 1
    assert a.output_for(1) is None
    assert len(a) == 2


def test_duplicate_source_rejected_by_constructor():
    with pytest.raises(DuplicateSource):
        Alignment({(0, 1), (0, 2)})


def test_equality_and_hash():
    assert Alignment({(1, 1)}) == Alignment([(1, 1)])
    assert hash(Alignment({(1, 1)})) == hash(Alignment([(1, 1)]))


# ---------------------------------------------------------------------------
# built-in aligner


def test_identity_on_identical_sentences():
    tokens = ["John", "got", "home", "."]
    a = align_identical(tokens, tokens)
    assert a.pairs == {(i, i) for i in range(len(tokens))}


def test_stem_pass_catches_inflection():
    a = align_identical(
        ["John", "gave", "Mary", "a", "call"],
        ["Mary", "called"],
    )
    assert a.pairs == {(2, 0), (4, 1)}


def test_case_insensitive_pass():
    a = align_identical(["the", "dog"], ["The", "dog"])
    assert a.pairs == {(0, 0), (1, 1)}


def test_exact_match_beats_case_match():
    # output has both "the" and "The"; exact pass grabs "the" first
    a = align_identical(["the"], ["The", "the"])
    assert a.pairs == {(0, 1)}


def test_repeated_source_earlier_wins():
    a = align_identical(["John", "saw", "John"], ["John"])
    assert a.pairs == {(0, 0)}


def test_tie_broken_by_distance_then_position():
    # source "x" at index 1; output "x" at 0 and 2: |1-0| == |1-2| → index 0
    a = align_identical(["pad", "x"], ["x", "pad", "x"])
    assert a.output_for(1) == 0


def test_one_to_one_both_sides():
    source = ["run", "run", "run"]
    output = ["run", "run"]
    a = align_identical(source, output)
    outs = [a.output_for(i) for i in range(3)]
    assert outs.count(None) == 1
    used = [o for o in outs if o is not None]
    assert len(set(used)) == len(used)


def test_suffix_strip_minimum_stem_length():
    # "as" would strip to a single letter; it must stay unstemmed
    a = align_identical(["as"], ["a"])
    assert a.pairs == set()


@given(st.lists(st.sampled_from(["a", "b", "ab", "Ab", "abs", "abed"]),
                max_size=8),
       st.lists(st.sampled_from(["a", "b", "ab", "Ab", "abs", "abed"]),
                max_size=8))
@settings(max_examples=300)
def test_alignment_constraints_always_hold(source, output):
    a = align_identical(source, output)
    sources = [i for i, _ in a.pairs]
    outputs = [j for _, j in a.pairs]
    assert len(set(sources)) == len(sources)
    assert len(set(outputs)) == len(outputs)
    for i, j in a.pairs:
        assert 0 <= i < len(source)
        assert 0 <= j < len(output)


@given(st.lists(st.text(alphabet="abcdXY", min_size=1, max_size=6),
                min_size=0, max_size=10, unique=True))
@settings(max_examples=300)
def test_identity_alignment_on_duplicate_free_lists(tokens):
    a = align_identical(tokens, tokens)
    assert a.pairs == {(i, i) for i in range(len(tokens))}


# ---------------------------------------------------------------------------
# Pharaoh loader


def test_load_simple_pairs():
    a = load_alignment("0-0\n2-1\n", 3, 2)
    assert a.pairs == {(0, 0), (2, 1)}


def test_load_accepts_bytes_and_blank_lines():
    a = load_alignment(b"0-0\n\n1-1\n", 2, 2)
    assert a.pairs == {(0, 0), (1, 1)}


def test_load_multiple_pairs_per_line():
    a = load_alignment("0-0 1-1 2-0", 3, 2)
    assert a.pairs == {(0, 0), (1, 1), (2, 0)}


def test_load_allows_output_reuse():
    # loader enforces only the source-side constraint
    a = load_alignment("0-0\n1-0\n", 2, 1)
    assert a.pairs == {(0, 0), (1, 0)}


def test_duplicate_source_rejected():
    with pytest.raises(DuplicateSource):
        load_alignment("0-0\n0-1\n", 2, 2)


def test_source_out_of_range():
    with pytest.raises(RangeError):
        load_alignment("5-0", 3, 2)


def test_output_out_of_range():
    with pytest.raises(RangeError):
        load_alignment("0-9", 3, 2)


@pytest.mark.parametrize("bad", ["nonsense", "1", "1-2-3", "a-b", "1-", "-1"])
def test_malformed_lines_rejected(bad):
    with pytest.raises(ParseError):
        load_alignment(bad, 10, 10)
