from __future__ import annotations

import random
from fractions import Fraction

import pytest

from samsa import (
    Alignment,
    EmptyOutput,
    NoScenes,
    align_identical,
    consistency_score,
    match_scenes,
    score_corpus,
    score_pair,
    scenes,
    split_sentences,
    unit_indicator,
)
from conftest import fixture_text
from oracle import random_fixture, reference_score

SPLIT = "John got home. John gave Mary a call."
IDENTITY = "John got home and gave Mary a call."
BAD_SPLIT = "John got home and gave. Mary called."
THREE_WAY = "John got home. John gave a call. Mary was called."


def builtin_alignment(passage, text):
    seg = split_sentences(text)
    return align_identical([t.text for t in passage.tokens],
                           list(seg.tokens)), seg


# ---------------------------------------------------------------------------
# consistency + matching


def test_consistency_counts_only_aligned_leaves(got_call):
    alignment, seg = builtin_alignment(got_call, SPLIT)
    sc1, sc2 = scenes(got_call)
    # the built-in aligner sends the source "John" to the closer copy in
    # sentence 0, so none of {John, got, home} crosses into sentence 1
    assert consistency_score(got_call, sc1, seg.sentences[1], alignment) == 0
    assert consistency_score(got_call, sc1, seg.sentences[0], alignment) == 3
    assert consistency_score(got_call, sc2, seg.sentences[1], alignment) == 4


def test_consistency_follows_the_alignment_not_the_words(got_call):
    # with "John" aligned to the second sentence's copy instead, exactly
    # one leaf of {John, got, home} crosses over
    seg = split_sentences(SPLIT)
    crossed = Alignment({(0, 4), (1, 1), (2, 2)})
    sc1 = scenes(got_call)[0]
    assert consistency_score(got_call, sc1, seg.sentences[1], crossed) == 1


def test_consistency_zero_without_alignment(got_call):
    seg = split_sentences(SPLIT)
    empty = Alignment(())
    for scene in scenes(got_call):
        for sentence in seg.sentences:
            assert consistency_score(got_call, scene, sentence, empty) == 0


def test_match_block_diagonal(got_call):
    alignment, seg = builtin_alignment(got_call, SPLIT)
    assert match_scenes(got_call, scenes(got_call), seg, alignment) == (0, 1)


def test_match_single_sentence(got_call):
    alignment, seg = builtin_alignment(got_call, IDENTITY)
    assert match_scenes(got_call, scenes(got_call), seg, alignment) == (0, 0)


def test_match_oversplit_returns_marker(ran_park):
    text = "He ran. It was the park."
    alignment, seg = builtin_alignment(ran_park, text)
    assert match_scenes(ran_park, scenes(ran_park), seg, alignment) is None


def test_match_empty_output_raises(ran_park):
    alignment, seg = builtin_alignment(ran_park, "")
    with pytest.raises(EmptyOutput):
        match_scenes(ran_park, scenes(ran_park), seg, alignment)


def test_all_zero_scene_takes_first_available(got_call):
    # nothing aligns: both scenes tie at zero everywhere
    seg = split_sentences(SPLIT)
    empty = Alignment(())
    assert match_scenes(got_call, scenes(got_call), seg, empty) == (0, 1)


# ---------------------------------------------------------------------------
# unit_indicator


def test_indicator_implicit_is_half(traveling):
    alignment, seg = builtin_alignment(traveling, "traveling is fun.")
    assert unit_indicator(
        traveling, "who", seg.sentences[0], alignment) == Fraction(1, 2)


def test_indicator_single_center(ran_park):
    alignment, seg = builtin_alignment(ran_park, "He ran into the park.")
    assert unit_indicator(
        ran_park, "park", seg.sentences[0], alignment) == 1


def test_indicator_requires_all_conjuncts(coordination):
    alignment, seg = builtin_alignment(coordination, "John ran.")
    # "Mary" is gone: the two-center coordination fails as a whole
    assert unit_indicator(
        coordination, "jm", seg.sentences[0], alignment) == 0
    assert unit_indicator(
        coordination, "ran", seg.sentences[0], alignment) == 1


def test_indicator_all_conjuncts_present(coordination):
    alignment, seg = builtin_alignment(coordination, "John and Mary ran.")
    assert unit_indicator(
        coordination, "jm", seg.sentences[0], alignment) == 1


# ---------------------------------------------------------------------------
# score_pair on the worked examples


def test_perfect_split_scores_one(got_call):
    score = score_pair(got_call, SPLIT)
    assert score.samsa_exact == 1
    assert score.samsa_abl_exact == 1
    assert (score.n_inp, score.n_out) == (2, 2)
    assert score.mapping == (0, 1)


def test_identity_output_halves_the_score(got_call):
    score = score_pair(got_call, IDENTITY)
    assert score.samsa_exact == Fraction(1, 2)
    assert score.samsa_abl_exact == 1
    assert (score.n_inp, score.n_out) == (2, 1)


def test_bad_split_loses_quarter(got_call):
    score = score_pair(got_call, BAD_SPLIT)
    assert score.samsa_exact == Fraction(3, 4)
    # scene 2's relation ("gave") landed outside its sentence
    assert score.per_scene[1].mr_term == 0.0
    assert score.per_scene[1].participant_terms == (1.0, 1.0)


def test_three_way_split_scores_zero(got_call):
    score = score_pair(got_call, THREE_WAY)
    assert score.samsa_exact == 0
    assert score.samsa_abl_exact == 0
    assert score.over_split
    assert score.mapping is None
    assert score.n_out == 3
    # breakdown still lists every scene, zeroed
    assert [t.mr_term for t in score.per_scene] == [0.0, 0.0]


def test_embedded_scene_split_comparison(read_book):
    good = score_pair(read_book, fixture_text("read_book_good.txt"))
    bad = score_pair(read_book, fixture_text("read_book_bad.txt"))
    assert good.samsa_exact == Fraction(7, 8)
    assert bad.samsa_exact == Fraction(3, 4)
    assert bad.samsa_exact < good.samsa_exact


def test_implicit_participant_contributes_half(traveling):
    score = score_pair(traveling, "traveling is fun.")
    assert score.samsa_exact == Fraction(7, 8)
    assert score.per_scene[0].participant_terms == (1.0, 0.5)
    assert score.per_scene[0].mr_term == 1.0


def test_no_scenes_raises(president):
    with pytest.raises(NoScenes):
        score_pair(president, "The president.")


def test_empty_output_raises(ran_park):
    with pytest.raises(EmptyOutput):
        score_pair(ran_park, "   ")


def test_explicit_alignment_overrides_builtin(got_call):
    # a deliberately wrong-headed alignment: everything into sentence 1
    seg = split_sentences(SPLIT)
    pairs = {(i, 5) for i in range(9)}
    score = score_pair(got_call, SPLIT, alignment=Alignment(pairs))
    assert score.samsa_exact < 1


def test_remote_participant_scored_from_matched_sentence(read_book_escene):
    # wrote-scene leaves exclude the remote object, but the object still
    # counts as a participant and is judged in the wrote-scene's sentence
    good = score_pair(read_book_escene, fixture_text("read_book_good.txt"))
    ws_terms = [t for t in good.per_scene if t.scene == "ws"][0]
    assert len(ws_terms.participant_terms) == 2


# ---------------------------------------------------------------------------
# formula invariants on random fixtures


def test_bounds_and_ordering_on_random_fixtures():
    rng = random.Random(0xA11CE)
    for _ in range(200):
        passage, text, _, amap = random_fixture(rng)
        score = score_pair(passage, text, alignment=Alignment(amap.items()))
        assert 0 <= score.samsa_exact <= score.samsa_abl_exact <= 1
        if score.n_inp < score.n_out:
            assert score.samsa_exact == 0
        if score.samsa_abl_exact > 0:
            assert score.samsa_exact == score.samsa_abl_exact * Fraction(
                score.n_out, score.n_inp)


def test_agrees_with_reference_evaluator():
    rng = random.Random(0xBEEF)
    for _ in range(150):
        passage, text, ranges, amap = random_fixture(rng)
        # generator sanity: the segmenter recovers the intended ranges
        assert list(split_sentences(text).sentences) == ranges
        score = score_pair(passage, text, alignment=Alignment(amap.items()))
        ref_samsa, ref_abl = reference_score(passage, ranges, amap)
        assert score.samsa_exact == ref_samsa
        assert score.samsa_abl_exact == ref_abl


# ---------------------------------------------------------------------------
# score_corpus


def test_corpus_mean(got_call):
    corpus = score_corpus([
        (got_call, SPLIT, None),
        (got_call, IDENTITY, None),
    ])
    assert corpus.samsa == 0.75
    assert corpus.samsa_abl == 1.0
    assert corpus.pairs_scored == 2
    assert corpus.exclusions == 0


def test_corpus_single_pair(got_call):
    corpus = score_corpus([(got_call, SPLIT, None)])
    assert corpus.samsa == 1.0


def test_corpus_skips_and_counts_errors(got_call, president):
    corpus = score_corpus([
        (got_call, SPLIT, None),
        (president, "The president.", None),
    ])
    assert corpus.samsa == 1.0
    assert corpus.exclusions == 1
    failure = corpus.per_pair[1]
    assert failure.error == "NoScenes"


def test_corpus_fail_fast_policy(got_call, president):
    with pytest.raises(NoScenes):
        score_corpus([
            (got_call, SPLIT, None),
            (president, "The president.", None),
        ], on_error="fail")


def test_corpus_preserves_order(got_call):
    corpus = score_corpus([
        (got_call, SPLIT, None),
        (got_call, IDENTITY, None),
        (got_call, THREE_WAY, None),
    ])
    assert [s.samsa for s in corpus.per_pair] == [1.0, 0.5, 0.0]


def test_corpus_thread_count_does_not_change_result(got_call, monkeypatch):
    items = [
        (got_call, SPLIT, None),
        (got_call, IDENTITY, None),
        (got_call, BAD_SPLIT, None),
        (got_call, THREE_WAY, None),
    ]
    monkeypatch.setenv("SAMSA_THREADS", "1")
    sequential = score_corpus(items)
    monkeypatch.setenv("SAMSA_THREADS", "4")
    threaded = score_corpus(items)
    assert sequential == threaded


def test_corpus_rejects_empty_list():
    with pytest.raises(ValueError):
        score_corpus([])
