"""Scene-to-sentence matching and the structural simplification score.

Scoring a (source passage, system output) pair proceeds in four steps:

1. extract the source scenes (``model.scenes``);
2. segment the output into sentences (``textprep.split_sentences``);
3. align source tokens to output tokens (supplied, or the built-in
   lexical aligner);
4. greedily match each scene to a sentence and evaluate, per scene, an
   indicator for the main relation and one for each participant.

With n_inp scenes and n_out sentences, the score is

    samsa = (n_out / n_inp) * (1 / (2 * n_inp))
            * sum_i [ MR_i + mean_j(Par_ij) ]

and ``samsa_abl`` is the same sum without the n_out/n_inp penalty.  A
pair with more sentences than scenes scores zero outright (a scene was
necessarily split).  Term sums are carried in exact rational arithmetic;
the reported scores are floats, with the exact values kept alongside.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass
from fractions import Fraction

from .align import Alignment, align_identical
from .errors import EmptyOutput, NoScenes, SamsaError
from .model import Passage, Scene, minimal_centers, scene_leaves, scenes
from .textprep import SegmentedOutput, split_sentences

_HALF = Fraction(1, 2)


def consistency_score(
    passage: Passage,
    scene: Scene,
    sentence: tuple[int, int],
    alignment: Alignment,
) -> int:
    """Count scene leaves whose aligned output word falls in the sentence."""
    start, stop = sentence
    count = 0
    for leaf in scene_leaves(passage, scene):
        j = alignment.output_for(leaf)
        if j is not None and start <= j < stop:
            count += 1
    return count


def match_scenes(
    passage: Passage,
    scene_list: list[Scene],
    segmented: SegmentedOutput,
    alignment: Alignment,
) -> tuple[int, ...] | None:
    """Greedily map scenes (in text order) to output sentences.

    Returns one sentence index per scene, or None when n_inp < n_out
    (the over-split case, which scores zero).  Each scene takes the
    sentence with the highest consistency score; ties go to the earliest
    sentence.  When scene and sentence counts are equal the map must be
    a bijection, so already-taken sentences are skipped.
    """
    n_out = len(segmented.sentences)
    if n_out == 0:
        raise EmptyOutput("output has no sentences")
    n_inp = len(scene_list)
    if n_inp < n_out:
        return None
    injective = n_inp == n_out
    taken: set[int] = set()
    assignment: list[int] = []
    for scene in scene_list:
        best_j = -1
        best_score = -1
        for j, sentence in enumerate(segmented.sentences):
            if injective and j in taken:
                continue
            score = consistency_score(passage, scene, sentence, alignment)
            if score > best_score:
                best_j, best_score = j, score
        assignment.append(best_j)
        taken.add(best_j)
    return tuple(assignment)


def unit_indicator(
    passage: Passage,
    unit_id: str,
    sentence: tuple[int, int],
    alignment: Alignment,
) -> Fraction:
    """Credit for one unit against its scene's sentence: 0, 1/2 or 1.

    Implicit units (no surface material at all) earn 1/2.  Otherwise the
    unit earns 1 iff every one of its minimal centers aligns to a word
    inside the sentence -- all conjuncts of a coordination must survive --
    and 0 otherwise, including when the unit has no centers to check.
    """
    if passage.unit(unit_id).implicit:
        return _HALF
    centers = minimal_centers(passage, unit_id)
    if not centers:
        return Fraction(0)
    start, stop = sentence
    for terminal in centers:
        j = alignment.output_for(terminal)
        if j is None or not start <= j < stop:
            return Fraction(0)
    return Fraction(1)


@dataclass(frozen=True)
class SceneTerms:
    """Per-scene breakdown: the scene node, its sentence, and its terms."""

    scene: str
    sentence: int | None
    mr_term: float
    participant_terms: tuple[float, ...]


@dataclass(frozen=True)
class SamsaScore:
    """Result of scoring one (passage, output) pair."""

    samsa: float
    samsa_abl: float
    n_inp: int
    n_out: int
    per_scene: tuple[SceneTerms, ...]
    mapping: tuple[int, ...] | None
    samsa_exact: Fraction
    samsa_abl_exact: Fraction

    @property
    def over_split(self) -> bool:
        """True when n_inp < n_out forced the zero score."""
        return self.mapping is None


def score_pair(
    passage: Passage,
    output_text: str,
    alignment: Alignment | None = None,
    abbreviations: frozenset[str] | None = None,
) -> SamsaScore:
    """Evaluate one source passage against one raw system output.

    When ``alignment`` is None the built-in lexical aligner supplies it.
    A passage without scenes has no defined score and raises NoScenes;
    an output without sentences raises EmptyOutput.
    """
    scene_list = scenes(passage)
    if not scene_list:
        raise NoScenes(f"passage {passage.id!r} has no scenes")
    segmented = split_sentences(output_text, abbreviations)
    if alignment is None:
        alignment = align_identical(
            [t.text for t in passage.tokens], list(segmented.tokens))
    mapping = match_scenes(passage, scene_list, segmented, alignment)
    n_inp = len(scene_list)
    n_out = len(segmented.sentences)

    if mapping is None:
        per_scene = tuple(
            SceneTerms(
                scene=sc.node,
                sentence=None,
                mr_term=0.0,
                participant_terms=(0.0,) * len(sc.participants),
            )
            for sc in scene_list
        )
        zero = Fraction(0)
        return SamsaScore(0.0, 0.0, n_inp, n_out, per_scene, None, zero, zero)

    total = Fraction(0)
    per_scene: list[SceneTerms] = []
    for sc, j in zip(scene_list, mapping):
        sentence = segmented.sentences[j]
        mr = unit_indicator(passage, sc.main_relation, sentence, alignment)
        participants = [
            unit_indicator(passage, p, sentence, alignment)
            for p in sc.participants
        ]
        # a participant-free scene is judged on its main relation alone
        par_mean = (
            sum(participants, Fraction(0)) / len(participants)
            if participants else Fraction(1)
        )
        total += mr + par_mean
        per_scene.append(SceneTerms(
            scene=sc.node,
            sentence=j,
            mr_term=float(mr),
            participant_terms=tuple(float(p) for p in participants),
        ))
    abl_exact = total / (2 * n_inp)
    samsa_exact = Fraction(n_out, n_inp) * abl_exact
    return SamsaScore(
        samsa=float(samsa_exact),
        samsa_abl=float(abl_exact),
        n_inp=n_inp,
        n_out=n_out,
        per_scene=tuple(per_scene),
        mapping=mapping,
        samsa_exact=samsa_exact,
        samsa_abl_exact=abl_exact,
    )


@dataclass(frozen=True)
class PairFailure:
    """A pair that could not be scored: its position and the error."""

    index: int
    error: str
    message: str


@dataclass(frozen=True)
class CorpusScore:
    """Corpus-level result: mean scores plus the per-pair outcomes."""

    samsa: float
    samsa_abl: float
    per_pair: tuple[SamsaScore | PairFailure, ...]
    pairs_scored: int
    exclusions: int


def _thread_count() -> int:
    raw = os.environ.get("SAMSA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def score_corpus(
    pairs,
    on_error: str = "skip",
    abbreviations: frozenset[str] | None = None,
) -> CorpusScore:
    """Score a sequence of (passage, output_text, alignment-or-None) pairs.

    The corpus scores are the arithmetic means of the per-pair scores.
    Under the default "skip" policy a failing pair is recorded in
    ``per_pair`` and excluded from the means; under "fail" the first
    error propagates.  Results are in input order and independent of the
    SAMSA_THREADS setting.
    """
    if on_error not in ("skip", "fail"):
        raise ValueError(f"unknown error policy {on_error!r}")
    pairs = list(pairs)
    if not pairs:
        raise ValueError("need at least one pair")

    def evaluate(item):
        passage, output_text, alignment = item
        return score_pair(passage, output_text, alignment, abbreviations)

    results: list[SamsaScore | PairFailure] = []
    workers = min(_thread_count(), len(pairs))
    if workers > 1 and on_error == "skip":
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            futures = [pool.submit(evaluate, item) for item in pairs]
            for i, future in enumerate(futures):
                try:
                    results.append(future.result())
                except SamsaError as exc:
                    results.append(
                        PairFailure(i, type(exc).__name__, str(exc)))
    else:
        for i, item in enumerate(pairs):
            try:
                results.append(evaluate(item))
            except SamsaError as exc:
                if on_error == "fail":
                    raise
                results.append(PairFailure(i, type(exc).__name__, str(exc)))

    scored = [r for r in results if isinstance(r, SamsaScore)]
    if scored:
        samsa_mean = sum(
            (r.samsa_exact for r in scored), Fraction(0)) / len(scored)
        abl_mean = sum(
            (r.samsa_abl_exact for r in scored), Fraction(0)) / len(scored)
    else:
        samsa_mean = abl_mean = Fraction(0)
    return CorpusScore(
        samsa=float(samsa_mean),
        samsa_abl=float(abl_mean),
        per_pair=tuple(results),
        pairs_scored=len(scored),
        exclusions=len(results) - len(scored),
    )
