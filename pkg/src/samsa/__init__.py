"""Reference-less structural evaluation of sentence simplification.

The score rewards outputs that split a source sentence into one sentence
per semantic scene while preserving each scene's main relation and
participants, as read off a scene-graph annotation of the source.
"""

from .align import Alignment, align_identical, load_alignment
from .errors import (
    DanglingRef,
    DomainError,
    DuplicateSource,
    EmptyOutput,
    ImplicitUnitError,
    InvalidPassage,
    MalformedGraph,
    MalformedScene,
    NoScenes,
    ParseError,
    RangeError,
    SamsaError,
    UnknownCategory,
)
from .ingest import parse_scene_json, parse_ucca_xml, to_scene_json
from .metric import (
    CorpusScore,
    PairFailure,
    SamsaScore,
    SceneTerms,
    consistency_score,
    match_scenes,
    score_corpus,
    score_pair,
    unit_indicator,
)
from .model import (
    Edge,
    EdgeCategory,
    Passage,
    Scene,
    Terminal,
    TerminalEdge,
    Unit,
    ValidationIssue,
    minimal_centers,
    primary_yield,
    scene_leaves,
    scenes,
    validate,
)
from .stats import (
    HumanScores,
    RatingRecord,
    StatResult,
    absolute_agreement,
    aggregate_ratings,
    pairwise_mean,
    pearson,
    quadratic_weighted_kappa,
    read_ratings,
    read_scores,
    spearman,
)
from .textprep import (
    DEFAULT_ABBREVIATIONS,
    SegmentedOutput,
    load_abbreviations,
    split_sentences,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "CorpusScore",
    "DanglingRef",
    "DomainError",
    "DuplicateSource",
    "Edge",
    "EdgeCategory",
    "EmptyOutput",
    "HumanScores",
    "ImplicitUnitError",
    "InvalidPassage",
    "MalformedGraph",
    "MalformedScene",
    "NoScenes",
    "PairFailure",
    "ParseError",
    "Passage",
    "RangeError",
    "RatingRecord",
    "SamsaError",
    "SamsaScore",
    "Scene",
    "SceneTerms",
    "SegmentedOutput",
    "StatResult",
    "Terminal",
    "TerminalEdge",
    "UnknownCategory",
    "Unit",
    "ValidationIssue",
    "absolute_agreement",
    "aggregate_ratings",
    "align_identical",
    "consistency_score",
    "load_abbreviations",
    "load_alignment",
    "match_scenes",
    "minimal_centers",
    "parse_scene_json",
    "parse_ucca_xml",
    "pairwise_mean",
    "pearson",
    "primary_yield",
    "quadratic_weighted_kappa",
    "read_ratings",
    "read_scores",
    "scene_leaves",
    "scenes",
    "score_corpus",
    "score_pair",
    "spearman",
    "split_sentences",
    "to_scene_json",
    "tokenize",
    "unit_indicator",
    "validate",
    "DEFAULT_ABBREVIATIONS",
]
