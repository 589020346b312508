"""Tokenization and rule-based sentence segmentation of system output.

The segmenter defines n_out for the scoring formula, so it has to be
deterministic: whitespace tokenization with punctuation detachment, then
sentence boundaries after terminator tokens, with an abbreviation list
(overridable from a file) suppressing false boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

# Punctuation detached from token edges during tokenization.
PUNCTUATION = set(".,;:!?\"'()[]")

# Tokens that end sentences.
_TERMINATORS = (".", "!", "?")

# Abbreviations that keep their trailing dot and never end a sentence.
DEFAULT_ABBREVIATIONS = frozenset(
    ["Mr.", "Mrs.", "Dr.", "U.S.", "e.g.", "i.e.", "etc.", "St.", "No."]
)


@dataclass(frozen=True)
class SegmentedOutput:
    """Tokenized output plus its sentence spans.

    ``sentences`` holds half-open ``(start, stop)`` token-index ranges;
    they are contiguous, non-overlapping, non-empty, and cover all tokens.
    """

    tokens: tuple[str, ...]
    sentences: tuple[tuple[int, int], ...]

    def sentence_tokens(self, j: int) -> tuple[str, ...]:
        start, stop = self.sentences[j]
        return self.tokens[start:stop]


def load_abbreviations(path) -> frozenset[str]:
    """Read an abbreviation list: one token per line, UTF-8, blanks ignored."""
    try:
        with open(path, encoding="utf-8") as handle:
            entries = [line.strip() for line in handle]
    except OSError as exc:
        raise ParseError(f"cannot read abbreviation file: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"abbreviation file is not UTF-8: {exc}") from exc
    return frozenset(e for e in entries if e)


def tokenize(text: str, abbreviations: frozenset[str] | None = None) -> list[str]:
    """Split on whitespace, then detach edge punctuation as separate tokens.

    Leading and trailing punctuation characters come off one at a time;
    stripping stops early when the remaining chunk is a known abbreviation
    (protecting e.g. "Mr.").  A trailing possessive clitic ('s) is
    detached as its own token, so "Smith's" → ["Smith", "'s"].
    """
    if abbreviations is None:
        abbreviations = DEFAULT_ABBREVIATIONS
    tokens: list[str] = []
    for chunk in text.split():
        leading: list[str] = []
        while chunk and chunk[0] in PUNCTUATION and chunk not in abbreviations:
            leading.append(chunk[0])
            chunk = chunk[1:]
        trailing: list[str] = []
        while chunk and chunk[-1] in PUNCTUATION and chunk not in abbreviations:
            trailing.append(chunk[-1])
            chunk = chunk[:-1]
        core: list[str] = []
        if chunk:
            if len(chunk) > 2 and chunk[-2:].lower() == "'s":
                core = [chunk[:-2], chunk[-2:]]
            else:
                core = [chunk]
        tokens.extend(leading)
        tokens.extend(core)
        tokens.extend(reversed(trailing))
    return tokens


def split_sentences(
    text: str, abbreviations: frozenset[str] | None = None
) -> SegmentedOutput:
    """Segment raw output text into sentences.

    A boundary falls after any token ending in ``.``, ``!`` or ``?``,
    except when that token is a known abbreviation or the next token
    starts lowercase (mid-sentence terminators such as "i.e." usage).
    A final unterminated span is still its own sentence; empty or
    whitespace-only text yields zero sentences.
    """
    if abbreviations is None:
        abbreviations = DEFAULT_ABBREVIATIONS
    tokens = tuple(tokenize(text, abbreviations))
    if not tokens:
        return SegmentedOutput(tokens=(), sentences=())
    sentences: list[tuple[int, int]] = []
    start = 0
    for i, token in enumerate(tokens[:-1]):
        if not token.endswith(_TERMINATORS):
            continue
        if token in abbreviations:
            continue
        nxt = tokens[i + 1]
        if nxt[:1].islower():
            continue
        sentences.append((start, i + 1))
        start = i + 1
    sentences.append((start, len(tokens)))
    return SegmentedOutput(tokens=tokens, sentences=tuple(sentences))
