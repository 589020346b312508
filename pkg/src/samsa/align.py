"""Word alignment between source tokens and system-output tokens.

An alignment maps each source token to at most one output token.  It can
be loaded from an external aligner's output (Pharaoh ``i-j`` pairs) or
built here by a deterministic lexical matcher, which is the documented
substitute for a full statistical aligner.
"""

from __future__ import annotations

from .errors import DuplicateSource, ParseError, RangeError

# Suffixes tried by the stem pass, longest first; a single strip only.
_SUFFIXES = ("tion", "ion", "ing", "es", "ed", "ly", "s")


class Alignment:
    """A set of (source index, output index) pairs, functional on sources.

    Each source index appears at most once; the built-in matcher also
    keeps output indices unique, but alignments loaded from files may
    reuse an output token.
    """

    def __init__(self, pairs):
        self.pairs = frozenset(pairs)
        by_source: dict[int, int] = {}
        for src, out in sorted(self.pairs):
            if src in by_source:
                raise DuplicateSource(f"source token {src} aligned twice")
            by_source[src] = out
        self._by_source = by_source

    def output_for(self, source_index: int) -> int | None:
        """The output index a source token maps to, or None."""
        return self._by_source.get(source_index)

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        return isinstance(other, Alignment) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return f"Alignment({sorted(self.pairs)})"


def _stem(word: str) -> str:
    word = word.lower()
    for suffix in _SUFFIXES:
        if word.endswith(suffix) and len(word) - len(suffix) >= 2:
            return word[: -len(suffix)]
    return word


def align_identical(source_tokens, output_tokens) -> Alignment:
    """Greedy three-pass lexical alignment.

    Pass 1 matches identical tokens, pass 2 case-insensitively, pass 3
    after suffix-stripping stemming.  Within a pass, source tokens are
    taken left to right; among the still-unmatched output candidates the
    closest position wins (smallest |i - j|, then smallest j).  Matched
    tokens on either side are out of play for later passes.
    """
    keys = (lambda t: t, str.lower, _stem)
    matched: dict[int, int] = {}
    used_outputs: set[int] = set()
    for key in keys:
        output_keys = [key(t) for t in output_tokens]
        for i, token in enumerate(source_tokens):
            if i in matched:
                continue
            wanted = key(token)
            candidates = [
                j for j, k in enumerate(output_keys)
                if j not in used_outputs and k == wanted
            ]
            if not candidates:
                continue
            j = min(candidates, key=lambda j: (abs(i - j), j))
            matched[i] = j
            used_outputs.add(j)
    return Alignment(matched.items())


def load_alignment(data, source_len: int, output_len: int) -> Alignment:
    """Parse Pharaoh-format alignment text: one 0-based ``i-j`` pair per line.

    Duplicate source indices are rejected; out-of-range indices on either
    side raise RangeError.  Blank lines are ignored.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"alignment file is not UTF-8: {exc}") from exc
    pairs: list[tuple[int, int]] = []
    seen_sources: set[int] = set()
    for lineno, line in enumerate(data.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        for field in line.split():
            src_text, sep, out_text = field.partition("-")
            if not sep:
                raise ParseError(f"expected 'i-j', got {field!r}", line=lineno)
            try:
                src, out = int(src_text), int(out_text)
            except ValueError:
                raise ParseError(
                    f"expected integer pair, got {field!r}", line=lineno
                ) from None
            if not 0 <= src < source_len:
                raise RangeError(
                    f"line {lineno}: source index {src} out of range "
                    f"0..{source_len - 1}")
            if not 0 <= out < output_len:
                raise RangeError(
                    f"line {lineno}: output index {out} out of range "
                    f"0..{output_len - 1}")
            if src in seen_sources:
                raise DuplicateSource(
                    f"line {lineno}: source index {src} aligned twice")
            seen_sources.add(src)
            pairs.append((src, out))
    return Alignment(pairs)
