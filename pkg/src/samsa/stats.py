"""Human-rating aggregation and agreement/correlation statistics.

Raters answer four questions per pair, each on {1: no, 2: maybe, 3: yes}:

    qa  is the output grammatical?
    qb  does the output add meaning?
    qc  does the output remove meaning?
    qd  is the output simpler?

Aggregation averages qa into a grammaticality score G, inverts and
averages qb/qc into a meaning-preservation score P, averages qd into a
simplicity score S, and takes AvgHuman = (G + P + S) / 3.

The correlation and agreement statistics are implemented directly from
their definitions (average-rank Spearman, product-moment Pearson,
quadratically weighted kappa, exact-match agreement), with two-sided
p-values from the t approximation and, for tiny samples, an exact
permutation alternative.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from scipy.special import stdtr

from .errors import DomainError, ParseError

_ANSWERS = (1, 2, 3)


@dataclass(frozen=True)
class RatingRecord:
    """One annotator's four answers for one sentence pair."""

    pair_id: str
    annotator_id: str
    qa: int
    qb: int
    qc: int
    qd: int
    system: str | None = None

    def answer(self, question: str) -> int:
        if question not in ("qa", "qb", "qc", "qd"):
            raise DomainError(f"unknown question {question!r}")
        return getattr(self, question)


@dataclass(frozen=True)
class HumanScores:
    """Aggregated per-pair human scores, each in [1, 3]."""

    g: float
    p: float
    s: float
    avg_human: float


def _check_answer(value, where: str) -> int:
    if value not in _ANSWERS:
        raise DomainError(f"{where}: answer {value!r} not in {{1,2,3}}")
    return value


def aggregate_ratings(records) -> HumanScores:
    """Fold one pair's rating records into G/P/S and their average.

    qb (meaning added) and qc (meaning removed) are inverted (1↔3) so
    that higher is better, then averaged together into P.
    """
    records = list(records)
    if not records:
        raise DomainError("need at least one rating record")
    for r in records:
        for q in ("qa", "qb", "qc", "qd"):
            _check_answer(getattr(r, q), f"pair {r.pair_id!r} {q}")
    n = len(records)
    g = Fraction(sum(r.qa for r in records), n)
    non_addition = Fraction(sum(4 - r.qb for r in records), n)
    non_removal = Fraction(sum(4 - r.qc for r in records), n)
    p = (non_addition + non_removal) / 2
    s = Fraction(sum(r.qd for r in records), n)
    avg = (g + p + s) / 3
    return HumanScores(g=float(g), p=float(p), s=float(s), avg_human=float(avg))


# ---------------------------------------------------------------------------
# correlation


class StatResult(NamedTuple):
    statistic: float
    p_value: float


_NAN_RESULT = StatResult(float("nan"), float("nan"))


def _as_floats(values, name: str) -> list[float]:
    out = []
    for v in values:
        try:
            out.append(float(v))
        except (TypeError, ValueError):
            raise DomainError(f"{name} contains non-numeric value {v!r}") from None
    return out


def _check_paired(x, y, minimum: int):
    if len(x) != len(y):
        raise DomainError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < minimum:
        raise DomainError(f"need at least {minimum} observations, got {len(x)}")


def _average_ranks(values: list[float]) -> list[float]:
    """Ranks 1..n, with tied values sharing the average of their ranks."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def _pearson_r(x: list[float], y: list[float]) -> float | None:
    """Product-moment correlation, or None when either side is constant."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = sum(d * d for d in dx)
    syy = sum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        return None
    sxy = sum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _t_p_value(r: float, n: int) -> float:
    if abs(r) >= 1.0:
        return 0.0
    df = n - 2
    t = r * math.sqrt(df / (1.0 - r * r))
    return float(2.0 * stdtr(df, -abs(t)))


def _permutation_p(x: list[float], y: list[float], statistic) -> float:
    n = len(x)
    if n > 8:
        raise DomainError(
            f"exact permutation p-value supported only for n <= 8, got {n}")
    observed = statistic(x, y)
    if observed is None:
        return float("nan")
    hits = 0
    count = 0
    for perm in itertools.permutations(y):
        value = statistic(x, list(perm))
        count += 1
        if value is not None and abs(value) >= abs(observed) - 1e-12:
            hits += 1
    return hits / count


def pearson(x, y, exact_p: bool = False) -> StatResult:
    """Pearson product-moment correlation with a two-sided p-value.

    Constant input on either side leaves the coefficient undefined and
    yields (nan, nan).  With ``exact_p`` the p-value is the exact
    permutation probability (n ≤ 8 only) instead of the t approximation.
    """
    x = _as_floats(x, "x")
    y = _as_floats(y, "y")
    _check_paired(x, y, 3)
    r = _pearson_r(x, y)
    if r is None:
        return _NAN_RESULT
    if exact_p:
        return StatResult(r, _permutation_p(x, y, _pearson_r))
    return StatResult(r, _t_p_value(r, len(x)))


def spearman(x, y, exact_p: bool = False) -> StatResult:
    """Tie-corrected Spearman rank correlation with a two-sided p-value.

    Computed as the Pearson correlation of average ranks, which handles
    ties exactly.  Constant series yield (nan, nan).
    """
    x = _as_floats(x, "x")
    y = _as_floats(y, "y")
    _check_paired(x, y, 3)

    def rho(a, b):
        return _pearson_r(_average_ranks(a), _average_ranks(b))

    r = rho(x, y)
    if r is None:
        return _NAN_RESULT
    if exact_p:
        return StatResult(r, _permutation_p(x, y, rho))
    return StatResult(r, _t_p_value(r, len(x)))


# ---------------------------------------------------------------------------
# agreement


def quadratic_weighted_kappa(a, b, categories=_ANSWERS) -> float:
    """Cohen's kappa with quadratic disagreement weights w_ij = (i - j)².

    ``categories`` fixes the ordinal scale (and hence the weights) even
    when some categories are unused.  Expected disagreement comes from
    the product of the two raters' marginals.
    """
    a = list(a)
    b = list(b)
    if not a:
        raise DomainError("need at least one paired observation")
    if len(a) != len(b):
        raise DomainError(f"length mismatch: {len(a)} vs {len(b)}")
    categories = list(categories)
    if len(set(categories)) != len(categories) or len(categories) < 2:
        raise DomainError("categories must be at least two distinct values")
    index = {c: i for i, c in enumerate(categories)}
    k = len(categories)
    observed = [[0] * k for _ in range(k)]
    for va, vb in zip(a, b):
        if va not in index or vb not in index:
            raise DomainError(f"value outside categories: {va!r}/{vb!r}")
        observed[index[va]][index[vb]] += 1
    n = len(a)
    row = [sum(observed[i]) for i in range(k)]
    col = [sum(observed[i][j] for i in range(k)) for j in range(k)]

    def weight(i, j):
        return (categories[i] - categories[j]) ** 2

    disagreement = Fraction(0)
    expected = Fraction(0)
    for i in range(k):
        for j in range(k):
            w = weight(i, j)
            disagreement += w * observed[i][j]
            expected += Fraction(w * row[i] * col[j], n)
    if expected == 0:
        # both raters constant and identical: no possible disagreement
        return float("nan")
    return float(1 - disagreement / expected)


def absolute_agreement(a, b) -> float:
    """Fraction of positions where the two raters answered identically."""
    a = list(a)
    b = list(b)
    if not a:
        raise DomainError("need at least one paired observation")
    if len(a) != len(b):
        raise DomainError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(1 for va, vb in zip(a, b) if va == vb) / len(a)


def pairwise_mean(series_by_rater, statistic) -> float:
    """Mean of a two-rater statistic over all unordered rater pairs."""
    series = list(series_by_rater)
    if len(series) < 2:
        raise DomainError("need at least 2 raters")
    lengths = {len(s) for s in series}
    if len(lengths) != 1:
        raise DomainError("all rater series must have the same length")
    values = [
        statistic(sa, sb) for sa, sb in itertools.combinations(series, 2)
    ]
    return sum(values) / len(values)


# ---------------------------------------------------------------------------
# CSV interfaces


def read_ratings(path) -> list[RatingRecord]:
    """Read a ratings CSV: header pair_id,annotator_id,qa,qb,qc,qd.

    An optional ``system`` column is carried through for per-system
    breakdowns.  Answers must be integers in {1,2,3}.
    """
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames
            required = ["pair_id", "annotator_id", "qa", "qb", "qc", "qd"]
            if header is None or any(c not in header for c in required):
                raise ParseError(
                    f"ratings file needs columns {','.join(required)}")
            records = []
            for lineno, row in enumerate(reader, start=2):
                answers = {}
                for q in ("qa", "qb", "qc", "qd"):
                    raw = (row.get(q) or "").strip()
                    try:
                        value = int(raw)
                    except ValueError:
                        raise ParseError(
                            f"{q} must be an integer, got {raw!r}",
                            line=lineno) from None
                    answers[q] = _check_answer(value, f"line {lineno} {q}")
                records.append(RatingRecord(
                    pair_id=(row.get("pair_id") or "").strip(),
                    annotator_id=(row.get("annotator_id") or "").strip(),
                    system=(row.get("system") or "").strip() or None,
                    **answers,
                ))
    except OSError as exc:
        raise ParseError(f"cannot read ratings file: {exc}") from exc
    if not records:
        raise ParseError("ratings file has no data rows")
    return records


def read_scores(path) -> dict[str, float]:
    """Read a scores CSV with header ``id,score`` into an ordered mapping."""
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or not {
                    "id", "score"}.issubset(reader.fieldnames):
                raise ParseError("scores file needs columns id,score")
            out: dict[str, float] = {}
            for lineno, row in enumerate(reader, start=2):
                key = (row.get("id") or "").strip()
                if not key:
                    raise ParseError("empty id", line=lineno)
                if key in out:
                    raise ParseError(f"duplicate id {key!r}", line=lineno)
                raw = (row.get("score") or "").strip()
                try:
                    out[key] = float(raw)
                except ValueError:
                    raise ParseError(
                        f"score must be numeric, got {raw!r}",
                        line=lineno) from None
    except OSError as exc:
        raise ParseError(f"cannot read scores file: {exc}") from exc
    if not out:
        raise ParseError("scores file has no data rows")
    return out
