"""Command-line front-end: batch scoring, correlation, and agreement.

Three subcommands:

``samsa eval MANIFEST``
    Score (passage, output[, alignment]) triples listed in a CSV manifest
    with header ``passage,output,alignment``; paths are resolved relative
    to the manifest's directory.  Passage files may be JSON or standard
    XML (sniffed by content).  Alignment files are Pharaoh ``i-j`` pairs
    over (source tokens, tokenized output); when absent the built-in
    lexical aligner is used.

``samsa correlate A B``
    Correlate two ``id,score`` CSV files on their shared ids.

``samsa agreement RATINGS``
    Inter-annotator agreement (exact-match and quadratically weighted
    kappa, averaged over annotator pairs) from a ratings CSV.

Reports go to stdout and are byte-identical across repeat runs.  Exit
codes: 0 success, 1 pair data errors under ``--on-error fail``, 2 usage
and manifest errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import stats
from .align import load_alignment
from .errors import SamsaError
from .ingest import parse_scene_json, parse_ucca_xml
from .metric import PairFailure, SamsaScore, score_corpus
from .textprep import DEFAULT_ABBREVIATIONS, load_abbreviations, split_sentences

_EXIT_OK = 0
_EXIT_PAIR_ERROR = 1
_EXIT_USAGE = 2


class _ManifestError(Exception):
    """A problem with the manifest itself (not with one pair's data)."""


def load_passage_file(path: Path):
    """Parse a passage file, choosing the format by content sniffing."""
    data = path.read_bytes()
    if data.lstrip().startswith(b"<"):
        return parse_ucca_xml(data)
    return parse_scene_json(data)


def _read_manifest(path: Path) -> list[dict[str, str]]:
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or not {
                    "passage", "output"}.issubset(reader.fieldnames):
                raise _ManifestError(
                    f"{path}: manifest needs columns passage,output[,alignment]")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                passage = (row.get("passage") or "").strip()
                output = (row.get("output") or "").strip()
                if not passage or not output:
                    raise _ManifestError(
                        f"{path}:{lineno}: passage and output are required")
                rows.append({
                    "passage": passage,
                    "output": output,
                    "alignment": (row.get("alignment") or "").strip(),
                })
    except OSError as exc:
        raise _ManifestError(f"cannot read manifest: {exc}") from exc
    if not rows:
        raise _ManifestError(f"{path}: manifest has no rows")
    return rows


def _format_float(value: float) -> str:
    return f"{value:.6f}"


def cmd_eval(args) -> int:
    manifest_path = Path(args.manifest)
    try:
        rows = _read_manifest(manifest_path)
    except _ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE

    base = manifest_path.parent
    resolved = []
    for row in rows:
        entry = {
            "passage": base / row["passage"],
            "output": base / row["output"],
            "alignment": base / row["alignment"] if row["alignment"] else None,
        }
        for key in ("passage", "output", "alignment"):
            p = entry[key]
            if p is not None and not p.is_file():
                print(f"error: {key} file not found: {p}", file=sys.stderr)
                return _EXIT_USAGE
        resolved.append((row, entry))

    abbreviations = DEFAULT_ABBREVIATIONS
    if args.abbrev:
        try:
            abbreviations = load_abbreviations(args.abbrev)
        except SamsaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return _EXIT_USAGE

    # Assemble pairs; content-level failures become per-pair errors.
    assembled = []          # (manifest row index, triple) for scorable pairs
    failures: dict[int, PairFailure] = {}
    for i, (_, entry) in enumerate(resolved):
        try:
            passage = load_passage_file(entry["passage"])
            text = entry["output"].read_text(encoding="utf-8")
            alignment = None
            if entry["alignment"] is not None:
                segmented = split_sentences(text, abbreviations)
                alignment = load_alignment(
                    entry["alignment"].read_bytes(),
                    len(passage.tokens),
                    len(segmented.tokens),
                )
        except SamsaError as exc:
            if args.on_error == "fail":
                print(f"error: pair {i}: {exc}", file=sys.stderr)
                return _EXIT_PAIR_ERROR
            failures[i] = PairFailure(i, type(exc).__name__, str(exc))
            continue
        except (OSError, UnicodeDecodeError) as exc:
            print(f"error: pair {i}: {exc}", file=sys.stderr)
            return _EXIT_USAGE
        assembled.append((i, (passage, text, alignment)))

    scored: dict[int, SamsaScore | PairFailure] = {}
    if assembled:
        try:
            corpus = score_corpus(
                [triple for _, triple in assembled],
                on_error=args.on_error,
                abbreviations=abbreviations,
            )
        except SamsaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return _EXIT_PAIR_ERROR
        for (i, _), outcome in zip(assembled, corpus.per_pair):
            scored[i] = outcome
        corpus_samsa = corpus.samsa
        corpus_abl = corpus.samsa_abl
        pairs_scored = corpus.pairs_scored
    else:
        corpus_samsa = corpus_abl = 0.0
        pairs_scored = 0

    outcomes: list[SamsaScore | PairFailure] = []
    for i in range(len(resolved)):
        if i in failures:
            outcomes.append(failures[i])
        else:
            outcome = scored[i]
            if isinstance(outcome, PairFailure):
                outcome = PairFailure(i, outcome.error, outcome.message)
            outcomes.append(outcome)
    exclusions = sum(1 for o in outcomes if isinstance(o, PairFailure))

    if args.format == "json":
        pairs_report = []
        for (row, _), outcome in zip(resolved, outcomes):
            entry = {"passage": row["passage"], "output": row["output"]}
            if isinstance(outcome, PairFailure):
                entry["status"] = "error"
                entry["error"] = outcome.error
                entry["message"] = outcome.message
            else:
                entry["status"] = "ok"
                entry["samsa"] = outcome.samsa
                entry["samsa_abl"] = outcome.samsa_abl
                entry["n_inp"] = outcome.n_inp
                entry["n_out"] = outcome.n_out
                entry["mapping"] = (
                    list(outcome.mapping) if outcome.mapping is not None
                    else None)
                if args.per_scene:
                    entry["scenes"] = [
                        {
                            "scene": t.scene,
                            "sentence": t.sentence,
                            "mr_term": t.mr_term,
                            "participant_terms": list(t.participant_terms),
                        }
                        for t in outcome.per_scene
                    ]
            pairs_report.append(entry)
        report = {
            "corpus": {
                "samsa": corpus_samsa,
                "samsa_abl": corpus_abl,
                "pairs_scored": pairs_scored,
                "exclusions": exclusions,
            },
            "pairs": pairs_report,
        }
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow([
            "pair", "passage", "output", "status",
            "samsa", "samsa_abl", "n_inp", "n_out", "error",
        ])
        for i, ((row, _), outcome) in enumerate(zip(resolved, outcomes)):
            if isinstance(outcome, PairFailure):
                writer.writerow([
                    i, row["passage"], row["output"], "error",
                    "", "", "", "", outcome.error,
                ])
            else:
                writer.writerow([
                    i, row["passage"], row["output"], "ok",
                    _format_float(outcome.samsa),
                    _format_float(outcome.samsa_abl),
                    outcome.n_inp, outcome.n_out, "",
                ])
        writer.writerow([
            "corpus", "", "", "summary",
            _format_float(corpus_samsa), _format_float(corpus_abl),
            pairs_scored, exclusions, "",
        ])
    return _EXIT_OK


def cmd_correlate(args) -> int:
    try:
        a = stats.read_scores(args.file_a)
        b = stats.read_scores(args.file_b)
    except SamsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    shared = [key for key in a if key in b]
    try:
        if len(shared) < 3:
            raise SamsaError(
                f"need at least 3 shared ids, found {len(shared)}")
        method = stats.spearman if args.method == "spearman" else stats.pearson
        result = method(
            [a[k] for k in shared], [b[k] for k in shared],
            exact_p=args.exact_p)
    except SamsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_PAIR_ERROR
    print(json.dumps({
        "method": args.method,
        "n": len(shared),
        "statistic": result.statistic,
        "p_value": result.p_value,
    }, indent=2, sort_keys=True))
    return _EXIT_OK


def _agreement_block(records, questions):
    """Pairwise agreement/kappa per question over one record group."""
    by_annotator: dict[str, dict[str, stats.RatingRecord]] = {}
    for record in records:
        by_annotator.setdefault(record.annotator_id, {})[record.pair_id] = record
    if len(by_annotator) < 2:
        raise SamsaError("need >=2 annotators")
    annotators = sorted(by_annotator)
    shared = set.intersection(
        *(set(by_annotator[a]) for a in annotators))
    if not shared:
        raise SamsaError("annotators share no rated pairs")
    order = sorted(shared)
    block = {"annotators": annotators, "n_pairs": len(order), "questions": {}}
    for question in questions:
        series = [
            [by_annotator[a][pid].answer(question) for pid in order]
            for a in annotators
        ]
        block["questions"][question] = {
            "agreement": stats.pairwise_mean(series, stats.absolute_agreement),
            "kappa": stats.pairwise_mean(
                series, stats.quadratic_weighted_kappa),
        }
    return block


def cmd_agreement(args) -> int:
    try:
        records = stats.read_ratings(args.ratings)
    except SamsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    questions = (
        ["qa", "qb", "qc", "qd"] if args.question == "all"
        else [args.question])
    try:
        if args.by_system:
            systems = sorted({r.system or "" for r in records})
            if systems == [""]:
                raise SamsaError(
                    "--by-system needs a 'system' column in the ratings file")
            report = {"systems": {}}
            for system in systems:
                group = [r for r in records if (r.system or "") == system]
                report["systems"][system or "(none)"] = _agreement_block(
                    group, questions)
        else:
            report = _agreement_block(records, questions)
    except SamsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE

    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        blocks = (
            report["systems"].items() if args.by_system
            else [(None, report)])
        for name, block in blocks:
            if name is not None:
                print(f"system {name}")
            print(f"annotators: {', '.join(block['annotators'])}"
                  f"  pairs: {block['n_pairs']}")
            for question, cell in block["questions"].items():
                print(f"  {question}  agreement={cell['agreement']:.6f}"
                      f"  kappa={cell['kappa']:.6f}")
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="samsa",
        description="Structural evaluation of text simplification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "eval", help="score passage/output pairs from a manifest")
    p_eval.add_argument("manifest", help="CSV with columns passage,output[,alignment]")
    p_eval.add_argument("--format", choices=["json", "csv"], default="json")
    p_eval.add_argument(
        "--per-scene", action="store_true",
        help="include the per-scene term breakdown (json format only)")
    p_eval.add_argument("--on-error", choices=["skip", "fail"], default="skip")
    p_eval.add_argument("--abbrev", help="abbreviation list file (one per line)")
    p_eval.set_defaults(func=cmd_eval)

    p_corr = sub.add_parser(
        "correlate", help="correlate two id,score CSV files")
    p_corr.add_argument("file_a")
    p_corr.add_argument("file_b")
    p_corr.add_argument(
        "--method", choices=["spearman", "pearson"], default="spearman")
    p_corr.add_argument(
        "--exact-p", action="store_true", dest="exact_p",
        help="exact permutation p-value (n <= 8 only)")
    p_corr.set_defaults(func=cmd_correlate)

    p_agree = sub.add_parser(
        "agreement", help="inter-annotator agreement from a ratings CSV")
    p_agree.add_argument("ratings")
    p_agree.add_argument(
        "--question", choices=["qa", "qb", "qc", "qd", "all"], default="all")
    p_agree.add_argument(
        "--by-system", action="store_true",
        help="break the report down by the 'system' column")
    p_agree.add_argument("--format", choices=["text", "json"], default="text")
    p_agree.set_defaults(func=cmd_agreement)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "per_scene", False) and args.format != "json":
        parser.error("--per-scene requires --format json")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
