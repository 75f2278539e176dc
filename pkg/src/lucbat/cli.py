"""Command-line front end.

Subcommands:

    score       template-score poems (one record per quatrain)
    filter      keep quatrains scoring at least a threshold
    creativity  verse-overlap creativity of generated poems vs a corpus
    report      histogram a stream of scores
    quatrains   split poems into quatrains, optionally seeded-shuffle
    losscheck   finite-difference verification of the semantic loss head

Exit status: 0 success, 1 input/validation problem, 2 internal error.
All randomness is controlled by --seed; fixed inputs and seed give
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .corpus import (
    build_verse_index,
    corpus_from_text,
    filter_by_score,
    ingest,
    split_and_shuffle,
    split_into_quatrains,
    write_corpus,
)
from .creativity import creativity_score
from .rules import RuleTable, default_rule_table, load_rule_table
from .scoring import (
    EmptyInput,
    annotate_stanza,
    histogram,
    report_record,
    score_stanza,
    segment_stanza,
    split_quatrains,
)
from .semloss import gradient_check
from .syllable import LucBatError

USAGE_ERROR = 1
INTERNAL_ERROR = 2


@dataclass(frozen=True)
class RunConfig:
    """One invocation: a command plus its raw arguments."""

    command: str
    arguments: tuple[str, ...] = ()


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _parse_weights(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected wR,wT, got {text!r}")
    w_rhyme, w_tone = (float(p) for p in parts)
    if w_rhyme <= 0 or w_tone <= 0:
        raise argparse.ArgumentTypeError("weights must be positive")
    return w_rhyme, w_tone


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lucbat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lucbat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="template-score poems")
    p_score.add_argument("input", help="poem file, blank-line separated ('-' for stdin)")
    p_score.add_argument("--rules", help="near-rhyme table file (default: built-in)")
    p_score.add_argument("--format", choices=("text", "jsonl"), default="text")
    p_score.add_argument("--weights", type=_parse_weights, default=(1.0, 1.0),
                         metavar="wR,wT", help="penalty weights (default 1.0,1.0)")
    p_score.add_argument("--jobs", type=int, default=1, help="parallel workers")

    p_filter = sub.add_parser("filter", help="drop quatrains below a score threshold")
    p_filter.add_argument("input", help="quatrain file")
    p_filter.add_argument("--min-score", type=float, required=True)
    p_filter.add_argument("--out", required=True, help="output corpus file")
    p_filter.add_argument("--stats", help="write stats JSON here (default: stdout)")
    p_filter.add_argument("--rules", help="near-rhyme table file")

    p_creat = sub.add_parser("creativity", help="verse-overlap creativity score")
    p_creat.add_argument("--generated", required=True, help="generated poem file")
    p_creat.add_argument("--corpus", required=True, help="training corpus file")
    p_creat.add_argument("--format", choices=("text", "jsonl"), default="text")

    p_report = sub.add_parser("report", help="histogram a stream of scores")
    p_report.add_argument("input", help="scores: one float per line, or jsonl "
                                        "records with a 'score' field ('-' for stdin)")
    p_report.add_argument("--bins", type=float, default=10.0, help="bin width")
    p_report.add_argument("--format", choices=("text", "jsonl"), default="text")

    p_quat = sub.add_parser("quatrains", help="split poems into quatrains")
    p_quat.add_argument("input", help="poem file")
    p_quat.add_argument("--out", required=True, help="output quatrain file")
    p_quat.add_argument("--shuffle", action="store_true", help="shuffle output")
    p_quat.add_argument("--seed", type=int, help="shuffle seed (implies --shuffle)")

    p_loss = sub.add_parser("losscheck", help="gradient-check the loss head")
    p_loss.add_argument("--seed", type=int, default=0)
    p_loss.add_argument("--dmodel", type=int, default=4)
    p_loss.add_argument("--dhidden", type=int, default=3)
    p_loss.add_argument("--vocab", type=int, default=7)
    p_loss.add_argument("--len", type=int, default=6, dest="max_len",
                        help="max tokens per verse pair")
    p_loss.add_argument("--stanzas", type=int, default=2)
    return parser


def _load_table(path: Optional[str]) -> RuleTable:
    return load_rule_table(path) if path else default_rule_table()


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _emit(record: dict) -> None:
    print(json.dumps(record, ensure_ascii=False, sort_keys=True))


def _cmd_score(args) -> int:
    if args.jobs < 1:
        print("lucbat score: error: --jobs must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    table = _load_table(args.rules)
    w_rhyme, w_tone = args.weights
    if args.input == "-":
        corpus = corpus_from_text(_read_text("-"), source="stdin")
    else:
        corpus = ingest([args.input])

    def score_one(poem):
        try:
            quatrains = split_quatrains(poem.text)
            results = []
            for index, quatrain in enumerate(quatrains, start=1):
                stanza = segment_stanza(quatrain)
                report = score_stanza(stanza, table, w_rhyme=w_rhyme, w_tone=w_tone)
                results.append((index, stanza, report))
            return poem, results, None
        except LucBatError as exc:
            return poem, [], exc

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(score_one, corpus.poems))
    else:
        outcomes = [score_one(poem) for poem in corpus.poems]

    failures = 0
    for poem, results, error in outcomes:
        if error is not None:
            failures += 1
            if args.format == "jsonl":
                _emit({"poem_id": poem.id, "error": str(error)})
            else:
                print(f"# {poem.id}: ERROR {error}")
            continue
        for index, stanza, report in results:
            if args.format == "jsonl":
                _emit(report_record(poem.id, index, report))
            else:
                print(f"# {poem.id} stanza {index}")
                print(annotate_stanza(stanza, report))
                print()
    return USAGE_ERROR if failures else 0


def _cmd_filter(args) -> int:
    table = _load_table(args.rules)
    corpus = ingest([args.input])
    kept, stats = filter_by_score(corpus, table, args.min_score)
    write_corpus(kept, args.out)
    payload = {
        "kept_count": stats.kept_count,
        "dropped_count": stats.dropped_count,
        "mean_score_kept": stats.mean_score_kept,
        "dropped": [{"poem_id": pid, "reason": reason} for pid, reason in stats.dropped],
    }
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2)
    if args.stats:
        with open(args.stats, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_creativity(args) -> int:
    generated = ingest([args.generated])
    index = build_verse_index(ingest([args.corpus]))
    report = creativity_score(generated, index)
    if args.format == "jsonl":
        for novelty in report.per_poem:
            _emit(
                {
                    "poem_id": novelty.poem_id,
                    "copied_verses": novelty.copied_verses,
                    "total_verses": novelty.total_verses,
                    "copied_ratio": novelty.copied_ratio,
                }
            )
        _emit({"creativity": report.score, "poems": len(report.per_poem)})
    else:
        for novelty in report.per_poem:
            print(
                f"{novelty.poem_id}: {novelty.copied_verses}/{novelty.total_verses} "
                f"verses copied"
            )
        print(f"C = {report.score}")
    return 0


def _read_scores(text: str) -> list[float]:
    scores = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        value = None
        try:
            value = float(line)
        except ValueError:
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LucBatError(f"unreadable score line: {line[:60]!r}") from exc
            if isinstance(record, dict) and "score" in record:
                value = float(record["score"])
        if value is None:
            continue
        if not math.isfinite(value):
            raise LucBatError(f"non-finite score: {line[:60]!r}")
        scores.append(value)
    return scores


def _cmd_report(args) -> int:
    scores = _read_scores(_read_text(args.input))
    if not scores:
        raise EmptyInput("no scores found in input")
    hist = histogram(scores, bin_width=args.bins)
    if args.format == "jsonl":
        for lo, hi, count in hist.bins:
            _emit({"bin_lo": lo, "bin_hi": hi, "count": count})
        _emit(
            {
                "below": hist.below,
                "above": hist.above,
                "n": len(scores),
                "mean": sum(scores) / len(scores),
            }
        )
    else:
        peak = max(count for _, _, count in hist.bins)
        for lo, hi, count in hist.bins:
            closing = "]" if hi >= hist.hi else ")"
            bar = "#" * (round(40 * count / peak) if peak else 0)
            print(f"[{lo:6.1f}, {hi:6.1f}{closing} {count:6d} {bar}")
        if hist.below or hist.above:
            print(f"out of range: below={hist.below} above={hist.above}")
        print(f"n={len(scores)} mean={sum(scores) / len(scores):.3f}")
    return 0


def _cmd_quatrains(args) -> int:
    if args.shuffle and args.seed is None:
        print("lucbat quatrains: error: --shuffle requires --seed", file=sys.stderr)
        return USAGE_ERROR
    corpus = ingest([args.input])
    if args.seed is not None:
        quatrains, excluded = split_and_shuffle(corpus, args.seed)
    else:
        quatrains, excluded = split_into_quatrains(corpus)
    write_corpus(quatrains, args.out)
    for poem_id, reason in excluded:
        print(f"excluded {poem_id}: {reason}", file=sys.stderr)
    print(
        f"wrote {len(quatrains.poems)} quatrains to {args.out}"
        + (f" (excluded {len(excluded)})" if excluded else ""),
        file=sys.stderr,
    )
    return 0


def _cmd_losscheck(args) -> int:
    flags = {"dmodel": "dmodel", "dhidden": "dhidden", "vocab": "vocab",
             "max_len": "len", "stanzas": "stanzas"}
    for name, flag in flags.items():
        if getattr(args, name) < 1:
            print(f"lucbat losscheck: error: --{flag} must be >= 1", file=sys.stderr)
            return USAGE_ERROR
    report = gradient_check(
        seed=args.seed,
        d_model=args.dmodel,
        d_hidden=args.dhidden,
        vocab=args.vocab,
        max_len=args.max_len,
        n_stanzas=args.stanzas,
    )
    verdict = "PASS" if report.passed else "FAIL"
    print(
        f"gradient check seed={report.seed} d_model={report.d_model} "
        f"d_hidden={report.d_hidden} parameters={report.n_parameters}"
    )
    print(f"ce={report.ce:.6f} mse={report.mse:.6f} total={report.ce + report.mse:.6f}")
    print(
        f"max relative error {report.max_relative_error:.3e} "
        f"(tolerance {report.tolerance:.0e}): {verdict}"
    )
    return 0 if report.passed else USAGE_ERROR


_COMMANDS = {
    "score": _cmd_score,
    "filter": _cmd_filter,
    "creativity": _cmd_creativity,
    "report": _cmd_report,
    "quatrains": _cmd_quatrains,
    "losscheck": _cmd_losscheck,
}


def run(config: RunConfig) -> int:
    """Programmatic entry: dispatch a :class:`RunConfig` through ``main``."""
    return main([config.command, *config.arguments])


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except LucBatError as exc:
        print(f"lucbat {args.command}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"lucbat {args.command}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # pragma: no cover - defensive
        print(f"lucbat {args.command}: internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
