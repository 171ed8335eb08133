"""Command line interface.

Subcommands mirror the pipeline stages — ingest, stats, extract, eval —
plus `pipeline`, which chains them over a working directory and skips
stages whose outputs are already newer than their inputs.  Everything is
deterministic: identical inputs and flags give byte-identical artifacts,
whatever the worker count.

Exit codes: 0 success, 1 usage, 2 input error, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import logging
import multiprocessing
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .cooc import (
    CorpusStats,
    TermMatcher,
    accumulate_document,
    drop_nested,
    load_stats,
    merge,
    save_stats,
)
from .errors import InputError, InternalError
from .evaluate import render_text, render_tsv, load_gold, score
from .ingest import SentenceFile, open_dump, tokenize_document, write_sentence_file
from .normalize import load_stopwords, normalize_tokens, normalizer_fingerprint
from .select import (
    RANK_COOC,
    RANK_DOC_FREQ,
    SCOPE_ALL,
    SCOPE_UNCOVERED,
    SelectionConfig,
    build_taxonomy,
)
from .subterm import SUFFIX_CHAR, SUFFIX_TOKEN_BOUNDARY, SubtermConfig
from .taxonomy import load_taxo_lines, save_taxonomy
from .terms import load_terms

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


# ---------------------------------------------------------------------------
# Stage implementations, shared by the standalone subcommands and `pipeline`.


def run_ingest(dump_path, out_path, stops, encoding: str = "utf-8"):
    reader = open_dump(dump_path, encoding=encoding)

    def normalized_docs():
        for raw in reader:
            doc = tokenize_document(raw)
            yield doc.title, (normalize_tokens(s, stops) for s in doc.sentences)

    n_docs, n_sentences = write_sentence_file(
        out_path, normalized_docs(), normalizer_fingerprint(stops)
    )
    if reader.warnings:
        log.warning("%s: %d unterminated region(s) at end of dump",
                    dump_path, reader.warnings)
    return n_docs, n_sentences


_WORKER_ENV = None


def _init_stats_worker(matcher, sentences_path, no_nested, n_workers):
    global _WORKER_ENV
    _WORKER_ENV = (matcher, sentences_path, no_nested, n_workers)


def _stats_shard(worker_id: int) -> CorpusStats:
    """Accumulate stats over the documents assigned to one worker.

    Workers share nothing: each streams the sentence file itself and takes
    every n-th document, so the merged result cannot depend on scheduling.
    """
    matcher, sentences_path, no_nested, n_workers = _WORKER_ENV
    stats = CorpusStats(matcher.catalog_fingerprint)
    find = matcher.find
    for idx, (_title, fields) in enumerate(SentenceFile(sentences_path).docs_raw()):
        if n_workers > 1 and idx % n_workers != worker_id:
            continue
        per_sentence = []
        for sent in fields:
            hits = find(sent.split())
            if no_nested and hits:
                hits = drop_nested(hits, matcher)
            per_sentence.append(hits)
        accumulate_document(stats, per_sentence)
    return stats


def run_stats(sentences_path, matcher, workers: int = 1, no_nested: bool = False):
    if workers <= 1:
        _init_stats_worker(matcher, sentences_path, no_nested, 1)
        return _stats_shard(0)
    methods = multiprocessing.get_all_start_methods()
    ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
    with ctx.Pool(
        workers,
        initializer=_init_stats_worker,
        initargs=(matcher, sentences_path, no_nested, workers),
    ) as pool:
        shards = pool.map(_stats_shard, range(workers))
    result = shards[0]
    for shard in shards[1:]:
        result = merge(result, shard)
    return result


def run_extract(stats_path, catalog, out_path, cfg, with_provenance: bool):
    stats = load_stats(stats_path)
    if stats.catalog_fingerprint != catalog.fingerprint():
        log.warning(
            "%s was built against a different catalog (%s, current %s); "
            "terms unknown to it count as zero",
            stats_path, stats.catalog_fingerprint, catalog.fingerprint(),
        )
    taxo = build_taxonomy(catalog, stats, cfg)
    save_taxonomy(taxo, catalog, out_path, with_provenance=with_provenance)
    return taxo


def run_eval(taxo_path, gold_path, report_path=None):
    lines = load_taxo_lines(taxo_path)
    if not lines:
        raise InputError(f"{taxo_path}: no taxonomy pairs to evaluate")
    unattributed = sum(1 for line in lines if not line.provenances)
    if unattributed:
        raise InputError(
            f"{taxo_path}: {unattributed} pair(s) lack provenance; "
            "re-run extract with --with-provenance"
        )
    report = score(lines, load_gold(gold_path))
    if report_path is not None:
        with open(report_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_tsv(report))
    return report


# ---------------------------------------------------------------------------
# Subcommands.


def _load_catalog(args, stops):
    domain = args.domain or Path(args.terms).stem
    return load_terms(args.terms, domain, args.root, stops)


def _selection_config(args) -> SelectionConfig:
    return SelectionConfig(
        k=args.top_k,
        cooc_scope=args.cooc_scope,
        attach_orphans=not args.no_attach_orphans,
        rank_by=args.rank_by,
        subterm=SubtermConfig(
            suffix_mode=args.suffix_mode, connector_len=args.connector_len
        ),
    )


def cmd_ingest(args) -> int:
    stops = load_stopwords(args.stopwords)
    n_docs, n_sentences = run_ingest(args.dump, args.out, stops, args.encoding)
    print(f"ingest: {n_docs} documents, {n_sentences} sentences -> {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    stops = load_stopwords(args.stopwords)
    catalog = _load_catalog(args, stops)
    sentences = SentenceFile(args.sentences)
    expected = normalizer_fingerprint(stops)
    if sentences.normalizer != expected:
        raise InputError(
            f"{args.sentences} was normalized as {sentences.normalizer!r} but "
            f"current settings give {expected!r}; re-run ingest with the same "
            "stopword list"
        )
    matcher = TermMatcher(catalog)
    started = time.perf_counter()
    stats = run_stats(args.sentences, matcher, args.workers, args.no_nested)
    elapsed = time.perf_counter() - started
    save_stats(stats, args.out)
    mb = os.path.getsize(args.sentences) / 1e6
    print(
        f"stats: {stats.total_docs} documents, {stats.total_sentences} sentences, "
        f"{len(stats.sent_cooc)} co-occurring pairs -> {args.out}"
    )
    print(f"stats: {mb:.1f} MB in {elapsed:.2f}s ({mb / max(elapsed, 1e-9):.1f} MB/s)")
    return EXIT_OK


def cmd_extract(args) -> int:
    stops = load_stopwords(args.stopwords)
    catalog = _load_catalog(args, stops)
    taxo = run_extract(
        args.stats, catalog, args.out, _selection_config(args), args.with_provenance
    )
    print(f"extract: {len(taxo)} pairs -> {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    report = run_eval(args.taxo, args.gold, args.report)
    sys.stdout.write(render_text(report))
    if args.report:
        print(f"eval: report -> {args.report}")
    return EXIT_OK


@dataclass
class PipelineConfig:
    dump: Path
    terms: Path
    workdir: Path
    domain: str
    root: str
    gold: Path | None = None
    stopwords: Path | None = None

    @property
    def sentences_path(self) -> Path:
        return self.workdir / f"{self.dump.stem}.sentences.tsv"

    @property
    def stats_path(self) -> Path:
        return self.workdir / f"{self.dump.stem}.{self.domain}.stats.tsv"

    @property
    def taxo_path(self) -> Path:
        return self.workdir / f"{self.domain}.taxo"

    @property
    def report_path(self) -> Path:
        return self.workdir / f"{self.domain}.report.tsv"

    def validate(self):
        for path in (self.dump, self.terms, self.gold, self.stopwords):
            if path is not None and not path.exists():
                raise InputError(f"input path does not exist: {path}")


def _needs_build(output: Path, inputs, force: bool) -> bool:
    if force or not output.exists():
        return True
    newest = max(os.path.getmtime(p) for p in inputs)
    return os.path.getmtime(output) < newest


def cmd_pipeline(args) -> int:
    cfg = PipelineConfig(
        dump=Path(args.dump),
        terms=Path(args.terms),
        workdir=Path(args.workdir),
        domain=args.domain or Path(args.terms).stem,
        root=args.root,
        gold=Path(args.gold) if args.gold else None,
        stopwords=Path(args.stopwords) if args.stopwords else None,
    )
    cfg.validate()
    cfg.workdir.mkdir(parents=True, exist_ok=True)
    stops = load_stopwords(cfg.stopwords)
    stops_inputs = [cfg.stopwords] if cfg.stopwords else []

    if _needs_build(cfg.sentences_path, [cfg.dump, *stops_inputs], args.force):
        n_docs, n_sentences = run_ingest(
            cfg.dump, cfg.sentences_path, stops, args.encoding
        )
        print(f"[ingest] {n_docs} documents, {n_sentences} sentences "
              f"-> {cfg.sentences_path}")
    else:
        print(f"[ingest] up to date: {cfg.sentences_path}")

    catalog = load_terms(cfg.terms, cfg.domain, cfg.root, stops)
    if _needs_build(
        cfg.stats_path, [cfg.sentences_path, cfg.terms, *stops_inputs], args.force
    ):
        sentences = SentenceFile(cfg.sentences_path)
        expected = normalizer_fingerprint(stops)
        if sentences.normalizer != expected:
            raise InputError(
                f"{cfg.sentences_path} was normalized as {sentences.normalizer!r}, "
                f"current settings give {expected!r}; use --force to re-ingest"
            )
        matcher = TermMatcher(catalog)
        started = time.perf_counter()
        stats = run_stats(cfg.sentences_path, matcher, args.workers, args.no_nested)
        elapsed = time.perf_counter() - started
        save_stats(stats, cfg.stats_path)
        mb = os.path.getsize(cfg.sentences_path) / 1e6
        print(f"[stats] {stats.total_docs} documents, {stats.total_sentences} "
              f"sentences in {elapsed:.2f}s ({mb / max(elapsed, 1e-9):.1f} MB/s) "
              f"-> {cfg.stats_path}")
    else:
        print(f"[stats] up to date: {cfg.stats_path}")

    if _needs_build(
        cfg.taxo_path, [cfg.stats_path, cfg.terms, *stops_inputs], args.force
    ):
        # Provenance columns are always written here so the eval stage (and
        # anyone poking at the artifact) can attribute pairs to techniques.
        taxo = run_extract(
            cfg.stats_path, catalog, cfg.taxo_path, _selection_config(args), True
        )
        print(f"[extract] {len(taxo)} pairs -> {cfg.taxo_path}")
    else:
        print(f"[extract] up to date: {cfg.taxo_path}")

    if cfg.gold is not None:
        if _needs_build(cfg.report_path, [cfg.taxo_path, cfg.gold], args.force):
            report = run_eval(cfg.taxo_path, cfg.gold, cfg.report_path)
            sys.stdout.write(render_text(report))
            print(f"[eval] report -> {cfg.report_path}")
        else:
            print(f"[eval] up to date: {cfg.report_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly.


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="taxomine",
        description="Hypernym extraction from a term list and a text corpus: "
        "subterm heuristics plus sentence co-occurrence statistics.",
    )
    parser.add_argument(
        "--log-level",
        default="warning",
        choices=["debug", "info", "warning", "error"],
        help="logging verbosity (default: warning)",
    )

    stops_p = _Parser(add_help=False)
    stops_p.add_argument(
        "--stopwords", metavar="PATH", default=None,
        help="stopword list, one word per line (default: bundled list)",
    )

    terms_p = _Parser(add_help=False)
    terms_p.add_argument(
        "--terms", metavar="PATH", required=True,
        help="domain term list: `id<TAB>term` or bare `term` lines",
    )
    terms_p.add_argument(
        "--domain", metavar="NAME", default=None,
        help="domain name (default: terms file stem)",
    )
    terms_p.add_argument(
        "--root", metavar="TERM", required=True,
        help="domain root term; appended to the catalog if absent",
    )

    select_p = _Parser(add_help=False)
    select_p.add_argument(
        "-k", "--top-k", type=_positive_int, default=3, metavar="N",
        help="candidate hypernyms kept per term (default: 3)",
    )
    select_p.add_argument(
        "--cooc-scope", choices=[SCOPE_ALL, SCOPE_UNCOVERED], default=SCOPE_ALL,
        help="apply the co-occurrence rule to all terms, or only to terms "
        "the subterm heuristics left uncovered (default: all)",
    )
    select_p.add_argument(
        "--no-attach-orphans", action="store_true",
        help="do not attach hypernym-less terms to the root",
    )
    select_p.add_argument(
        "--rank-by", choices=[RANK_DOC_FREQ, RANK_COOC], default=RANK_DOC_FREQ,
        help="candidate ranking: document frequency (default) or "
        "co-occurrence count",
    )
    select_p.add_argument(
        "--suffix-mode", choices=[SUFFIX_CHAR, SUFFIX_TOKEN_BOUNDARY],
        default=SUFFIX_CHAR,
        help="suffix heuristic granularity (default: char)",
    )
    select_p.add_argument(
        "--connector-len", type=_positive_int, default=2, metavar="N",
        help="length of the joining token for the prefix heuristic "
        "(default: 2)",
    )

    workers_p = _Parser(add_help=False)
    workers_p.add_argument(
        "--workers", type=_positive_int, default=1, metavar="N",
        help="parallel workers for the stats pass (default: 1)",
    )
    workers_p.add_argument(
        "--no-nested", action="store_true",
        help="ignore term matches nested inside a longer match",
    )

    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser(
        "ingest", parents=[stops_p],
        help="dump -> normalized sentence file",
        description="Extract documents from a wiki-style dump, segment, "
        "tokenize, stem, mask stopwords, and write one sentence per line.",
    )
    p.add_argument("--dump", metavar="PATH", required=True, help="input dump file")
    p.add_argument("--out", metavar="PATH", required=True, help="output sentence TSV")
    p.add_argument("--encoding", default="utf-8", help="dump encoding (default: utf-8)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser(
        "stats", parents=[terms_p, stops_p, workers_p],
        help="sentence file + terms -> co-occurrence statistics",
        description="Recognize catalog terms in the normalized sentences and "
        "accumulate document/sentence frequencies and pair co-occurrence.",
    )
    p.add_argument("--sentences", metavar="PATH", required=True,
                   help="sentence TSV from `ingest`")
    p.add_argument("--out", metavar="PATH", required=True, help="output stats file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser(
        "extract", parents=[terms_p, stops_p, select_p],
        help="stats + terms -> hypernym pairs",
        description="Combine subterm heuristics with co-occurrence candidate "
        "selection into a .taxo pair file.",
    )
    p.add_argument("--stats", metavar="PATH", required=True,
                   help="stats file from `stats`")
    p.add_argument("--out", metavar="PATH", required=True, help="output .taxo file")
    p.add_argument("--with-provenance", action="store_true",
                   help="append technique and score columns to each pair")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser(
        "eval", parents=[],
        help="pairs vs gold standard -> recall report",
        description="Score a taxonomy against a gold pair file and report "
        "per-technique recall and cycles.",
    )
    p.add_argument("--taxo", metavar="PATH", required=True,
                   help=".taxo file with provenance columns")
    p.add_argument("--gold", metavar="PATH", required=True,
                   help="gold standard pair file (hyponym<TAB>hypernym)")
    p.add_argument("--report", metavar="PATH", default=None,
                   help="also write the report as TSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "pipeline", parents=[terms_p, stops_p, select_p, workers_p],
        help="run ingest -> stats -> extract (-> eval) with stage skipping",
        description="Chain all stages over a working directory, skipping "
        "stages whose outputs are newer than their inputs.",
    )
    p.add_argument("--dump", metavar="PATH", required=True, help="input dump file")
    p.add_argument("--workdir", metavar="DIR", default=".",
                   help="directory for stage artifacts (default: .)")
    p.add_argument("--gold", metavar="PATH", default=None,
                   help="gold pairs; enables the eval stage")
    p.add_argument("--encoding", default="utf-8", help="dump encoding (default: utf-8)")
    p.add_argument("--force", action="store_true", help="rebuild every stage")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except InputError as exc:
        print(f"taxomine: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalError as exc:
        print(f"taxomine: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"taxomine: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
