"""Benchmark the stats pass over an existing sentence file.

Builds the term matcher, streams the sentence file with the requested
worker count, and reports wall time and MB/s.  Useful for checking the
matcher's short-circuit behaviour on corpora with realistic out-of-
vocabulary rates.

Usage:
    python scripts/bench_stats.py --sentences work/dump.sentences.tsv \
        --terms terms.txt --root varnel --workers 1
"""

from __future__ import annotations

import argparse
import os
import time

from taxomine.cli import run_stats
from taxomine.cooc import TermMatcher
from taxomine.normalize import load_stopwords
from taxomine.terms import load_terms


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sentences", required=True)
    parser.add_argument("--terms", required=True)
    parser.add_argument("--root", required=True)
    parser.add_argument("--domain", default=None)
    parser.add_argument("--stopwords", default=None)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    stops = load_stopwords(args.stopwords)
    domain = args.domain or os.path.splitext(os.path.basename(args.terms))[0]
    catalog = load_terms(args.terms, domain, args.root, stops)
    matcher = TermMatcher(catalog)
    mb = os.path.getsize(args.sentences) / 1e6

    best = None
    for run in range(args.repeat):
        started = time.perf_counter()
        stats = run_stats(args.sentences, matcher, args.workers)
        elapsed = time.perf_counter() - started
        best = elapsed if best is None else min(best, elapsed)
        print(
            f"run {run + 1}: {elapsed:.2f}s  {mb / elapsed:.1f} MB/s  "
            f"({stats.total_docs} docs, {stats.total_sentences} sentences, "
            f"{len(stats.sent_cooc)} pairs)"
        )
    print(f"best: {best:.2f}s  {mb / best:.1f} MB/s  ({args.workers} workers)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
