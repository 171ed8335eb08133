"""Term recognition and corpus co-occurrence statistics.

Matching uses an Aho–Corasick automaton over *token* sequences rather than
characters: every distinct token appearing in any term's normalized form
gets a small integer symbol, and any corpus token outside that vocabulary
resets the scan — the common case, which keeps the pass fast on large
corpora.  Placeholders ("_") are ordinary symbols, so any masked stopword
aligns with any stopword slot in a term.

Counts follow four ledgers: document frequency (once per document),
term frequency (every occurrence), sentence frequency (once per sentence),
and sentence co-occurrence (once per sentence per unordered pair).
"""

from __future__ import annotations

import hashlib
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InputError
from .terms import TermCatalog

STATS_VERSION = "1"


class TermMatcher:
    """Immutable multi-pattern matcher over normalized token sequences."""

    def __init__(self, catalog: TermCatalog):
        self.catalog_fingerprint = catalog.fingerprint()
        self._length: dict[int, int] = {}
        patterns: dict[tuple[str, ...], list[int]] = {}
        for term in catalog:
            if not term.matchable:
                continue
            self._length[term.id] = len(term.norm_tokens)
            patterns.setdefault(term.norm_tokens, []).append(term.id)

        vocab: dict[str, int] = {}
        for seq in patterns:
            for tok in seq:
                if tok not in vocab:
                    vocab[tok] = len(vocab)
        self._vocab = vocab

        # Trie construction, then BFS to wire failure links and fold the
        # suffix-pattern outputs into each node.
        goto: list[dict[int, int]] = [{}]
        out: list[list[tuple[int, int]]] = [[]]
        for seq, ids in sorted(patterns.items()):
            state = 0
            for tok in seq:
                sym = vocab[tok]
                nxt = goto[state].get(sym)
                if nxt is None:
                    nxt = len(goto)
                    goto[state][sym] = nxt
                    goto.append({})
                    out.append([])
                state = nxt
            out[state].extend((tid, len(seq)) for tid in sorted(ids))

        fail = [0] * len(goto)
        queue = deque(goto[0].values())
        while queue:
            state = queue.popleft()
            for sym, nxt in goto[state].items():
                queue.append(nxt)
                f = fail[state]
                while f and sym not in goto[f]:
                    f = fail[f]
                fail[nxt] = goto[f].get(sym, 0)
                out[nxt].extend(out[fail[nxt]])
        self._goto = goto
        self._fail = fail
        self._out = out

    def pattern_length(self, term_id: int) -> int:
        return self._length[term_id]

    def find(self, tokens) -> list[tuple[int, int]]:
        """All (term_id, start) matches, nested and overlapping included."""
        vocab_get = self._vocab.get
        goto = self._goto
        fail = self._fail
        out = self._out
        state = 0
        hits: list[tuple[int, int]] = []
        for pos, tok in enumerate(tokens):
            sym = vocab_get(tok)
            if sym is None:
                state = 0
                continue
            while state and sym not in goto[state]:
                state = fail[state]
            state = goto[state].get(sym, 0)
            if out[state]:
                end = pos + 1
                for tid, length in out[state]:
                    hits.append((tid, end - length))
        hits.sort()
        return hits


def find_occurrences(sentence, matcher: TermMatcher) -> list[tuple[int, int]]:
    return matcher.find(sentence)


def drop_nested(
    hits: list[tuple[int, int]], matcher: TermMatcher
) -> list[tuple[int, int]]:
    """Remove matches whose span lies strictly inside another match's span."""
    if len(hits) < 2:
        return list(hits)
    spans = [(start, start + matcher.pattern_length(tid)) for tid, start in hits]
    kept = []
    for idx, (tid, start) in enumerate(hits):
        s, e = spans[idx]
        contained = any(
            (os <= s and e <= oe) and (os, oe) != (s, e)
            for j, (os, oe) in enumerate(spans)
            if j != idx
        )
        if not contained:
            kept.append((tid, start))
    return kept


def pair_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass
class CorpusStats:
    catalog_fingerprint: str
    total_docs: int = 0
    total_sentences: int = 0
    doc_freq: Counter = field(default_factory=Counter)
    term_freq: Counter = field(default_factory=Counter)
    sent_freq: Counter = field(default_factory=Counter)
    sent_cooc: Counter = field(default_factory=Counter)
    _adj: dict | None = field(default=None, init=False, repr=False, compare=False)

    def cooc(self, i: int, j: int) -> int:
        return self.sent_cooc.get(pair_key(i, j), 0)

    def partners(self, term_id: int) -> dict[int, int]:
        """Co-occurrence counts keyed by the other term of each pair."""
        if self._adj is None:
            adj: dict[int, dict[int, int]] = {}
            for (i, j), count in self.sent_cooc.items():
                adj.setdefault(i, {})[j] = count
                adj.setdefault(j, {})[i] = count
            self._adj = adj
        return self._adj.get(term_id, {})


def accumulate_document(stats: CorpusStats, sentence_hits) -> CorpusStats:
    """Fold one document's per-sentence occurrence lists into stats.

    Mutates and returns ``stats``.  Each element of ``sentence_hits`` is a
    find_occurrences result; sentence-level counts are binary per sentence
    while term_freq counts every occurrence.
    """
    stats._adj = None
    stats.total_docs += 1
    term_freq = stats.term_freq
    sent_freq = stats.sent_freq
    sent_cooc = stats.sent_cooc
    doc_terms: set[int] = set()
    n_sentences = 0
    for hits in sentence_hits:
        n_sentences += 1
        if not hits:
            continue
        present = set()
        for tid, _ in hits:
            term_freq[tid] += 1
            present.add(tid)
        for tid in present:
            sent_freq[tid] += 1
        if len(present) > 1:
            for pair in combinations(sorted(present), 2):
                sent_cooc[pair] += 1
        doc_terms |= present
    stats.total_sentences += n_sentences
    for tid in doc_terms:
        stats.doc_freq[tid] += 1
    return stats


def merge(a: CorpusStats, b: CorpusStats) -> CorpusStats:
    """Pointwise sum; requires both sides built against the same catalog."""
    if a.catalog_fingerprint != b.catalog_fingerprint:
        raise InputError(
            "cannot merge stats built against different catalogs "
            f"({a.catalog_fingerprint} vs {b.catalog_fingerprint})"
        )
    return CorpusStats(
        catalog_fingerprint=a.catalog_fingerprint,
        total_docs=a.total_docs + b.total_docs,
        total_sentences=a.total_sentences + b.total_sentences,
        doc_freq=a.doc_freq + b.doc_freq,
        term_freq=a.term_freq + b.term_freq,
        sent_freq=a.sent_freq + b.sent_freq,
        sent_cooc=a.sent_cooc + b.sent_cooc,
    )


def _render_stats(stats: CorpusStats) -> str:
    lines = [
        f"#version\t{STATS_VERSION}",
        f"#catalog-fingerprint\t{stats.catalog_fingerprint}",
        f"#total_docs\t{stats.total_docs}",
        f"#total_sentences\t{stats.total_sentences}",
    ]
    ids = sorted(set(stats.doc_freq) | set(stats.term_freq) | set(stats.sent_freq))
    for tid in ids:
        lines.append(
            f"T\t{tid}\t{stats.doc_freq[tid]}\t{stats.term_freq[tid]}"
            f"\t{stats.sent_freq[tid]}"
        )
    for (i, j) in sorted(stats.sent_cooc):
        lines.append(f"P\t{i}\t{j}\t{stats.sent_cooc[(i, j)]}")
    return "".join(line + "\n" for line in lines)


def save_stats(stats: CorpusStats, path) -> None:
    body = _render_stats(stats)
    digest = hashlib.sha256(body.encode()).hexdigest()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(body)
        fh.write(f"#checksum\t{digest}\n")


def load_stats(path) -> CorpusStats:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read stats file {path}: {exc}") from exc

    marker = "#checksum\t"
    cut = text.rfind(marker)
    if cut < 0 or not text.endswith("\n"):
        raise InputError(f"stats file {path} is truncated (no checksum)")
    body, trailer = text[:cut], text[cut:]
    digest = trailer[len(marker):].strip()
    if hashlib.sha256(body.encode()).hexdigest() != digest:
        raise InputError(f"stats file {path} failed checksum verification")

    header: dict[str, str] = {}
    stats = None
    for lineno, line in enumerate(body.splitlines(), start=1):
        if not line:
            continue
        fields = line.split("\t")
        tag = fields[0]
        if tag.startswith("#"):
            if len(fields) != 2:
                raise InputError(f"{path} line {lineno}: malformed header")
            header[tag[1:]] = fields[1]
            continue
        if stats is None:
            if header.get("version") != STATS_VERSION:
                raise InputError(
                    f"{path}: unsupported stats version {header.get('version')!r}"
                )
            stats = CorpusStats(
                catalog_fingerprint=header.get("catalog-fingerprint", ""),
                total_docs=int(header.get("total_docs", "0")),
                total_sentences=int(header.get("total_sentences", "0")),
            )
        if tag == "T":
            if len(fields) != 5:
                raise InputError(f"{path} line {lineno}: malformed T row")
            tid, df, tf, sf = (int(x) for x in fields[1:])
            if df:
                stats.doc_freq[tid] = df
            if tf:
                stats.term_freq[tid] = tf
            if sf:
                stats.sent_freq[tid] = sf
        elif tag == "P":
            if len(fields) != 4:
                raise InputError(f"{path} line {lineno}: malformed P row")
            i, j, count = (int(x) for x in fields[1:])
            if not i < j:
                raise InputError(f"{path} line {lineno}: pair row not ordered")
            stats.sent_cooc[(i, j)] = count
        else:
            raise InputError(f"{path} line {lineno}: unknown row tag {tag!r}")

    if stats is None:
        # Header-only file: legitimate for an empty corpus.
        if header.get("version") != STATS_VERSION:
            raise InputError(
                f"{path}: unsupported stats version {header.get('version')!r}"
            )
        stats = CorpusStats(
            catalog_fingerprint=header.get("catalog-fingerprint", ""),
            total_docs=int(header.get("total_docs", "0")),
            total_sentences=int(header.get("total_sentences", "0")),
        )
    return stats
