"""Candidate hypernym selection from co-occurrence statistics.

A term's candidate hypernyms are the terms it shares a sentence with that
appear in strictly more documents; the top k (default 3) by document
frequency are kept.  These co-occurrence pairs are merged with the
subterm-heuristic pairs into the final taxonomy; terms left without any
hypernym are optionally attached straight to the domain root.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .cooc import CorpusStats
from .subterm import SubtermConfig, subterm_pairs
from .taxonomy import PROV_COOC, HypernymPair, Taxonomy, order_provenances
from .terms import TermCatalog

log = logging.getLogger(__name__)

SCOPE_ALL = "all"
SCOPE_UNCOVERED = "uncovered"

RANK_DOC_FREQ = "doc-freq"
RANK_COOC = "cooc"


@dataclass(frozen=True)
class SelectionConfig:
    k: int = 3
    cooc_scope: str = SCOPE_ALL
    attach_orphans: bool = True
    rank_by: str = RANK_DOC_FREQ
    subterm: SubtermConfig = field(default_factory=SubtermConfig)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.cooc_scope not in (SCOPE_ALL, SCOPE_UNCOVERED):
            raise ValueError(f"unknown cooc_scope {self.cooc_scope!r}")
        if self.rank_by not in (RANK_DOC_FREQ, RANK_COOC):
            raise ValueError(f"unknown rank_by {self.rank_by!r}")


def cand_hypernyms(term_id: int, stats: CorpusStats) -> set[int]:
    """Sentence co-occurrers of the term that sit in strictly more documents."""
    own_df = stats.doc_freq.get(term_id, 0)
    return {
        j for j in stats.partners(term_id) if stats.doc_freq.get(j, 0) > own_df
    }


def top_k_hypernyms(
    term_id: int,
    stats: CorpusStats,
    catalog: TermCatalog,
    k: int = 3,
    rank_by: str = RANK_DOC_FREQ,
) -> list[int]:
    """The k best candidates, ranked by document frequency (default).

    Ties break by ascending lowercased surface so runs are reproducible.
    ``rank_by="cooc"`` ranks by co-occurrence count with the term instead.
    """
    candidates = cand_hypernyms(term_id, stats)
    if rank_by == RANK_COOC:
        partners = stats.partners(term_id)
        key = lambda j: (-partners[j], catalog[j].surface_lower)
    else:
        key = lambda j: (-stats.doc_freq.get(j, 0), catalog[j].surface_lower)
    return sorted(candidates, key=key)[:k]


def build_taxonomy(
    catalog: TermCatalog, stats: CorpusStats, cfg: SelectionConfig
) -> Taxonomy:
    """Subterm pairs ∪ top-k co-occurrence pairs, orphans rooted.

    A (hypo, hyper) pair produced by several techniques is kept once with
    the union of provenances; co-occurrence pairs carry the hypernym's
    document frequency as score.  The root never receives a hypernym.
    """
    merged: dict[tuple[int, int], tuple[set[str], int | None]] = {}

    def add(hypo_id: int, hyper_id: int, prov: str, score: int | None):
        provs, old_score = merged.setdefault((hypo_id, hyper_id), (set(), None))
        provs.add(prov)
        if score is not None:
            merged[(hypo_id, hyper_id)] = (provs, score)

    root_id = catalog.root_id
    for pair in subterm_pairs(catalog, cfg.subterm):
        if pair.hypo_id == root_id:
            continue
        add(pair.hypo_id, pair.hyper_id, pair.provenances[0], None)

    covered = {hypo for hypo, _ in merged}
    for term in sorted(catalog, key=lambda t: t.id):
        if term.id == root_id:
            continue
        if cfg.cooc_scope == SCOPE_UNCOVERED and term.id in covered:
            continue
        for hyper_id in top_k_hypernyms(
            term.id, stats, catalog, k=cfg.k, rank_by=cfg.rank_by
        ):
            add(term.id, hyper_id, PROV_COOC, stats.doc_freq.get(hyper_id, 0))

    if cfg.attach_orphans:
        with_hypernym = {hypo for hypo, _ in merged}
        for term in sorted(catalog, key=lambda t: t.id):
            if term.id != root_id and term.id not in with_hypernym:
                add(term.id, root_id, PROV_COOC, 0)

    pairs = [
        HypernymPair(hypo, hyper, order_provenances(provs), score)
        for (hypo, hyper), (provs, score) in merged.items()
    ]
    pairs.sort(
        key=lambda p: (
            catalog[p.hypo_id].surface_lower,
            catalog[p.hyper_id].surface_lower,
        )
    )
    return Taxonomy(pairs=pairs, root_id=root_id)
