"""Subterm heuristics: suffix containment and prefix-plus-connector.

Both heuristics look at *surface* strings, not stemmed forms.  The suffix
rule is character-level by default — deliberately naive, so "licorice"
comes out as a kind of "rice"; a token-boundary mode is available for the
stricter reading.  The prefix rule fires when one term extends another by
a token of exactly the connector length ("helmet of ..." via "of",
"caterpillar d9" via "d9") and therefore misses single-letter extensions
like "fortimicin b".
"""

from __future__ import annotations

from dataclasses import dataclass

from .taxonomy import PROV_PREFIX, PROV_SUFFIX, HypernymPair
from .terms import Term, TermCatalog

SUFFIX_CHAR = "char"
SUFFIX_TOKEN_BOUNDARY = "token-boundary"


@dataclass(frozen=True)
class SubtermConfig:
    suffix_mode: str = SUFFIX_CHAR
    connector_len: int = 2

    def __post_init__(self):
        if self.suffix_mode not in (SUFFIX_CHAR, SUFFIX_TOKEN_BOUNDARY):
            raise ValueError(f"unknown suffix_mode {self.suffix_mode!r}")
        if self.connector_len < 1:
            raise ValueError("connector_len must be >= 1")


def suffix_hypernym(hypo: Term, hyper: Term, cfg: SubtermConfig) -> bool:
    """True when hyper's surface is a strict (char-level) suffix of hypo's."""
    if hypo.id == hyper.id:
        return False
    long, short = hypo.surface_lower, hyper.surface_lower
    if len(short) >= len(long) or not long.endswith(short):
        return False
    if cfg.suffix_mode == SUFFIX_TOKEN_BOUNDARY:
        return long[-len(short) - 1] == " "
    return True


def prefix_hypernym(hypo: Term, hyper: Term, cfg: SubtermConfig) -> bool:
    """True when hypo = hyper's tokens + a token of exactly connector_len."""
    if hypo.id == hyper.id:
        return False
    long, short = hypo.surface_tokens, hyper.surface_tokens
    if not short or len(long) <= len(short):
        return False
    return long[: len(short)] == short and len(long[len(short)]) == cfg.connector_len


def subterm_pairs(catalog: TermCatalog, cfg: SubtermConfig) -> list[HypernymPair]:
    """All heuristic pairs over ordered term pairs, suffix checked first.

    Output is deduplicated by construction and sorted by (hypo id, hyper id).
    """
    pairs = []
    terms = list(catalog)
    for a in terms:
        for b in terms:
            if a.id == b.id:
                continue
            if suffix_hypernym(a, b, cfg):
                pairs.append(HypernymPair(a.id, b.id, (PROV_SUFFIX,)))
            elif prefix_hypernym(a, b, cfg):
                pairs.append(HypernymPair(a.id, b.id, (PROV_PREFIX,)))
    pairs.sort(key=lambda p: (p.hypo_id, p.hyper_id))
    return pairs
