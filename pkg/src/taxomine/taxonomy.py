"""Hypernym pairs and the assembled taxonomy, plus its file format.

A taxonomy is a flat list of (hyponym, hypernym) pairs over catalog ids.
It is a directed graph, not a tree: a term may keep several hypernyms and
cycles are permitted (downstream evaluation reports them, nothing removes
them).  Each pair records which techniques produced it — suffix, prefix,
co-occurrence — and, for co-occurrence pairs, the hypernym's document
frequency as a score.

On disk (.taxo): one `hyponym<TAB>hypernym` surface pair per line, sorted;
with provenance enabled, a third column with the comma-joined techniques
and a fourth with the score ("-" when unset).  The same format doubles as
the gold-standard format (first two columns only).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import InputError, InternalError
from .terms import TermCatalog

log = logging.getLogger(__name__)

PROV_SUFFIX = "suffix"
PROV_PREFIX = "prefix"
PROV_COOC = "cooc"
PROVENANCES = (PROV_SUFFIX, PROV_PREFIX, PROV_COOC)

_PROV_ORDER = {name: i for i, name in enumerate(PROVENANCES)}


def order_provenances(names) -> tuple[str, ...]:
    """Canonical (suffix, prefix, cooc) ordering, validated."""
    unique = set(names)
    for name in unique:
        if name not in _PROV_ORDER:
            raise InputError(f"unknown provenance {name!r}")
    return tuple(sorted(unique, key=_PROV_ORDER.__getitem__))


@dataclass(frozen=True)
class HypernymPair:
    hypo_id: int
    hyper_id: int
    provenances: tuple[str, ...]
    score: int | None = None


@dataclass
class Taxonomy:
    pairs: list[HypernymPair]
    root_id: int

    def __post_init__(self):
        seen = set()
        for pair in self.pairs:
            if pair.hypo_id == pair.hyper_id:
                raise InternalError(f"self-loop on term id {pair.hypo_id}")
            key = (pair.hypo_id, pair.hyper_id)
            if key in seen:
                raise InternalError(f"duplicate pair {key}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def edges(self) -> list[tuple[int, int]]:
        return [(p.hypo_id, p.hyper_id) for p in self.pairs]


@dataclass(frozen=True)
class TaxoLine:
    """One parsed .taxo line: lowercased surfaces plus optional metadata."""

    hypo: str
    hyper: str
    provenances: tuple[str, ...] = ()
    score: int | None = None


def save_taxonomy(
    taxo: Taxonomy, catalog: TermCatalog, path, with_provenance: bool = False
) -> None:
    rows = []
    for pair in taxo.pairs:
        hypo = catalog[pair.hypo_id]
        hyper = catalog[pair.hyper_id]
        rows.append((hypo.surface_lower, hyper.surface_lower, pair))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for hypo_surface, hyper_surface, pair in rows:
            if with_provenance:
                prov = ",".join(pair.provenances)
                score = "-" if pair.score is None else str(pair.score)
                fh.write(f"{hypo_surface}\t{hyper_surface}\t{prov}\t{score}\n")
            else:
                fh.write(f"{hypo_surface}\t{hyper_surface}\n")


def load_taxo_lines(path) -> list[TaxoLine]:
    """Parse a .taxo file (2- or 4-column) into lowercased TaxoLines."""
    lines: list[TaxoLine] = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read taxonomy file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2 or not fields[0].strip() or not fields[1].strip():
                log.warning("%s line %d: malformed line, skipping", path, lineno)
                continue
            hypo = fields[0].strip().lower()
            hyper = fields[1].strip().lower()
            provenances: tuple[str, ...] = ()
            score = None
            if len(fields) >= 3 and fields[2].strip():
                provenances = order_provenances(
                    p.strip() for p in fields[2].split(",") if p.strip()
                )
            if len(fields) >= 4 and fields[3].strip() not in ("", "-"):
                try:
                    score = int(fields[3])
                except ValueError:
                    raise InputError(
                        f"{path} line {lineno}: bad score {fields[3]!r}"
                    ) from None
            lines.append(TaxoLine(hypo, hyper, provenances, score))
    return lines
