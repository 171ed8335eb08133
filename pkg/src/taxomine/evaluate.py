"""Scoring a taxonomy against a gold standard, plus cycle detection.

Recall is reported per technique and for their union, as found / gold-size.
Percentages are rounded half-up for display while the exact rationals are
kept alongside (and emitted in the TSV report), since integer percentages
alone cannot round-trip.  Cycle detection lists the strongly connected
components of the pair graph — the taxonomy keeps whatever cycles the
techniques produce, so the report is where they become visible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .taxonomy import PROVENANCES, TaxoLine

log = logging.getLogger(__name__)

UNION = "union"


@dataclass(frozen=True)
class GoldStandard:
    pairs: frozenset

    def __len__(self) -> int:
        return len(self.pairs)


def load_gold(path) -> GoldStandard:
    """`hyponym<TAB>hypernym` lines, lowercased and deduplicated."""
    pairs = set()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read gold file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2 or not fields[0].strip() or not fields[1].strip():
                log.warning("%s line %d: malformed gold line, skipping", path, lineno)
                continue
            hypo = fields[0].strip().lower()
            hyper = fields[1].strip().lower()
            if hypo == hyper:
                log.warning("%s line %d: self-loop in gold, skipping", path, lineno)
                continue
            pairs.add((hypo, hyper))
    if not pairs:
        raise InputError(f"gold file {path} contains no usable pairs")
    return GoldStandard(frozenset(pairs))


def round_half_up_pct(found: int, total: int) -> int:
    """Integer percentage with exact half-up rounding (no float detour)."""
    if total <= 0:
        return 0
    return (200 * found + total) // (2 * total)


@dataclass
class EvalReport:
    gold_size: int
    found_by_technique: dict
    union_found: int
    produced_counts: dict
    recall_pct: dict
    recall_exact: dict
    cycles: list = field(default_factory=list)


def detect_cycles(edges) -> list:
    """Strongly connected components of size ≥ 2, plus self-loop nodes.

    Tarjan's algorithm with an explicit stack, so deep chains cannot hit
    the recursion limit.  Each component comes back sorted; the component
    list is sorted by first member; empty result means the graph is acyclic.
    """
    adj: dict = {}
    order: list = []
    known = set()
    self_loops = set()
    for u, v in edges:
        if u == v:
            self_loops.add(u)
        for n in (u, v):
            if n not in known:
                known.add(n)
                order.append(n)
        adj.setdefault(u, []).append(v)

    index: dict = {}
    low: dict = {}
    on_stack = set()
    stack: list = []
    counter = 0
    components = []

    for root in order:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(adj.get(root, ())))]
        while work:
            node, children = work[-1]
            descended = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(adj.get(child, ()))))
                    descended = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1 or node in self_loops:
                    components.append(sorted(component))

    components.sort(key=lambda c: c[0])
    return components


def score(lines, gold: GoldStandard) -> EvalReport:
    """Per-technique and union gold hits over parsed taxonomy lines."""
    found = {tech: set() for tech in PROVENANCES}
    produced = {tech: 0 for tech in PROVENANCES}
    union_hits = set()
    for line in lines:
        pair = (line.hypo, line.hyper)
        for tech in line.provenances:
            produced[tech] += 1
        if pair in gold.pairs:
            union_hits.add(pair)
            for tech in line.provenances:
                found[tech].add(pair)

    gold_size = len(gold)
    found_counts = {tech: len(found[tech]) for tech in PROVENANCES}
    recall_pct = {}
    recall_exact = {}
    for tech in PROVENANCES:
        recall_pct[tech] = round_half_up_pct(found_counts[tech], gold_size)
        recall_exact[tech] = Fraction(100 * found_counts[tech], gold_size)
    recall_pct[UNION] = round_half_up_pct(len(union_hits), gold_size)
    recall_exact[UNION] = Fraction(100 * len(union_hits), gold_size)

    return EvalReport(
        gold_size=gold_size,
        found_by_technique=found_counts,
        union_found=len(union_hits),
        produced_counts=produced,
        recall_pct=recall_pct,
        recall_exact=recall_exact,
        cycles=detect_cycles((line.hypo, line.hyper) for line in lines),
    )


def render_text(report: EvalReport) -> str:
    rows = [("technique", "produced", "gold hits", "recall")]
    for tech in PROVENANCES:
        rows.append(
            (
                tech,
                str(report.produced_counts[tech]),
                str(report.found_by_technique[tech]),
                f"{report.recall_pct[tech]}%",
            )
        )
    rows.append(("union", "-", str(report.union_found), f"{report.recall_pct[UNION]}%"))
    widths = [max(len(row[col]) for row in rows) for col in range(4)]
    out = [f"gold standard pairs: {report.gold_size}"]
    for row in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    if report.cycles:
        out.append(f"cycles: {len(report.cycles)}")
        for component in report.cycles[:20]:
            out.append("  cycle: " + " -> ".join(str(n) for n in component))
        if len(report.cycles) > 20:
            out.append(f"  ... and {len(report.cycles) - 20} more")
    else:
        out.append("cycles: none")
    return "\n".join(out) + "\n"


def render_tsv(report: EvalReport) -> str:
    lines = [f"gold_size\t{report.gold_size}"]
    for tech in PROVENANCES:
        lines.append(f"produced\t{tech}\t{report.produced_counts[tech]}")
    for tech in PROVENANCES:
        lines.append(f"found\t{tech}\t{report.found_by_technique[tech]}")
    lines.append(f"found\t{UNION}\t{report.union_found}")
    for tech in (*PROVENANCES, UNION):
        exact = report.recall_exact[tech]
        lines.append(f"recall_pct\t{tech}\t{report.recall_pct[tech]}")
        lines.append(
            f"recall_exact\t{tech}\t{exact.numerator}/{exact.denominator}"
        )
    for component in report.cycles:
        lines.append("cycle\t" + ",".join(str(n) for n in component))
    return "".join(line + "\n" for line in lines)
