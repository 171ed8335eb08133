"""Acceptance suite: one check per shipped guarantee, one printed line each.

Each test exercises a whole behavior end to end — heuristic fidelity,
the worked selection example, oracle equivalence, evaluation arithmetic,
cycle detection, stemming fidelity, and pipeline determinism — and prints
a single PASS/FAIL line (bypassing capture) so a full run reads as a
checklist.  Budgets are asserted where the guarantee includes one; the
stats throughput target is soft and only reported.
"""

import random
import re
import subprocess
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

from taxomine.cooc import CorpusStats, TermMatcher, accumulate_document, merge, pair_key
from taxomine.evaluate import UNION, GoldStandard, detect_cycles, score
from taxomine.normalize import default_stopwords, normalize_tokens
from taxomine.porter import stem
from taxomine.select import cand_hypernyms, top_k_hypernyms
from taxomine.subterm import SubtermConfig, prefix_hypernym, suffix_hypernym
from taxomine.taxonomy import PROV_COOC, TaxoLine
from taxomine.terms import Term, from_surfaces

from oracles import random_mini_corpus, random_planted_graph, reachability_cycles, recount

DATA = Path(__file__).parent / "data"
SCRIPTS = Path(__file__).parent.parent / "scripts"


def report(capsys, name, ok, elapsed, note=""):
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({elapsed:.3f}s)"
    if note:
        line += f" -- {note}"
    with capsys.disabled():
        print(line, flush=True)


# 1 -------------------------------------------------------------------------


def test_1_subterm_heuristics(capsys, stops):
    cfg = SubtermConfig()

    def term(surface, id):
        return Term.make(id, surface, stops)

    cases = [
        (suffix_hypernym, "communications satellite", "satellite", True),
        (suffix_hypernym, "licorice", "rice", True),
        (prefix_hypernym, "helmet of coşofeneşti", "helmet", True),
        (prefix_hypernym, "caterpillar d9", "caterpillar", True),
        (prefix_hypernym, "fortimicin b", "fortimicin", False),
        (prefix_hypernym, "ginsenoside c-y", "ginsenoside", False),
    ]
    started = time.perf_counter()
    failures = [
        f"{hypo!r} -> {hyper!r} expected {want}"
        for check, hypo, hyper, want in cases
        if check(term(hypo, 1), term(hyper, 2), cfg) is not want
    ]
    elapsed = time.perf_counter() - started
    report(capsys, "1 subterm-heuristics", not failures, elapsed)
    assert not failures, failures
    assert elapsed < 1.0


# 2 -------------------------------------------------------------------------


def test_2_candidate_selection(capsys, make_catalog):
    doc_freq = {
        "biblical studies": 887,
        "theology": 21977,
        "history": 383927,
        "religion": 64044,
        "music": 412791,
    }
    cooc = {"theology": 215, "history": 111, "religion": 50, "music": 43}

    started = time.perf_counter()
    catalog = make_catalog(list(doc_freq), root="music")
    ids = {t.surface: t.id for t in catalog}
    stats = CorpusStats(catalog.fingerprint())
    stats.doc_freq = Counter({ids[s]: n for s, n in doc_freq.items()})
    for surface, n in cooc.items():
        stats.sent_cooc[pair_key(ids["biblical studies"], ids[surface])] = n

    candidates = cand_hypernyms(ids["biblical studies"], stats)
    top = top_k_hypernyms(ids["biblical studies"], stats, catalog, k=3)
    top_surfaces = [catalog[i].surface for i in top]
    elapsed = time.perf_counter() - started

    ok = candidates == {ids[s] for s in cooc} and top_surfaces == [
        "music", "history", "religion",
    ]
    report(capsys, "2 candidate-selection", ok, elapsed)
    assert candidates == {ids[s] for s in cooc}
    assert top_surfaces == ["music", "history", "religion"]
    assert elapsed < 1.0


# 3 -------------------------------------------------------------------------


def test_3_stats_oracle_equivalence(capsys, stops):
    rng = random.Random(86)
    started = time.perf_counter()
    mismatches = 0
    for _ in range(100):
        surfaces, docs = random_mini_corpus(rng, max_docs=200, max_terms=50)
        catalog = from_surfaces(surfaces, "d", surfaces[0], stops)
        matcher = TermMatcher(catalog)

        fast = CorpusStats(catalog.fingerprint())
        for _title, sentences in docs:
            accumulate_document(fast, [matcher.find(s) for s in sentences])
        if fast != recount(docs, catalog):
            mismatches += 1
            continue

        # merge laws on a random shard split of the same corpus
        n_shards = rng.randint(2, 5)
        shards = [CorpusStats(catalog.fingerprint()) for _ in range(n_shards)]
        for idx, (_title, sentences) in enumerate(docs):
            accumulate_document(
                shards[idx % n_shards], [matcher.find(s) for s in sentences]
            )
        forward = shards[0]
        for shard in shards[1:]:
            forward = merge(forward, shard)
        backward = shards[-1]
        for shard in reversed(shards[:-1]):
            backward = merge(shard, backward)
        identity = merge(fast, CorpusStats(catalog.fingerprint()))
        if not (forward == fast and backward == fast and identity == fast):
            mismatches += 1
    elapsed = time.perf_counter() - started

    report(capsys, "3 stats-oracle-equivalence", mismatches == 0, elapsed,
           f"{100 - mismatches}/100 corpora agree")
    assert mismatches == 0
    assert elapsed < 60.0


# 4 -------------------------------------------------------------------------


def test_4_evaluation_arithmetic(capsys):
    rows = [
        (644, 1387, 46),
        (184, 485, 38),
        (726, 1533, 47),
        (240, 441, 54),
        (2407, 24817, 10),
        (305, 615, 50),
        (822, 1587, 52),
        (209, 465, 45),
    ]
    started = time.perf_counter()
    failures = []
    for found, total, want_pct in rows:
        gold = GoldStandard(
            frozenset((f"term {i}", "root") for i in range(total))
        )
        lines = [
            TaxoLine(f"term {i}", "root", (PROV_COOC,)) for i in range(found)
        ]
        # plus predictions outside the gold set, which must not move recall
        lines += [TaxoLine(f"noise {i}", "root", (PROV_COOC,)) for i in range(25)]
        got = score(lines, gold).recall_pct[UNION]
        if abs(got - want_pct) > 1:
            failures.append(f"{found}/{total}: got {got}%, want {want_pct}%")
    elapsed = time.perf_counter() - started
    report(capsys, "4 evaluation-arithmetic", not failures, elapsed,
           f"{len(rows) - len(failures)}/{len(rows)} rows within 1pp")
    assert not failures, failures
    assert elapsed < 5.0


# 5 -------------------------------------------------------------------------


def test_5_cycle_detection(capsys):
    rng = random.Random(515)
    started = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        edges = random_planted_graph(rng, max_nodes=50)
        if detect_cycles(edges) != reachability_cycles(edges):
            mismatches += 1
    elapsed = time.perf_counter() - started
    report(capsys, "5 cycle-detection", mismatches == 0, elapsed,
           f"{200 - mismatches}/200 graphs agree")
    assert mismatches == 0
    assert elapsed < 10.0


# 6 -------------------------------------------------------------------------


def test_6_normalization_fidelity(capsys, stops):
    examples = {
        "anarchism": "anarch",
        "societies": "societi",
        "philosophy": "philosophi",
        "theology": "theologi",
        "history": "histori",
        "metaphysics": "metaphys",
    }
    started = time.perf_counter()
    failures = [
        f"{word}: got {stem(word)!r}, want {want!r}"
        for word, want in examples.items()
        if stem(word) != want
    ]
    masked = normalize_tokens(["biological", "and", "physical"], stops)
    if masked != ["biolog", "_", "physic"]:
        failures.append(f"phrase: got {masked!r}")

    vocabulary = [
        line.split("\t")
        for line in (DATA / "porter_vocabulary.tsv").read_text().splitlines()
        if line and not line.startswith("#")
    ]
    wrong = sum(1 for word, want in vocabulary if stem(word) != want)
    if wrong:
        failures.append(f"{wrong}/{len(vocabulary)} vocabulary mismatches")
    elapsed = time.perf_counter() - started

    report(capsys, "6 normalization-fidelity", not failures, elapsed,
           f"{len(vocabulary)} vocabulary words")
    assert not failures, failures
    assert elapsed < 5.0


# 7 -------------------------------------------------------------------------


def run_pipeline(workdir, dump, terms, gold, workers):
    workdir.mkdir()
    proc = subprocess.run(
        [
            sys.executable, "-m", "taxomine", "pipeline",
            "--dump", str(dump), "--terms", str(terms), "--gold", str(gold),
            "--root", "varnel", "--domain", "synth",
            "--workdir", str(workdir), "--workers", str(workers),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


ARTIFACTS = [
    "corpus.sentences.tsv",
    "corpus.synth.stats.tsv",
    "synth.taxo",
    "synth.report.tsv",
]


def test_7_determinism_and_throughput(capsys, tmp_path_factory):
    base = tmp_path_factory.mktemp("accept7")
    dump = base / "corpus.xml"
    terms = base / "terms.txt"
    gold = base / "gold.tsv"

    started = time.perf_counter()
    subprocess.run(
        [
            sys.executable, str(SCRIPTS / "make_corpus.py"),
            "--out", str(dump), "--terms", str(terms), "--gold", str(gold),
            "--size-mb", "50", "--seed", "7",
        ],
        check=True,
        capture_output=True,
    )
    size_mb = dump.stat().st_size / 1e6
    assert size_mb >= 50

    out_a = run_pipeline(base / "a", dump, terms, gold, workers=1)
    out_b = run_pipeline(base / "b", dump, terms, gold, workers=1)
    out_c = run_pipeline(base / "c", dump, terms, gold, workers=4)
    elapsed = time.perf_counter() - started

    diverged = []
    for name in ARTIFACTS:
        blob = (base / "a" / name).read_bytes()
        if blob != (base / "b" / name).read_bytes():
            diverged.append(f"{name}: rerun differs")
        if blob != (base / "c" / name).read_bytes():
            diverged.append(f"{name}: workers=4 differs")

    rates = [
        float(m.group(1))
        for m in (re.search(r"\(([\d.]+) MB/s\)", out) for out in (out_a, out_b))
        if m
    ]
    rate = min(rates) if rates else 0.0
    note = f"{size_mb:.0f} MB corpus, stats {rate:.1f} MB/s single worker"
    if rate < 10.0:
        note += " -- below the 10 MB/s soft target, investigate"

    report(capsys, "7 determinism-throughput", not diverged, elapsed, note)
    assert not diverged, diverged
    assert out_c  # pipeline with workers=4 completed and printed its stages
