import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taxomine.cooc import (
    CorpusStats,
    TermMatcher,
    accumulate_document,
    drop_nested,
    find_occurrences,
    load_stats,
    merge,
    pair_key,
    save_stats,
)
from taxomine.errors import InputError

from oracles import naive_find, random_mini_corpus, recount


def build_stats(docs, catalog):
    matcher = TermMatcher(catalog)
    stats = CorpusStats(catalog.fingerprint())
    for _title, sentences in docs:
        hits = [find_occurrences(s, matcher) for s in sentences]
        accumulate_document(stats, hits)
    return stats


# --- matching ---------------------------------------------------------------


def test_nested_and_overlapping_matches_all_reported(make_catalog):
    catalog = make_catalog(["communications satellite", "satellite"],
                           root="satellite")
    matcher = TermMatcher(catalog)
    sentence = ["commun", "satellit", "launch"]
    hits = find_occurrences(sentence, matcher)
    by_surface = {catalog[tid].surface: start for tid, start in hits}
    assert by_surface == {"communications satellite": 0, "satellite": 1}


def test_placeholder_aligns_with_any_stopword(make_catalog):
    catalog = make_catalog(["history of religions", "music"], root="music")
    matcher = TermMatcher(catalog)
    # the corpus sentence had some stopword masked at position 1 — any
    # stopword, not necessarily "of"
    hits = find_occurrences(["histori", "_", "religion"], matcher)
    assert [(catalog[tid].surface, start) for tid, start in hits] == [
        ("history of religions", 0)
    ]


def test_empty_catalog_like_sentence_no_matches(make_catalog):
    catalog = make_catalog(["music"], root="music")
    matcher = TermMatcher(catalog)
    assert find_occurrences([], matcher) == []
    assert find_occurrences(["unrelated", "tokens"], matcher) == []


def test_repeated_occurrences_all_reported(make_catalog):
    catalog = make_catalog(["music"], root="music")
    matcher = TermMatcher(catalog)
    hits = find_occurrences(["music", "x", "music"], matcher)
    assert [start for _tid, start in hits] == [0, 2]


def test_unmatchable_terms_excluded(make_catalog):
    catalog = make_catalog(["of the", "music"], root="music")
    matcher = TermMatcher(catalog)
    assert find_occurrences(["_", "_"], matcher) == []


def test_same_normal_form_reports_both_terms(make_catalog):
    # distinct surfaces can normalize identically; both ids must be reported
    catalog = make_catalog(["history of religion", "history to religion"],
                           root="history of religion")
    matcher = TermMatcher(catalog)
    hits = find_occurrences(["histori", "_", "religion"], matcher)
    assert sorted(tid for tid, _ in hits) == [t.id for t in catalog]


def test_drop_nested_removes_contained_spans(make_catalog):
    catalog = make_catalog(["communications satellite", "satellite"],
                           root="satellite")
    matcher = TermMatcher(catalog)
    hits = find_occurrences(["commun", "satellit"], matcher)
    kept = drop_nested(hits, matcher)
    assert [catalog[tid].surface for tid, _ in kept] == [
        "communications satellite"
    ]


def test_drop_nested_keeps_equal_and_overlapping_spans(make_catalog):
    catalog = make_catalog(["a0 a1", "a1 a2"], root="a0 a1")
    matcher = TermMatcher(catalog)
    hits = find_occurrences(["a0", "a1", "a2"], matcher)
    # overlap without containment: both stay
    assert drop_nested(hits, matcher) == hits


def test_matcher_agrees_with_naive_scan_on_fixture(make_catalog):
    catalog = make_catalog(
        ["a0", "a0 a1", "a1 a0", "a0 of a1", "a1", "a2 a2 a2"], root="a0"
    )
    matcher = TermMatcher(catalog)
    sentences = [
        ["a0", "a1", "a0", "_", "a1"],
        ["a0", "_", "a1"],
        ["a2", "a2", "a2", "a2"],
        [],
        ["_"],
    ]
    for sentence in sentences:
        assert find_occurrences(sentence, matcher) == naive_find(sentence, catalog)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_matcher_agrees_with_naive_scan_random(data):
    alphabet = ["a0", "a1", "a2", "b0", "_"]
    patterns = data.draw(
        st.lists(
            st.lists(st.sampled_from(alphabet), min_size=1, max_size=3),
            min_size=1,
            max_size=6,
            unique_by=tuple,
        )
    )
    from taxomine.terms import Term, TermCatalog

    terms = [
        Term(i, f"t{i}", tuple(pat), tuple(pat)) for i, pat in enumerate(patterns)
    ]
    # matchable only if some non-placeholder token exists; mimic the loader
    catalog = TermCatalog(terms=terms, domain="d", root_id=0)
    matcher = TermMatcher(catalog)
    sentence = data.draw(st.lists(st.sampled_from(alphabet), max_size=12))
    assert find_occurrences(sentence, matcher) == naive_find(sentence, catalog)


# --- accumulation -----------------------------------------------------------


def test_single_sentence_pair(make_catalog):
    catalog = make_catalog(["a0", "a1"], root="a0")
    stats = build_stats([("d", [["a0", "a1"]])], catalog)
    a0 = next(t.id for t in catalog if t.surface == "a0")
    a1 = next(t.id for t in catalog if t.surface == "a1")
    assert stats.doc_freq[a0] == stats.doc_freq[a1] == 1
    assert stats.cooc(a0, a1) == 1
    assert stats.cooc(a1, a0) == 1  # symmetric lookup
    assert stats.total_docs == 1
    assert stats.total_sentences == 1


def test_two_sentences_same_pair(make_catalog):
    catalog = make_catalog(["a0", "a1"], root="a0")
    stats = build_stats([("d", [["a0", "a1"], ["a1", "x", "a0"]])], catalog)
    a0 = next(t.id for t in catalog if t.surface == "a0")
    a1 = next(t.id for t in catalog if t.surface == "a1")
    assert stats.cooc(a0, a1) == 2
    assert stats.doc_freq[a0] == 1  # once per document


def test_repetition_binary_per_sentence(make_catalog):
    catalog = make_catalog(["a0", "a1"], root="a0")
    stats = build_stats([("d", [["a0", "a0", "a1"]])], catalog)
    a0 = next(t.id for t in catalog if t.surface == "a0")
    a1 = next(t.id for t in catalog if t.surface == "a1")
    assert stats.term_freq[a0] == 2  # every occurrence
    assert stats.sent_freq[a0] == 1  # once per sentence
    assert stats.cooc(a0, a1) == 1  # pair counted once despite repetition


def test_partners_index(make_catalog):
    catalog = make_catalog(["a0", "a1", "a2"], root="a0")
    stats = build_stats([("d", [["a0", "a1"], ["a0", "a2"]])], catalog)
    ids = {t.surface: t.id for t in catalog}
    assert stats.partners(ids["a0"]) == {ids["a1"]: 1, ids["a2"]: 1}
    assert stats.partners(ids["a1"]) == {ids["a0"]: 1}
    assert stats.partners(9999) == {}


def test_pair_key_orders():
    assert pair_key(5, 2) == (2, 5)
    assert pair_key(2, 5) == (2, 5)


# --- oracle equivalence and merge properties --------------------------------


def test_oracle_equivalence_seeded_sample(stops):
    from taxomine.terms import from_surfaces

    rng = random.Random(1312)
    for _ in range(15):
        surfaces, docs = random_mini_corpus(rng, max_docs=40, max_terms=12)
        catalog = from_surfaces(surfaces, "d", surfaces[0], stops)
        assert build_stats(docs, catalog) == recount(docs, catalog)


def test_merge_identity(make_catalog):
    catalog = make_catalog(["a0", "a1"], root="a0")
    stats = build_stats([("d", [["a0", "a1"]])], catalog)
    empty = CorpusStats(catalog.fingerprint())
    assert merge(stats, empty) == stats
    assert merge(empty, stats) == stats


def test_merge_requires_same_catalog():
    with pytest.raises(InputError):
        merge(CorpusStats("aaa"), CorpusStats("bbb"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_merge_matches_single_pass_on_random_shards(seed):
    from taxomine.normalize import default_stopwords
    from taxomine.terms import from_surfaces

    rng = random.Random(seed)
    surfaces, docs = random_mini_corpus(rng, max_docs=24, max_terms=8, max_alpha=6)
    catalog = from_surfaces(surfaces, "d", surfaces[0], default_stopwords())
    matcher = TermMatcher(catalog)

    single = build_stats(docs, catalog)

    n_shards = rng.randint(1, 4)
    shards = [CorpusStats(catalog.fingerprint()) for _ in range(n_shards)]
    for idx, (_title, sentences) in enumerate(docs):
        hits = [find_occurrences(s, matcher) for s in sentences]
        accumulate_document(shards[idx % n_shards], hits)

    rng.shuffle(shards)  # commutativity: merge order must not matter
    combined = shards[0]
    for shard in shards[1:]:
        combined = merge(combined, shard)
    assert combined == single


def test_merge_associative(make_catalog):
    catalog = make_catalog(["a0", "a1", "a2"], root="a0")
    a = build_stats([("d1", [["a0", "a1"]])], catalog)
    b = build_stats([("d2", [["a1", "a2"]])], catalog)
    c = build_stats([("d3", [["a0", "a2", "a1"]])], catalog)
    assert merge(merge(a, b), c) == merge(a, merge(b, c))


def test_monotonicity_adding_documents(make_catalog):
    catalog = make_catalog(["a0", "a1"], root="a0")
    before = build_stats([("d1", [["a0", "a1"]])], catalog)
    snapshot = (
        Counter(before.doc_freq), Counter(before.term_freq),
        Counter(before.sent_freq), Counter(before.sent_cooc),
    )
    matcher = TermMatcher(catalog)
    hits = [find_occurrences(["a0", "a1", "a0"], matcher)]
    accumulate_document(before, hits)
    for old, new in zip(
        snapshot,
        (before.doc_freq, before.term_freq, before.sent_freq, before.sent_cooc),
    ):
        for key, count in old.items():
            assert new[key] >= count


# --- persistence ------------------------------------------------------------


def test_stats_roundtrip_and_byte_stability(tmp_path, stops):
    from taxomine.terms import from_surfaces

    rng = random.Random(99)
    surfaces, docs = random_mini_corpus(rng, max_docs=100, max_terms=20)
    catalog = from_surfaces(surfaces, "d", surfaces[0], stops)
    stats = build_stats(docs, catalog)

    p1 = tmp_path / "stats1.tsv"
    p2 = tmp_path / "stats2.tsv"
    save_stats(stats, p1)
    loaded = load_stats(p1)
    assert loaded == stats
    save_stats(loaded, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_empty_stats_roundtrip(tmp_path):
    stats = CorpusStats("fp")
    path = tmp_path / "empty.tsv"
    save_stats(stats, path)
    assert load_stats(path) == stats


def test_truncated_stats_rejected(tmp_path, make_catalog):
    catalog = make_catalog(["a0", "a1"], root="a0")
    stats = build_stats([("d", [["a0", "a1"]])], catalog)
    path = tmp_path / "stats.tsv"
    save_stats(stats, path)
    whole = path.read_bytes()
    path.write_bytes(whole[: len(whole) // 2])
    with pytest.raises(InputError):
        load_stats(path)


def test_corrupted_stats_rejected(tmp_path, make_catalog):
    catalog = make_catalog(["a0", "a1"], root="a0")
    stats = build_stats([("d", [["a0", "a1"]])], catalog)
    path = tmp_path / "stats.tsv"
    save_stats(stats, path)
    text = path.read_text()
    path.write_text(text.replace("1", "2", 1))  # flip a digit, keep old checksum
    with pytest.raises(InputError):
        load_stats(path)


def test_version_mismatch_rejected(tmp_path, make_catalog):
    catalog = make_catalog(["a0"], root="a0")
    stats = build_stats([("d", [["a0"]])], catalog)
    path = tmp_path / "stats.tsv"
    save_stats(stats, path)
    import hashlib

    body = path.read_text().rsplit("#checksum", 1)[0]
    body = body.replace("#version\t1", "#version\t99", 1)
    digest = hashlib.sha256(body.encode()).hexdigest()
    path.write_text(body + f"#checksum\t{digest}\n")
    with pytest.raises(InputError, match="version"):
        load_stats(path)


def test_missing_stats_file():
    with pytest.raises(InputError):
        load_stats("/nonexistent/stats.tsv")
