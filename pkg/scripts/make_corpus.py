"""Generate a synthetic wiki-style dump for pipeline benchmarks.

Writes a dump of <title>/<text> documents filled with seeded pseudo-word
prose, a matching domain term list, and a small gold pair file.  Catalog
terms are planted with skewed frequencies so document-frequency ranking
has something to rank; most tokens are filler the matcher has never heard
of, which is what a real corpus looks like.  Same seed, same bytes.

Usage:
    python scripts/make_corpus.py --out dump.xml --terms terms.txt \
        --gold gold.tsv --size-mb 50 --seed 7
"""

from __future__ import annotations

import argparse
import random

STOPWORDS = ["the", "a", "of", "and", "is", "in", "to", "with", "for", "on"]
SYLLABLES = [
    "ba", "cor", "del", "fen", "gri", "hul", "jan", "kel", "lor", "mev",
    "nim", "pol", "quar", "ris", "sul", "tev", "urn", "vex", "wol", "zar",
]

HEADS = [
    "varnel", "quorite", "maltrene", "dextrome", "pylox", "brintal",
    "corvax", "senolia", "tramvia", "ulfite", "gravone", "mirtex",
]
MODIFIERS = ["solar", "coastal", "ancient", "crimson", "hollow", "riveted"]


def make_fillers(rng: random.Random, count: int) -> list[str]:
    reserved = set(HEADS) | set(MODIFIERS) | set(STOPWORDS) | {"kesh", "d9"}
    fillers = []
    seen = set(reserved)
    while len(fillers) < count:
        word = "".join(rng.choice(SYLLABLES) for _ in range(rng.randint(2, 4)))
        if word not in seen:
            seen.add(word)
            fillers.append(word)
    return fillers


def make_terms(rng: random.Random) -> list[str]:
    terms = list(HEADS)
    for head in HEADS:
        for mod in rng.sample(MODIFIERS, 2):
            terms.append(f"{mod} {head}")
    terms.append("varnel of kesh")
    terms.append("pylox d9")
    return terms


def make_gold(terms: list[str]) -> list[tuple[str, str]]:
    pairs = []
    for term in terms:
        tokens = term.split()
        if len(tokens) > 1:
            pairs.append((term, tokens[-1] if tokens[-1] in HEADS else tokens[0]))
    pairs.append((HEADS[1], HEADS[0]))
    pairs.append((HEADS[2], HEADS[0]))
    return pairs


def build_sentence(rng, fillers, terms, weights) -> str:
    words: list[str] = []
    length = rng.randint(8, 14)
    while len(words) < length:
        roll = rng.random()
        if roll < 0.12:
            words.extend(rng.choices(terms, weights=weights)[0].split())
        elif roll < 0.35:
            words.append(rng.choice(STOPWORDS))
        else:
            words.append(rng.choice(fillers))
    sentence = " ".join(words)
    return sentence[0].upper() + sentence[1:] + "."


def generate(out_path, terms_path, gold_path, size_mb: float, seed: int) -> int:
    rng = random.Random(seed)
    fillers = make_fillers(rng, 4000)
    terms = make_terms(rng)
    # Zipf-ish weights: early terms are planted far more often, giving the
    # co-occurrence stage a clear document-frequency gradient.
    weights = [1.0 / (rank + 1) for rank in range(len(terms))]

    with open(terms_path, "w", encoding="utf-8") as fh:
        for term in terms:
            fh.write(term + "\n")
    with open(gold_path, "w", encoding="utf-8") as fh:
        for hypo, hyper in make_gold(terms):
            fh.write(f"{hypo}\t{hyper}\n")

    target = int(size_mb * 1e6)
    written = 0
    doc = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        while written < target:
            doc += 1
            paragraphs = []
            for _ in range(rng.randint(2, 4)):
                sentences = [
                    build_sentence(rng, fillers, terms, weights)
                    for _ in range(rng.randint(8, 18))
                ]
                paragraphs.append(" ".join(sentences))
            body = "\n\n".join(paragraphs)
            record = (
                f"<page>\n<title>Article {doc}</title>\n"
                f"<text xml:space=\"preserve\">{body}</text>\n</page>\n"
            )
            fh.write(record)
            written += len(record)
    return doc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="dump file to write")
    parser.add_argument("--terms", required=True, help="term list to write")
    parser.add_argument("--gold", required=True, help="gold pair file to write")
    parser.add_argument("--size-mb", type=float, default=50.0)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)
    docs = generate(args.out, args.terms, args.gold, args.size_mb, args.seed)
    print(f"wrote {docs} documents to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
