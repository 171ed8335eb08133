"""Stopword masking and stemming.

Corpus sentences and catalog terms must go through the exact same
normalization, otherwise token sequences cannot align during matching.
Stopwords collapse to a single placeholder token so that phrases still
match across different function words ("history of religions" matches
"history and religions" once both are masked).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .errors import InputError
from .porter import stem

PLACEHOLDER = "_"

# Bumped whenever tokenization/stemming/masking semantics change; baked into
# sentence-file and catalog fingerprints so stale intermediates are rejected.
_ALGO_TAG = "porter1-mask1"

NormalizedSentence = list[str]


@dataclass(frozen=True)
class StopwordSet:
    """Exact-match lowercase stopword lexicon."""

    words: frozenset[str]
    fingerprint: str

    def __contains__(self, token: str) -> bool:
        return token in self.words

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "StopwordSet":
        cleaned = frozenset(w.strip().lower() for w in words if w.strip())
        cleaned -= {PLACEHOLDER}
        digest = hashlib.sha256(
            "\n".join(sorted(cleaned)).encode("utf-8")
        ).hexdigest()
        return cls(cleaned, digest)

    @classmethod
    def from_file(cls, path) -> "StopwordSet":
        try:
            with open(path, encoding="utf-8") as fh:
                words = [
                    line.strip()
                    for line in fh
                    if line.strip() and not line.lstrip().startswith("#")
                ]
        except OSError as exc:
            raise InputError(f"cannot read stopword file {path}: {exc}") from exc
        if not words:
            raise InputError(f"stopword file {path} contains no words")
        return cls.from_words(words)


@lru_cache(maxsize=1)
def default_stopwords() -> StopwordSet:
    """The bundled SMART-family list."""
    text = (
        resources.files("taxomine")
        .joinpath("data/stopwords_smart.txt")
        .read_text(encoding="utf-8")
    )
    words = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    return StopwordSet.from_words(words)


def load_stopwords(path=None) -> StopwordSet:
    return StopwordSet.from_file(path) if path else default_stopwords()


def is_punctuation(token: str) -> bool:
    """True for tokens with no alphanumeric content, except the placeholder."""
    return token != PLACEHOLDER and not any(ch.isalnum() for ch in token)


def mask_stopwords(tokens: list[str], stops: StopwordSet) -> list[str]:
    return [PLACEHOLDER if t in stops.words else t for t in tokens]


def normalize_tokens(tokens: list[str], stops: StopwordSet) -> NormalizedSentence:
    """Drop punctuation-only tokens, mask stopwords, stem the rest."""
    kept = [t for t in tokens if not is_punctuation(t)]
    return [t if t == PLACEHOLDER else stem(t) for t in mask_stopwords(kept, stops)]


def normalizer_fingerprint(stops: StopwordSet) -> str:
    """Identifies the normalization applied to a file or catalog."""
    return f"{_ALGO_TAG}-{stops.fingerprint[:16]}"
