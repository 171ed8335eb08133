"""Domain term catalogs.

A catalog is a flat list of domain terms with stable integer ids, each
carrying two derived forms: the lowercased surface tokens (used by the
subterm heuristics) and the normalized tokens (used for corpus matching,
produced by the exact same pipeline the corpus goes through).  The
configured root term is guaranteed present — it is appended if the input
list lacks it, the only term ever added to a list.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InputError
from .ingest import tokenize
from .normalize import PLACEHOLDER, StopwordSet, normalize_tokens

log = logging.getLogger(__name__)


def normalize_term(surface: str, stops: StopwordSet) -> tuple[list[str], list[str]]:
    """Surface tokens and normalized tokens for one term.

    Same pipeline as corpus sentences: tokenize, mask stopwords, stem.
    """
    surface_tokens = tokenize(surface)
    return surface_tokens, normalize_tokens(surface_tokens, stops)


@dataclass(frozen=True)
class Term:
    id: int
    surface: str
    surface_tokens: tuple[str, ...]
    norm_tokens: tuple[str, ...]

    @cached_property
    def surface_lower(self) -> str:
        return self.surface.lower()

    @property
    def matchable(self) -> bool:
        """False when normalization left nothing but placeholders."""
        return any(tok != PLACEHOLDER for tok in self.norm_tokens)

    @classmethod
    def make(cls, id: int, surface: str, stops: StopwordSet) -> "Term":
        surface_tokens, norm_tokens = normalize_term(surface, stops)
        return cls(id, surface, tuple(surface_tokens), tuple(norm_tokens))


@dataclass
class TermCatalog:
    terms: list[Term]
    domain: str
    root_id: int
    _by_id: dict[int, Term] = field(init=False, repr=False)

    def __post_init__(self):
        self._by_id = {t.id: t for t in self.terms}
        if len(self._by_id) != len(self.terms):
            raise InputError(f"duplicate term ids in {self.domain!r} catalog")
        if self.root_id not in self._by_id:
            raise InputError(f"root id {self.root_id} not in catalog")

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, term_id: int) -> Term:
        return self._by_id[term_id]

    @property
    def root(self) -> Term:
        return self._by_id[self.root_id]

    def get(self, term_id: int) -> Term | None:
        return self._by_id.get(term_id)

    def fingerprint(self) -> str:
        """Content hash tying stats files to the catalog that produced them."""
        h = hashlib.sha256()
        h.update(f"{self.domain}\x00{self.root_id}\x00".encode())
        for t in sorted(self.terms, key=lambda t: t.id):
            h.update(f"{t.id}\x00{t.surface}\x00{' '.join(t.norm_tokens)}\x1e".encode())
        return h.hexdigest()[:16]


def _parse_lines(lines) -> list[tuple[int, int | None, str]]:
    """(line_number, explicit_id, surface) triples; rejects mixed styles."""
    entries: list[tuple[int, int | None, str]] = []
    styles = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if "\t" in line:
            id_text, _, surface = line.partition("\t")
            try:
                term_id = int(id_text)
            except ValueError:
                raise InputError(f"line {lineno}: bad term id {id_text!r}")
            if term_id < 0:
                raise InputError(f"line {lineno}: negative term id {term_id}")
            styles.add("id")
            entries.append((lineno, term_id, surface.strip()))
        else:
            styles.add("bare")
            entries.append((lineno, None, line.strip()))
    if len(styles) > 1:
        raise InputError("terms file mixes id<TAB>term and bare-term lines")
    return entries


def build_catalog(
    entries: list[tuple[int, int | None, str]],
    domain: str,
    root: str,
    stops: StopwordSet,
    source: str = "terms",
) -> TermCatalog:
    terms: list[Term] = []
    seen: dict[str, int] = {}  # surface_lower -> first line number
    next_id = 0
    for lineno, explicit_id, surface in entries:
        if not surface:
            raise InputError(f"{source} line {lineno}: empty term")
        key = surface.lower()
        if key in seen:
            log.warning(
                "%s line %d: duplicate term %r (first seen at line %d), skipping",
                source, lineno, surface, seen[key],
            )
            continue
        seen[key] = lineno
        term_id = explicit_id if explicit_id is not None else next_id
        terms.append(Term.make(term_id, surface, stops))
        next_id += 1

    if not terms:
        raise InputError(f"no terms in {source}")

    root_key = root.lower()
    if root_key in seen:
        root_id = next(t.id for t in terms if t.surface_lower == root_key)
    else:
        root_id = max(t.id for t in terms) + 1
        terms.append(Term.make(root_id, root, stops))
        log.info("%s: root term %r absent, appended with id %d", source, root, root_id)
    return TermCatalog(terms=terms, domain=domain, root_id=root_id)


def load_terms(
    path, domain: str, root: str, stops: StopwordSet | None = None
) -> TermCatalog:
    if stops is None:
        from .normalize import default_stopwords

        stops = default_stopwords()
    try:
        with open(path, encoding="utf-8") as fh:
            entries = _parse_lines(fh)
    except OSError as exc:
        raise InputError(f"cannot read terms file {path}: {exc}") from exc
    return build_catalog(entries, domain, root, stops, source=str(path))


def from_surfaces(
    surfaces, domain: str, root: str, stops: StopwordSet | None = None
) -> TermCatalog:
    """Catalog straight from an in-memory list of surfaces (tests, fixtures)."""
    if stops is None:
        from .normalize import default_stopwords

        stops = default_stopwords()
    entries = [(i + 1, None, s) for i, s in enumerate(surfaces)]
    return build_catalog(entries, domain, root, stops, source="<memory>")
