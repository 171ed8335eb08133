"""Streaming extraction of documents from a wiki-style dump.

The dump is scanned line by line, so peak memory is bounded by the largest
single document rather than by corpus size.  Only the raw content between
``<text ...>`` and ``</text>`` is kept as a document body; the most recent
``<title>...</title>`` content names the document.  Everything else
(infoboxes, categories, headings outside text regions) is ignored, and the
body itself is never parsed further.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InputError
from .normalize import StopwordSet, normalize_tokens

_TITLE_OPEN = "<title>"
_TITLE_CLOSE = "</title>"
_TEXT_CLOSE = "</text>"
_TEXT_OPEN_RE = re.compile(r"<text(?:\s[^>]*)?>")

_OUTSIDE, _IN_TITLE, _IN_TEXT = 0, 1, 2


@dataclass
class RawDocument:
    title: str
    body: str


@dataclass
class TokenizedDocument:
    title: str
    sentences: list[list[str]] = field(default_factory=list)


class DumpReader:
    """Iterates RawDocuments out of a dump stream.

    Accepts a text-mode file object, a binary file object (decoded with the
    given encoding, undecodable bytes replaced), or any iterable of lines.
    Opening/closing tags are expected to sit within a single line; text
    regions themselves may span any number of lines.  An unterminated
    region at end of stream is emitted as a partial document and counted
    in ``warnings``.
    """

    def __init__(self, stream, encoding: str = "utf-8"):
        if isinstance(stream, (io.RawIOBase, io.BufferedIOBase)):
            stream = io.TextIOWrapper(stream, encoding=encoding, errors="replace")
        self._lines: Iterable[str] = stream
        self.encoding = encoding
        self.warnings = 0
        self.documents_read = 0

    def __iter__(self) -> Iterator[RawDocument]:
        state = _OUTSIDE
        pending_title = ""
        title_parts: list[str] = []
        body_parts: list[str] = []

        for line in self._lines:
            pos = 0
            while pos < len(line):
                if state == _OUTSIDE:
                    title_at = line.find(_TITLE_OPEN, pos)
                    text_m = _TEXT_OPEN_RE.search(line, pos)
                    if title_at < 0 and text_m is None:
                        break
                    if title_at >= 0 and (text_m is None or title_at < text_m.start()):
                        pos = title_at + len(_TITLE_OPEN)
                        close = line.find(_TITLE_CLOSE, pos)
                        if close >= 0:
                            pending_title = line[pos:close].strip()
                            pos = close + len(_TITLE_CLOSE)
                        else:
                            title_parts = [line[pos:]]
                            state = _IN_TITLE
                            pos = len(line)
                    else:
                        pos = text_m.end()
                        close = line.find(_TEXT_CLOSE, pos)
                        if close >= 0:
                            yield self._emit(pending_title, line[pos:close])
                            pos = close + len(_TEXT_CLOSE)
                        else:
                            body_parts = [line[pos:]]
                            state = _IN_TEXT
                            pos = len(line)
                elif state == _IN_TITLE:
                    close = line.find(_TITLE_CLOSE, pos)
                    if close >= 0:
                        title_parts.append(line[pos:close])
                        pending_title = "".join(title_parts).strip()
                        title_parts = []
                        state = _OUTSIDE
                        pos = close + len(_TITLE_CLOSE)
                    else:
                        title_parts.append(line[pos:])
                        pos = len(line)
                else:  # _IN_TEXT
                    close = line.find(_TEXT_CLOSE, pos)
                    if close >= 0:
                        body_parts.append(line[pos:close])
                        yield self._emit(pending_title, "".join(body_parts))
                        body_parts = []
                        state = _OUTSIDE
                        pos = close + len(_TEXT_CLOSE)
                    else:
                        body_parts.append(line[pos:])
                        pos = len(line)

        if state == _IN_TEXT:
            self.warnings += 1
            yield self._emit(pending_title, "".join(body_parts))
        elif state == _IN_TITLE:
            self.warnings += 1

    def _emit(self, title: str, body: str) -> RawDocument:
        self.documents_read += 1
        if not title:
            title = f"doc-{self.documents_read}"
        return RawDocument(title=title, body=body)


def extract_documents(stream, encoding: str = "utf-8") -> Iterator[RawDocument]:
    """Convenience wrapper when the warning count is not needed."""
    return iter(DumpReader(stream, encoding=encoding))


def open_dump(path, encoding: str = "utf-8") -> DumpReader:
    fh = open(path, encoding=encoding, errors="replace")
    return DumpReader(fh, encoding=encoding)


_PARA_SPLIT = re.compile(r"\n\s*\n")
_BOUNDARY = re.compile(r"(?<=[.!?])\s+")
_WS_RUN = re.compile(r"\s+")


def segment_sentences(body: str) -> list[str]:
    """Rule-based sentence split.

    Cuts after sentence-final punctuation (. ! ?) when followed by
    whitespace and an uppercase letter (or end of text), and at blank
    lines.  Returned sentences are trimmed with internal whitespace runs
    collapsed to single spaces; empty pieces are dropped.
    """
    sentences = []
    for para in _PARA_SPLIT.split(body):
        start = 0
        for m in _BOUNDARY.finditer(para):
            if m.end() >= len(para) or para[m.end()].isupper():
                piece = _WS_RUN.sub(" ", para[start : m.start()]).strip()
                if piece:
                    sentences.append(piece)
                start = m.end()
        piece = _WS_RUN.sub(" ", para[start:]).strip()
        if piece:
            sentences.append(piece)
    return sentences


def tokenize(sentence: str) -> list[str]:
    """Lowercase, split on whitespace, detach surrounding punctuation.

    Leading/trailing non-alphanumeric characters become one token each;
    internal hyphens, periods and digits stay put, keeping chemical names
    and compounds like "self-governed" intact.
    """
    tokens: list[str] = []
    for chunk in sentence.lower().split():
        i, j = 0, len(chunk)
        while i < j and not chunk[i].isalnum():
            tokens.append(chunk[i])
            i += 1
        trailing: list[str] = []
        while j > i and not chunk[j - 1].isalnum():
            trailing.append(chunk[j - 1])
            j -= 1
        if i < j:
            tokens.append(chunk[i:j])
        tokens.extend(reversed(trailing))
    return tokens


def tokenize_document(doc: RawDocument) -> TokenizedDocument:
    sentences = [tokenize(s) for s in segment_sentences(doc.body)]
    return TokenizedDocument(doc.title, [s for s in sentences if s])


def normalize_document(doc: TokenizedDocument, stops: StopwordSet) -> list[list[str]]:
    """Per-sentence normalized token lists (may be empty after masking)."""
    return [normalize_tokens(s, stops) for s in doc.sentences]


# ---------------------------------------------------------------------------
# Normalized sentence file: the artifact the ingest stage writes and the
# stats stage consumes.  One line per sentence, `title<TAB>joined tokens`,
# consecutive lines sharing a title forming one document, preceded by a
# single header recording the normalizer so a stats run against a different
# stopword list or stemmer revision fails loudly instead of silently.

SENT_HEADER = "#normalizer"


def write_sentence_file(path, docs, normalizer_fp: str) -> tuple[int, int]:
    """Write (title, sentences) pairs; returns (docs written, sentences).

    Documents with no sentences are dropped (they carry no statistics);
    sentences that normalized to nothing keep their line, with an empty
    token field, so sentence totals survive the round trip.
    """
    n_docs = 0
    n_sentences = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"{SENT_HEADER}\t{normalizer_fp}\n")
        for title, sentences in docs:
            safe_title = " ".join(title.split()) or "untitled"
            wrote = False
            for tokens in sentences:
                fh.write(f"{safe_title}\t{' '.join(tokens)}\n")
                n_sentences += 1
                wrote = True
            if wrote:
                n_docs += 1
    return n_docs, n_sentences


class SentenceFile:
    """Streaming reader for the normalized sentence TSV."""

    def __init__(self, path):
        self.path = path
        try:
            with open(path, encoding="utf-8") as fh:
                first = fh.readline()
        except OSError as exc:
            raise InputError(f"cannot read sentence file {path}: {exc}") from exc
        if not first.startswith(SENT_HEADER + "\t"):
            raise InputError(f"{path}: missing {SENT_HEADER} header line")
        self.normalizer = first.rstrip("\n").split("\t", 1)[1]

    def docs_raw(self) -> Iterator[tuple[str, list[str]]]:
        """(title, unsplit-token-field list) per document."""
        with open(self.path, encoding="utf-8") as fh:
            fh.readline()
            title = None
            fields: list[str] = []
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                t, _, sent = line.partition("\t")
                if t != title:
                    if title is not None:
                        yield title, fields
                    title, fields = t, []
                fields.append(sent)
            if title is not None:
                yield title, fields

    def docs(self) -> Iterator[tuple[str, list[list[str]]]]:
        for title, fields in self.docs_raw():
            yield title, [f.split() for f in fields]
