"""Corpus ingestion and the two on-disk bag-of-words representations.

A corpus is a list of :class:`RawDocument`. Term extraction turns it into
a :class:`Vocabulary` plus a :class:`SparseBag` of (doc, word, count)
triples, which can be serialized either as the three-header UCI layout
(D / W / NNZ followed by one triple per line) or as the compact
one-line-per-document ``docID id:count id:count ...`` form.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import porter

__all__ = [
    "RawDocument",
    "Vocabulary",
    "SparseBag",
    "CategoryBag",
    "CorpusError",
    "DuplicateDocIdError",
    "FormatError",
    "MalformedLineError",
    "CountMismatchError",
    "NonPositiveValueError",
    "IdOutOfRangeError",
    "DuplicateEntryError",
    "UnsortedTripleError",
    "tokenize",
    "filter_stopwords",
    "stem",
    "extract_words",
    "stem_bag",
    "write_uci",
    "parse_uci",
    "to_optimized",
    "parse_optimized",
    "load_stopwords",
    "read_corpus_dir",
    "read_corpus_jsonl",
    "write_vocabulary",
    "parse_vocabulary",
    "write_labels",
    "parse_labels",
]


class CorpusError(Exception):
    """Base class for corpus-level failures."""


class DuplicateDocIdError(CorpusError):
    """Two documents share a doc_id."""


class FormatError(CorpusError):
    """Base class for codec failures."""


class MalformedLineError(FormatError):
    """A line does not parse under the expected layout."""


class CountMismatchError(FormatError):
    """Declared NNZ disagrees with the number of triples present."""


class NonPositiveValueError(FormatError):
    """An id or count that must be positive is zero or negative."""


class IdOutOfRangeError(FormatError):
    """A doc or word id exceeds the declared dimensions."""


class DuplicateEntryError(FormatError):
    """The same (doc, word) pair occurs twice."""


class UnsortedTripleError(FormatError):
    """Triples are not in (doc_id, word_id) order."""


@dataclass(frozen=True)
class RawDocument:
    doc_id: int
    text: str
    label: str | None = None


class Vocabulary:
    """Bijection between term strings and dense 1-based word ids."""

    def __init__(self, terms=()):
        self._terms: list[str] = []
        self._ids: dict[str, int] = {}
        for term in terms:
            self.add(term)

    def add(self, term: str) -> int:
        """Add a term (or return its id if already present)."""
        existing = self._ids.get(term)
        if existing is not None:
            return existing
        if not term or term != term.lower():
            raise ValueError(f"terms must be nonempty and lowercase: {term!r}")
        self._terms.append(term)
        word_id = len(self._terms)
        self._ids[term] = word_id
        return word_id

    def id_of(self, term: str) -> int:
        return self._ids[term]

    def term_of(self, word_id: int) -> str:
        if not 1 <= word_id <= len(self._terms):
            raise IdOutOfRangeError(f"word id {word_id} not in 1..{len(self._terms)}")
        return self._terms[word_id - 1]

    @property
    def terms(self) -> tuple[str, ...]:
        return tuple(self._terms)

    def copy(self) -> "Vocabulary":
        return Vocabulary(self._terms)

    def __contains__(self, term: str) -> bool:
        return term in self._ids

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._terms == other._terms

    def __repr__(self) -> str:
        return f"Vocabulary({len(self)} terms)"


@dataclass(frozen=True)
class SparseBag:
    """Document-term count matrix as sorted (doc_id, word_id, count) triples."""

    n_docs: int
    n_words: int
    triples: tuple[tuple[int, int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(tuple(t) for t in self.triples))
        if self.n_docs < 0 or self.n_words < 0:
            raise NonPositiveValueError("document and word counts must be >= 0")
        prev = None
        for doc_id, word_id, count in self.triples:
            if doc_id < 1 or word_id < 1 or count < 1:
                raise NonPositiveValueError(
                    f"triple ({doc_id}, {word_id}, {count}) has a non-positive field"
                )
            if doc_id > self.n_docs or word_id > self.n_words:
                raise IdOutOfRangeError(
                    f"triple ({doc_id}, {word_id}, {count}) outside "
                    f"D={self.n_docs}, W={self.n_words}"
                )
            if prev is not None:
                if (doc_id, word_id) == prev:
                    raise DuplicateEntryError(f"duplicate entry ({doc_id}, {word_id})")
                if (doc_id, word_id) < prev:
                    raise UnsortedTripleError(
                        f"triple ({doc_id}, {word_id}) out of order after {prev}"
                    )
            prev = (doc_id, word_id)

    @property
    def nnz(self) -> int:
        return len(self.triples)

    def total_count(self) -> int:
        return sum(count for _, _, count in self.triples)

    def doc_entries(self, doc_id: int) -> list[tuple[int, int]]:
        """(word_id, count) pairs of one document, ascending word id."""
        return [(w, c) for d, w, c in self.triples if d == doc_id]


# A bag whose word axis is the fixed lexical-category feature space.
CategoryBag = SparseBag


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphabetic characters.

    Tokens shorter than two characters are dropped; digits and other
    non-letters act purely as separators, so numeric runs never emit.
    Only ASCII letters are kept.
    """
    tokens = []
    current = []
    for ch in text.lower():
        if "a" <= ch <= "z":
            current.append(ch)
        elif current:
            if len(current) >= 2:
                tokens.append("".join(current))
            current = []
    if len(current) >= 2:
        tokens.append("".join(current))
    return tokens


def filter_stopwords(tokens: list[str], stoplist) -> list[str]:
    """Remove every occurrence of a stoplist word, preserving order."""
    stopset = set(stoplist)
    return [t for t in tokens if t not in stopset]


def stem(token: str) -> str:
    """Porter stem of a lowercase token."""
    return porter.stem(token)


def extract_words(
    corpus, stoplist=(), use_stemming: bool = False
) -> tuple[Vocabulary, SparseBag]:
    """Build the vocabulary and bag of words for a corpus.

    Documents are scanned in doc_id order and word ids are assigned in
    first-occurrence order. Documents whose text yields no surviving
    terms still count toward *n_docs*.
    """
    docs = sorted(corpus, key=lambda d: d.doc_id)
    seen_ids = set()
    for doc in docs:
        if doc.doc_id in seen_ids:
            raise DuplicateDocIdError(f"doc_id {doc.doc_id} occurs more than once")
        seen_ids.add(doc.doc_id)
    if docs and [d.doc_id for d in docs] != list(range(1, len(docs) + 1)):
        raise CorpusError("doc_ids must be dense 1..n")

    stopset = set(stoplist)
    vocab = Vocabulary()
    triples = []
    for doc in docs:
        tokens = filter_stopwords(tokenize(doc.text), stopset)
        if use_stemming:
            tokens = [stem(t) for t in tokens]
        counts = Counter(tokens)
        per_doc = {}
        for token in tokens:  # first-occurrence order within the doc
            if token not in per_doc:
                per_doc[token] = vocab.add(token)
        doc_triples = sorted(
            (doc.doc_id, word_id, counts[token]) for token, word_id in per_doc.items()
        )
        triples.extend(doc_triples)
    return vocab, SparseBag(len(docs), len(vocab), tuple(triples))


def stem_bag(bag: SparseBag, vocab: Vocabulary) -> tuple[Vocabulary, SparseBag]:
    """Collapse a bag of raw terms onto their Porter stems.

    Stem ids are assigned in first-occurrence order over the original
    word ids; counts of terms sharing a stem are summed per document.
    """
    new_vocab = Vocabulary()
    stem_id_of = {
        word_id: new_vocab.add(stem(vocab.term_of(word_id)))
        for word_id in range(1, len(vocab) + 1)
    }
    sums: dict[tuple[int, int], int] = {}
    for doc_id, word_id, count in bag.triples:
        key = (doc_id, stem_id_of[word_id])
        sums[key] = sums.get(key, 0) + count
    triples = tuple((d, w, c) for (d, w), c in sorted(sums.items()))
    return new_vocab, SparseBag(bag.n_docs, len(new_vocab), triples)


def write_uci(bag: SparseBag) -> str:
    """Serialize to the three-header UCI layout (ASCII, LF newlines)."""
    lines = [str(bag.n_docs), str(bag.n_words), str(bag.nnz)]
    lines.extend(f"{d} {w} {c}" for d, w, c in bag.triples)
    return "\n".join(lines) + "\n"


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise MalformedLineError(f"{what}: not an integer: {text!r}") from None


def parse_uci(stream: str) -> SparseBag:
    """Inverse of :func:`write_uci`, rejecting malformed streams."""
    lines = stream.splitlines()
    if len(lines) < 3:
        raise MalformedLineError("stream shorter than the three header lines")
    header = []
    for i, name in enumerate(("D", "W", "NNZ")):
        if len(lines[i].split()) != 1:
            raise MalformedLineError(f"header line {name} must be a single integer")
        value = _parse_int(lines[i], f"header {name}")
        if value < 0:
            raise NonPositiveValueError(f"header {name} is negative: {value}")
        header.append(value)
    n_docs, n_words, nnz = header
    body = lines[3:]
    if len(body) != nnz:
        raise CountMismatchError(f"header says NNZ={nnz} but {len(body)} triples present")
    triples = []
    for line in body:
        parts = line.split(" ")
        if len(parts) != 3 or any(p == "" for p in parts):
            raise MalformedLineError(f"bad triple line: {line!r}")
        d = _parse_int(parts[0], "docID")
        w = _parse_int(parts[1], "wordID")
        c = _parse_int(parts[2], "count")
        triples.append((d, w, c))
    return SparseBag(n_docs, n_words, tuple(triples))


def to_optimized(bag: SparseBag) -> str:
    """One line per nonempty document: ``docID id:count id:count ...``."""
    lines = []
    current_doc = None
    parts: list[str] = []
    for d, w, c in bag.triples:
        if d != current_doc:
            if parts:
                lines.append(" ".join(parts))
            current_doc = d
            parts = [str(d)]
        parts.append(f"{w}:{c}")
    if parts:
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n" if lines else ""


def parse_optimized(stream: str, n_docs: int, n_words: int) -> SparseBag:
    """Inverse of :func:`to_optimized` given the bag dimensions."""
    triples = []
    prev_doc = 0
    for line in stream.splitlines():
        parts = line.split(" ")
        if len(parts) < 2 or any(p == "" for p in parts):
            raise MalformedLineError(f"bad document line: {line!r}")
        doc_id = _parse_int(parts[0], "docID")
        if doc_id < 1:
            raise NonPositiveValueError(f"docID must be positive: {doc_id}")
        if doc_id > n_docs:
            raise IdOutOfRangeError(f"docID {doc_id} exceeds D={n_docs}")
        if doc_id == prev_doc:
            raise DuplicateEntryError(f"document {doc_id} appears on two lines")
        if doc_id < prev_doc:
            raise UnsortedTripleError(f"document {doc_id} out of order after {prev_doc}")
        prev_doc = doc_id
        seen = set()
        prev_word = 0
        for part in parts[1:]:
            pieces = part.split(":")
            if len(pieces) != 2:
                raise MalformedLineError(f"bad id:count entry: {part!r}")
            word_id = _parse_int(pieces[0], "wordID")
            count = _parse_int(pieces[1], "count")
            if word_id < 1 or count < 1:
                raise NonPositiveValueError(f"entry {part!r} has a non-positive field")
            if word_id > n_words:
                raise IdOutOfRangeError(f"wordID {word_id} exceeds W={n_words}")
            if word_id in seen:
                raise DuplicateEntryError(
                    f"wordID {word_id} duplicated in document {doc_id}"
                )
            if word_id < prev_word:
                raise UnsortedTripleError(
                    f"wordID {word_id} out of order in document {doc_id}"
                )
            seen.add(word_id)
            prev_word = word_id
            triples.append((doc_id, word_id, count))
    return SparseBag(n_docs, n_words, tuple(triples))


def load_stopwords(path) -> set[str]:
    """Read a stopword file, one lowercase word per line."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return words


def read_corpus_dir(path) -> list[RawDocument]:
    """Load a directory corpus: one plain-text file per document.

    Files are assigned doc_ids 1..n in sorted relative-path order. The
    label is the immediate parent directory name, or None for files
    sitting directly in the corpus root.
    """
    root = Path(path)
    if not root.is_dir():
        raise CorpusError(f"not a corpus directory: {root}")
    files = sorted(p for p in root.rglob("*") if p.is_file())
    docs = []
    for i, p in enumerate(files, start=1):
        label = p.parent.name if p.parent != root else None
        docs.append(RawDocument(i, p.read_text(encoding="utf-8"), label))
    return docs


def read_corpus_jsonl(path) -> list[RawDocument]:
    """Load a JSON-lines corpus with fields id / label / text."""
    docs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {lineno}: invalid JSON: {exc}") from None
        try:
            docs.append(
                RawDocument(int(record["id"]), record["text"], record.get("label"))
            )
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"line {lineno}: missing field {exc}") from None
    return docs


def write_vocabulary(vocab: Vocabulary) -> str:
    """One term per line; the line number is the word id."""
    return "".join(term + "\n" for term in vocab.terms)


def parse_vocabulary(stream: str) -> Vocabulary:
    return Vocabulary(stream.splitlines())


def write_labels(labels: dict[int, str]) -> str:
    """Tab-separated ``docID<TAB>label`` lines, ascending doc id."""
    return "".join(f"{doc_id}\t{labels[doc_id]}\n" for doc_id in sorted(labels))


def parse_labels(stream: str) -> dict[int, str]:
    labels = {}
    for line in stream.splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise MalformedLineError(f"bad label line: {line!r}")
        labels[_parse_int(parts[0], "docID")] = parts[1]
    return labels
