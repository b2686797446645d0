"""WordNet lexical-category features and term weighting.

The 45 lexicographer files (26 noun, 15 verb, 4 adjective/adverb) plus a
reserved Uncategorized slot form a fixed, corpus-independent feature
space. A :class:`Lexicon` maps terms to ranked senses, each carrying a
category id and a hypernym concept chain; with it a word bag collapses
to a category bag (all categories, or nouns only) or expands with
hypernym pseudo-terms (the add-concept baseline).

Weighting multiplies counts by ln(D / df): lfi-idf over category
features, plain tf-idf over word features.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .corpus import (
    CategoryBag,
    DuplicateEntryError,
    IdOutOfRangeError,
    SparseBag,
    Vocabulary,
)

__all__ = [
    "LexicalCategory",
    "CATEGORIES",
    "CATEGORY_BY_NAME",
    "UNCATEGORIZED_ID",
    "ALL_CATEGORIES",
    "NOUNS_ONLY",
    "DROPPED",
    "Sense",
    "Lexicon",
    "LexiconError",
    "MalformedLexiconLineError",
    "UnknownCategoryError",
    "DuplicateSenseRankError",
    "load_lexicon",
    "category_of",
    "feature_space",
    "feature_id_of",
    "bag_to_categories",
    "hotho_expand",
    "FeatureMatrix",
    "weight_lfidf",
    "weight_tfidf",
    "normalize",
    "write_matrix",
    "parse_matrix",
]


@dataclass(frozen=True)
class LexicalCategory:
    category_id: int
    name: str
    pos: str  # noun | verb | adjective | adverb | none


_LEXNAMES = [
    ("adj.all", "adjective"),
    ("adj.pert", "adjective"),
    ("adv.all", "adverb"),
    ("noun.Tops", "noun"),
    ("noun.act", "noun"),
    ("noun.animal", "noun"),
    ("noun.artifact", "noun"),
    ("noun.attribute", "noun"),
    ("noun.body", "noun"),
    ("noun.cognition", "noun"),
    ("noun.communication", "noun"),
    ("noun.event", "noun"),
    ("noun.feeling", "noun"),
    ("noun.food", "noun"),
    ("noun.group", "noun"),
    ("noun.location", "noun"),
    ("noun.motive", "noun"),
    ("noun.object", "noun"),
    ("noun.person", "noun"),
    ("noun.phenomenon", "noun"),
    ("noun.plant", "noun"),
    ("noun.possession", "noun"),
    ("noun.process", "noun"),
    ("noun.quantity", "noun"),
    ("noun.relation", "noun"),
    ("noun.shape", "noun"),
    ("noun.state", "noun"),
    ("noun.substance", "noun"),
    ("noun.time", "noun"),
    ("verb.body", "verb"),
    ("verb.change", "verb"),
    ("verb.cognition", "verb"),
    ("verb.communication", "verb"),
    ("verb.competition", "verb"),
    ("verb.consumption", "verb"),
    ("verb.contact", "verb"),
    ("verb.creation", "verb"),
    ("verb.emotion", "verb"),
    ("verb.motion", "verb"),
    ("verb.perception", "verb"),
    ("verb.possession", "verb"),
    ("verb.social", "verb"),
    ("verb.stative", "verb"),
    ("verb.weather", "verb"),
    ("adj.ppl", "adjective"),
]

UNCATEGORIZED_ID = 45

CATEGORIES: tuple[LexicalCategory, ...] = tuple(
    LexicalCategory(i, name, pos) for i, (name, pos) in enumerate(_LEXNAMES)
) + (LexicalCategory(UNCATEGORIZED_ID, "Uncategorized", "none"),)

CATEGORY_BY_NAME = {c.name: c for c in CATEGORIES}

ALL_CATEGORIES = "all_categories"
NOUNS_ONLY = "nouns_only"


class _Dropped:
    """Sentinel for lexicon terms with no sense in the selected mode."""

    def __repr__(self) -> str:
        return "DROPPED"


DROPPED = _Dropped()


class LexiconError(Exception):
    """Base class for lexicon loading failures."""


class MalformedLexiconLineError(LexiconError):
    pass


class UnknownCategoryError(LexiconError):
    pass


class DuplicateSenseRankError(LexiconError):
    pass


@dataclass(frozen=True)
class Sense:
    category_id: int
    hypernyms: tuple[str, ...] = ()  # nearest parent first


class Lexicon:
    """Immutable term -> ranked senses mapping."""

    def __init__(self, senses: dict[str, tuple[Sense, ...]]):
        self._senses = dict(senses)

    def senses(self, term: str) -> tuple[Sense, ...]:
        return self._senses.get(term, ())

    def __contains__(self, term: str) -> bool:
        return term in self._senses

    def __len__(self) -> int:
        return len(self._senses)


def load_lexicon(stream: str) -> Lexicon:
    """Parse the TSV lexicon format.

    Each line is ``term<TAB>sense_rank<TAB>category_name<TAB>chain``
    where the chain is a ``>``-separated list of hypernym concept ids
    (possibly empty). ``#`` lines are comments.
    """
    ranked: dict[str, dict[int, Sense]] = {}
    for lineno, line in enumerate(stream.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) == 3:  # chainless entry; trailing tab optional
            parts = parts + [""]
        if len(parts) != 4:
            raise MalformedLexiconLineError(
                f"line {lineno}: expected 3 or 4 tab-separated fields, got {len(parts)}"
            )
        term, rank_text, category_name, chain_text = parts
        if not term:
            raise MalformedLexiconLineError(f"line {lineno}: empty term")
        try:
            rank = int(rank_text)
        except ValueError:
            raise MalformedLexiconLineError(
                f"line {lineno}: sense rank not an integer: {rank_text!r}"
            ) from None
        if rank < 1:
            raise MalformedLexiconLineError(f"line {lineno}: sense rank must be >= 1")
        category = CATEGORY_BY_NAME.get(category_name)
        if category is None:
            raise UnknownCategoryError(f"line {lineno}: unknown category {category_name!r}")
        if chain_text:
            chain = tuple(chain_text.split(">"))
            if any(not c for c in chain):
                raise MalformedLexiconLineError(f"line {lineno}: empty hypernym concept")
        else:
            chain = ()
        per_term = ranked.setdefault(term, {})
        if rank in per_term:
            raise DuplicateSenseRankError(f"line {lineno}: duplicate sense {rank} for {term!r}")
        per_term[rank] = Sense(category.category_id, chain)
    return Lexicon(
        {term: tuple(senses[r] for r in sorted(senses)) for term, senses in ranked.items()}
    )


def category_of(lexicon: Lexicon, term: str, mode: str = ALL_CATEGORIES):
    """Lexical category id for a term, or DROPPED.

    Unknown terms map to Uncategorized in either mode. In nouns_only
    mode a known term resolves to its first noun sense, and is DROPPED
    when it has none.
    """
    senses = lexicon.senses(term)
    if not senses:
        return UNCATEGORIZED_ID
    if mode == ALL_CATEGORIES:
        return senses[0].category_id
    if mode == NOUNS_ONLY:
        for sense in senses:
            if CATEGORIES[sense.category_id].pos == "noun":
                return sense.category_id
        return DROPPED
    raise ValueError(f"unknown mode: {mode!r}")


def feature_space(mode: str) -> tuple[int, ...]:
    """Raw category ids of the fixed feature space, in feature-id order."""
    if mode == ALL_CATEGORIES:
        return tuple(c.category_id for c in CATEGORIES)
    if mode == NOUNS_ONLY:
        return tuple(c.category_id for c in CATEGORIES if c.pos == "noun") + (
            UNCATEGORIZED_ID,
        )
    raise ValueError(f"unknown mode: {mode!r}")


def feature_id_of(category_id: int, mode: str) -> int:
    """Dense 1-based feature id of a category within a mode's space."""
    return feature_space(mode).index(category_id) + 1


def bag_to_categories(
    bag: SparseBag, vocab: Vocabulary, lexicon: Lexicon, mode: str = ALL_CATEGORIES
) -> CategoryBag:
    """Collapse a word bag onto the fixed category feature space.

    Counts of words sharing a category are summed per document; DROPPED
    words contribute nothing. The feature dimension is always the full
    space size (46 all-categories, 27 nouns-only), never data-dependent.
    """
    space = feature_space(mode)
    index = {cid: i + 1 for i, cid in enumerate(space)}
    sums: dict[tuple[int, int], int] = {}
    for doc_id, word_id, count in bag.triples:
        if word_id > len(vocab):
            raise IdOutOfRangeError(f"word id {word_id} not in vocabulary")
        category = category_of(lexicon, vocab.term_of(word_id), mode)
        if category is DROPPED:
            continue
        key = (doc_id, index[category])
        sums[key] = sums.get(key, 0) + count
    triples = tuple((d, f, c) for (d, f), c in sorted(sums.items()))
    return SparseBag(bag.n_docs, len(space), triples)


def hotho_expand(
    bag: SparseBag, vocab: Vocabulary, lexicon: Lexicon, levels: int = 5
) -> tuple[Vocabulary, SparseBag]:
    """Add-concept hypernym expansion of a word bag.

    Every word found in the lexicon keeps its own count and additionally
    credits the first ``levels`` hypernym concepts of its first sense
    with the same count in the same document. Concepts become vocabulary
    pseudo-terms (reusing an existing entry when the concept string is
    already a term). Words absent from the lexicon pass through.
    """
    if levels < 0:
        raise ValueError("levels must be >= 0")
    new_vocab = vocab.copy()
    sums: dict[tuple[int, int], int] = {}
    for doc_id, word_id, count in bag.triples:
        sums[(doc_id, word_id)] = sums.get((doc_id, word_id), 0) + count
        senses = lexicon.senses(vocab.term_of(word_id))
        if not senses:
            continue
        for concept in senses[0].hypernyms[:levels]:
            concept_id = new_vocab.add(concept.lower())
            key = (doc_id, concept_id)
            sums[key] = sums.get(key, 0) + count
    triples = tuple((d, w, c) for (d, w), c in sorted(sums.items()))
    return new_vocab, SparseBag(bag.n_docs, len(new_vocab), triples)


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-document sparse weighted vectors over a fixed feature space."""

    n_docs: int
    n_features: int
    rows: dict[int, tuple[tuple[int, float], ...]] = field(default_factory=dict)

    def row(self, doc_id: int) -> tuple[tuple[int, float], ...]:
        return self.rows.get(doc_id, ())

    def __post_init__(self):
        clean = {}
        for doc_id, entries in self.rows.items():
            entries = tuple((int(f), float(w)) for f, w in entries)
            seen = set()
            for feature_id, weight in entries:
                if not 1 <= feature_id <= self.n_features:
                    raise IdOutOfRangeError(
                        f"feature id {feature_id} not in 1..{self.n_features}"
                    )
                if feature_id in seen:
                    raise DuplicateEntryError(
                        f"doc {doc_id}: duplicate feature id {feature_id}"
                    )
                seen.add(feature_id)
                if not math.isfinite(weight) or weight < 0:
                    raise ValueError(f"weight must be finite and >= 0: {weight}")
            if entries:
                clean[doc_id] = entries
        object.__setattr__(self, "rows", clean)


def _document_frequencies(bag: SparseBag) -> dict[int, int]:
    df: dict[int, int] = {}
    seen: set[tuple[int, int]] = set()
    for doc_id, word_id, _ in bag.triples:
        if (doc_id, word_id) not in seen:
            seen.add((doc_id, word_id))
            df[word_id] = df.get(word_id, 0) + 1
    return df


def _idf_weight(bag: SparseBag) -> FeatureMatrix:
    df = _document_frequencies(bag)
    n = bag.n_docs
    rows: dict[int, list[tuple[int, float]]] = {}
    for doc_id, word_id, count in bag.triples:
        weight = count * math.log(n / df[word_id])
        rows.setdefault(doc_id, []).append((word_id, weight))
    return FeatureMatrix(n, bag.n_words, {d: tuple(r) for d, r in rows.items()})


def weight_lfidf(cbag: CategoryBag) -> FeatureMatrix:
    """Lexical-frequency x inverse-document-frequency weights.

    weight(d, c) = count(d, c) * ln(D / df(c)); a category occurring in
    every document therefore has weight 0 everywhere.
    """
    return _idf_weight(cbag)


def weight_tfidf(bag: SparseBag) -> FeatureMatrix:
    """Same count * ln(D / df) form applied over word features."""
    return _idf_weight(bag)


def normalize(m: FeatureMatrix) -> FeatureMatrix:
    """Scale every nonzero document vector to unit Euclidean norm."""
    rows = {}
    for doc_id, entries in m.rows.items():
        norm = math.sqrt(sum(w * w for _, w in entries))
        if norm > 0.0:
            rows[doc_id] = tuple((f, w / norm) for f, w in entries)
        else:
            rows[doc_id] = entries
    return FeatureMatrix(m.n_docs, m.n_features, rows)


def write_matrix(m: FeatureMatrix) -> str:
    """Two header lines (D, feature dimension) then one line per
    nonempty document: ``docID id:weight id:weight ...``."""
    lines = [str(m.n_docs), str(m.n_features)]
    for doc_id in sorted(m.rows):
        parts = [str(doc_id)] + [f"{f}:{w!r}" for f, w in m.rows[doc_id]]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_matrix(stream: str) -> FeatureMatrix:
    from .corpus import MalformedLineError  # local to avoid cycle noise

    lines = stream.splitlines()
    if len(lines) < 2:
        raise MalformedLineError("matrix stream shorter than its two header lines")
    try:
        n_docs, n_features = int(lines[0]), int(lines[1])
    except ValueError:
        raise MalformedLineError("matrix header lines must be integers") from None
    rows: dict[int, tuple[tuple[int, float], ...]] = {}
    for line in lines[2:]:
        parts = line.split(" ")
        if len(parts) < 2:
            raise MalformedLineError(f"bad matrix line: {line!r}")
        try:
            doc_id = int(parts[0])
            entries = []
            for part in parts[1:]:
                fid_text, weight_text = part.split(":")
                entries.append((int(fid_text), float(weight_text)))
        except ValueError:
            raise MalformedLineError(f"bad matrix line: {line!r}") from None
        rows[doc_id] = tuple(entries)
    return FeatureMatrix(n_docs, n_features, rows)
