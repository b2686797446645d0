import random

import pytest

from lexicluster import corpus
from lexicluster.corpus import (
    CorpusError,
    CountMismatchError,
    DuplicateDocIdError,
    DuplicateEntryError,
    IdOutOfRangeError,
    MalformedLineError,
    NonPositiveValueError,
    RawDocument,
    SparseBag,
    UnsortedTripleError,
    Vocabulary,
)


def test_tokenize_lowercases_and_splits():
    assert corpus.tokenize("The cat, the CAT!") == ["the", "cat", "the", "cat"]


def test_tokenize_drops_short_and_numeric():
    assert corpus.tokenize("a I 42 x9y go 3rd") == ["go", "rd"]
    assert corpus.tokenize("123 456") == []


def test_tokenize_non_ascii_separates():
    assert corpus.tokenize("café naive") == ["caf", "naive"]


def test_filter_stopwords():
    assert corpus.filter_stopwords(["the", "cat", "sat"], {"the"}) == ["cat", "sat"]


def test_vocabulary_is_bijection():
    v = Vocabulary()
    assert v.add("cat") == 1
    assert v.add("dog") == 2
    assert v.add("cat") == 1
    assert v.id_of("dog") == 2
    assert v.term_of(1) == "cat"
    assert len(v) == 2
    with pytest.raises(IdOutOfRangeError):
        v.term_of(3)
    with pytest.raises(ValueError):
        v.add("Mixed")


def test_vocabulary_copy_is_independent():
    v = Vocabulary(["cat"])
    w = v.copy()
    w.add("dog")
    assert len(v) == 1 and len(w) == 2
    assert v == Vocabulary(["cat"])


def test_sparse_bag_validation():
    SparseBag(2, 3, ((1, 1, 2), (1, 3, 1), (2, 2, 1)))
    with pytest.raises(NonPositiveValueError):
        SparseBag(2, 3, ((1, 1, 0),))
    with pytest.raises(IdOutOfRangeError):
        SparseBag(2, 3, ((1, 4, 1),))
    with pytest.raises(DuplicateEntryError):
        SparseBag(2, 3, ((1, 1, 1), (1, 1, 2)))
    with pytest.raises(UnsortedTripleError):
        SparseBag(2, 3, ((1, 2, 1), (1, 1, 2)))


def test_extract_words_counts_and_ids():
    docs = [
        RawDocument(1, "the cat sat on the mat"),
        RawDocument(2, "the dog sat"),
    ]
    vocab, bag = corpus.extract_words(docs, stoplist={"the", "on"})
    assert vocab.terms == ("cat", "sat", "mat", "dog")
    assert bag.n_docs == 2 and bag.n_words == 4
    assert bag.triples == ((1, 1, 1), (1, 2, 1), (1, 3, 1), (2, 2, 1), (2, 4, 1))


def test_extract_words_with_stemming():
    docs = [RawDocument(1, "running runs run")]
    vocab, bag = corpus.extract_words(docs, use_stemming=True)
    assert vocab.terms == ("run",)
    assert bag.triples == ((1, 1, 3),)


def test_extract_words_empty_doc_keeps_dimension():
    docs = [RawDocument(1, "cat"), RawDocument(2, "42 !!")]
    _, bag = corpus.extract_words(docs)
    assert bag.n_docs == 2
    assert bag.doc_entries(2) == []


def test_extract_words_rejects_duplicate_ids():
    docs = [RawDocument(1, "x" * 3), RawDocument(1, "cat")]
    with pytest.raises(DuplicateDocIdError):
        corpus.extract_words(docs)


def test_extract_words_rejects_sparse_ids():
    with pytest.raises(CorpusError):
        corpus.extract_words([RawDocument(2, "cat")])


def test_stem_bag_merges_counts():
    docs = [RawDocument(1, "running runs runner")]
    vocab, bag = corpus.extract_words(docs)
    svocab, sbag = corpus.stem_bag(bag, vocab)
    assert svocab.terms == ("run", "runner")
    assert sbag.triples == ((1, 1, 2), (1, 2, 1))


def test_uci_roundtrip_and_layout():
    bag = SparseBag(2, 3, ((1, 1, 2), (2, 3, 1)))
    text = corpus.write_uci(bag)
    assert text == "2\n3\n2\n1 1 2\n2 3 1\n"
    assert corpus.parse_uci(text) == bag


def test_parse_uci_error_cases():
    with pytest.raises(MalformedLineError):
        corpus.parse_uci("1\n2\n")
    with pytest.raises(MalformedLineError):
        corpus.parse_uci("x\n2\n0\n")
    with pytest.raises(CountMismatchError):
        corpus.parse_uci("1\n2\n2\n1 1 1\n")
    with pytest.raises(MalformedLineError):
        corpus.parse_uci("1\n2\n1\n1 1\n")
    with pytest.raises(NonPositiveValueError):
        corpus.parse_uci("1\n2\n1\n1 1 0\n")
    with pytest.raises(IdOutOfRangeError):
        corpus.parse_uci("1\n2\n1\n1 3 1\n")


def test_optimized_roundtrip():
    bag = SparseBag(3, 4, ((1, 1, 2), (1, 4, 1), (3, 2, 5)))
    text = corpus.to_optimized(bag)
    assert text == "1 1:2 4:1\n3 2:5\n"
    assert corpus.parse_optimized(text, 3, 4) == bag


def test_parse_optimized_error_cases():
    with pytest.raises(DuplicateEntryError):
        corpus.parse_optimized("1 1:1 1:2\n", 2, 3)
    with pytest.raises(DuplicateEntryError):
        corpus.parse_optimized("1 1:1\n1 2:1\n", 2, 3)
    with pytest.raises(IdOutOfRangeError):
        corpus.parse_optimized("1 4:1\n", 2, 3)
    with pytest.raises(IdOutOfRangeError):
        corpus.parse_optimized("3 1:1\n", 2, 3)
    with pytest.raises(UnsortedTripleError):
        corpus.parse_optimized("2 1:1\n1 2:1\n", 2, 3)
    with pytest.raises(UnsortedTripleError):
        corpus.parse_optimized("1 2:1 1:1\n", 2, 3)
    with pytest.raises(MalformedLineError):
        corpus.parse_optimized("1 2\n", 2, 3)
    with pytest.raises(NonPositiveValueError):
        corpus.parse_optimized("1 2:0\n", 2, 3)


def random_bag(rng: random.Random) -> SparseBag:
    n_docs = rng.randint(0, 8)
    n_words = rng.randint(1, 12)
    triples = []
    for d in range(1, n_docs + 1):
        words = rng.sample(range(1, n_words + 1), k=rng.randint(0, min(5, n_words)))
        for w in sorted(words):
            triples.append((d, w, rng.randint(1, 9)))
    return SparseBag(n_docs, n_words, tuple(triples))


def test_codec_roundtrips_random_bags():
    rng = random.Random(99)
    for _ in range(100):
        bag = random_bag(rng)
        assert corpus.parse_uci(corpus.write_uci(bag)) == bag
        assert corpus.parse_optimized(corpus.to_optimized(bag), bag.n_docs, bag.n_words) == bag


def test_read_corpus_dir_orders_and_labels(tmp_path):
    (tmp_path / "b").mkdir()
    (tmp_path / "a").mkdir()
    (tmp_path / "b" / "x.txt").write_text("beta doc")
    (tmp_path / "a" / "x.txt").write_text("alpha doc")
    (tmp_path / "root.txt").write_text("no label")
    docs = corpus.read_corpus_dir(tmp_path)
    assert [d.doc_id for d in docs] == [1, 2, 3]
    assert [d.label for d in docs] == ["a", "b", None]
    assert docs[0].text == "alpha doc"


def test_read_corpus_dir_missing(tmp_path):
    with pytest.raises(CorpusError):
        corpus.read_corpus_dir(tmp_path / "nope")


def test_read_corpus_jsonl(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        '{"id": 1, "text": "hello", "label": "x"}\n{"id": 2, "text": "bye"}\n'
    )
    docs = corpus.read_corpus_jsonl(path)
    assert docs[0] == RawDocument(1, "hello", "x")
    assert docs[1].label is None
    path.write_text("{bad json\n")
    with pytest.raises(CorpusError):
        corpus.read_corpus_jsonl(path)


def test_vocabulary_roundtrip():
    v = Vocabulary(["cat", "dog"])
    text = corpus.write_vocabulary(v)
    assert text == "cat\ndog\n"
    assert corpus.parse_vocabulary(text) == v


def test_labels_roundtrip():
    labels = {2: "food", 1: "animals"}
    text = corpus.write_labels(labels)
    assert text == "1\tanimals\n2\tfood\n"
    assert corpus.parse_labels(text) == labels
    with pytest.raises(MalformedLineError):
        corpus.parse_labels("1 animals\n")


def test_load_stopwords(tmp_path, stopwords_path):
    words = corpus.load_stopwords(stopwords_path)
    assert "the" in words and "and" in words
    custom = tmp_path / "s.txt"
    custom.write_text("# comment\nFoo\n\nbar\n")
    assert corpus.load_stopwords(custom) == {"foo", "bar"}
