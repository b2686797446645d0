"""Command-line pipeline: ingest -> featurize -> cluster -> evaluate.

The working directory given by --out accumulates the pipeline's files:

    vocab.txt        one term per line (line number = word id)
    docword.txt      UCI bag of words (D / W / NNZ headers + triples)
    docword.opt.txt  compact one-line-per-document serialization
    labels.tsv       docID<TAB>label, written when the corpus has labels
    matrix.txt       weighted feature matrix (headers: D, feature count)
    assignment.txt   docID clusterIndex
    centroids.txt    clusterIndex feature:weight ...
    trace.txt        one line per bisection
    store/           MapReduce path-label store used during clustering
    report.txt/.csv  evaluation metrics

`compare` runs the whole pipeline for the four document representations
(stemmed, hotho, lexical_categories, lexical_nouns) over one or more
seeds and collects a comparison CSV.

Any flag may instead come from a ``key = value`` config file given with
--config; explicit command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import clustering, corpus, engine, evaluation, ontology

__all__ = ["main", "REPRESENTATIONS"]

REPRESENTATIONS = ("stemmed", "hotho", "lexical_categories", "lexical_nouns")

VOCAB_FILE = "vocab.txt"
UCI_FILE = "docword.txt"
OPT_FILE = "docword.opt.txt"
LABELS_FILE = "labels.tsv"
MATRIX_FILE = "matrix.txt"
ASSIGNMENT_FILE = "assignment.txt"
CENTROIDS_FILE = "centroids.txt"
TRACE_FILE = "trace.txt"
STORE_DIR = "store"
REPORT_TEXT = "report.txt"
REPORT_CSV = "report.csv"
COMPARISON_CSV = "comparison.csv"

COMPARISON_HEADER = "representation,features,K,seed,purity,entropy,f_measure,internal"


class CliError(Exception):
    """User-facing configuration or input problem."""


def _read(path: Path) -> str:
    if not path.is_file():
        raise CliError(f"missing input file: {path} (run the earlier pipeline step?)")
    return path.read_text(encoding="utf-8")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def load_corpus(path_text: str) -> list[corpus.RawDocument]:
    path = Path(path_text)
    if path.is_dir():
        return corpus.read_corpus_dir(path)
    if path.is_file():
        return corpus.read_corpus_jsonl(path)
    raise CliError(f"corpus not found: {path}")


def run_ingest(corpus_path, out_dir, stoplist_path=None, use_stemming=False):
    """Extract words and write the bag, vocabulary, and label files."""
    docs = load_corpus(corpus_path)
    stoplist = corpus.load_stopwords(stoplist_path) if stoplist_path else set()
    vocab, bag = corpus.extract_words(docs, stoplist, use_stemming=use_stemming)
    out = Path(out_dir)
    _write(out / VOCAB_FILE, corpus.write_vocabulary(vocab))
    _write(out / UCI_FILE, corpus.write_uci(bag))
    _write(out / OPT_FILE, corpus.to_optimized(bag))
    labels = {d.doc_id: d.label for d in docs if d.label is not None}
    if labels:
        _write(out / LABELS_FILE, corpus.write_labels(labels))
    return vocab, bag, labels


def build_matrix(bag, vocab, rep, lexicon=None, levels=5):
    """Weighted, unit-normalized feature matrix for one representation."""
    if rep == "stemmed":
        _, stemmed = corpus.stem_bag(bag, vocab)
        matrix = ontology.weight_tfidf(stemmed)
    elif rep == "hotho":
        if lexicon is None:
            raise CliError("representation 'hotho' needs --lexicon")
        _, expanded = ontology.hotho_expand(bag, vocab, lexicon, levels=levels)
        matrix = ontology.weight_tfidf(expanded)
    elif rep == "lexical_categories":
        if lexicon is None:
            raise CliError("representation 'lexical_categories' needs --lexicon")
        cbag = ontology.bag_to_categories(bag, vocab, lexicon, ontology.ALL_CATEGORIES)
        matrix = ontology.weight_lfidf(cbag)
    elif rep == "lexical_nouns":
        if lexicon is None:
            raise CliError("representation 'lexical_nouns' needs --lexicon")
        cbag = ontology.bag_to_categories(bag, vocab, lexicon, ontology.NOUNS_ONLY)
        matrix = ontology.weight_lfidf(cbag)
    else:
        raise CliError(f"unknown representation: {rep!r}")
    return ontology.normalize(matrix)


def run_featurize(out_dir, rep, lexicon_path=None, levels=5):
    out = Path(out_dir)
    bag = corpus.parse_uci(_read(out / UCI_FILE))
    vocab = corpus.parse_vocabulary(_read(out / VOCAB_FILE))
    lexicon = None
    if lexicon_path:
        lexicon = ontology.load_lexicon(_read(Path(lexicon_path)))
    matrix = build_matrix(bag, vocab, rep, lexicon, levels)
    _write(out / MATRIX_FILE, ontology.write_matrix(matrix))
    return matrix


def matrix_to_docs(matrix) -> list[clustering.DocVector]:
    """Every document as a DocVector, including all-zero ones."""
    return [
        clustering.DocVector(doc_id, matrix.row(doc_id))
        for doc_id in range(1, matrix.n_docs + 1)
    ]


def _trace_text(trace) -> str:
    lines = ["# call dataset centroids output iterations size0 size1"]
    for step in trace:
        lines.append(
            f"{step.call_index} {step.dataset} {step.centroids} {step.output} "
            f"{step.iterations} {step.sizes[0]} {step.sizes[1]}"
        )
    return "\n".join(lines) + "\n"


def run_cluster(out_dir, cfg, workers=None, partitions=None):
    out = Path(out_dir)
    matrix = ontology.parse_matrix(_read(out / MATRIX_FILE))
    docs = matrix_to_docs(matrix)
    store = engine.PathStore(out / STORE_DIR)
    eng = engine.Engine(store, workers=workers, n_partitions=partitions)
    try:
        result = clustering.bisecting(docs, cfg, eng)
    except clustering.ExhaustionError as exc:
        if exc.partial:
            assignment = {}
            centroids = []
            for index, cluster in enumerate(exc.partial):
                for doc in cluster.docs:
                    assignment[doc.doc_id] = index
                centroids.append(
                    clustering.Centroid(index, cluster.centroid.components)
                )
            _write(out / ASSIGNMENT_FILE, clustering.write_assignment(assignment))
            _write(out / CENTROIDS_FILE, clustering.write_centroids(centroids))
            if exc.trace is not None:
                _write(out / TRACE_FILE, _trace_text(exc.trace))
        raise
    _write(out / ASSIGNMENT_FILE, clustering.write_assignment(result.assignment))
    _write(out / CENTROIDS_FILE, clustering.write_centroids(result.centroids))
    _write(out / TRACE_FILE, _trace_text(result.trace))
    return result


def run_evaluate(out_dir, rep, k, seed):
    out = Path(out_dir)
    assignment = clustering.parse_assignment(_read(out / ASSIGNMENT_FILE))
    centroids = clustering.parse_centroids(_read(out / CENTROIDS_FILE))
    matrix = ontology.parse_matrix(_read(out / MATRIX_FILE))
    report = evaluation.MetricsReport(representation=rep, K=k, seed=seed)
    report.internal = evaluation.internal_eval(matrix, assignment, centroids)
    labels_path = out / LABELS_FILE
    if labels_path.is_file():
        labels = corpus.parse_labels(labels_path.read_text(encoding="utf-8"))
        table = evaluation.contingency(assignment, labels)
        report.purity = evaluation.purity(table)
        total_entropy, per_cluster = evaluation.entropy(table)
        report.entropy = total_entropy
        report.per_cluster_entropy = tuple(per_cluster)
        report.f_measure = evaluation.f_measure(table)
        report.per_class_f = tuple(evaluation.per_class_best_f(table))
    _write(out / REPORT_TEXT, report.to_text())
    _write(out / REPORT_CSV, report.to_csv())
    return report


def run_compare(corpus_path, lexicon_path, k, seeds, out_dir,
                stoplist_path=None, levels=5, cfg_kwargs=None,
                workers=None, partitions=None):
    """Full pipeline for every representation and seed; returns report rows."""
    out = Path(out_dir)
    _, bag, labels = run_ingest(corpus_path, out, stoplist_path)
    vocab = corpus.parse_vocabulary(_read(out / VOCAB_FILE))
    lexicon = ontology.load_lexicon(_read(Path(lexicon_path)))
    cfg_kwargs = dict(cfg_kwargs or {})
    rows = []
    for seed in seeds:
        for rep in REPRESENTATIONS:
            subdir = out / "compare" / rep / f"seed{seed}"
            matrix = build_matrix(bag, vocab, rep, lexicon, levels)
            _write(subdir / MATRIX_FILE, ontology.write_matrix(matrix))
            if labels:
                _write(subdir / LABELS_FILE, corpus.write_labels(labels))
            cfg = clustering.BisectConfig(K=k, seed=seed, **cfg_kwargs)
            run_cluster(subdir, cfg, workers=workers, partitions=partitions)
            report = run_evaluate(subdir, rep, k, seed)
            rows.append((rep, matrix.n_features, report))
    csv_lines = [COMPARISON_HEADER]
    for rep, n_features, report in rows:
        csv_lines.append(f"{rep},{n_features},{report.csv_row().split(',', 1)[1]}")
    _write(out / COMPARISON_CSV, "\n".join(csv_lines) + "\n")
    return rows


_CONVERTERS = {
    "k": int,
    "seed": int,
    "max_iter": int,
    "workers": int,
    "partitions": int,
    "levels": int,
    "tol": float,
    "stem": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
    "seeds": lambda v: [int(s) for s in str(v).split(",") if s.strip()],
}

_DEFAULTS = {
    "rep": "stemmed",
    "seed": 0,
    "split_policy": "largest",
    "init_method": "seeded_random_pair",
    "tol": 1e-6,
    "max_iter": 50,
    "out": ".",
    "levels": 5,
    "stem": False,
}


def load_config_file(path) -> dict:
    """Parse ``key = value`` lines; # starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise CliError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge command line, config file, and defaults (in that order)."""
    options = vars(args).copy()
    file_values = {}
    if options.get("config"):
        file_values = load_config_file(options["config"])
    for key, value in options.items():
        if value is not None:
            continue
        if key in file_values:
            convert = _CONVERTERS.get(key, str)
            try:
                options[key] = convert(file_values[key])
            except ValueError:
                raise CliError(
                    f"config value for {key!r} is invalid: {file_values[key]!r}"
                ) from None
        elif key in _DEFAULTS:
            options[key] = _DEFAULTS[key]
    return options


def _require(options, *keys):
    for key in keys:
        if options.get(key) is None:
            flag = "--" + key.replace("_", "-")
            raise CliError(f"{flag} is required (flag or config file)")


def cmd_ingest(options) -> int:
    _require(options, "corpus")
    vocab, bag, labels = run_ingest(
        options["corpus"], options["out"], options["stoplist"], options["stem"]
    )
    print(
        f"ingested {bag.n_docs} docs, {len(vocab)} terms, "
        f"{bag.nnz} nonzero counts, {len(labels)} labeled"
    )
    return 0


def cmd_featurize(options) -> int:
    matrix = run_featurize(
        options["out"], options["rep"], options["lexicon"], options["levels"]
    )
    print(
        f"{options['rep']}: {matrix.n_docs} docs x {matrix.n_features} features"
    )
    return 0


def cmd_cluster(options) -> int:
    _require(options, "k")
    cfg = clustering.BisectConfig(
        K=options["k"],
        seed=options["seed"],
        max_iterations=options["max_iter"],
        tolerance=options["tol"],
        split_policy=options["split_policy"],
        init_method=options["init_method"],
    )
    try:
        result = run_cluster(
            options["out"], cfg, options["workers"], options["partitions"]
        )
    except clustering.ExhaustionError as exc:
        found = len(exc.partial) if exc.partial else 0
        print(
            f"clustering exhausted after {found} clusters: {exc} "
            f"(partial result written)",
            file=sys.stderr,
        )
        return 1
    sizes = ", ".join(str(c.size) for c in result.clusters)
    print(f"clustered into {result.k} clusters (sizes: {sizes})")
    return 0


def cmd_evaluate(options) -> int:
    _require(options, "k")
    report = run_evaluate(
        options["out"], options["rep"], options["k"], options["seed"]
    )
    sys.stdout.write(report.to_text())
    return 0


def cmd_compare(options) -> int:
    _require(options, "corpus", "lexicon", "k")
    seeds = options["seeds"] if options["seeds"] is not None else [options["seed"]]
    cfg_kwargs = {
        "max_iterations": options["max_iter"],
        "tolerance": options["tol"],
        "split_policy": options["split_policy"],
        "init_method": options["init_method"],
    }
    rows = run_compare(
        options["corpus"],
        options["lexicon"],
        options["k"],
        seeds,
        options["out"],
        options["stoplist"],
        options["levels"],
        cfg_kwargs,
        options["workers"],
        options["partitions"],
    )
    print(COMPARISON_HEADER)
    for rep, n_features, report in rows:
        print(f"{rep},{n_features},{report.csv_row().split(',', 1)[1]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="key = value file supplying any flag")
    shared.add_argument("--corpus", help="corpus directory or .jsonl file")
    shared.add_argument("--lexicon", help="TSV lexicon file")
    shared.add_argument("--stoplist", help="stopword file, one word per line")
    shared.add_argument(
        "--rep", choices=REPRESENTATIONS, help="document representation"
    )
    shared.add_argument("--k", type=int, help="number of clusters")
    shared.add_argument("--seed", type=int, help="random seed (default 0)")
    shared.add_argument(
        "--split-policy",
        dest="split_policy",
        choices=clustering.SPLIT_POLICIES,
        help="which cluster to bisect next",
    )
    shared.add_argument(
        "--init-method",
        dest="init_method",
        choices=clustering.INIT_METHODS,
        help="2-means center initialization",
    )
    shared.add_argument("--tol", type=float, help="convergence tolerance")
    shared.add_argument(
        "--max-iter", dest="max_iter", type=int, help="max 2-means iterations"
    )
    shared.add_argument("--out", help="working/output directory (default .)")
    shared.add_argument("--workers", type=int, help="engine worker threads")
    shared.add_argument(
        "--partitions", type=int, help="engine partition count (default: workers)"
    )
    shared.add_argument(
        "--levels", type=int, help="hypernym levels for the hotho representation"
    )

    parser = argparse.ArgumentParser(
        prog="lexicluster",
        description="Cluster documents with lexical-category features "
        "and bisecting k-means.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser(
        "ingest", parents=[shared], help="corpus -> bag-of-words files"
    )
    p_ingest.add_argument(
        "--stem", action="store_const", const=True, help="stem during ingestion"
    )
    p_ingest.set_defaults(handler=cmd_ingest)

    p_feat = sub.add_parser(
        "featurize", parents=[shared], help="bag -> weighted feature matrix"
    )
    p_feat.set_defaults(handler=cmd_featurize)

    p_cluster = sub.add_parser(
        "cluster", parents=[shared], help="matrix -> bisecting k-means clusters"
    )
    p_cluster.set_defaults(handler=cmd_cluster)

    p_eval = sub.add_parser(
        "evaluate", parents=[shared], help="clusters -> metrics report"
    )
    p_eval.set_defaults(handler=cmd_evaluate)

    p_cmp = sub.add_parser(
        "compare", parents=[shared], help="full pipeline over all representations"
    )
    p_cmp.add_argument(
        "--seeds", type=lambda v: [int(s) for s in v.split(",") if s.strip()],
        help="comma-separated seeds (default: --seed)",
    )
    p_cmp.set_defaults(handler=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "stem"):
        args.stem = None
    if not hasattr(args, "seeds"):
        args.seeds = None
    try:
        options = resolve_options(args)
        return args.handler(options)
    except (
        CliError,
        corpus.CorpusError,
        ontology.LexiconError,
        clustering.ClusteringError,
        evaluation.EvaluationError,
        engine.EngineError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
