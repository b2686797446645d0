"""Document clustering with WordNet lexical-category features.

Pipeline: tokenize/stem a corpus into a sparse bag of words, reduce it
to one of four feature representations (stemmed terms, hypernym-expanded
terms, all lexical categories, noun categories), weight and normalize,
then cluster with bisecting k-means where each 2-means bisection runs as
a deterministic in-process MapReduce job. Quality is measured externally
(purity, entropy, F-measure) or internally (mean cosine to centroid).
"""

from .corpus import (
    RawDocument,
    SparseBag,
    Vocabulary,
    extract_words,
    parse_optimized,
    parse_uci,
    to_optimized,
    tokenize,
    write_uci,
)
from .porter import stem
from .ontology import (
    ALL_CATEGORIES,
    CATEGORIES,
    NOUNS_ONLY,
    FeatureMatrix,
    Lexicon,
    bag_to_categories,
    category_of,
    hotho_expand,
    load_lexicon,
    normalize,
    weight_lfidf,
    weight_tfidf,
)
from .engine import Engine, JobSpec, PathStore, derive_child, partition, run_job
from .clustering import (
    BisectConfig,
    Centroid,
    ClusteringResult,
    DocVector,
    basic_kmeans2,
    bisecting,
    cosine,
    init_centers,
    select_split,
)
from .evaluation import (
    ContingencyTable,
    MetricsReport,
    contingency,
    entropy,
    f_measure,
    internal_eval,
    purity,
)

__version__ = "0.1.0"
