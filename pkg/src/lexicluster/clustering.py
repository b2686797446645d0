"""Cosine 2-means as MapReduce jobs and the bisecting k-means driver.

Each bisection runs assignment as the map phase (document -> nearest of
two centers, ties to index 0) and centroid recomputation as the reduce
phase, through the deterministic engine; centers after every iteration
are written to the store at the bisection's centroid label. The driver
splits a selected cluster until K clusters exist, deriving successive
store labels by suffixing "1" (centroid labels cc, cc1, cc11, ...).

All floating-point accumulation happens in document order, so results
are byte-identical for any worker or partition count.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from .engine import Engine, JobSpec, derive_child

__all__ = [
    "ClusteringError",
    "UnsplittableError",
    "ExhaustionError",
    "DocVector",
    "Centroid",
    "BisectConfig",
    "BisectLabels",
    "Cluster",
    "BisectionStep",
    "ClusteringResult",
    "cosine",
    "assign_map",
    "centroid_reduce",
    "init_centers",
    "basic_kmeans2",
    "overall_similarity",
    "select_split",
    "bisecting",
    "write_vectors",
    "parse_vectors",
    "write_centroids",
    "parse_centroids",
    "write_assignment",
    "parse_assignment",
]

SPLIT_POLICIES = ("largest", "least_overall_similarity")
INIT_METHODS = ("seeded_random_pair", "farthest_pair")


class ClusteringError(Exception):
    pass


class UnsplittableError(ClusteringError):
    """Dataset has fewer than two distinct vectors."""


class ExhaustionError(ClusteringError):
    """No splittable cluster remains before reaching K."""

    def __init__(self, message: str, partial=None, trace=None):
        super().__init__(message)
        self.partial = partial  # clusters found so far
        self.trace = trace


def _canonical_components(components) -> tuple[tuple[int, float], ...]:
    seen = set()
    cleaned = []
    for feature_id, weight in components:
        feature_id = int(feature_id)
        weight = float(weight)
        if feature_id < 1:
            raise ValueError(f"feature id must be >= 1, got {feature_id}")
        if feature_id in seen:
            raise ValueError(f"duplicate feature id {feature_id}")
        seen.add(feature_id)
        if not math.isfinite(weight) or weight < 0.0:
            raise ValueError(f"weight must be finite and >= 0, got {weight}")
        if weight != 0.0:
            cleaned.append((feature_id, weight))
    return tuple(sorted(cleaned))


@dataclass(frozen=True)
class DocVector:
    """Sparse nonnegative document vector with a cached Euclidean norm."""

    doc_id: int
    components: tuple[tuple[int, float], ...]
    norm: float = field(init=False)

    def __post_init__(self):
        comps = _canonical_components(self.components)
        object.__setattr__(self, "components", comps)
        object.__setattr__(
            self, "norm", math.sqrt(sum(w * w for _, w in comps))
        )


@dataclass(frozen=True)
class Centroid:
    """Cluster center: index within its bisection plus a sparse mean."""

    index: int
    components: tuple[tuple[int, float], ...]
    norm: float = field(init=False)

    def __post_init__(self):
        comps = tuple((int(f), float(w)) for f, w in self.components)
        for _, weight in comps:
            if not math.isfinite(weight):
                raise ValueError(f"centroid component not finite: {weight}")
        comps = tuple(sorted(comps))
        object.__setattr__(self, "components", comps)
        object.__setattr__(
            self, "norm", math.sqrt(sum(w * w for _, w in comps))
        )


@dataclass(frozen=True)
class BisectConfig:
    K: int
    seed: int = 0
    max_iterations: int = 50
    tolerance: float = 1e-6
    split_policy: str = "largest"
    init_method: str = "seeded_random_pair"

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be > 0")
        if self.split_policy not in SPLIT_POLICIES:
            raise ValueError(f"unknown split_policy: {self.split_policy!r}")
        if self.init_method not in INIT_METHODS:
            raise ValueError(f"unknown init_method: {self.init_method!r}")


class BisectLabels(NamedTuple):
    """Store labels for one bisection: input dataset, centers, outputs."""

    dataset: str
    centroids: str
    output: str


@dataclass(frozen=True)
class Cluster:
    docs: tuple[DocVector, ...]
    centroid: Centroid
    label: str  # store label of this cluster's dataset

    @property
    def size(self) -> int:
        return len(self.docs)


class BisectionStep(NamedTuple):
    call_index: int
    dataset: str
    centroids: str
    output: str
    iterations: int
    sizes: tuple[int, int]


@dataclass(frozen=True)
class ClusteringResult:
    assignment: dict[int, int]
    centroids: tuple[Centroid, ...]
    similarities: tuple[float, ...]
    trace: tuple[BisectionStep, ...]
    clusters: tuple[Cluster, ...]

    @property
    def k(self) -> int:
        return len(self.centroids)


def cosine(a, b) -> float:
    """Cosine similarity of two sparse nonnegative vectors; 0 when
    either has zero norm."""
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    b_map = dict(b.components)
    dot = 0.0
    for feature_id, weight in a.components:
        other = b_map.get(feature_id)
        if other is not None:
            dot += weight * other
    return min(1.0, dot / (a.norm * b.norm))


def assign_map(doc: DocVector, centers) -> tuple[int, DocVector]:
    """Nearest of exactly two centers by cosine; ties (including a
    zero-vector document) go to index 0."""
    if len(centers) != 2:
        raise ValueError(f"expected exactly 2 centers, got {len(centers)}")
    sim0 = cosine(doc, centers[0])
    sim1 = cosine(doc, centers[1])
    return (1 if sim1 > sim0 else 0, doc)


def centroid_reduce(cluster_index: int, docs) -> Centroid:
    """Componentwise arithmetic mean, accumulated in the given order."""
    docs = list(docs)
    if not docs:
        raise ValueError("cannot reduce an empty document list")
    sums: dict[int, float] = {}
    for doc in docs:
        for feature_id, weight in doc.components:
            sums[feature_id] = sums.get(feature_id, 0.0) + weight
    n = len(docs)
    return Centroid(cluster_index, tuple((f, sums[f] / n) for f in sorted(sums)))


def _distinct_vector_count(docs) -> int:
    return len({doc.components for doc in docs})


def init_centers(data, seed: int, method: str = "seeded_random_pair"):
    """Two initial centers from the data, fully determined by the seed."""
    data = list(data)
    if _distinct_vector_count(data) < 2:
        raise UnsplittableError(
            f"need >= 2 distinct vectors to split, have {_distinct_vector_count(data)}"
        )
    rng = random.Random(seed)
    first = data[rng.randrange(len(data))]
    if method == "seeded_random_pair":
        others = [d for d in data if d.components != first.components]
        second = others[rng.randrange(len(others))]
    elif method == "farthest_pair":
        best_sim = None
        second = None
        for doc in data:
            sim = cosine(doc, first)
            better = best_sim is None or sim < best_sim
            # On an exact tie prefer a vector that actually differs from
            # the anchor, otherwise keep the earliest.
            tie_upgrade = (
                sim == best_sim
                and second is not None
                and second.components == first.components
                and doc.components != first.components
            )
            if better or tie_upgrade:
                best_sim = sim
                second = doc
        if second.components == first.components:
            others = [d for d in data if d.components != first.components]
            second = others[0]
    else:
        raise ValueError(f"unknown init method: {method!r}")
    return (Centroid(0, first.components), Centroid(1, second.components))


def _reseed_doc(data, surviving: Centroid) -> DocVector:
    best = data[0]
    best_sim = cosine(best, surviving)
    for doc in data[1:]:
        sim = cosine(doc, surviving)
        if sim < best_sim:
            best, best_sim = doc, sim
    return best


def write_vectors(docs) -> str:
    lines = [
        " ".join([str(d.doc_id)] + [f"{f}:{w!r}" for f, w in d.components])
        for d in docs
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_vectors(text: str) -> list[DocVector]:
    docs = []
    for line in text.splitlines():
        if not line:
            continue
        parts = line.split(" ")
        comps = []
        for part in parts[1:]:
            fid_text, weight_text = part.split(":")
            comps.append((int(fid_text), float(weight_text)))
        docs.append(DocVector(int(parts[0]), tuple(comps)))
    return docs


def write_centroids(centroids) -> str:
    lines = [
        " ".join([str(c.index)] + [f"{f}:{w!r}" for f, w in c.components])
        for c in centroids
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_centroids(text: str) -> list[Centroid]:
    centroids = []
    for line in text.splitlines():
        if not line:
            continue
        parts = line.split(" ")
        comps = []
        for part in parts[1:]:
            fid_text, weight_text = part.split(":")
            comps.append((int(fid_text), float(weight_text)))
        centroids.append(Centroid(int(parts[0]), tuple(comps)))
    return centroids


def write_assignment(assignment: dict[int, int]) -> str:
    lines = [f"{doc_id} {assignment[doc_id]}" for doc_id in sorted(assignment)]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_assignment(text: str) -> dict[int, int]:
    assignment = {}
    for line in text.splitlines():
        if not line:
            continue
        doc_text, cluster_text = line.split(" ")
        assignment[int(doc_text)] = int(cluster_text)
    return assignment


def _final_partition(data, centers):
    """Assign every doc to its nearest final center, repairing an empty
    side by pinning the doc least similar to the occupied center."""
    pinned: dict[int, int] = {}
    while True:
        buckets: dict[int, list[DocVector]] = {0: [], 1: []}
        for doc in data:
            idx = pinned.get(doc.doc_id)
            if idx is None:
                idx, _ = assign_map(doc, centers)
            buckets[idx].append(doc)
        empty = [i for i in (0, 1) if not buckets[i]]
        if not empty:
            return buckets, centers
        missing = empty[0]
        surviving = centers[1 - missing]
        # Reseed only from unpinned docs so each repair round pins a new
        # document; with >= 2 docs both sides fill within two rounds.
        pool = [d for d in data if d.doc_id not in pinned]
        reseed = _reseed_doc(pool, surviving)
        replacement = Centroid(missing, reseed.components)
        centers = tuple(
            replacement if c.index == missing else c for c in centers
        )
        pinned[reseed.doc_id] = missing


def basic_kmeans2(data, cfg: BisectConfig, engine: Engine, labels: BisectLabels):
    """One 2-means bisection via MapReduce iterations.

    Returns (two doc lists, two centroids, iteration count). Centers are
    written to the store at labels.centroids after every iteration; the
    split documents and per-bisection assignment land under
    labels.output. The returned assignment is a fresh pass against the
    final centers, so no single document could improve its cosine by
    switching sides.
    """
    data = list(data)
    centers = init_centers(data, cfg.seed, cfg.init_method)
    records = [(doc.doc_id, doc) for doc in data]
    iterations = 0
    for _ in range(cfg.max_iterations):
        current = centers
        job = JobSpec(
            map=lambda key, doc: [assign_map(doc, current)],
            reduce=lambda idx, docs: [(idx, centroid_reduce(idx, docs))],
        )
        reduced = dict(engine.run(job, records))
        iterations += 1
        if len(reduced) < 2:
            # One side lost every document: keep the surviving mean and
            # reseed the other center at the least similar document.
            surviving_idx = next(iter(reduced))
            surviving = reduced[surviving_idx]
            reseed = _reseed_doc(data, surviving)
            centers = tuple(
                surviving if i == surviving_idx else Centroid(i, reseed.components)
                for i in (0, 1)
            )
            engine.store.write_text(labels.centroids, write_centroids(centers))
            continue
        new_centers = (reduced[0], reduced[1])
        movement = max(
            1.0 - cosine(old, new) for old, new in zip(centers, new_centers)
        )
        centers = new_centers
        engine.store.write_text(labels.centroids, write_centroids(centers))
        if movement <= cfg.tolerance:
            break
    if iterations == 0:
        engine.store.write_text(labels.centroids, write_centroids(centers))
    buckets, centers = _final_partition(data, centers)
    assignment = {}
    for idx in (0, 1):
        for doc in buckets[idx]:
            assignment[doc.doc_id] = idx
        engine.store.write_text(
            f"{labels.output}/cluster{idx}", write_vectors(buckets[idx])
        )
    engine.store.write_text(f"{labels.output}/assign", write_assignment(assignment))
    return (buckets[0], buckets[1]), centers, iterations


def overall_similarity(docs, centroid: Centroid) -> float:
    """Mean cosine of a cluster's documents to its centroid."""
    docs = list(docs)
    if not docs:
        raise ValueError("overall similarity of an empty cluster is undefined")
    return sum(cosine(doc, centroid) for doc in docs) / len(docs)


def _splittable(cluster: Cluster) -> bool:
    return cluster.size >= 2 and _distinct_vector_count(cluster.docs) >= 2


def select_split(clusters, policy: str = "largest") -> int:
    """Index of the next cluster to bisect; unsplittable clusters
    (singletons or all-identical vectors) are skipped."""
    if policy not in SPLIT_POLICIES:
        raise ValueError(f"unknown split_policy: {policy!r}")
    candidates = [i for i, c in enumerate(clusters) if _splittable(c)]
    if not candidates:
        raise ExhaustionError("no splittable cluster remains", partial=list(clusters))
    if policy == "largest":
        return max(candidates, key=lambda i: (clusters[i].size, -i))
    return min(
        candidates,
        key=lambda i: (overall_similarity(clusters[i].docs, clusters[i].centroid), i),
    )


def bisecting(data, cfg: BisectConfig, engine: Engine) -> ClusteringResult:
    """Bisecting k-means: K-1 two-means splits of a selected cluster.

    The split counter starts at 0, jumps to 2 on the first call, then
    advances by 1, so K clusters take exactly K-1 bisections. Dataset,
    centroid, and output labels start at "data", "cc", "out" and each
    derive the next generation by appending "1"; a selected cluster's
    stored documents become the next bisection's input dataset.
    """
    data = [d if isinstance(d, DocVector) else DocVector(*d) for d in data]
    if len({d.doc_id for d in data}) != len(data):
        raise ValueError("duplicate doc ids in clustering input")
    if not data:
        raise ValueError("cannot cluster an empty dataset")
    dataset_label, cc_label, out_label = "data", "cc", "out"
    engine.store.write_text(dataset_label, write_vectors(data))
    whole = Cluster(tuple(data), centroid_reduce(0, data), dataset_label)
    clusters: list[Cluster] = [whole]
    trace: list[BisectionStep] = []
    r = 0
    calls = 0
    while r < cfg.K:
        if r == 0 and cfg.K == 1:
            break
        try:
            selected = select_split(clusters, cfg.split_policy)
        except ExhaustionError:
            raise ExhaustionError(
                f"only {len(clusters)} clusters reachable, needed {cfg.K}",
                partial=list(clusters),
                trace=tuple(trace),
            ) from None
        target = clusters.pop(selected)
        labels = BisectLabels(target.label, cc_label, out_label)
        (docs0, docs1), (cent0, cent1), iters = basic_kmeans2(
            target.docs, cfg, engine, labels
        )
        clusters.append(Cluster(tuple(docs0), cent0, f"{out_label}/cluster0"))
        clusters.append(Cluster(tuple(docs1), cent1, f"{out_label}/cluster1"))
        calls += 1
        trace.append(
            BisectionStep(calls, labels.dataset, labels.centroids, labels.output,
                          iters, (len(docs0), len(docs1)))
        )
        r = 2 if calls == 1 else r + 1
        cc_label = derive_child(cc_label)
        out_label = derive_child(out_label)
    assignment = {}
    centroids = []
    similarities = []
    for index, cluster in enumerate(clusters):
        for doc in cluster.docs:
            assignment[doc.doc_id] = index
        centroids.append(Centroid(index, cluster.centroid.components))
        similarities.append(overall_similarity(cluster.docs, cluster.centroid))
    engine.store.write_text("assign", write_assignment(assignment))
    engine.store.write_text("centers", write_centroids(centroids))
    return ClusteringResult(
        assignment=assignment,
        centroids=tuple(centroids),
        similarities=tuple(similarities),
        trace=tuple(trace),
        clusters=tuple(clusters),
    )
