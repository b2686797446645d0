"""Clustering quality metrics.

External metrics (purity, entropy, F-measure) are computed from a
class-by-cluster contingency table built against known labels; the
internal measure is the mean cosine of each document to its assigned
centroid and needs no labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .clustering import Centroid, DocVector, cosine
from .ontology import FeatureMatrix

__all__ = [
    "EvaluationError",
    "UnlabeledDocumentError",
    "EmptyTableError",
    "MismatchError",
    "ContingencyTable",
    "contingency",
    "purity",
    "entropy",
    "f_measure",
    "per_class_best_f",
    "internal_eval",
    "MetricsReport",
    "CSV_HEADER",
]


class EvaluationError(Exception):
    pass


class UnlabeledDocumentError(EvaluationError):
    pass


class EmptyTableError(EvaluationError):
    pass


class MismatchError(EvaluationError):
    pass


@dataclass(frozen=True)
class ContingencyTable:
    """Counts[i][j] = number of documents of class i in cluster j."""

    counts: tuple[tuple[int, ...], ...]
    classes: tuple = ()
    clusters: tuple = ()

    def __post_init__(self):
        counts = tuple(tuple(int(v) for v in row) for row in self.counts)
        widths = {len(row) for row in counts}
        if len(widths) > 1:
            raise ValueError("contingency rows must have equal length")
        if any(v < 0 for row in counts for v in row):
            raise ValueError("contingency counts must be >= 0")
        object.__setattr__(self, "counts", counts)

    @property
    def c(self) -> int:
        return len(self.counts)

    @property
    def k(self) -> int:
        return len(self.counts[0]) if self.counts else 0

    @property
    def class_totals(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.counts)

    @property
    def cluster_totals(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.counts) for j in range(self.k))

    @property
    def n(self) -> int:
        return sum(self.class_totals)


def contingency(assignment: dict, labels: dict) -> ContingencyTable:
    """Cross-tabulate cluster assignment against known class labels.

    Classes and clusters get dense indices in order of first appearance
    over ascending document id; a document missing from labels is an
    error that names it.
    """
    class_index: dict = {}
    cluster_index: dict = {}
    cells: dict[tuple[int, int], int] = {}
    for doc_id in sorted(assignment):
        if doc_id not in labels:
            raise UnlabeledDocumentError(f"document {doc_id} has no label")
        label = labels[doc_id]
        cluster = assignment[doc_id]
        i = class_index.setdefault(label, len(class_index))
        j = cluster_index.setdefault(cluster, len(cluster_index))
        cells[(i, j)] = cells.get((i, j), 0) + 1
    counts = tuple(
        tuple(cells.get((i, j), 0) for j in range(len(cluster_index)))
        for i in range(len(class_index))
    )
    return ContingencyTable(
        counts, tuple(class_index), tuple(cluster_index)
    )


def purity(ct: ContingencyTable) -> float:
    """Fraction of documents in their cluster's majority class."""
    n = ct.n
    if n == 0:
        raise EmptyTableError("purity undefined on an empty table")
    return sum(
        max((ct.counts[i][j] for i in range(ct.c)), default=0) for j in range(ct.k)
    ) / n


def entropy(ct: ContingencyTable) -> tuple[float, list[float]]:
    """Class entropy per cluster (bits) and the size-weighted total.

    Zero-probability terms contribute nothing; empty clusters have
    entropy 0.
    """
    n = ct.n
    if n == 0:
        raise EmptyTableError("entropy undefined on an empty table")
    cluster_totals = ct.cluster_totals
    per_cluster = []
    for j in range(ct.k):
        n_j = cluster_totals[j]
        value = 0.0
        if n_j > 0:
            for i in range(ct.c):
                n_ij = ct.counts[i][j]
                if n_ij > 0:
                    p = n_ij / n_j
                    value += p * math.log2(1.0 / p)
        per_cluster.append(value)
    total = sum(
        cluster_totals[j] * per_cluster[j] for j in range(ct.k)
    ) / n
    return total, per_cluster


def f_measure(ct: ContingencyTable) -> float:
    """Class-weighted best F over clusters.

    F(i, j) harmonically combines recall n_ij/n_i and precision
    n_ij/n_j, taken as 0 for an empty cell; each class contributes its
    best cluster's F weighted by class share.
    """
    n = ct.n
    if n == 0:
        raise EmptyTableError("F-measure undefined on an empty table")
    class_totals = ct.class_totals
    cluster_totals = ct.cluster_totals
    total = 0.0
    for i in range(ct.c):
        n_i = class_totals[i]
        if n_i == 0:
            continue
        best = 0.0
        for j in range(ct.k):
            n_ij = ct.counts[i][j]
            if n_ij == 0:
                continue
            recall = n_ij / n_i
            precision = n_ij / cluster_totals[j]
            value = 2.0 * recall * precision / (recall + precision)
            if value > best:
                best = value
        total += (n_i / n) * best
    return total


def per_class_best_f(ct: ContingencyTable) -> list[float]:
    """Best F over clusters for each class, in class index order."""
    class_totals = ct.class_totals
    cluster_totals = ct.cluster_totals
    result = []
    for i in range(ct.c):
        n_i = class_totals[i]
        best = 0.0
        for j in range(ct.k):
            n_ij = ct.counts[i][j]
            if n_ij == 0 or n_i == 0:
                continue
            recall = n_ij / n_i
            precision = n_ij / cluster_totals[j]
            value = 2.0 * recall * precision / (recall + precision)
            if value > best:
                best = value
        result.append(best)
    return result


def internal_eval(data: FeatureMatrix, assignment: dict, centroids) -> float:
    """Mean cosine of each document to its assigned centroid.

    Zero-vector documents contribute 0. Documents present in the matrix
    but unassigned, or assigned to a cluster with no centroid, are
    errors.
    """
    if not assignment:
        raise MismatchError("internal evaluation needs at least one assigned doc")
    by_index = {c.index: c for c in centroids}
    missing = sorted(set(data.rows) - set(assignment))
    if missing:
        raise MismatchError(f"documents without assignment: {missing[:5]}")
    total = 0.0
    for doc_id in sorted(assignment):
        cluster = assignment[doc_id]
        centroid = by_index.get(cluster)
        if centroid is None:
            raise MismatchError(f"no centroid for cluster {cluster}")
        doc = DocVector(doc_id, data.row(doc_id))
        total += cosine(doc, centroid)
    return total / len(assignment)


CSV_HEADER = "representation,K,seed,purity,entropy,f_measure,internal"


@dataclass
class MetricsReport:
    """One evaluation run's metrics plus provenance."""

    representation: str
    K: int
    seed: int
    purity: float | None = None
    entropy: float | None = None
    f_measure: float | None = None
    internal: float | None = None
    per_cluster_entropy: tuple = ()
    per_class_f: tuple = ()

    @staticmethod
    def _cell(value) -> str:
        return "" if value is None else repr(value)

    def csv_row(self) -> str:
        return ",".join(
            [
                self.representation,
                str(self.K),
                str(self.seed),
                self._cell(self.purity),
                self._cell(self.entropy),
                self._cell(self.f_measure),
                self._cell(self.internal),
            ]
        )

    def to_csv(self) -> str:
        return CSV_HEADER + "\n" + self.csv_row() + "\n"

    def to_text(self) -> str:
        lines = [
            f"representation: {self.representation}",
            f"K:              {self.K}",
            f"seed:           {self.seed}",
        ]
        for name in ("purity", "entropy", "f_measure", "internal"):
            value = getattr(self, name)
            if value is not None:
                lines.append(f"{name + ':':<16}{value:.5f}")
        if self.per_cluster_entropy:
            rendered = ", ".join(f"{v:.5f}" for v in self.per_cluster_entropy)
            lines.append(f"entropy/cluster: {rendered}")
        if self.per_class_f:
            rendered = ", ".join(f"{v:.5f}" for v in self.per_class_f)
            lines.append(f"best-F/class:   {rendered}")
        return "\n".join(lines) + "\n"
