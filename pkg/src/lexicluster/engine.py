"""Deterministic in-process MapReduce engine with a path-label store.

Jobs are a pair of pure functions: map(key, value) -> emissions and
reduce(key, values) -> emissions. Records are split into contiguous
partitions; maps may run on several worker threads, but grouping orders
each key's reduce input by (partition index, emission order within the
partition) and reduces run over keys in ascending order, so the output
is bit-identical no matter how many workers execute the maps.

The PathStore maps label strings (segments over [A-Za-z0-9_], joined by
"/") onto files under a root directory, with atomic replace-on-write.
Child labels are derived by suffixing "1".
"""

from __future__ import annotations

import os
import re
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, NamedTuple

__all__ = [
    "EngineError",
    "PathLabelError",
    "MissingLabelError",
    "JobError",
    "KeyValue",
    "JobSpec",
    "WORKERS_ENV",
    "validate_label",
    "derive_child",
    "partition",
    "run_job",
    "PathStore",
    "store_write",
    "store_read",
    "Engine",
]

WORKERS_ENV = "LEXICLUSTER_WORKERS"


class EngineError(Exception):
    """Base class for engine failures."""


class PathLabelError(EngineError):
    """Label is not a valid store path."""


class MissingLabelError(EngineError):
    """Read of a label that was never written."""


class JobError(EngineError):
    """A map or reduce function raised; identifies the offending record."""

    def __init__(self, message: str, *, phase: str, key: Any, partition_index=None):
        super().__init__(message)
        self.phase = phase
        self.key = key
        self.partition_index = partition_index


class KeyValue(NamedTuple):
    key: Any
    value: Any


@dataclass(frozen=True)
class JobSpec:
    """map(key, value) and reduce(key, ordered values) -> KeyValue lists."""

    map: Callable[[Any, Any], list]
    reduce: Callable[[Any, list], list]


_LABEL_RE = re.compile(r"[A-Za-z0-9_]+(?:/[A-Za-z0-9_]+)*\Z")


def validate_label(label: str) -> str:
    """Check a store label: nonempty [A-Za-z0-9_] segments joined by /."""
    if not isinstance(label, str) or not _LABEL_RE.match(label):
        raise PathLabelError(f"invalid path label: {label!r}")
    return label


def derive_child(label: str) -> str:
    """Child label: the parent with \"1\" appended."""
    return validate_label(label) + "1"


def partition(records, n: int) -> list[list]:
    """Split records into n contiguous order-preserving partitions.

    Sizes differ by at most one and earlier partitions are never smaller
    than later ones, so the split depends only on len(records) and n.
    """
    if n < 1:
        raise ValueError(f"partition count must be >= 1, got {n}")
    records = list(records)
    quotient, remainder = divmod(len(records), n)
    parts = []
    start = 0
    for i in range(n):
        size = quotient + 1 if i < remainder else quotient
        parts.append(records[start : start + size])
        start += size
    return parts


def _map_partition(job: JobSpec, part_index: int, part) -> list:
    emissions = []
    for key, value in part:
        try:
            emissions.extend(job.map(key, value))
        except Exception as exc:
            raise JobError(
                f"map failed on record key={key!r} in partition {part_index}: {exc}",
                phase="map",
                key=key,
                partition_index=part_index,
            ) from exc
    return emissions


def run_job(job: JobSpec, partitions, workers: int | None = None) -> list[KeyValue]:
    """Execute one MapReduce job over pre-partitioned records.

    Returns the concatenation of reduce outputs over ascending keys.
    Worker count only affects wall time, never the result.
    """
    partitions = [list(p) for p in partitions]
    workers = resolve_workers(workers)
    if workers <= 1 or len(partitions) <= 1:
        per_partition = [
            _map_partition(job, i, part) for i, part in enumerate(partitions)
        ]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_map_partition, job, i, part)
                for i, part in enumerate(partitions)
            ]
            # Collect in partition order so the earliest failure wins
            # deterministically and grouping order is schedule-free.
            per_partition = [f.result() for f in futures]
    groups: dict[Any, list] = {}
    for emissions in per_partition:
        for key, value in emissions:
            groups.setdefault(key, []).append(value)
    output: list[KeyValue] = []
    for key in sorted(groups):
        try:
            reduced = job.reduce(key, groups[key])
        except Exception as exc:
            raise JobError(
                f"reduce failed on key={key!r}: {exc}", phase="reduce", key=key
            ) from exc
        output.extend(KeyValue(k, v) for k, v in reduced)
    return output


def resolve_workers(explicit: int | None = None) -> int:
    """Worker count: explicit argument, else LEXICLUSTER_WORKERS, else
    the machine's available parallelism."""
    if explicit is not None:
        if explicit < 1:
            raise ValueError(f"worker count must be >= 1, got {explicit}")
        return explicit
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise EngineError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise EngineError(f"{WORKERS_ENV} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


class PathStore:
    """Label -> file mapping under a root directory with atomic writes."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_of(self, label: str) -> Path:
        return self.root / validate_label(label)

    def write(self, label: str, data: bytes) -> None:
        path = self.path_of(label)
        path.parent.mkdir(parents=True, exist_ok=True)
        # Temp names contain characters outside the label alphabet, so a
        # half-written temp file can never alias a real label.
        fd, tmp = tempfile.mkstemp(prefix=path.name + ".", dir=path.parent)
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def read(self, label: str) -> bytes:
        path = self.path_of(label)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise MissingLabelError(f"label never written: {label!r}") from None

    def write_text(self, label: str, text: str) -> None:
        self.write(label, text.encode("utf-8"))

    def read_text(self, label: str) -> str:
        return self.read(label).decode("utf-8")

    def exists(self, label: str) -> bool:
        return self.path_of(label).is_file()


def store_write(store: PathStore, label: str, data: bytes) -> None:
    store.write(label, data)


def store_read(store: PathStore, label: str) -> bytes:
    return store.read(label)


@dataclass
class Engine:
    """Execution harness binding a worker count, a partition count, and
    a PathStore so jobs and file traffic share one configuration."""

    store: PathStore
    workers: int | None = None
    n_partitions: int | None = None

    def resolved_workers(self) -> int:
        return resolve_workers(self.workers)

    def resolved_partitions(self) -> int:
        if self.n_partitions is not None:
            if self.n_partitions < 1:
                raise ValueError("partition count must be >= 1")
            return self.n_partitions
        return self.resolved_workers()

    def run(self, job: JobSpec, records) -> list[KeyValue]:
        parts = partition(records, self.resolved_partitions())
        return run_job(job, parts, self.resolved_workers())
