"""
Shift-value (SV) set criteria, scoring, search and file format.

Given a collection of ``U`` SV sets, the relative distances of a pair
``(i, j)`` are ``r_v = (tau_v^i - tau_v^j) mod M``, one per subblock.

* Criterion 1: for every pair, the ``V`` distances are pairwise distinct
  modulo ``N``. Suited to random partitions.
* Criterion 2: the same, modulo ``N/V``. Suited to interleaved partitions,
  whose subblock ACF repeats every ``N/V`` lags.
* Criterion 3: Criterion 1, and the mutual differences ``r_v - r_w`` should
  sit as close to ``N/2`` as possible. Suited to adjacent partitions. It is
  quantified here by the circular distance ``d = min(delta, N - delta)``
  of every mutual difference, over all pairs and all ``v < w``: the score
  is ``(min d, mean d)``, larger being better.

Set and subblock indices in reports are 1-based.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .css import SvCollection
from .exceptions import ConfigurationError, PreconditionError, SearchFailedError
from .modem import trial_rng
from .partition import PARTITION_KINDS

__all__ = [
    "Violation",
    "CriterionReport",
    "Criterion3Score",
    "PAPER_COLLECTIONS",
    "paper_collection",
    "relative_distances",
    "check_criterion1",
    "check_criterion2",
    "check_criterion",
    "criterion3_score",
    "criterion3_verdict",
    "criterion_for_partition",
    "search_sv_collection",
    "format_sv_file",
    "parse_sv_file",
    "read_sv_file",
    "write_sv_file",
]

# The eight N=128, V=4, U=4 collections of the reference simulations, keyed
# by (partition, line style). "solid" sets satisfy the partition's criterion,
# "dotted" sets do not.
PAPER_COLLECTIONS: dict[tuple[str, str], list[list[int]]] = {
    ("random", "solid"): [[0, 0, 0, 0], [0, 8, 16, 24], [0, 16, 32, 48], [0, 24, 48, 72]],
    ("random", "dotted"): [[0, 0, 0, 0], [0, 4, 8, 12], [0, 16, 20, 24], [0, 28, 32, 36]],
    ("interleaved", "solid"): [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 4, 6], [0, 3, 6, 9]],
    ("interleaved", "dotted"): [[0, 0, 0, 0], [0, 8, 16, 24], [0, 16, 32, 48], [0, 24, 48, 72]],
    ("adjacent", "solid"): [[0, 0, 0, 0], [0, 44, 73, 95], [0, 9, 35, 84], [0, 25, 45, 110]],
    ("adjacent", "dotted"): [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 4, 6], [0, 3, 6, 9]],
}


def paper_collection(partition: str, style: str, n: int = 128) -> SvCollection:
    return SvCollection.from_lists(PAPER_COLLECTIONS[(partition, style)], n)


@dataclass(frozen=True)
class Violation:
    pair: tuple[int, int]
    subblocks: tuple[int, int]
    distance: int


@dataclass
class CriterionReport:
    criterion: int
    modulus: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.satisfied


@dataclass(frozen=True)
class Criterion3Score:
    min_circular_gap: int
    mean_circular_gap: float

    def key(self) -> tuple[int, float]:
        return (self.min_circular_gap, self.mean_circular_gap)

    def __lt__(self, other: "Criterion3Score") -> bool:
        return self.key() < other.key()

    def __gt__(self, other: "Criterion3Score") -> bool:
        return self.key() > other.key()


def relative_distances(a, b, modulus: int) -> list[int]:
    """``(a[v] - b[v]) mod modulus`` for every subblock ``v``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise ConfigurationError("SV sets differ in length")
    return ((a - b) % modulus).tolist()


def _check_distinct(c: SvCollection, criterion: int, modulus: int) -> CriterionReport:
    report = CriterionReport(criterion, modulus)
    for i, j in combinations(range(1, c.u_count + 1), 2):
        r = relative_distances(c[i], c[j], modulus)
        for v, w in combinations(range(c.v_count), 2):
            if r[v] == r[w]:
                report.violations.append(Violation((i, j), (v + 1, w + 1), r[v]))
    return report


def check_criterion1(c: SvCollection) -> CriterionReport:
    return _check_distinct(c, 1, c.n)


def check_criterion2(c: SvCollection) -> CriterionReport:
    if c.n % c.v_count:
        raise ConfigurationError("V must divide N")
    return _check_distinct(c, 2, c.n // c.v_count)


def _mutual_gaps(sets: np.ndarray, n: int) -> np.ndarray:
    """Circular distances of all mutual differences; ``sets`` has shape (..., U, V)."""
    u_count, v_count = sets.shape[-2:]
    iu, ju = np.triu_indices(u_count, k=1)
    vv, ww = np.triu_indices(v_count, k=1)
    r = (sets[..., iu, :] - sets[..., ju, :]) % n
    delta = (r[..., vv] - r[..., ww]) % n
    return np.minimum(delta, n - delta)


def criterion3_score(c: SvCollection) -> Criterion3Score:
    """
    ``(min, mean)`` circular distance of all mutual differences of relative
    distances. Requires Criterion 1.
    """
    report = check_criterion1(c)
    if not report.satisfied:
        raise PreconditionError(
            f"Criterion 3 score needs Criterion 1; {len(report.violations)} violation(s), "
            f"first {report.violations[0]}"
        )
    gaps = _mutual_gaps(c.sets, c.n)
    if gaps.size == 0:  # U == 1 or V == 1: no mutual differences exist
        return Criterion3Score(c.n // 2, float(c.n // 2))
    return Criterion3Score(int(gaps.min()), float(gaps.mean()))


def criterion3_verdict(c: SvCollection, min_gap: int | None = None) -> tuple[bool, Criterion3Score | None]:
    """
    Pass/fail reading of Criterion 3: Criterion 1 holds and no mutual
    difference is closer than ``min_gap`` lags to 0 (mod N). The default of
    2 rejects collections where two subblocks end up one lag apart, where
    an adjacent-partition ACF is largest.
    """
    if min_gap is None:
        min_gap = 2
    if not check_criterion1(c).satisfied:
        return False, None
    score = criterion3_score(c)
    return score.min_circular_gap >= min_gap, score


def check_criterion(c: SvCollection, criterion: int, min_gap: int | None = None) -> bool:
    if criterion == 1:
        return check_criterion1(c).satisfied
    if criterion == 2:
        return check_criterion2(c).satisfied
    if criterion == 3:
        return criterion3_verdict(c, min_gap)[0]
    raise ConfigurationError(f"unknown criterion {criterion}")


def criterion_for_partition(kind: str) -> int:
    """Criterion used to filter SV sets for a partition kind."""
    return {"random": 1, "interleaved": 2, "adjacent": 1}[kind]


def search_sv_collection(
    n: int,
    v_count: int,
    u_count: int,
    partition_kind: str,
    seed: int,
    iterations: int,
) -> SvCollection:
    """
    Random search for a good collection; set 1 is always all zeros.

    Each proposal draws the remaining shifts uniformly from ``[0, N)``.
    Random and interleaved partitions return the first proposal passing
    Criterion 1 or 2 respectively. Adjacent partitions draw all
    ``iterations`` proposals and keep the Criterion-1-valid one with the
    largest ``(min, mean)`` Criterion 3 score, earliest proposal on ties.
    """
    if partition_kind not in PARTITION_KINDS:
        raise ConfigurationError(f"unknown partition kind {partition_kind!r}")
    if iterations < 1:
        raise ConfigurationError("iterations must be positive")
    rng = trial_rng(seed)
    modulus = n // v_count if partition_kind == "interleaved" else n

    batch = 1024
    best = None
    best_key = None
    drawn = 0
    while drawn < iterations:
        size = min(batch, iterations - drawn)
        props = np.zeros((size, u_count, v_count), dtype=np.int64)
        props[:, 1:, :] = rng.integers(0, n, size=(size, u_count - 1, v_count))
        valid = _batch_distinct(props, modulus)
        if partition_kind != "adjacent":
            hits = np.flatnonzero(valid)
            if hits.size:
                return SvCollection(props[hits[0]], n, v_count)
        elif valid.any():
            gaps = _mutual_gaps(props[valid], n).reshape(int(valid.sum()), -1)
            if gaps.shape[-1] == 0:
                return SvCollection(props[np.flatnonzero(valid)[0]], n, v_count)
            mins = gaps.min(axis=-1)
            means = gaps.mean(axis=-1)
            # lexicographic (min, mean) maximum; lexsort keeps the earliest on ties
            order = np.lexsort((np.arange(mins.size), -means, -mins))
            k = order[0]
            key = (int(mins[k]), float(means[k]))
            if best_key is None or key > best_key:
                best_key = key
                best = props[np.flatnonzero(valid)[k]]
        drawn += size
    if best is None:
        raise SearchFailedError(
            f"no SV collection satisfying criterion {criterion_for_partition(partition_kind)} found",
            drawn,
        )
    return SvCollection(best, n, v_count)


def _batch_distinct(props: np.ndarray, modulus: int) -> np.ndarray:
    """For proposals of shape (B, U, V): do all pairs have distinct relative distances?"""
    u_count, v_count = props.shape[-2:]
    if v_count < 2 or u_count < 2:
        return np.ones(props.shape[0], dtype=bool)
    iu, ju = np.triu_indices(u_count, k=1)
    vv, ww = np.triu_indices(v_count, k=1)
    r = (props[:, iu, :] - props[:, ju, :]) % modulus
    return ~np.any(r[..., vv] == r[..., ww], axis=(1, 2))


def format_sv_file(c: SvCollection) -> str:
    lines = [f"n={c.n},v={c.v_count}"]
    lines += [",".join(str(t) for t in row) for row in c.tolist()]
    return "\n".join(lines) + "\n"


def parse_sv_file(text: str) -> SvCollection:
    """Parse ``n=<N>,v=<V>`` followed by one comma-separated SV set per line."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ConfigurationError("empty SV-set file")
    try:
        header = dict(item.split("=") for item in lines[0].replace(" ", "").split(","))
        n, v_count = int(header["n"]), int(header["v"])
    except (ValueError, KeyError) as exc:
        raise ConfigurationError(f"bad SV-set header {lines[0]!r}, expected 'n=<N>,v=<V>'") from exc
    try:
        rows = [[int(t) for t in ln.split(",")] for ln in lines[1:]]
    except ValueError as exc:
        raise ConfigurationError(f"non-integer shift in SV-set file: {exc}") from exc
    if not rows:
        raise ConfigurationError("SV-set file lists no sets")
    if any(len(r) != v_count for r in rows):
        raise ConfigurationError(f"every SV set must have {v_count} shifts")
    if any(t < 0 or t >= n for r in rows for t in r):
        raise ConfigurationError(f"shifts must lie in [0, {n})")
    return SvCollection(np.array(rows), n, v_count)


def read_sv_file(path) -> SvCollection:
    return parse_sv_file(Path(path).read_text())


def write_sv_file(c: SvCollection, path) -> None:
    Path(path).write_text(format_sv_file(c))
