"""
Subcarrier partitions into ``V`` disjoint, equally sized subblocks.

Subblock labels are 1-based (``1..V``). Three constructions are provided:
interleaved, adjacent and random (a seeded balanced shuffle). For
``V == 2`` a random partition can also be built from a zero-padded
m-sequence, which is how the ``N = 32`` ACF example spectrum is made.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import ConfigurationError
from .modem import trial_rng
from .spectral import is_power_of_two

__all__ = [
    "PARTITION_KINDS",
    "PartitionPattern",
    "interleaved_pattern",
    "adjacent_pattern",
    "random_pattern",
    "msequence",
    "msequence_pattern",
    "make_pattern",
    "split",
    "write_pattern_csv",
    "read_pattern_csv",
]

PARTITION_KINDS = ("random", "adjacent", "interleaved")


def _check_dims(n: int, v_count: int) -> None:
    if not (is_power_of_two(n) and is_power_of_two(v_count)):
        raise ConfigurationError(f"n={n} and V={v_count} must both be powers of two")
    if v_count > n:
        raise ConfigurationError(f"V={v_count} exceeds n={n}")


@dataclass(frozen=True)
class PartitionPattern:
    """Assignment of each subcarrier ``k`` to a subblock in ``1..v_count``."""

    n: int
    v_count: int
    assignment: np.ndarray = field(repr=False)
    kind: str = "custom"

    def __post_init__(self):
        _check_dims(self.n, self.v_count)
        a = np.array(self.assignment, dtype=np.int64)
        if a.shape != (self.n,):
            raise ConfigurationError(f"assignment must have length {self.n}, got {a.shape}")
        if a.min() < 1 or a.max() > self.v_count:
            raise ConfigurationError("subblock labels must lie in 1..V")
        counts = np.bincount(a, minlength=self.v_count + 1)[1:]
        if np.any(counts != self.n // self.v_count):
            raise ConfigurationError(f"unbalanced partition, subblock sizes {counts.tolist()}")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    @property
    def subblock_size(self) -> int:
        return self.n // self.v_count

    def members(self, v: int) -> np.ndarray:
        """Sorted subcarrier indices owned by subblock ``v``."""
        return np.flatnonzero(self.assignment == v)

    def masks(self) -> np.ndarray:
        """Boolean array of shape ``(V, N)``; row ``v-1`` marks subblock ``v``."""
        return self.assignment[None, :] == np.arange(1, self.v_count + 1)[:, None]

    def __eq__(self, other):
        if not isinstance(other, PartitionPattern):
            return NotImplemented
        return (
            self.n == other.n
            and self.v_count == other.v_count
            and np.array_equal(self.assignment, other.assignment)
        )

    def __hash__(self):
        return hash((self.n, self.v_count, self.assignment.tobytes()))


def interleaved_pattern(n: int, v_count: int) -> PartitionPattern:
    _check_dims(n, v_count)
    return PartitionPattern(n, v_count, np.arange(n) % v_count + 1, kind="interleaved")


def adjacent_pattern(n: int, v_count: int) -> PartitionPattern:
    _check_dims(n, v_count)
    return PartitionPattern(n, v_count, np.arange(n) // (n // v_count) + 1, kind="adjacent")


def random_pattern(n: int, v_count: int, seed: int) -> PartitionPattern:
    """Seeded shuffle of ``n/V`` copies of each subblock label."""
    _check_dims(n, v_count)
    labels = np.repeat(np.arange(1, v_count + 1), n // v_count)
    trial_rng(seed).shuffle(labels)
    return PartitionPattern(n, v_count, labels, kind="random")


# Middle exponents of a primitive polynomial x^m + ... + 1 for each degree m.
_PRIMITIVE_TAPS = {
    2: (1,), 3: (1,), 4: (1,), 5: (2,), 6: (1,), 7: (1,), 8: (4, 5, 6),
    9: (4,), 10: (3,), 11: (2,), 12: (1, 4, 6), 13: (1, 3, 4), 14: (1, 6, 10), 15: (1,),
}


def msequence(degree: int, initial_state=None) -> np.ndarray:
    """
    Binary m-sequence of length ``2**degree - 1`` from a Fibonacci LFSR.

    Uses the recurrence ``s[i + m] = s[i] ^ s[i + k1] ^ ...`` of a
    tabulated primitive polynomial ``x^m + ... + x^k1 + 1``. The default initial state for degree 5 is
    ``1 0 0 1 0``, which yields the sequence
    ``1001011001111100011011101010000``.
    """
    if degree not in _PRIMITIVE_TAPS:
        raise ConfigurationError(f"no primitive polynomial tabulated for degree {degree}")
    taps = _PRIMITIVE_TAPS[degree]
    if initial_state is None:
        initial_state = [1, 0, 0, 1, 0] if degree == 5 else [1] + [0] * (degree - 1)
    state = [int(b) & 1 for b in initial_state]
    if len(state) != degree or not any(state):
        raise ConfigurationError("initial state must be a nonzero vector of length degree")
    length = 2**degree - 1
    s = state + [0] * (length - degree)
    for i in range(length - degree):
        bit = s[i]
        for k in taps:
            bit ^= s[i + k]
        s[i + degree] = bit
    return np.array(s, dtype=np.int64)


def msequence_pattern(n: int, initial_state=None) -> PartitionPattern:
    """
    Two-subblock partition whose first power spectrum is a zero-padded
    m-sequence of length ``n - 1``; subblock 2 is the complement.
    """
    _check_dims(n, 2)
    degree = int(np.log2(n))
    bits = np.append(msequence(degree, initial_state), 0)
    return PartitionPattern(n, 2, np.where(bits == 1, 1, 2), kind="random")


def make_pattern(kind: str, n: int, v_count: int, seed: int = 0) -> PartitionPattern:
    if kind == "interleaved":
        return interleaved_pattern(n, v_count)
    if kind == "adjacent":
        return adjacent_pattern(n, v_count)
    if kind == "random":
        return random_pattern(n, v_count, seed)
    if kind == "msequence":
        if v_count != 2:
            raise ConfigurationError("m-sequence partition requires V = 2")
        return msequence_pattern(n)
    raise ConfigurationError(f"unknown partition kind {kind!r}")


def split(X, pattern: PartitionPattern) -> np.ndarray:
    """
    Zero-padded subblock sequences ``X_v``, stacked as shape ``(..., V, N)``.

    ``X_v(k) = X(k)`` where subcarrier ``k`` belongs to subblock ``v`` and
    0 elsewhere. ``X`` may carry leading batch axes.
    """
    X = np.asarray(X, dtype=np.complex128)
    if X.shape[-1] != pattern.n:
        raise ConfigurationError(f"sequence length {X.shape[-1]} != pattern n={pattern.n}")
    return np.where(pattern.masks(), X[..., None, :], 0)


def write_pattern_csv(pattern: PartitionPattern, path=None) -> str:
    """Serialize as ``k,v`` lines (no header). Returns the text; writes it if ``path``."""
    buf = io.StringIO()
    for k, v in enumerate(pattern.assignment):
        buf.write(f"{k},{v}\n")
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_pattern_csv(source, v_count: int | None = None) -> PartitionPattern:
    """Inverse of :func:`write_pattern_csv`; ``source`` is a path or the text itself."""
    text = source if isinstance(source, str) and "\n" in source else Path(source).read_text()
    pairs = [tuple(int(f) for f in line.split(",")) for line in text.splitlines() if line.strip()]
    ks = [k for k, _ in pairs]
    if sorted(ks) != list(range(len(pairs))):
        raise ConfigurationError("pattern file must list every subcarrier index exactly once")
    assignment = np.empty(len(pairs), dtype=np.int64)
    for k, v in pairs:
        assignment[k] = v
    if v_count is None:
        v_count = int(assignment.max())
    return PartitionPattern(len(pairs), v_count, assignment)
