"""
Cyclic shifted sequences (CSS) candidate generation and selection.

The input symbol sequence is split into ``V`` subblocks, each subblock is
transformed to the time domain once, and every candidate is a
shift-and-add of those subblock signals::

    x^u(n) = sum_v x_v((n + tau_v^u) mod N)

The candidate with the lowest PAPR is selected. A PTS baseline, which
multiplies subblock signals by rotation factors instead of shifting them,
shares the same machinery.

Indices follow the 1-based convention of the scheme description: SV set
``u`` is ``collection.sets[u - 1]`` and ``CandidateResult.index`` is in
``1..U``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError
from .modem import trial_rng
from .partition import PartitionPattern, split
from .spectral import idft, is_power_of_two, mean_power, papr_db

__all__ = [
    "PTS_ALPHABET",
    "SvCollection",
    "CandidateResult",
    "subblock_signals",
    "make_candidate",
    "make_candidates",
    "select_min_papr",
    "side_info_bits",
    "pts_candidate",
    "pts_candidates",
    "default_pts_rotations",
    "select_min_papr_pts",
]

PTS_ALPHABET = np.array([1, -1, 1j, -1j], dtype=np.complex128)


@dataclass(frozen=True)
class SvCollection:
    """
    ``U`` shift-value sets for an ``N``-subcarrier, ``V``-subblock system.

    ``sets`` has shape ``(U, V)``; entries are reduced modulo ``n``.
    The usual convention puts the all-zero set first, which guarantees
    that CSS never increases PAPR.
    """

    sets: np.ndarray = field(repr=False)
    n: int
    v_count: int

    def __post_init__(self):
        if not is_power_of_two(self.n):
            raise ConfigurationError(f"n={self.n} must be a power of two")
        s = np.array(self.sets, dtype=np.int64)
        if s.ndim != 2 or s.shape[0] < 1:
            raise ConfigurationError("sets must be a non-empty 2-D array of shape (U, V)")
        if s.shape[1] != self.v_count:
            raise ConfigurationError(f"each SV set needs {self.v_count} shifts, got {s.shape[1]}")
        s = s % self.n
        s.setflags(write=False)
        object.__setattr__(self, "sets", s)

    @classmethod
    def from_lists(cls, sets, n: int) -> "SvCollection":
        sets = [list(s) for s in sets]
        return cls(np.array(sets, dtype=np.int64), n, len(sets[0]))

    @property
    def u_count(self) -> int:
        return self.sets.shape[0]

    @property
    def has_identity_first(self) -> bool:
        return not np.any(self.sets[0])

    def __getitem__(self, u: int) -> tuple[int, ...]:
        """SV set ``u`` (1-based) as a tuple."""
        if not 1 <= u <= self.u_count:
            raise IndexError(f"SV set index {u} outside 1..{self.u_count}")
        return tuple(int(t) for t in self.sets[u - 1])

    def __len__(self):
        return self.u_count

    def tolist(self) -> list[list[int]]:
        return self.sets.tolist()

    def translated(self, c: int) -> "SvCollection":
        """Every shift of every set increased by ``c`` (mod N)."""
        return SvCollection(self.sets + c, self.n, self.v_count)

    def __eq__(self, other):
        if not isinstance(other, SvCollection):
            return NotImplemented
        return (self.n, self.v_count) == (other.n, other.v_count) and np.array_equal(
            self.sets, other.sets
        )

    def __hash__(self):
        return hash((self.n, self.v_count, self.sets.tobytes()))


@dataclass
class CandidateResult:
    index: int
    papr: float
    reference_power: float
    original_papr: float
    signal: np.ndarray | None = field(default=None, repr=False)


def subblock_signals(X, pattern: PartitionPattern) -> np.ndarray:
    """Time-domain subblock signals ``x_v = idft(X_v)``, shape ``(..., V, N)``."""
    return idft(split(X, pattern))


def _shift_index(sets: np.ndarray, n: int) -> np.ndarray:
    # idx[u, v, m] = (m + tau[u, v]) mod N
    return (np.arange(n)[None, None, :] + sets[:, :, None]) % n


def make_candidates(x_subblocks, sets) -> np.ndarray:
    """
    All CSS candidates at once.

    ``x_subblocks`` has shape ``(..., V, N)`` and ``sets`` shape ``(U, V)``;
    the result has shape ``(..., U, N)``.
    """
    x = np.asarray(x_subblocks)
    sets = np.asarray(sets, dtype=np.int64)
    v_count, n = x.shape[-2:]
    if sets.ndim != 2 or sets.shape[1] != v_count:
        raise ConfigurationError(f"SV sets of shape {sets.shape} do not match V={v_count}")
    idx = _shift_index(sets % n, n)
    lead = x.shape[:-2]
    gathered = np.take_along_axis(
        x[..., None, :, :],
        np.broadcast_to(idx, lead + idx.shape),
        axis=-1,
    )
    return gathered.sum(axis=-2)


def make_candidate(x_subblocks, tau) -> np.ndarray:
    """One candidate: sum over ``v`` of ``x_v`` cyclically shifted left by ``tau[v]``."""
    return make_candidates(x_subblocks, np.asarray(tau, dtype=np.int64)[None, :])[..., 0, :]


def _select(candidates: np.ndarray, original: np.ndarray, keep_signal: bool) -> CandidateResult:
    ref = mean_power(original)
    paprs = papr_db(candidates, ref)
    best = int(np.argmin(paprs))  # first minimum: ties go to the lowest index
    return CandidateResult(
        index=best + 1,
        papr=float(paprs[best]),
        reference_power=float(ref),
        original_papr=float(papr_db(original, ref)),
        signal=candidates[best].copy() if keep_signal else None,
    )


def _check_dims(X: np.ndarray, pattern: PartitionPattern, n: int, v_count: int) -> None:
    if X.shape != (pattern.n,):
        raise ConfigurationError(f"symbol sequence shape {X.shape} != ({pattern.n},)")
    if (n, v_count) != (pattern.n, pattern.v_count):
        raise ConfigurationError(
            f"collection is for n={n}, V={v_count}; "
            f"partition is n={pattern.n}, V={pattern.v_count}"
        )


def select_min_papr(
    X, pattern: PartitionPattern, collection: SvCollection, keep_signal: bool = True
) -> CandidateResult:
    """
    Exhaustive CSS search over the ``U`` SV sets of ``collection``.

    Every candidate is measured against the mean power of the unshifted
    combined signal (the all-zero SV set). All candidates have that same
    energy, so the shared reference only removes rounding-level noise from
    the comparison.
    """
    X = np.asarray(X, dtype=np.complex128)
    _check_dims(X, pattern, collection.n, collection.v_count)
    x_sub = subblock_signals(X, pattern)
    original = make_candidate(x_sub, np.zeros(pattern.v_count, dtype=np.int64))
    return _select(make_candidates(x_sub, collection.sets), original, keep_signal)


def side_info_bits(u_count: int) -> int:
    """Bits needed to signal which of ``u_count`` candidates was sent."""
    if u_count < 1:
        raise ValueError("u_count must be at least 1")
    return math.ceil(math.log2(u_count)) if u_count > 1 else 0


def pts_candidates(x_subblocks, rotations) -> np.ndarray:
    """PTS candidates ``sum_v b[u, v] x_v``: ``(..., V, N) x (U, V) -> (..., U, N)``."""
    b = np.asarray(rotations, dtype=np.complex128)
    return np.einsum("uv,...vn->...un", b, np.asarray(x_subblocks))


def pts_candidate(x_subblocks, rotations) -> np.ndarray:
    """One PTS candidate: subblock signals weighted by unit-modulus ``rotations``."""
    b = np.asarray(rotations, dtype=np.complex128)
    if not np.all(np.isin(b, PTS_ALPHABET)):
        raise ConfigurationError("PTS rotations must be drawn from {+1, -1, +j, -j}")
    return pts_candidates(x_subblocks, b[None, :])[..., 0, :]


def default_pts_rotations(u_count: int, v_count: int, seed: int = 0) -> np.ndarray:
    """
    ``U`` distinct rotation vectors over {+1, -1, +j, -j}, first one all ones.

    The first subblock is never rotated (a common phase does not change
    PAPR), and the remaining vectors are drawn without repetition from a
    seeded stream.
    """
    total = 4 ** (v_count - 1)
    if u_count > total:
        raise ConfigurationError(f"only {total} distinct PTS vectors exist for V={v_count}")
    codes = [0]
    rng = trial_rng(seed)
    while len(codes) < u_count:
        c = int(rng.integers(1, total))
        if c not in codes:
            codes.append(c)
    digits = np.array([[(c >> (2 * i)) & 3 for i in range(v_count - 1)] for c in codes])
    out = np.ones((u_count, v_count), dtype=np.complex128)
    if v_count > 1:
        out[:, 1:] = PTS_ALPHABET[digits]
    return out


def select_min_papr_pts(
    X, pattern: PartitionPattern, rotations, keep_signal: bool = True
) -> CandidateResult:
    X = np.asarray(X, dtype=np.complex128)
    b = np.asarray(rotations, dtype=np.complex128)
    _check_dims(X, pattern, pattern.n, b.shape[1])
    x_sub = subblock_signals(X, pattern)
    original = pts_candidates(x_sub, np.ones((1, pattern.v_count)))[0]
    return _select(pts_candidates(x_sub, b), original, keep_signal)
