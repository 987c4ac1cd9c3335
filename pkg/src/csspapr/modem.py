"""
16-QAM mapping and seeded symbol generation.

Bit convention: the first two bits of a 4-bit group select the in-phase
level, the last two the quadrature level, each through the Gray map
``00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3``. Points are scaled by
``1/sqrt(10)`` for unit average power.

Randomness comes from numpy's PCG64 bit generator. Per-trial streams are
derived with :class:`numpy.random.SeedSequence` using the trial index as
the spawn key, so ``(master_seed, trial)`` maps injectively to a stream
that does not depend on which worker draws it, or in which order.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = [
    "GRAY_LEVELS",
    "QAM16_TABLE",
    "map_16qam",
    "map_16qam_indices",
    "trial_rng",
    "random_symbol_sequence",
]

# Indexed by the 2-bit value b1b0 (b1 sent first).
GRAY_LEVELS = np.array([-3.0, -1.0, 3.0, 1.0])

_SCALE = 1.0 / np.sqrt(10.0)

# QAM16_TABLE[b] for the 4-bit integer b = b3 b2 b1 b0, b3 sent first.
QAM16_TABLE = (
    GRAY_LEVELS[np.arange(16) >> 2] + 1j * GRAY_LEVELS[np.arange(16) & 3]
) * _SCALE


def map_16qam(bits: Sequence[int] | str) -> complex:
    """Map one group of four bits, e.g. ``"1110"`` or ``[1, 1, 1, 0]``."""
    if isinstance(bits, str):
        bits = [int(b) for b in bits]
    bits = list(bits)
    if len(bits) != 4 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected exactly four bits, got {bits!r}")
    index = (bits[0] << 3) | (bits[1] << 2) | (bits[2] << 1) | bits[3]
    return complex(QAM16_TABLE[index])


def map_16qam_indices(indices) -> np.ndarray:
    """Vectorized map of 4-bit integers in ``[0, 16)`` to constellation points."""
    return QAM16_TABLE[np.asarray(indices)]


def trial_rng(master_seed: int, trial_index: int | None = None) -> np.random.Generator:
    """Generator for ``master_seed``, or for one trial derived from it."""
    spawn_key = () if trial_index is None else (int(trial_index),)
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=spawn_key)
    return np.random.Generator(np.random.PCG64(ss))


def random_symbol_sequence(seed: int | np.random.Generator, n: int) -> np.ndarray:
    """``n`` i.i.d. uniform 16-QAM symbols drawn from ``seed``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else trial_rng(seed)
    return map_16qam_indices(rng.integers(0, 16, size=n, dtype=np.uint8))
