"""
Autocorrelation of OFDM signal subsequences from their power spectra.

For a subblock with binary power spectrum ``S_v`` (1 on owned subcarriers,
0 elsewhere) the ACF is the unitary IDFT of ``S_v``. Only its magnitude
matters for PAPR. Closed forms exist for the two structured partitions:

* interleaved: an impulse train, ``sqrt(N)/V`` at multiples of ``N/V``;
* adjacent: a Dirichlet kernel, ``|sin(m*pi/V) / (sqrt(N) sin(m*pi/N))|``
  for ``m != 0`` and ``sqrt(N)/V`` at ``m = 0``.

Random partitions have no closed form; their sidelobes are measured.
"""
from __future__ import annotations

import math

import numpy as np

from .exceptions import ConfigurationError
from .partition import PartitionPattern
from .spectral import idft, is_power_of_two

__all__ = [
    "power_spectrum",
    "acf_numeric",
    "acf_interleaved_closed",
    "acf_adjacent_closed",
    "acf_closed",
    "acf_compare",
    "acf_table",
    "max_sidelobe",
]

_SINGULAR = 1e-12


def power_spectrum(pattern: PartitionPattern, v: int) -> np.ndarray:
    """0/1 vector marking the subcarriers owned by subblock ``v`` (1-based)."""
    if not 1 <= v <= pattern.v_count:
        raise ConfigurationError(f"subblock {v} outside 1..{pattern.v_count}")
    return (pattern.assignment == v).astype(float)


def acf_numeric(spectrum) -> np.ndarray:
    """``|idft(S)(m)|`` for every lag ``m`` in ``[0, N)``."""
    return np.abs(idft(spectrum))


def _check(n: int, v_count: int) -> None:
    if not (is_power_of_two(n) and is_power_of_two(v_count) and v_count <= n):
        raise ConfigurationError(f"invalid dimensions n={n}, V={v_count}")


def acf_interleaved_closed(n: int, v_count: int, m: int) -> float:
    _check(n, v_count)
    return math.sqrt(n) / v_count if m % (n // v_count) == 0 else 0.0


def acf_adjacent_closed(n: int, v_count: int, m: int) -> float:
    _check(n, v_count)
    m = m % n
    if m == 0:
        return math.sqrt(n) / v_count
    denom = math.sqrt(n) * math.sin(m * math.pi / n)
    if abs(denom) < _SINGULAR:  # unreachable for 0 < m < N
        spectrum = (np.arange(n) < n // v_count).astype(float)
        return float(acf_numeric(spectrum)[m])
    return abs(math.sin(m * math.pi / v_count) / denom)


def acf_closed(kind: str, n: int, v_count: int) -> np.ndarray:
    """Closed-form ACF magnitude over all lags for ``kind`` in {interleaved, adjacent}."""
    if kind == "interleaved":
        f = acf_interleaved_closed
    elif kind == "adjacent":
        f = acf_adjacent_closed
    else:
        raise ConfigurationError(f"no closed form for {kind!r} partitions")
    return np.array([f(n, v_count, m) for m in range(n)])


def max_sidelobe(acf) -> float:
    """Largest ACF magnitude away from lag 0."""
    return float(np.max(np.asarray(acf)[1:])) if len(acf) > 1 else 0.0


def acf_compare(pattern: PartitionPattern, v: int) -> float:
    """
    For interleaved/adjacent patterns, the max deviation between the numeric
    ACF and its closed form. For random patterns, the max sidelobe level.
    """
    numeric = acf_numeric(power_spectrum(pattern, v))
    if pattern.kind in ("interleaved", "adjacent"):
        return float(np.max(np.abs(numeric - acf_closed(pattern.kind, pattern.n, pattern.v_count))))
    return max_sidelobe(numeric)


def acf_table(pattern: PartitionPattern, v: int = 1) -> list[tuple[int, float, float, float]]:
    """
    Rows ``(m, numeric, closed_form, deviation)``. For partitions without a
    closed form, ``closed_form`` and ``deviation`` are NaN.
    """
    numeric = acf_numeric(power_spectrum(pattern, v))
    if pattern.kind in ("interleaved", "adjacent"):
        closed = acf_closed(pattern.kind, pattern.n, pattern.v_count)
    else:
        closed = np.full(pattern.n, np.nan)
    return [
        (m, float(numeric[m]), float(closed[m]), float(abs(numeric[m] - closed[m])))
        for m in range(pattern.n)
    ]
