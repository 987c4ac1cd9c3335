"""
Unitary DFT pair, cyclic shifts and PAPR measurement.

All transforms use the unitary ``1/sqrt(N)`` normalization in both
directions, so energy is preserved exactly up to rounding::

    x(n) = 1/sqrt(N) * sum_k X(k) exp(+2j*pi*k*n/N)

The FFT itself is delegated to :mod:`numpy.fft` (``norm="ortho"``).
Functions accept a trailing sample axis, so a batch of sequences with
shape ``(..., N)`` is transformed row by row.
"""
from __future__ import annotations

import numpy as np

from .exceptions import ConfigurationError, DomainError

__all__ = [
    "is_power_of_two",
    "idft",
    "dft",
    "oversampled_idft",
    "cyclic_shift_left",
    "mean_power",
    "peak_power",
    "papr_db",
]


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def _as_sequence(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim == 0:
        raise ConfigurationError("expected a sequence, got a scalar")
    n = x.shape[-1]
    if not is_power_of_two(int(n)):
        raise ConfigurationError(f"sequence length must be a power of two, got {n}")
    return x


def idft(X) -> np.ndarray:
    """Unitary inverse DFT along the last axis (frequency -> time)."""
    return np.fft.ifft(_as_sequence(X), norm="ortho")


def dft(x) -> np.ndarray:
    """Unitary forward DFT along the last axis; exact inverse of :func:`idft`."""
    return np.fft.fft(_as_sequence(x), norm="ortho")


def oversampled_idft(X, factor: int = 1) -> np.ndarray:
    """
    Time-domain signal sampled ``factor`` times faster than Nyquist.

    The spectrum is zero-padded in the middle (between the positive and
    negative frequency halves) to length ``factor * N``. The result is
    rescaled by ``sqrt(factor)`` so that its sample mean power equals that
    of ``idft(X)``; for ``factor == 1`` it is identical to ``idft(X)``.
    """
    X = _as_sequence(X)
    if not is_power_of_two(int(factor)):
        raise ConfigurationError(f"oversampling factor must be a power of two, got {factor}")
    if factor == 1:
        return idft(X)
    n = X.shape[-1]
    half = n // 2
    padded = np.zeros(X.shape[:-1] + (factor * n,), dtype=np.complex128)
    padded[..., :half] = X[..., :half]
    padded[..., factor * n - (n - half):] = X[..., half:]
    return np.sqrt(factor) * np.fft.ifft(padded, norm="ortho")


def cyclic_shift_left(x, tau: int) -> np.ndarray:
    """Return ``y`` with ``y(n) = x((n + tau) mod N)``."""
    x = np.asarray(x)
    n = x.shape[-1]
    return np.roll(x, -(int(tau) % n), axis=-1)


def mean_power(x) -> np.ndarray | float:
    """Empirical mean power ``(1/N) sum |x(n)|^2`` along the last axis."""
    p = np.mean(np.abs(np.asarray(x)) ** 2, axis=-1)
    return float(p) if np.ndim(p) == 0 else p


def peak_power(x) -> np.ndarray | float:
    p = np.max(np.abs(np.asarray(x)) ** 2, axis=-1)
    return float(p) if np.ndim(p) == 0 else p


def papr_db(x, reference_power) -> np.ndarray | float:
    """
    Peak power of ``x`` relative to ``reference_power``, in dB.

    ``reference_power`` stands in for the expectation in the PAPR
    denominator. In CSS selection it is the mean power of the unshifted
    signal, shared by every candidate of the same symbol.
    """
    ref = np.asarray(reference_power, dtype=float)
    if np.any(~(ref > 0)):
        raise DomainError("reference_power must be strictly positive")
    out = 10.0 * np.log10(np.asarray(peak_power(x)) / ref)
    return float(out) if np.ndim(out) == 0 else out
