"""Fourier series arithmetic on the unit circle.

Series are stored as dense complex arrays over the bilateral index range
``[-K, K]``; grid samples live at ``theta_j = 2*pi*j/M``.  All products are
formed on zero-padded grids so that quadratic (and chained higher-order)
nonlinearities do not alias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COEFF_FLOOR = 1e-14


@dataclass(frozen=True)
class FourierSeries:
    """Finite bilateral series ``sum_{k=-K}^{K} c_k w^k``.

    ``coeffs[k + K]`` holds ``c_k``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("coefficient array must be 1-d with odd length")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self) -> int:
        return (self.coeffs.size - 1) // 2

    @classmethod
    def zeros(cls, K: int) -> "FourierSeries":
        return cls(np.zeros(2 * K + 1, dtype=complex))

    @classmethod
    def from_dict(cls, mapping: dict, K: int | None = None) -> "FourierSeries":
        if K is None:
            K = max((abs(k) for k in mapping), default=0)
        c = np.zeros(2 * K + 1, dtype=complex)
        for k, v in mapping.items():
            if abs(k) > K:
                raise ValueError(f"index {k} outside half-width {K}")
            c[k + K] = v
        return cls(c)

    @classmethod
    def from_analytic(cls, a, K: int | None = None) -> "FourierSeries":
        """Series with ``c_k = a[k]`` for ``k >= 0`` and zero below."""
        a = np.asarray(a, dtype=complex)
        if K is None:
            K = a.size - 1
        c = np.zeros(2 * K + 1, dtype=complex)
        n = min(a.size, K + 1)
        c[K:K + n] = a[:n]
        return cls(c)

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.K:
            return 0j
        return complex(self.coeffs[k + self.K])

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def nonnegative(self) -> np.ndarray:
        """Coefficients ``c_0 .. c_K``."""
        return self.coeffs[self.K:].copy()

    def truncate(self, K: int) -> "FourierSeries":
        """Re-express at half-width ``K``, dropping or zero-filling modes."""
        if K >= self.K:
            c = np.zeros(2 * K + 1, dtype=complex)
            c[K - self.K:K + self.K + 1] = self.coeffs
            return FourierSeries(c)
        return FourierSeries(self.coeffs[self.K - K:self.K + K + 1])

    def is_real_valued(self, tol: float = 1e-12) -> bool:
        c = self.coeffs
        scale = max(1.0, float(np.max(np.abs(c))))
        return bool(np.max(np.abs(c - np.conj(c[::-1]))) <= tol * scale)

    def is_analytic(self, tol: float = 0.0) -> bool:
        neg = self.coeffs[:self.K]
        return bool(neg.size == 0 or np.max(np.abs(neg)) <= tol)

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        K = max(self.K, other.K)
        return FourierSeries(self.truncate(K).coeffs + other.truncate(K).coeffs)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        K = max(self.K, other.K)
        return FourierSeries(self.truncate(K).coeffs - other.truncate(K).coeffs)

    def scale(self, factor: complex) -> "FourierSeries":
        return FourierSeries(self.coeffs * factor)


@dataclass(frozen=True)
class GridSamples:
    """Samples at ``theta_j = 2*pi*j/M``."""

    values: np.ndarray

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def theta(self) -> np.ndarray:
        return theta_grid(self.M)


def theta_grid(M: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(M) / M


def _is_pow2(M: int) -> bool:
    return M > 0 and (M & (M - 1)) == 0


def default_grid_size(K: int) -> int:
    """Padded grid length ``2*(2K+2)`` rounded up to a power of two."""
    n = 2 * (2 * K + 2)
    return 1 << (n - 1).bit_length()


def to_grid(s: FourierSeries, M: int) -> GridSamples:
    """Evaluate ``s`` at ``M`` equispaced points on the circle."""
    if not _is_pow2(M):
        raise ValueError(f"grid length {M} is not a power of two")
    if M < 2 * s.K + 1:
        raise ValueError(f"grid length {M} too small for half-width {s.K}")
    buf = np.zeros(M, dtype=complex)
    buf[s.indices % M] = s.coeffs
    return GridSamples(np.fft.ifft(buf) * M)


def from_grid(g: GridSamples | np.ndarray, K: int) -> FourierSeries:
    """Discrete Fourier coefficients of grid samples, kept up to ``|k| <= K``."""
    values = g.values if isinstance(g, GridSamples) else np.asarray(g)
    M = values.size
    if 2 * K + 1 > M:
        raise ValueError(f"half-width {K} needs at least {2 * K + 1} samples, got {M}")
    c = np.fft.fft(values) / M
    idx = np.arange(-K, K + 1)
    return FourierSeries(c[idx % M])


def product(a: FourierSeries, b: FourierSeries) -> FourierSeries:
    """Alias-free product, returned at half-width ``a.K + b.K``."""
    K = max(a.K, b.K)
    M = 1 << (2 * (2 * K + 1) - 1).bit_length()
    va = to_grid(a, M).values
    vb = to_grid(b, M).values
    return from_grid(va * vb, a.K + b.K)


def derivative_wrt_omega(s: FourierSeries) -> FourierSeries:
    """``d/dw sum c_k w^k = sum k c_k w^(k-1)``."""
    K = s.K
    out = np.zeros_like(s.coeffs)
    k = s.indices
    out[:-1] = (k * s.coeffs)[1:]
    if K > 0 and s.coeffs[0] != 0:
        # the w^(-K-1) term needs one extra mode
        wide = np.zeros(2 * K + 3, dtype=complex)
        wide[1:-1] = out
        wide[0] = -K * s.coeffs[0]
        return FourierSeries(wide)
    return FourierSeries(out)


def hilbert_multiplier(k: np.ndarray) -> np.ndarray:
    """Fourier symbol ``-i sign(k)`` of the periodic Hilbert transform."""
    return -1j * np.sign(k)


def hilbert_transform(s: FourierSeries, tol: float = 1e-12) -> FourierSeries:
    """Conjugate function of a real-valued series.

    Chosen so that ``s + i H[s]`` has no negative modes; ``H[cos] = sin``.
    """
    if not s.is_real_valued(tol):
        raise ValueError("hilbert_transform requires a real-valued series")
    return FourierSeries(s.coeffs * hilbert_multiplier(s.indices))


def hilbert_grid(values: np.ndarray) -> np.ndarray:
    """Hilbert transform of real samples on an equispaced grid.

    The Nyquist mode of an even-length grid is dropped.
    """
    values = np.asarray(values, dtype=float)
    M = values.size
    c = np.fft.rfft(values)
    c *= -1j
    c[0] = 0.0
    if M % 2 == 0:
        c[-1] = 0.0
    return np.fft.irfft(c, n=M)


def fourier_filter(s: FourierSeries, order: int = 25, strength: float = 36.0,
                   floor: float = COEFF_FLOOR) -> FourierSeries:
    """Exponential filter ``exp(-strength (|k|/K)^order)`` then zero tiny modes."""
    if strength <= 0:
        raise ValueError("filter strength must be positive")
    K = s.K
    if K == 0:
        c = s.coeffs.copy()
    else:
        sigma = np.exp(-strength * (np.abs(s.indices) / K) ** order)
        c = s.coeffs * sigma
    c[np.abs(c) < floor] = 0.0
    return FourierSeries(c)


def moving_average(values, span: int = 5) -> np.ndarray:
    """Centered moving average with periodic wrap-around."""
    values = np.asarray(values)
    if span < 1 or span % 2 == 0:
        raise ValueError(f"span must be a positive odd integer, got {span}")
    if span > values.size:
        raise ValueError("span longer than the sample array")
    if span == 1:
        return values.copy()
    h = span // 2
    padded = np.concatenate([values[-h:], values, values[:h]])
    kernel = np.full(span, 1.0 / span)
    return np.convolve(padded, kernel, mode="valid")
