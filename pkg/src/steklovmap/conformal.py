"""Geometry of a domain given as the image of the unit disk under ``z = f(w)``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import FourierSeries, default_grid_size, from_grid, theta_grid, to_grid

DEGENERACY_THRESHOLD = 1e-6


class DegenerateShapeError(ValueError):
    """The mapping is not locally univalent on the closed disk (``f_w`` vanishes)."""


@dataclass(frozen=True)
class ConformalShape:
    """Map ``f(w) = sum_{k=0}^{K} a_k w^k`` from the unit disk onto a domain.

    ``K`` plays the role of ``N/2`` in the discretisation: a spectrum computed
    from this shape uses ``2K + 1`` unknowns.
    """

    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.ndim != 1 or a.size < 2:
            raise ValueError("need at least coefficients a_0 and a_1")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def K(self) -> int:
        return self.a.size - 1

    @classmethod
    def from_terms(cls, terms: dict, K: int | None = None) -> "ConformalShape":
        if any(k < 0 for k in terms):
            raise ValueError("mapping coefficients must have nonnegative index")
        if K is None:
            K = max(max(terms), 1)
        a = np.zeros(K + 1, dtype=complex)
        for k, v in terms.items():
            if k > K:
                raise ValueError(f"term w^{k} exceeds truncation K={K}")
            a[k] = v
        return cls(a)

    def with_truncation(self, K: int) -> "ConformalShape":
        a = np.zeros(K + 1, dtype=complex)
        n = min(K, self.K) + 1
        a[:n] = self.a[:n]
        return ConformalShape(a)

    def scaled(self, t: complex) -> "ConformalShape":
        return ConformalShape(self.a * t)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.a.imag == 0))

    def series(self) -> FourierSeries:
        return FourierSeries.from_analytic(self.a)

    def w_fw(self) -> np.ndarray:
        """Coefficients of ``w f_w``: ``k a_k``."""
        return np.arange(self.K + 1) * self.a

    def w_d_w_fw(self) -> np.ndarray:
        """Coefficients of ``w (w f_w)_w``: ``k^2 a_k``."""
        return np.arange(self.K + 1) ** 2 * self.a

    def grid_size(self, M: int | None = None) -> int:
        return default_grid_size(2 * self.K) if M is None else M


def _analytic_samples(coeffs: np.ndarray, M: int) -> np.ndarray:
    return to_grid(FourierSeries.from_analytic(coeffs), M).values


def derivative_samples(shape: ConformalShape, M: int) -> np.ndarray:
    """``f_w`` on the unit circle, via ``w f_w / w``."""
    th = theta_grid(M)
    return _analytic_samples(shape.w_fw(), M) * np.exp(-1j * th)


def min_derivative_modulus(shape: ConformalShape) -> float:
    M = 4 * default_grid_size(shape.K)
    return float(np.min(np.abs(_analytic_samples(shape.w_fw(), M))))


def check_nondegenerate(shape: ConformalShape, threshold: float = DEGENERACY_THRESHOLD):
    m = min_derivative_modulus(shape)
    if not m > threshold:
        raise DegenerateShapeError(f"min |f_w| = {m:.3e} on the unit circle")


def boundary_modulus(shape: ConformalShape, K_out: int | None = None,
                     M: int | None = None, check: bool = True) -> FourierSeries:
    """Fourier coefficients ``d_l`` of ``|f_w|`` on ``|w| = 1``.

    Computed pseudo-spectrally; the default half-width is ``2K`` so every
    index ``k + m`` needed by the eigenproblem matrices is available.
    """
    if check:
        check_nondegenerate(shape)
    if K_out is None:
        K_out = 2 * shape.K
    if M is None:
        M = default_grid_size(max(K_out, 2 * shape.K))
    mod = np.abs(_analytic_samples(shape.w_fw(), M))
    c = np.fft.rfft(mod) / M
    coeffs = np.zeros(2 * K_out + 1, dtype=complex)
    coeffs[K_out:] = c[:K_out + 1]
    coeffs[:K_out] = np.conj(c[1:K_out + 1][::-1])
    return FourierSeries(coeffs)


def curvature(shape: ConformalShape, M: int | None = None, check: bool = True) -> np.ndarray:
    """Signed curvature of the boundary curve at ``theta_j``.

    ``Re{conj(w f_w) * w (w f_w)_w} / |w f_w|^3``; equals ``1/R`` on a circle
    of radius ``R``.
    """
    if check:
        check_nondegenerate(shape)
    M = shape.grid_size(M)
    p = _analytic_samples(shape.w_fw(), M)
    q = _analytic_samples(shape.w_d_w_fw(), M)
    return np.real(np.conj(p) * q) / np.abs(p) ** 3


def area(shape: ConformalShape) -> float:
    """Enclosed area ``pi * sum k |a_k|^2``."""
    k = np.arange(shape.K + 1)
    A = float(np.pi * np.sum(k * np.abs(shape.a) ** 2))
    if not A > 0:
        raise DegenerateShapeError("mapping encloses no area")
    return A


def perimeter(shape: ConformalShape) -> float:
    """Boundary length ``2 pi d_0``."""
    return float(2 * np.pi * boundary_modulus(shape, K_out=0, M=4 * default_grid_size(shape.K))[0].real)


def boundary_curve(shape: ConformalShape, M: int) -> np.ndarray:
    """Samples ``f(exp(i theta_j))``."""
    if M < 2 * shape.K + 1 or M & (M - 1):
        # grid cannot carry the series through an FFT
        w = np.exp(1j * theta_grid(M))
        return np.polyval(shape.a[::-1], w)
    return _analytic_samples(shape.a, M)


def crowding_diagnostic(shape: ConformalShape, M: int | None = None) -> float:
    """``max |f_w| / min |f_w|`` on the circle; large values flag crowding."""
    M = 4 * default_grid_size(shape.K) if M is None else M
    mod = np.abs(_analytic_samples(shape.w_fw(), M))
    lo = float(mod.min())
    return float("inf") if lo == 0 else float(mod.max()) / lo
