"""Steklov eigenproblem on a conformally mapped disk.

On the unit circle the boundary condition becomes
``Re{w Psi_w} = lambda |f_w| Re{Psi}`` for an analytic potential
``Psi = sum_{k>=0} c_k w^k``.  Matching Fourier modes ``0..K`` of both sides
gives the pencil ``lambda A C = B C`` with ``C = (Re c_0..Re c_K, Im c_1..Im c_K)``.
``A`` is the Gram matrix of the real parts under the weight ``|f_w|`` and is
symmetric positive definite for a nondegenerate map; ``B = diag(k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import conformal
from .conformal import ConformalShape, DegenerateShapeError
from .spectral import FourierSeries, default_grid_size, to_grid

ZERO_MODE_TOL = 1e-10


class EigenSolveError(RuntimeError):
    """The discrete pencil could not be solved (singular or indefinite ``A``)."""


@dataclass(frozen=True)
class GeneralizedSystem:
    A: np.ndarray
    B: np.ndarray
    K: int

    @property
    def size(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class SteklovSpectrum:
    """Ascending eigenvalues with coefficient eigenvectors as columns.

    Column ``j`` of ``eigenvectors`` is ``(Re c_0..Re c_K, Im c_1..Im c_K)`` for
    eigenvalue ``j``.  Only the lowest ``trusted_count`` nonzero modes are
    resolved by the truncation.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    K: int
    trusted_count: int
    modulus: FourierSeries | None = field(default=None, repr=False)

    def potential(self, index: int) -> np.ndarray:
        """Coefficients ``c_0..c_K`` of the (unnormalised) analytic potential."""
        v = self.eigenvectors[:, index]
        K = self.K
        c = v[:K + 1].astype(complex)
        c[1:] += 1j * v[K + 1:]
        return c


def _d_lookup(d: FourierSeries, K: int):
    """Real and imaginary parts of ``d_l`` as matrices indexed by (k-m) and (k+m)."""
    if d.K < 2 * K:
        raise ValueError(f"|f_w| series has half-width {d.K}, need {2 * K}")
    k = np.arange(K + 1)
    diff = k[:, None] - k[None, :]
    summ = k[:, None] + k[None, :]
    dm = d.coeffs[diff + d.K]
    dp = d.coeffs[summ + d.K]
    return dm, dp


def assemble(shape: ConformalShape, modulus: FourierSeries | None = None) -> GeneralizedSystem:
    """Matrices of the truncated pencil for ``N = 2K`` grid points."""
    K = shape.K
    d = conformal.boundary_modulus(shape) if modulus is None else modulus
    dm, dp = _d_lookup(d, K)
    n = 2 * K + 1
    A = np.empty((n, n))
    A[:K + 1, :K + 1] = dm.real + dp.real
    A[:K + 1, K + 1:] = (-dm.imag + dp.imag)[:, 1:]
    A[K + 1:, :K + 1] = (dm.imag + dp.imag)[1:, :]
    A[K + 1:, K + 1:] = (dm.real - dp.real)[1:, 1:]
    k = np.arange(K + 1, dtype=float)
    B = np.diag(np.concatenate([k, k[1:]]))
    return GeneralizedSystem(A=A, B=B, K=K)


def _solve_pencil(A: np.ndarray, B: np.ndarray):
    A = 0.5 * (A + A.T)
    try:
        w, v = scipy.linalg.eigh(B, A)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError("boundary mass matrix is not positive definite") from exc
    return w, v


def _finish(w: np.ndarray, v: np.ndarray, K: int, d: FourierSeries | None) -> SteklovSpectrum:
    if w[0] < -ZERO_MODE_TOL or abs(w[0]) > ZERO_MODE_TOL:
        raise EigenSolveError(f"zero mode lost: lambda_0 = {w[0]:.3e}")
    w = w.copy()
    w[0] = 0.0 if abs(w[0]) < ZERO_MODE_TOL else w[0]
    order = _deterministic_order(w, v)
    return SteklovSpectrum(eigenvalues=w[order], eigenvectors=v[:, order], K=K,
                           trusted_count=max(K // 2, 1), modulus=d)


def _deterministic_order(w: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Ascending by value; near-ties ordered by the dominant coefficient row."""
    dom = np.argmax(np.abs(v), axis=0)
    order = list(range(w.size))
    # eigh already sorts, so ties are contiguous
    i = 0
    while i < w.size:
        j = i + 1
        while j < w.size and w[j] - w[i] <= tol * max(1.0, abs(w[i])):
            j += 1
        if j - i > 1:
            order[i:j] = sorted(order[i:j], key=lambda t: (dom[t], t))
        i = j
    return np.array(order)


def solve_spectrum(sys: GeneralizedSystem, shape: ConformalShape | None = None,
                   modulus: FourierSeries | None = None) -> SteklovSpectrum:
    """Full ``(2K+1)``-sized solve of ``lambda A C = B C``."""
    w, v = _solve_pencil(sys.A, sys.B)
    return _finish(w, v, sys.K, modulus)


def spectrum(shape: ConformalShape, symmetric: bool | None = None) -> SteklovSpectrum:
    """Assemble and solve, using the reduced solver when all ``a_k`` are real."""
    d = conformal.boundary_modulus(shape)
    if symmetric is None:
        symmetric = shape.is_real
    if symmetric:
        return solve_spectrum_symmetric(shape, modulus=d)
    return solve_spectrum(assemble(shape, modulus=d), shape, modulus=d)


def solve_spectrum_symmetric(shape: ConformalShape,
                             modulus: FourierSeries | None = None) -> SteklovSpectrum:
    """Two decoupled real solves for a domain symmetric about the real axis.

    With real ``d_l`` the cosine-type (``Re c``) and sine-type (``Im c``)
    unknowns decouple into systems of size ``K+1`` and ``K``.
    """
    if not shape.is_real:
        raise ValueError("reduced solver requires real mapping coefficients")
    K = shape.K
    d = conformal.boundary_modulus(shape) if modulus is None else modulus
    dm, dp = _d_lookup(d, K)
    dm, dp = dm.real, dp.real
    k = np.arange(K + 1, dtype=float)
    wr, vr = _solve_pencil(dm + dp, np.diag(k))
    wi, vi = _solve_pencil((dm - dp)[1:, 1:], np.diag(k[1:]))
    n = 2 * K + 1
    w = np.concatenate([wr, wi])
    v = np.zeros((n, n))
    v[:K + 1, :K + 1] = vr
    v[K + 1:, K + 1:] = vi
    order = np.argsort(w, kind="stable")
    return _finish(w[order], v[:, order], K, d)


def normalized_eigenfunction(spec: SteklovSpectrum, index: int, shape: ConformalShape,
                             M: int | None = None) -> np.ndarray:
    """Potential coefficients scaled so that ``int (Re Psi)^2 |f_w| dtheta = 1``."""
    if index < 0 or index > spec.trusted_count:
        raise ValueError(f"eigen index {index} outside trusted range 0..{spec.trusted_count}")
    c = spec.potential(index)
    M = default_grid_size(2 * shape.K) if M is None else M
    b0 = boundary_mass(c, shape, M)
    return c / np.sqrt(2 * np.pi * b0)


def boundary_mass(c: np.ndarray, shape: ConformalShape, M: int) -> float:
    """Zeroth Fourier coefficient of ``(Re Psi)^2 |f_w|`` on an ``M``-point grid."""
    u = to_grid(FourierSeries.from_analytic(c), M).values.real
    mod = np.abs(to_grid(FourierSeries.from_analytic(shape.w_fw()), M).values)
    return float(np.mean(u * u * mod))


def normalized_eigenvalue(spec: SteklovSpectrum, shape: ConformalShape, norm: str = "area",
                          index: int | None = None):
    """``lambda sqrt|Omega|`` (area), ``lambda |dOmega|`` (perimeter) or raw values."""
    lam = spec.eigenvalues if index is None else spec.eigenvalues[index]
    if norm == "area":
        return lam * np.sqrt(conformal.area(shape))
    if norm == "perimeter":
        return lam * conformal.perimeter(shape)
    if norm in ("none", None):
        return lam
    raise ValueError(f"unknown normalisation {norm!r}")


def steklov_eigenvalues(shape: ConformalShape, count: int | None = None,
                        norm: str = "area") -> np.ndarray:
    """Convenience wrapper: the first ``count`` (normalised) eigenvalues."""
    spec = spectrum(shape)
    vals = normalized_eigenvalue(spec, shape, norm)
    return vals if count is None else vals[:count]
