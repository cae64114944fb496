"""Closed-form Steklov spectra of the disk and of the annulus ``B(0,1) \\ B(0,eps)``."""

from __future__ import annotations

import math

import numpy as np


def disk_eigenvalues(count: int) -> np.ndarray:
    """``0, 1, 1, 2, 2, ...`` truncated to ``count`` entries."""
    if count < 1:
        raise ValueError("count must be positive")
    j = np.arange(count)
    return ((j + 1) // 2).astype(float)


def _check_eps(eps: float):
    if not 0.0 < eps < 1.0:
        raise ValueError(f"inner radius must lie in (0, 1), got {eps}")


def annulus_polynomial(eps: float, k: int):
    """Coefficients ``(1, b, c)`` of ``p_k(lam) = lam^2 + b lam + c``."""
    _check_eps(eps)
    e2k = eps ** (2 * k)
    b = -k * ((eps + 1.0) / eps) * ((1.0 + e2k) / (1.0 - e2k))
    c = k * k / eps
    return 1.0, b, c


def annulus_roots(eps: float, k: int) -> tuple[float, float]:
    """Both roots of ``p_k``, smaller first; computed without cancellation."""
    _, b, c = annulus_polynomial(eps, k)
    disc = b * b - 4.0 * c
    if disc < 0:
        raise ArithmeticError(f"complex roots for eps={eps}, k={k}")
    big = (-b + math.sqrt(disc)) / 2.0
    return c / big, big


def annulus_mode_matrix(eps: float, k: int, lam: float, scaled: bool = False) -> np.ndarray:
    """2x2 system for ``(A, B)`` in ``u = (A r^k + B r^-k) cos(k theta)``.

    With ``scaled`` the unknown ``B`` is replaced by ``B eps^-k``, which
    removes the ``eps^-k`` growth of the second column.
    """
    if scaled:
        ek = eps ** k
        return np.array([
            [ek * (lam + k / eps), lam - k / eps],
            [lam - k, ek * (lam + k)],
        ])
    return np.array([
        [lam * eps ** k + k * eps ** (k - 1), lam * eps ** -k - k * eps ** (-k - 1)],
        [lam - k, lam + k],
    ])


def mode_matrix_backward_error(eps: float, k: int, lam: float) -> float:
    """Relative change of ``lam`` that makes the scaled mode matrix singular.

    The matrix is affine in ``lam``, so one Newton step on its determinant
    gives the correction.
    """
    M = annulus_mode_matrix(eps, k, lam, scaled=True)
    D = annulus_mode_matrix(eps, k, lam + 1.0, scaled=True) - M
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    ddet = D[0, 0] * M[1, 1] + M[0, 0] * D[1, 1] - D[0, 1] * M[1, 0] - M[0, 1] * D[1, 0]
    if ddet == 0:
        return math.inf if det else 0.0
    return abs(det / ddet) / abs(lam)


def annulus_radial_eigenvalue(eps: float) -> float:
    """Eigenvalue of the radial mode ``u = A ln r + 1``.

    Imposing ``u_r = lam u`` at ``r = 1`` and ``u_r = -lam u`` at ``r = eps``
    gives ``A = lam`` and ``lam = (1 + eps) / (eps ln(1/eps))``.
    """
    _check_eps(eps)
    return (1.0 + eps) / (eps * math.log(1.0 / eps))


def annulus_radial_eigenvalue_printed(eps: float) -> float:
    """The alternative closed form ``((1 + eps) / eps) ln(1/eps)``.

    Kept for comparison only: it does not satisfy the Robin conditions of the
    radial mode, see :func:`annulus_radial_eigenvalue`.
    """
    _check_eps(eps)
    return (1.0 + eps) / eps * math.log(1.0 / eps)


def annulus_radial_mode(eps: float):
    """``(u, u_r)`` callables of the radial eigenfunction."""
    lam = annulus_radial_eigenvalue(eps)
    return (lambda r: lam * np.log(r) + 1.0), (lambda r: lam / np.asarray(r, dtype=float))


def annulus_eigenvalues(eps: float, k_max: int) -> np.ndarray:
    """Sorted spectrum from angular modes ``1..k_max`` plus the radial mode.

    Each root of ``p_k`` is a double eigenvalue (cosine and sine modes).
    """
    _check_eps(eps)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    vals = [0.0, annulus_radial_eigenvalue(eps)]
    for k in range(1, k_max + 1):
        lo, hi = annulus_roots(eps, k)
        vals += [lo, lo, hi, hi]
    return np.sort(np.array(vals))


def annulus_eigenvalues_labelled(eps: float, k_max: int) -> list[tuple[float, int]]:
    """``(lambda, k)`` pairs; ``k = 0`` marks the constant and radial modes."""
    out = [(0.0, 0), (annulus_radial_eigenvalue(eps), 0)]
    for k in range(1, k_max + 1):
        lo, hi = annulus_roots(eps, k)
        out += [(lo, k), (lo, k), (hi, k), (hi, k)]
    return sorted(out)


def annulus_lambda1(eps: float) -> float:
    """First nonzero eigenvalue (the smaller root of ``p_1`` unless the radial mode is lower)."""
    return min(annulus_roots(eps, 1)[0], annulus_radial_eigenvalue(eps))


def annulus_lambda1_small_eps(eps: float) -> float:
    """Closed form of the smaller ``k = 1`` root."""
    s = (1.0 - eps) / (1.0 + eps * eps)
    return (1.0 / (2.0 * eps)) * ((1.0 + eps * eps) / (1.0 - eps)) * (1.0 - math.sqrt(1.0 - 4.0 * eps * s * s))


def annulus_normalized_scan(eps_grid, norm: str = "perimeter") -> np.ndarray:
    """Rows ``(eps, lambda_1, normalised lambda_1)`` over ``eps_grid``."""
    rows = []
    for eps in np.asarray(eps_grid, dtype=float):
        lam = annulus_lambda1(eps)
        if norm == "perimeter":
            val = lam * 2.0 * math.pi * (1.0 + eps)
        elif norm == "area":
            val = lam * math.sqrt(math.pi * (1.0 - eps * eps))
        else:
            raise ValueError(f"unknown normalisation {norm!r}")
        rows.append((eps, lam, val))
    return np.array(rows).reshape(-1, 3)
