"""Test shapes as mapping coefficients, truncated to ``K = N/2``."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .conformal import ConformalShape

CASSINI_ALPHA = 0.4

_FINITE = {
    "disk": {1: 1.0},
    "two-fold": {1: 1.0, 3: 0.05},
    "two-fold-fat": {1: 1.0, 3: 0.5},
    "five-fold": {0: 8.0, 1: 5.0, 6: 0.5},
}

PRESET_NAMES = tuple(_FINITE) + ("cassini",)


@dataclass(frozen=True)
class Preset:
    name: str
    shape: ConformalShape
    # largest dropped coefficient when an infinite series is truncated
    tail: float = 0.0


def cassini_map(w, alpha: float = CASSINI_ALPHA):
    """``alpha w sqrt(2 / (1 + alpha^2 - (1 - alpha^2) w^2))``."""
    w = np.asarray(w, dtype=complex)
    return alpha * w * np.sqrt(2.0 / (1.0 + alpha ** 2 - (1.0 - alpha ** 2) * w ** 2))


def cassini(K: int, alpha: float = CASSINI_ALPHA, M: int | None = None) -> Preset:
    """Coefficients of the Cassini-oval map from samples on a dense circle grid."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"cassini parameter must lie in (0, 1], got {alpha}")
    M = max(4096, 8 * (K + 1)) if M is None else M
    w = np.exp(2j * np.pi * np.arange(M) / M)
    c = np.fft.fft(cassini_map(w, alpha)) / M
    a = c[:K + 1].copy()
    a[np.abs(a) < 1e-17] = 0.0
    # the map is real on the real axis
    a = a.real.astype(complex)
    tail = float(np.max(np.abs(c[K + 1:M // 2]))) if K + 1 < M // 2 else 0.0
    return Preset(f"cassini({alpha:g})", ConformalShape(a), tail)


def parse_name(name: str) -> tuple[str, float | None]:
    m = re.fullmatch(r"\s*([a-z\-]+)\s*(?:[(:]\s*([0-9.eE+\-]+)\s*\)?)?\s*", name)
    if m is None:
        raise ValueError(f"cannot parse preset {name!r}")
    base, arg = m.group(1), m.group(2)
    if base not in PRESET_NAMES:
        raise ValueError(f"unknown preset {base!r}; choose from {', '.join(PRESET_NAMES)}")
    if arg is not None and base != "cassini":
        raise ValueError(f"preset {base!r} takes no parameter")
    return base, None if arg is None else float(arg)


def get_preset(name: str, N: int) -> Preset:
    """Preset shape at resolution ``N`` (``K = N/2``)."""
    if N < 2 or N % 2:
        raise ValueError(f"N must be an even integer >= 2, got {N}")
    K = N // 2
    base, arg = parse_name(name)
    if base == "cassini":
        return cassini(K, CASSINI_ALPHA if arg is None else arg)
    terms = _FINITE[base]
    if max(terms) > K:
        raise ValueError(f"preset {base!r} has degree {max(terms)}, needs N >= {2 * max(terms)}")
    return Preset(base, ConformalShape.from_terms(terms, K))
