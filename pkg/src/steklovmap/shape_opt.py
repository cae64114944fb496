"""Gradient ascent of ``lambda_k sqrt|Omega|`` over conformal maps.

The boundary moves with the normal speed that ascends the area-normalised
eigenvalue.  Written on the unit circle this reads
``Re{f_t / (w f_w)} = R(f, Psi)``; the analytic completion of ``R`` gives
``f_t = w f_w (R + i H[R])`` and hence an ODE for the mapping coefficients,
which is integrated with forward Euler.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import conformal, steklov
from .conformal import ConformalShape, DegenerateShapeError
from .spectral import (
    FourierSeries,
    fourier_filter,
    moving_average,
    product,
    to_grid,
)

log = logging.getLogger(__name__)


class OptimizerHalt(RuntimeError):
    """Raised when a run cannot continue; carries the last good state."""

    def __init__(self, message: str, state: "OptimizationState | None" = None):
        super().__init__(message)
        self.state = state


@dataclass
class OptimizerConfig:
    h0: float = 0.1
    period_T: float = 100.0
    periods: int = 5
    filter_order: int = 25
    filter_strength: float = 36.0
    smoothing_span: int = 5
    coeff_floor: float = 1e-14
    smooth_curvature: bool = True
    apply_filter: bool = True
    recenter: bool = True
    rerotate: bool = True
    max_retries: int = 10
    leakage_tol: float = 1e-10
    ascent_tol: float = 1e-6
    ascent_window: int = 50
    snapshot_every: int = 100
    max_steps: int | None = None
    renormalize_area: bool = False

    def __post_init__(self):
        for name in ("h0", "period_T", "filter_strength"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.periods < 1 or self.filter_order < 1:
            raise ValueError("periods and filter_order must be positive")
        if self.smoothing_span < 1 or self.smoothing_span % 2 == 0:
            raise ValueError("smoothing_span must be a positive odd integer")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizerConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass
class HistoryRecord:
    step: int
    t: float
    h: float
    objective: float
    spectrum: np.ndarray
    leakage: float
    gap: float = float("nan")


@dataclass
class OptimizationState:
    shape: ConformalShape
    target_index: int
    h: float
    t: float = 0.0
    steps: int = 0
    config: OptimizerConfig = field(default_factory=OptimizerConfig)
    history: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    decreasing_run: int = 0
    reference_area: float | None = None

    @property
    def objective(self) -> float:
        return self.history[-1].objective if self.history else float("nan")


@dataclass
class Velocity:
    """Everything one ascent evaluation produces."""

    r: np.ndarray
    R: np.ndarray
    completion: np.ndarray
    eigenvalue: float
    objective: float
    spectrum: np.ndarray
    leakage: float
    psi: np.ndarray


def working_grid(K: int) -> int:
    """Grid used for the nonlinear right-hand side: ``4N`` points for ``N = 2K``."""
    return 8 * K


def interpolate_periodic(values: np.ndarray, M: int) -> np.ndarray:
    """Trigonometric interpolation of real samples onto an ``M``-point grid."""
    n = values.size
    c = np.fft.rfft(values)
    if n % 2 == 0:
        c[-1] *= 0.5
    out = np.zeros(M // 2 + 1, dtype=complex)
    m = min(c.size, out.size)
    out[:m] = c[:m]
    return np.fft.irfft(out, n=M) * (M / n)


def smoothed_curvature(shape: ConformalShape, M: int, span: int) -> np.ndarray:
    """Curvature averaged over ``span`` points of the ``N = 2K`` boundary grid."""
    N = 2 * shape.K
    # exact values at the N boundary nodes, taken from the finer grid
    kappa = conformal.curvature(shape, M, check=False)[::M // N]
    kappa = moving_average(kappa, span)
    return interpolate_periodic(kappa, M)


def velocity_rhs(shape: ConformalShape, psi: np.ndarray, lam: float, M: int | None = None,
                 kappa: np.ndarray | None = None) -> np.ndarray:
    """``R(f, Psi)`` on the grid ``theta_j = 2 pi j / M``.

    ``psi`` holds the analytic coefficients of the normalised potential.
    """
    M = working_grid(shape.K) if M is None else M
    fw_mod = np.abs(to_grid(FourierSeries.from_analytic(shape.w_fw()), M).values)
    if kappa is None:
        kappa = conformal.curvature(shape, M, check=False)
    psi_series = FourierSeries.from_analytic(psi)
    u = to_grid(psi_series, M).values.real
    dpsi = np.abs(to_grid(FourierSeries.from_analytic(np.arange(psi.size) * psi), M).values)
    area = conformal.area(shape)
    u2 = u * u
    c = dpsi ** 2 / fw_mod ** 2 - 2 * lam ** 2 * u2 - lam * kappa * u2 + lam / (2 * area)
    return c / fw_mod


def analytic_completion(R: np.ndarray, K: int | None = None) -> FourierSeries:
    """Series of ``R + i H[R]``: mean, then doubled positive modes, no negative modes."""
    R = np.asarray(R, dtype=float)
    M = R.size
    if K is None:
        K = M // 2 - 1
    c = np.fft.rfft(R) / M
    q = np.zeros(K + 1, dtype=complex)
    n = min(K, M // 2 - 1)
    q[0] = c[0]
    q[1:n + 1] = 2 * c[1:n + 1]
    return FourierSeries.from_analytic(q)


def coefficient_velocity_from(shape: ConformalShape, completion: FourierSeries):
    """``r_k`` of ``w f_w (R + i H[R])`` for ``k = 0..K`` and the negative-mode leakage."""
    K = shape.K
    prod = product(FourierSeries.from_analytic(shape.w_fw()), completion.truncate(K))
    neg = prod.coeffs[:prod.K]
    leakage = float(np.max(np.abs(neg))) if neg.size else 0.0
    r = prod.nonnegative()[:K + 1]
    return r, leakage


def ascent_velocity(shape: ConformalShape, k: int, config: OptimizerConfig | None = None,
                    smooth: bool | None = None) -> Velocity:
    """Solve the spectrum and build the coefficient velocity for target index ``k``."""
    config = config or OptimizerConfig()
    smooth = config.smooth_curvature if smooth is None else smooth
    spec = steklov.spectrum(shape)
    if k > spec.trusted_count:
        raise ValueError(f"target index {k} beyond trusted modes ({spec.trusted_count})")
    M = working_grid(shape.K)
    psi = steklov.normalized_eigenfunction(spec, k, shape, M)
    lam = float(spec.eigenvalues[k])
    kappa = smoothed_curvature(shape, M, config.smoothing_span) if smooth else None
    R = velocity_rhs(shape, psi, lam, M, kappa)
    comp = analytic_completion(R, shape.K)
    r, leak = coefficient_velocity_from(shape, comp)
    scale = np.sqrt(conformal.area(shape))
    return Velocity(r=r, R=R, completion=comp.nonnegative(), eigenvalue=lam,
                    objective=lam * scale, spectrum=spec.eigenvalues * scale,
                    leakage=leak, psi=psi)


def coefficient_velocity(state: OptimizationState) -> np.ndarray:
    return ascent_velocity(state.shape, state.target_index, state.config).r


def ascent_rate(shape: ConformalShape, vel: Velocity) -> float:
    """First-order change of ``lambda_k sqrt|Omega|`` along the computed velocity.

    Equals ``sqrt|Omega| * int c^2 ds`` with normal speed ``c = |f_w| R``.
    """
    M = vel.R.size
    fw_mod = np.abs(to_grid(FourierSeries.from_analytic(shape.w_fw()), M).values)
    c = fw_mod * vel.R
    return float(np.sqrt(conformal.area(shape)) * np.mean(c * c * fw_mod) * 2 * np.pi)


def canonical_gauge(shape: ConformalShape, symmetry: int | None = None,
                    recenter: bool = True, rerotate: bool = True) -> ConformalShape:
    """Fix the translation and rotation freedom of an optimisation run.

    ``a_0`` is set to zero and ``a_1`` is made real positive by rotating the
    domain.  The largest coefficient ``a_j`` with ``j >= 2`` (or ``a_{1+symmetry}``
    when given) is then made real positive by the combined reparametrisation
    and rotation ``a_k -> a_k exp(i (k-1) phi)``, which leaves ``a_1`` alone.
    """
    a = np.array(shape.a)
    if recenter:
        a[0] = 0.0
    if not rerotate:
        return ConformalShape(a)
    if abs(a[1]) > 0:
        ph = a[1] / abs(a[1])
        if abs(ph - 1) > 1e-15:
            a = a * np.conj(ph)
            a[1] = abs(a[1])
    if shape.K >= 2:
        if symmetry is not None and 1 + symmetry <= shape.K:
            j = 1 + symmetry
        else:
            j = 2 + int(np.argmax(np.abs(a[2:])))
        aj = a[j]
        if abs(aj) > 1e-12 and (abs(aj.imag) > 1e-15 * abs(aj) or aj.real < 0):
            phi = -np.angle(aj) / (j - 1)
            k = np.arange(a.size)
            a = a * np.exp(1j * (k - 1) * phi)
            a[1] = a[1].real
            a[j] = abs(a[j])
    return ConformalShape(a)


def euler_update(shape: ConformalShape, r: np.ndarray, h: float, config: OptimizerConfig,
                 reference_area: float | None = None) -> ConformalShape:
    """``a + h r``, then filter and floor, then the gauge and optional rescaling."""
    a = shape.a + h * r
    if config.apply_filter:
        s = fourier_filter(FourierSeries.from_analytic(a), config.filter_order,
                           config.filter_strength, config.coeff_floor)
        a = s.nonnegative()
    else:
        a = np.where(np.abs(a) < config.coeff_floor, 0.0, a)
    out = ConformalShape(a)
    if config.recenter or config.rerotate:
        out = canonical_gauge(out, recenter=config.recenter, rerotate=config.rerotate)
    if config.renormalize_area and reference_area is not None:
        # lambda sqrt|Omega| is scale invariant, so this only fixes a gauge
        out = out.scaled(np.sqrt(reference_area / conformal.area(out)))
    return out


def init_state(shape: ConformalShape, k: int, config: OptimizerConfig | None = None) -> OptimizationState:
    config = config or OptimizerConfig()
    if k < 1:
        raise ValueError("target index must be at least 1")
    conformal.check_nondegenerate(shape)
    if config.recenter or config.rerotate:
        shape = canonical_gauge(shape, recenter=config.recenter, rerotate=config.rerotate)
    return OptimizationState(shape=shape, target_index=k, h=config.h0, config=config,
                             reference_area=conformal.area(shape))


def step(state: OptimizationState) -> OptimizationState:
    """One forward-Euler step of the coefficient flow (mutates and returns ``state``)."""
    cfg = state.config
    try:
        vel = ascent_velocity(state.shape, state.target_index, cfg)
    except (DegenerateShapeError, steklov.EigenSolveError) as exc:
        raise OptimizerHalt(f"spectrum failed at step {state.steps}: {exc}", state) from exc
    if vel.leakage > cfg.leakage_tol * max(1.0, float(np.max(np.abs(vel.r)))):
        raise OptimizerHalt(f"negative-mode leakage {vel.leakage:.3e}", state)
    _record(state, vel)

    h = state.h
    for _ in range(cfg.max_retries + 1):
        new = euler_update(state.shape, vel.r, h, cfg, state.reference_area)
        try:
            conformal.check_nondegenerate(new)
            conformal.area(new)
            break
        except DegenerateShapeError:
            h *= 0.5
    else:
        raise OptimizerHalt(f"step {state.steps} stays degenerate after {cfg.max_retries} retries", state)
    state.shape = new
    state.t += h
    state.steps += 1
    return state


def _history_record(state: OptimizationState, vel: Velocity) -> HistoryRecord:
    return HistoryRecord(step=state.steps, t=state.t, h=state.h, objective=vel.objective,
                         spectrum=vel.spectrum[:12].copy(), leakage=vel.leakage,
                         gap=multiplicity_gap(vel.spectrum, state.target_index))


def _record(state: OptimizationState, vel: Velocity):
    cfg = state.config
    if state.history:
        prev = state.history[-1].objective
        if vel.objective < prev - cfg.ascent_tol:
            state.decreasing_run += 1
        else:
            state.decreasing_run = 0
    if not np.isfinite(vel.objective) or vel.objective <= 0:
        raise OptimizerHalt(f"objective became {vel.objective}", state)
    state.history.append(_history_record(state, vel))
    if cfg.snapshot_every and state.steps % cfg.snapshot_every == 0:
        state.snapshots.append((state.steps, state.t, state.shape))
    if state.decreasing_run >= cfg.ascent_window:
        raise OptimizerHalt(
            f"objective decreased for {state.decreasing_run} consecutive steps", state)


def schedule_h(config: OptimizerConfig, period: int) -> float:
    """Step size used during period ``period`` (counted from zero)."""
    return config.h0 * 0.5 ** period


def optimize(initial: ConformalShape, k: int, config: OptimizerConfig | None = None,
             callback=None) -> OptimizationState:
    """Run the ascent until ``t = periods * T``, halving ``h`` every period."""
    state = init_state(initial, k, config)
    cfg = state.config
    t_end = cfg.periods * cfg.period_T
    t0 = time.perf_counter()
    # step counts per period keep t exact despite halving
    for p in range(cfg.periods):
        h = schedule_h(cfg, p)
        n = int(round(cfg.period_T / h))
        state.h = h
        for _ in range(n):
            if cfg.max_steps is not None and state.steps >= cfg.max_steps:
                return finalize(state)
            step(state)
            if callback is not None:
                callback(state)
        state.t = (p + 1) * cfg.period_T
        log.info("period %d done: t=%.1f objective=%.12f (%.1fs)", p + 1, state.t,
                 state.objective, time.perf_counter() - t0)
    assert abs(state.t - t_end) < 1e-9
    return finalize(state)


def finalize(state: OptimizationState) -> OptimizationState:
    """Append a closing history record for the final shape."""
    vel = ascent_velocity(state.shape, state.target_index, state.config)
    state.history.append(_history_record(state, vel))
    state.snapshots.append((state.steps, state.t, state.shape))
    return state


def symmetry_residual(shape: ConformalShape, p: int) -> float:
    """Largest ``|a_j|`` with ``j >= 1`` and ``j != 1 (mod p)``."""
    j = np.arange(shape.K + 1)
    mask = (j >= 1) & ((j - 1) % p != 0)
    return float(np.max(np.abs(shape.a[mask]))) if mask.any() else 0.0


def multiplicity_gap(spectrum_values: np.ndarray, k: int) -> float:
    """Relative distance from ``lambda_k`` to its nearest neighbour."""
    lam = spectrum_values[k]
    nb = [spectrum_values[j] for j in (k - 1, k + 1) if 0 < j < len(spectrum_values)]
    if not nb or lam == 0:
        return float("inf")
    return min(abs(lam - x) for x in nb) / lam
