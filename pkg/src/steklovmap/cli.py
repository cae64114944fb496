"""Command-line interface: ``steklovmap {solve,convergence,annulus,optimize,eigenfunction}``.

Exit codes: 0 success, 2 input error, 3 numerical failure, 4 optimizer halt.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import conformal, formats, presets, reference, shape_opt, steklov
from .conformal import ConformalShape, DegenerateShapeError
from .formats import FormatError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_HALT = 4

log = logging.getLogger("steklovmap")


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- helpers

def _shape_source(args, N_default: int):
    """``(label, factory)`` where ``factory(N)`` returns the shape at resolution ``N``."""
    if args.preset and args.shape:
        raise InputError("give either a shape file or --preset, not both")
    if args.preset:
        presets.parse_name(args.preset)
        return args.preset, (lambda N: presets.get_preset(args.preset, N).shape), N_default
    if args.shape:
        try:
            base = formats.read_shape(args.shape)
        except OSError as exc:
            raise InputError(f"cannot read {args.shape}: {exc}") from exc

        def factory(N):
            if N < 2 or N % 2:
                raise InputError(f"N must be an even integer >= 2, got {N}")
            dropped = base.a[N // 2 + 1:]
            if dropped.size and np.any(dropped != 0):
                log.warning("truncating %s to K=%d drops nonzero coefficients", args.shape, N // 2)
            return base.with_truncation(N // 2)
        return str(args.shape), factory, 2 * base.K
    raise InputError("a shape file or --preset is required")


def _resolve_N(args, N_default: int) -> int:
    N = N_default if args.N is None else args.N
    if N < 2 or N % 2:
        raise InputError(f"N must be an even integer >= 2, got {N}")
    return N


def _emit(args, columns, rows, dat: bool = False) -> str:
    text = formats.table_json(columns, rows) if args.format == "json" else formats.table_csv(columns, rows)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        if dat:
            out.with_suffix(".dat").write_text(formats.table_dat(columns, rows))
    else:
        sys.stdout.write(text)
    return text


def _plot_path(args, suffix: str = ".png") -> Path | None:
    if not args.plot:
        return None
    if not args.out:
        raise InputError("--plot needs --out to know where to put the figure")
    return Path(args.out).with_suffix(suffix)


def _parse_range(text: str):
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise InputError(f"--eps-range expects a:b:step, got {text!r}") from exc
    if not (0.0 < a <= b < 1.0) or not step > 0:
        raise InputError(f"--eps-range must satisfy 0 < a <= b < 1 and step > 0, got {text!r}")
    n = int(np.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(n)


def _parse_exponents(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            out = list(range(lo, hi + 1))
        else:
            out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"--n-list expects 'lo..hi' or a comma list, got {text!r}") from exc
    if not out or min(out) < 1:
        raise InputError("--n-list exponents must be positive")
    return out


# ---------------------------------------------------------------- commands

def spectrum_rows(shape: ConformalShape, count: int, norm: str):
    if count < 0:
        raise InputError("--count must be nonnegative")
    spec = steklov.spectrum(shape)
    if count > spec.eigenvalues.size:
        raise InputError(f"--count {count} exceeds the {spec.eigenvalues.size} eigenvalues at N={2 * shape.K}")
    normed = steklov.normalized_eigenvalue(spec, shape, norm)
    return [(j, spec.eigenvalues[j], normed[j]) for j in range(count)]


def cmd_solve(args) -> int:
    label, factory, N0 = _shape_source(args, 16)
    N = _resolve_N(args, N0)
    shape = factory(N)
    rows = spectrum_rows(shape, args.count, args.norm)
    _emit(args, ["index", "lambda", "normalized"], rows)
    png = _plot_path(args)
    if png is not None and rows:
        from . import plotting
        plotting.spectrum([r[0] for r in rows], [r[2] for r in rows], png)
    return EXIT_OK


def convergence_table(factory, exponents, ref_exp: int, count: int = 12, norm: str = "area"):
    """Rows ``(N, err_0, ..., err_{count-1})`` against the ``2**ref_exp`` solution."""
    if ref_exp < max(exponents):
        raise InputError("reference exponent must be at least the largest exponent in --n-list")

    def values(N):
        shape = factory(N)
        vals = steklov.normalized_eigenvalue(steklov.spectrum(shape), shape, norm)
        if vals.size < count:
            raise InputError(f"N={N} resolves only {vals.size} eigenvalues, fewer than --count {count}")
        return vals[:count]

    ref = values(2 ** ref_exp)
    return [(2 ** n, *np.abs(values(2 ** n) - ref)) for n in exponents]


def cmd_convergence(args) -> int:
    label, factory, _ = _shape_source(args, 0)
    exps = _parse_exponents(args.n_list)
    rows = convergence_table(factory, exps, args.reference, args.count, args.norm)
    columns = ["N"] + [f"err_{k}" for k in range(args.count)]
    _emit(args, columns, rows, dat=True)
    png = _plot_path(args)
    if png is not None:
        from . import plotting
        plotting.convergence([r[0] for r in rows], np.array([r[1:] for r in rows]), png)
    return EXIT_OK


def cmd_annulus(args) -> int:
    if args.norm not in ("perimeter", "area"):
        raise InputError("annulus scans support --norm perimeter or area")
    eps = _parse_range(args.eps_range)
    if args.modes:
        rows = [(e, k, lam) for e in eps
                for lam, k in reference.annulus_eigenvalues_labelled(e, args.modes)]
        _emit(args, ["eps", "k", "lambda"], rows)
        return EXIT_OK
    table = reference.annulus_normalized_scan(eps, args.norm)
    _emit(args, ["eps", "lambda1", "normalized"], [tuple(r) for r in table])
    png = _plot_path(args)
    if png is not None:
        from . import plotting
        plotting.annulus_scan(table[:, 0], table[:, 2], png, ylabel=f"{args.norm}-normalized $\\lambda_1$")
    return EXIT_OK


def _config_from_args(args, base: dict | None = None) -> shape_opt.OptimizerConfig:
    data = dict(base or {})
    if args.config:
        data.update(formats.read_config(args.config))
    flags = {
        "h0": args.h0, "period_T": args.period_T, "periods": args.periods,
        "smoothing_span": args.smoothing_span, "max_steps": args.max_steps,
        "snapshot_every": args.snapshot_every,
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.no_smoothing:
        data["smooth_curvature"] = False
    if args.no_filter:
        data["apply_filter"] = False
    if args.renormalize_area:
        data["renormalize_area"] = True
    return shape_opt.OptimizerConfig.from_dict(data)


def _snapshot_rows(snapshots, M: int = 256):
    rows = []
    for i, (step, t, shape) in enumerate(snapshots):
        z = conformal.boundary_curve(shape, M)
        rows += [(i, step, t, j, z[j].real, z[j].imag) for j in range(M)]
    return rows


def run_optimization(seed: ConformalShape, k: int, config: shape_opt.OptimizerConfig):
    """``(state, status, message, seconds)``; a halt is reported, not raised."""
    t0 = time.perf_counter()
    try:
        state = shape_opt.optimize(seed, k, config)
        status, message = "ok", ""
    except shape_opt.OptimizerHalt as exc:
        state, status, message = exc.state, "halted", str(exc)
    return state, status, message, time.perf_counter() - t0


def cmd_optimize(args) -> int:
    base_cfg = None
    if args.manifest:
        doc = formats.read_manifest(args.manifest)
        seed = formats.shape_from_dict(doc["seed_shape"])
        k, N, base_cfg, label = doc["target_index"], doc["N"], doc["config"], doc.get("source", "")
    else:
        label, factory, N0 = _shape_source(args, 256)
        N = _resolve_N(args, N0)
        seed = factory(N)
        k = args.k
    if k is None or k < 1:
        raise InputError("--k must be a positive integer")
    config = _config_from_args(args, base_cfg)
    conformal.check_nondegenerate(seed)

    state, status, message, seconds = run_optimization(seed, k, config)
    if state is None:
        raise shape_opt.OptimizerHalt(message)
    diagnostics = {"crowding": conformal.crowding_diagnostic(state.shape),
                   "min_derivative_modulus": conformal.min_derivative_modulus(state.shape),
                   "max_leakage": max((r.leakage for r in state.history), default=0.0)}
    doc = formats.manifest(state, seed, N=N, status=status, message=message,
                           wall_clock=seconds, diagnostics=diagnostics, source=label)

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "manifest.json").write_text(json.dumps(doc, indent=1) + "\n")
        formats.write_shape(state.shape, out / "final_shape.json")
        hist_cols = ["step", "t", "h", "objective", "gap"] + [f"lambdaA_{j}" for j in range(8)]
        hist_rows = [(r.step, r.t, r.h, r.objective, r.gap, *np.pad(r.spectrum[:8], (0, max(0, 8 - r.spectrum[:8].size))))
                     for r in state.history]
        (out / "history.csv").write_text(formats.table_csv(hist_cols, hist_rows))
        snaps = list(state.snapshots)
        if not snaps or snaps[-1][2] is not state.shape:
            snaps.append((state.steps, state.t, state.shape))
        (out / "snapshots.csv").write_text(
            formats.table_csv(["snapshot", "step", "t", "j", "x", "y"], _snapshot_rows(snaps)))
        if args.plot:
            from . import plotting
            pick = snaps if len(snaps) <= 8 else [snaps[i] for i in np.linspace(0, len(snaps) - 1, 8).astype(int)]
            plotting.shape_snapshots([conformal.boundary_curve(s, 512) for _, _, s in pick],
                                     out / "evolution.png", labels=[f"t={t:g}" for _, t, _ in pick])
            plotting.history([r.t for r in state.history], [r.objective for r in state.history],
                             out / "history.png", ylabel=rf"$\lambda_{{{k}}}^A$")
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=1) + "\n")
    else:
        last = state.history[-1] if state.history else None
        rows = [] if last is None else [(j, v) for j, v in enumerate(last.spectrum[:8])]
        sys.stdout.write(formats.table_csv(["index", "lambdaA"], rows))
    if status != "ok":
        print(f"optimizer halted: {message}", file=sys.stderr)
        return EXIT_HALT
    return EXIT_OK


def eigenfunction_trace(shape: ConformalShape, k: int, M: int):
    """``(theta, z, u)`` of the normalised ``k``-th eigenfunction on ``M`` boundary points."""
    spec = steklov.spectrum(shape)
    if not 0 <= k <= spec.trusted_count:
        raise InputError(f"--k must lie in 0..{spec.trusted_count} at N={2 * shape.K}")
    c = steklov.normalized_eigenfunction(spec, k, shape)
    theta = 2 * np.pi * np.arange(M) / M
    w = np.exp(1j * theta)
    u = np.polyval(c[::-1], w).real
    z = np.polyval(shape.a[::-1], w)
    return theta, z, u


def cmd_eigenfunction(args) -> int:
    label, factory, N0 = _shape_source(args, 64)
    N = _resolve_N(args, N0)
    if args.grid < 4:
        raise InputError("--grid must be at least 4")
    theta, z, u = eigenfunction_trace(factory(N), args.k, args.grid)
    rows = list(zip(theta, z.real, z.imag, u))
    _emit(args, ["theta", "x", "y", "u"], rows)
    png = _plot_path(args)
    if png is not None:
        from . import plotting
        plotting.eigenfunction(z, u, png)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steklovmap",
                                description="Steklov eigenvalues via conformal maps, and shape optimisation.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, shape=True):
        if shape:
            sp.add_argument("shape", nargs="?", help="shape file (JSON)")
            sp.add_argument("--preset", help="built-in shape: " + ", ".join(presets.PRESET_NAMES)
                            + " (cassini takes an optional parameter, e.g. cassini(0.4))")
            sp.add_argument("-N", type=int, help="grid points; the map keeps K = N/2 coefficients")
        sp.add_argument("--out", help="output file (directory for optimize)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--plot", action="store_true", help="also write a PNG figure next to --out")

    norms = ("area", "perimeter", "none")
    sp = sub.add_parser("solve", help="eigenvalues of one shape")
    common(sp)
    sp.add_argument("--norm", choices=norms, default="area")
    sp.add_argument("--count", type=int, default=12)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("convergence", help="errors against a fine-grid reference")
    common(sp)
    sp.add_argument("--n-list", default="4..10", help="exponents n of N = 2^n, 'lo..hi' or 'a,b,c'")
    sp.add_argument("--reference", type=int, default=12, help="exponent of the reference grid")
    sp.add_argument("--norm", choices=norms, default="area")
    sp.add_argument("--count", type=int, default=12)
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("annulus", help="closed-form annulus scan")
    common(sp, shape=False)
    sp.add_argument("--norm", choices=norms, default="perimeter")
    sp.add_argument("--eps-range", default="0.01:0.5:0.0001")
    sp.add_argument("--modes", type=int, default=0,
                    help="list every eigenvalue with angular mode up to this k instead of the scan")
    sp.set_defaults(func=cmd_annulus)

    sp = sub.add_parser("optimize", help="gradient ascent of the area-normalised eigenvalue")
    common(sp)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--config", help="JSON object of optimizer settings")
    sp.add_argument("--manifest", help="re-run the seed, target and config recorded in a manifest")
    sp.add_argument("--h0", type=float)
    sp.add_argument("--period-T", dest="period_T", type=float)
    sp.add_argument("--periods", type=int)
    sp.add_argument("--smoothing-span", type=int)
    sp.add_argument("--max-steps", type=int)
    sp.add_argument("--snapshot-every", type=int)
    sp.add_argument("--no-smoothing", action="store_true")
    sp.add_argument("--no-filter", action="store_true")
    sp.add_argument("--renormalize-area", action="store_true",
                    help="rescale to the initial area after every step")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("eigenfunction", help="boundary trace of a normalised eigenfunction")
    common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--grid", type=int, default=256)
    sp.set_defaults(func=cmd_eigenfunction)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateShapeError, steklov.EigenSolveError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except shape_opt.OptimizerHalt as exc:
        print(f"optimizer halted: {exc}", file=sys.stderr)
        return EXIT_HALT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
