"""Versioned JSON documents for shapes, optimizer configs and run manifests.

Floats go through ``json`` as ``repr`` strings, which round-trip doubles exactly.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .conformal import ConformalShape
from .shape_opt import OptimizationState, OptimizerConfig

SHAPE_FORMAT = "steklovmap-shape"
SHAPE_VERSION = 1
MANIFEST_FORMAT = "steklovmap-run"
MANIFEST_VERSION = 1


class FormatError(ValueError):
    """A document could not be parsed or failed validation."""


def shape_to_dict(shape: ConformalShape) -> dict:
    coeffs = [[int(k), float(c.real), float(c.imag)]
              for k, c in enumerate(shape.a) if c != 0]
    return {"format": SHAPE_FORMAT, "version": SHAPE_VERSION, "K": shape.K,
            "coefficients": coeffs}


def shape_from_dict(doc: dict) -> ConformalShape:
    if not isinstance(doc, dict) or doc.get("format") != SHAPE_FORMAT:
        raise FormatError("not a shape document")
    if doc.get("version") != SHAPE_VERSION:
        raise FormatError(f"unsupported shape version {doc.get('version')!r}")
    try:
        K = int(doc["K"])
        rows = [(int(k), float(re), float(im)) for k, re, im in doc["coefficients"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed shape document: {exc}") from exc
    if K < 1:
        raise FormatError("truncation K must be at least 1")
    ks = [k for k, _, _ in rows]
    if any(k < 0 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
        raise FormatError("coefficient indices must be nonnegative and strictly increasing")
    if ks and ks[-1] > K:
        raise FormatError(f"coefficient index {ks[-1]} exceeds K={K}")
    a = np.zeros(K + 1, dtype=complex)
    for k, re, im in rows:
        a[k] = complex(re, im)
    return ConformalShape(a)


def dumps_shape(shape: ConformalShape) -> str:
    return json.dumps(shape_to_dict(shape), indent=1) + "\n"


def loads_shape(text: str) -> ConformalShape:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return shape_from_dict(doc)


def read_shape(path) -> ConformalShape:
    return loads_shape(Path(path).read_text())


def write_shape(shape: ConformalShape, path):
    Path(path).write_text(dumps_shape(shape))


def read_config(path) -> dict:
    """Optimizer settings from a JSON object; unknown keys are rejected."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("config must be a JSON object")
    unknown = set(doc) - set(OptimizerConfig.__dataclass_fields__)
    if unknown:
        raise FormatError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return doc


def _floats(x) -> list:
    return [float(v) for v in np.asarray(x, dtype=float)]


def manifest(state: OptimizationState, seed: ConformalShape, *, N: int, status: str = "ok",
             message: str = "", wall_clock: float = 0.0, diagnostics: dict | None = None,
             source: str = "") -> dict:
    """Snapshot of a (possibly halted) run as a JSON-ready dict."""
    history = [{"step": r.step, "t": r.t, "h": r.h, "objective": r.objective,
                "spectrum": _floats(r.spectrum), "leakage": r.leakage, "gap": r.gap}
               for r in state.history]
    return {
        "format": MANIFEST_FORMAT,
        "version": MANIFEST_VERSION,
        "status": status,
        "message": message,
        "source": source,
        "N": N,
        "target_index": state.target_index,
        "config": state.config.to_dict(),
        "seed_shape": shape_to_dict(seed),
        "final_shape": shape_to_dict(state.shape),
        "steps": state.steps,
        "t": state.t,
        "history": history,
        "diagnostics": diagnostics or {},
        "wall_clock_seconds": wall_clock,
    }


def read_manifest(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != MANIFEST_FORMAT or doc.get("version") != MANIFEST_VERSION:
        raise FormatError("not a run manifest")
    return doc


def fmt(x) -> str:
    """Fixed 17-significant-digit rendering used in every CSV."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.17g}"


def table_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def table_json(columns, rows) -> str:
    data = [[int(v) if isinstance(v, (int, np.integer)) else float(v) for v in row] for row in rows]
    return json.dumps({"columns": list(columns), "rows": data}, indent=1) + "\n"


def table_dat(columns, rows) -> str:
    """Whitespace-separated columns with a ``#`` header, for gnuplot-style tools."""
    lines = ["# " + " ".join(columns)]
    lines += [" ".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"
