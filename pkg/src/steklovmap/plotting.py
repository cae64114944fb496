"""PNG figures written next to the CLI's tabular output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.8),
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.bbox": "tight",
}


def _save(fig, path):
    fig.savefig(path)
    plt.close(fig)
    return path


def spectrum(index, values, path, ylabel=r"$\lambda_k$"):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(index, values, "o", ms=4)
        ax.set_xlabel("k")
        ax.set_ylabel(ylabel)
        return _save(fig, path)


def convergence(N, errors, path):
    """Log-log errors per eigenvalue index; ``errors`` has one column per k."""
    N = np.asarray(N, dtype=float)
    errors = np.asarray(errors, dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for k in range(1, errors.shape[1]):
            e = errors[:, k]
            keep = e > 0
            if keep.any():
                ax.loglog(N[keep], e[keep], "o-", ms=3, lw=0.8, label=rf"$\lambda_{{{k}}}$")
        ax.set_xlabel("N")
        ax.set_ylabel("error")
        ax.legend(fontsize=6, ncol=2)
        return _save(fig, path)


def annulus_scan(eps, normalized, path, ylabel="normalized $\\lambda_1$"):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(eps, normalized, lw=1.0)
        i = int(np.argmax(normalized))
        ax.plot(eps[i], normalized[i], "r.", ms=6)
        ax.set_xlabel(r"$\varepsilon$")
        ax.set_ylabel(ylabel)
        return _save(fig, path)


def shape_snapshots(curves, path, labels=None):
    """Boundary curves (complex sample arrays), drawn from light to dark."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        n = len(curves)
        for i, z in enumerate(curves):
            z = np.append(z, z[:1])
            shade = 0.25 + 0.75 * (i + 1) / max(n, 1)
            ax.plot(z.real, z.imag, color=plt.cm.Blues(shade), lw=0.9,
                    label=None if labels is None else labels[i])
        ax.set_aspect("equal")
        if labels is not None and n <= 8:
            ax.legend(fontsize=6)
        return _save(fig, path)


def history(t, objective, path, ylabel=r"$\lambda_k^A$"):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(t, objective, lw=1.0)
        ax.set_xlabel("t")
        ax.set_ylabel(ylabel)
        return _save(fig, path)


def eigenfunction(z, u, path):
    """Boundary curve coloured by the eigenfunction values."""
    z = np.append(z, z[:1])
    u = np.append(u, u[:1])
    pts = np.column_stack([z.real, z.imag]).reshape(-1, 1, 2)
    segs = np.concatenate([pts[:-1], pts[1:]], axis=1)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        lc = LineCollection(segs, cmap="coolwarm", linewidths=2.5)
        lc.set_array(0.5 * (u[:-1] + u[1:]))
        ax.add_collection(lc)
        ax.autoscale()
        ax.set_aspect("equal")
        fig.colorbar(lc, ax=ax, label="u")
        return _save(fig, path)
