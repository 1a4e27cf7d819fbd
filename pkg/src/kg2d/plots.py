"""Figure rendering for the CLI report path.

Rendering is opt-in (--plot) and file-only; the Agg backend is forced so
runs never need a display.
"""

from __future__ import annotations

import numpy as np

from .model import BoundState, SampledFunction
from .approximation import ApproxErrorReport


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def spectrum_figure(levels: list[BoundState], path: str) -> None:
    """Level energies against the radial index, one marker series per m."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for m in sorted({s.qn.m for s in levels}):
        sel = [s for s in levels if s.qn.m == m]
        ax.plot([s.qn.n for s in sel], [s.energy for s in sel], "o-", label=f"m={m}")
    ax.set_xlabel("radial index n")
    ax.set_ylabel(r"E  [fm$^{-1}$]")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def density_figure(u: SampledFunction, rho: SampledFunction, label: str, path: str) -> None:
    """Normalized amplitude and charge density on a shared radial axis."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(u.r_values, u.values, label="u(r)")
    ax.plot(rho.r_values, rho.values, label=r"$\varrho$(r)")
    ax.set_xlabel("r  [fm]")
    ax.set_title(label)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def approx_figure(report: ApproxErrorReport, path: str) -> None:
    """Exact term vs closure on top, pointwise relative error below."""
    plt = _pyplot()
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    r = report.u_samples.r_values
    ax0.plot(r, report.u_samples.values, label="U")
    ax0.plot(r, report.ua_samples.values, "--", label="Ua")
    ax0.set_ylabel(r"U  [fm$^{-2}$]")
    ax0.legend()
    ax0.grid(alpha=0.3)
    ax1.semilogy(r, np.maximum(report.rel_err_samples.values, 1e-18))
    ax1.set_xlabel("r  [fm]")
    ax1.set_ylabel("relative error")
    ax1.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
