"""Static figures written next to the CLI's tabular output."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)


def plot_vemuri(curve, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(curve.t, curve.omega, lw=1.5, label=r"$\Omega(t)$")
    ax.axhline(curve.pi_R, color="k", ls="--", lw=1, label=r"$\pi R$")
    ax.axvline(1 / (4 * math.pi), color="0.5", ls=":", lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel("decay exponent")
    ax.set_title(f"a={curve.a:g}, eps={curve.eps:g}")
    ax.legend()
    _save(fig, path)


def plot_gain(traj, path):
    theta = np.array([s.floats() for s in traj])
    fig, ax = plt.subplots(figsize=(6, 4))
    for j in range(theta.shape[1]):
        ax.plot(range(len(traj)), theta[:, j], marker=".", ms=3, label=f"theta_{j}")
    ax.set_xlabel("stage")
    ax.set_ylabel("gain")
    ax.set_ylim(0.45, 1.0)
    if theta.shape[1] <= 8:
        ax.legend()
    _save(fig, path)


def plot_samples(snapshots, path, log: bool = False):
    """``snapshots`` is a list of ``(label, SampledFunction)``."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, f in snapshots:
        y = np.abs(f.values)
        if log:
            ax.semilogy(f.x, np.maximum(y, 1e-300), lw=1, label=label)
        else:
            ax.plot(f.x, y, lw=1, label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("|f|")
    ax.legend()
    _save(fig, path)


def plot_decay(f, fit, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    mod = np.abs(f.values)
    keep = mod > 0
    ax.semilogy(f.x[keep], mod[keep], lw=1, label="|f|")
    if fit is not None:
        lo, hi = fit.window
        xs = np.linspace(lo, hi, 200)
        ax.semilogy(xs, fit.c_hat * np.exp(-fit.b_hat * math.pi * xs * xs), "r--",
                    lw=1, label=f"fit b={fit.b_hat:.4f}")
    ax.set_xlabel("x")
    ax.legend()
    _save(fig, path)
