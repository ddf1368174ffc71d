"""Named figure datasets and their rendered plots.

Each dataset family reproduces one published figure-level sweep:

* ``fig4``: CQZ-link capacity and optimal input distribution versus inner
  cycle count at two outer cycles.
* ``fig7``: duplex-coding capacity over the (N, K) grid plus the optimal-K
  trajectory.
* ``fig9``: telex transfer efficiency over the message-amplitude plane at
  fixed (N, M, K).
* ``fig10``: telex quantum capacity and optimal (M, K) versus N.

Builders return (header, rows) ready for delimited output; render functions
draw the matching matplotlib figure next to it.
"""
from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import channels, zeno
from .protocols import QubitState, TelexMessage

SCHEMA_VERSION = 1


def geometric_grid(lo: int, hi: int, per_octave: int = 2) -> list[int]:
    """Deterministic integer grid with roughly ``per_octave`` points per doubling."""
    vals = set()
    j = 0
    while True:
        v = int(round(2 ** (j / per_octave)))
        if v >= lo:
            vals.add(min(v, hi))
        if v >= hi:
            break
        j += 1
    return sorted(vals)


# ----------------------------------------------------------------------
# datasets

FIG4_HEADER = ["schema_version", "n", "m", "lambda0", "lambda1", "capacity", "p_star"]


def fig4_dataset(n_values: Sequence[int] | None = None, m: int = 2) -> list[list]:
    ns = list(n_values) if n_values is not None else geometric_grid(2, 512)
    rows = []
    for n in ns:
        ch = channels.cqz_channel(m, n)
        res = channels.bec_capacity(ch)
        rows.append([SCHEMA_VERSION, n, m, ch.lambda0, ch.lambda1, res.capacity, res.p_star])
    return rows


FIG7_HEADER = ["schema_version", "n", "k", "lambda2", "zeta_c", "capacity"]
FIG7_KSTAR_HEADER = ["schema_version", "n", "k_star", "zeta_c", "capacity"]


def fig7_dataset(
    n_values: Sequence[int] | None = None, k_values: Sequence[int] | None = None
) -> tuple[list[list], list[list]]:
    ns = list(n_values) if n_values is not None else [2 ** j for j in range(1, 11)]
    ks = list(k_values) if k_values is not None else list(range(1, 33))
    grid = []
    for n in ns:
        for k in ks:
            lam = zeno.lambda2(n, k)
            zeta = lam ** k
            grid.append([SCHEMA_VERSION, n, k, lam, zeta, 2 * zeta])
    traj = []
    for n in ns:
        k_star, res = channels.optimize_duplex_K(n)
        traj.append([SCHEMA_VERSION, n, k_star, res.parameters["zeta_c"], res.capacity])
    return grid, traj


FIG9_HEADER = [
    "schema_version",
    "n",
    "m",
    "k",
    "alpha_sq",
    "gamma_sq",
    "delta1",
    "lambda3",
    "lambda4_pow_k",
    "zeta_q",
]


def fig9_dataset(
    n: int = 100, m: int = 10, k: int = 10, grid_points: int = 21
) -> list[list]:
    rows = []
    for i in range(grid_points):
        a2 = i / (grid_points - 1)
        l3 = zeno.lambda3(a2, m, n)
        for j in range(grid_points):
            g2 = j / (grid_points - 1)
            d1 = a2 * g2 + (1 - a2) * (1 - g2)
            l4k = zeno.lambda4(d1, n, k) ** k
            rows.append([SCHEMA_VERSION, n, m, k, a2, g2, d1, l3, l4k, l3 * l4k])
    return rows


FIG10_HEADER = ["schema_version", "n", "m_star", "k_star", "zeta_q", "q"]


def fig10_dataset(
    n_values: Sequence[int] | None = None, alpha_sq: float = 0.5
) -> list[list]:
    ns = list(n_values) if n_values is not None else sorted(set(geometric_grid(2, 1024)) | {218})
    rows = []
    for n in ns:
        opt = channels.optimize_telex(n, alpha_sq)
        rows.append([SCHEMA_VERSION, n, opt.m_star, opt.k_star, opt.zeta_q, opt.q])
    return rows


# ----------------------------------------------------------------------
# rendering


def _style(ax, xlabel: str, ylabel: str) -> None:
    ax.grid(True, which="both", alpha=0.3)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)


def render_fig4(rows: list[list], path: str) -> None:
    n = [r[1] for r in rows]
    cap = [r[5] for r in rows]
    p_star = [r[6] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(n, cap, "o-", color="tab:blue", label="capacity [bits/photon]", markersize=3)
    ax.semilogx(n, p_star, "s--", color="tab:orange", label="optimal input p*", markersize=3)
    ax.set_ylim(0, 1.05)
    _style(ax, "inner cycles N", "capacity / p*")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fig7(grid: list[list], traj: list[list], path: str) -> None:
    ns = sorted({r[1] for r in grid})
    ks = sorted({r[2] for r in grid})
    cap = np.zeros((len(ks), len(ns)))
    for r in grid:
        cap[ks.index(r[2]), ns.index(r[1])] = r[5]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    mesh = ax.pcolormesh(ns, ks, cap, shading="nearest", vmin=0, vmax=2, cmap="viridis")
    ax.plot([r[1] for r in traj], [r[2] for r in traj], "w.-", label="optimal K")
    ax.set_xscale("log", base=2)
    _style(ax, "inner cycles N", "gate rounds K")
    fig.colorbar(mesh, ax=ax, label="capacity [bits/Bell pair]")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fig9(rows: list[list], path: str) -> None:
    a2 = sorted({r[4] for r in rows})
    g2 = sorted({r[5] for r in rows})
    zq = np.zeros((len(g2), len(a2)))
    for r in rows:
        zq[g2.index(r[5]), a2.index(r[4])] = r[9]
    fig, ax = plt.subplots(figsize=(5.4, 4.2))
    mesh = ax.pcolormesh(a2, g2, zq, shading="nearest", cmap="magma")
    _style(ax, "|alpha|^2", "|gamma|^2")
    fig.colorbar(mesh, ax=ax, label="transfer efficiency")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fig10(rows: list[list], path: str) -> None:
    n = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(n, [r[5] for r in rows], "o-", color="tab:blue", label="Q [qubits/pair]", markersize=3)
    ax.set_ylim(0, 2.05)
    _style(ax, "inner cycles N", "quantum capacity Q")
    ax2 = ax.twinx()
    ax2.semilogx(n, [r[2] for r in rows], "s--", color="tab:green", label="optimal M", markersize=3)
    ax2.semilogx(n, [r[3] for r in rows], "^--", color="tab:red", label="optimal K", markersize=3)
    ax2.set_ylabel("optimal cycle counts")
    lines, labels = ax.get_legend_handles_labels()
    l2, lab2 = ax2.get_legend_handles_labels()
    ax.legend(lines + l2, labels + lab2, loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
