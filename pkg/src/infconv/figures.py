"""Matplotlib rendering for the report paths.

All figures are written to files (Agg backend); nothing is shown
interactively.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .grid import GridFunction  # noqa: E402

plt.rcParams.update(
    {
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 110,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 9,
    }
)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_example16_figure(report: dict, path) -> None:
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    for entry in report["sequence"]:
        m = entry["m"]
        from .repro import interval_weights, ramp_node_vector

        w = interval_weights(m)
        u = ramp_node_vector(m)
        u = u / float(w @ u)
        t = np.linspace(0.0, 1.0, m + 1)
        ax0.plot(t, u, label=f"m={m}")
    ax0.set_xlabel("t")
    ax0.set_ylabel("u(t)")
    ax0.set_title("normalized ramp sequence")
    ax0.legend(fontsize=7)
    ms = [e["m"] for e in report["minima"]]
    vals = [e["minimum"] for e in report["minima"]]
    ax1.plot(ms, vals, "o-")
    ax1.axhline(1.0, color="k", ls="--", lw=0.8)
    ax1.set_xscale("log")
    ax1.set_xlabel("m")
    ax1.set_ylabel("constrained minimum m/(m-1)")
    ax1.set_title("minimum decreasing toward 1")
    _save(fig, path)


def save_weierstrass_figure(f: GridFunction, report: dict, path) -> None:
    grid = f.grid
    fig, ax = plt.subplots()
    if grid.dim == 2:
        img = f.values.reshape(grid.counts)
        extent = [
            grid.origin[1],
            grid.origin[1] + (grid.counts[1] - 1) * grid.spacing[1],
            grid.origin[0],
            grid.origin[0] + (grid.counts[0] - 1) * grid.spacing[0],
        ]
        im = ax.imshow(img, origin="lower", extent=extent, aspect="auto")
        fig.colorbar(im, ax=ax, label="series value")
        seq = np.asarray(report["sequence"])
        ax.plot(seq[:, 1], seq[:, 0], "w.-", ms=4, lw=0.8, label="sequence")
        pt = report["argmin_point"]
        ax.plot([pt[1]], [pt[0]], "r*", ms=10, label="argmin")
        ax.legend(fontsize=7)
    else:
        ax.plot(grid.coordinates()[:, 0], f.values, ".-")
        ax.set_xlabel("x")
        ax.set_ylabel("series value")
    ax.set_title("tail-distance series")
    _save(fig, path)


def save_norm_attainment_figure(report: dict, path) -> None:
    fig, ax = plt.subplots()
    ns = [e["n"] for e in report["per_n"]]
    mins = [e["min"] for e in report["per_n"]]
    ax.plot(ns, mins, "o-", label="min of envelope_n")
    ax.axhline(report["min_f"], color="k", ls="--", lw=0.8, label="min f")
    ax.set_xlabel("envelope index n")
    ax.set_ylabel("minimum value")
    ax.set_title("minimum invariant across the envelope sequence")
    ax.legend(fontsize=7)
    _save(fig, path)


def save_remark26_figure(f: GridFunction, path) -> None:
    x = f.grid.coordinates()[:, 0]
    fig, ax = plt.subplots()
    finite = np.isfinite(f.values)
    ax.plot(x[finite], f.values[finite], ".-", label="ln x (finite part)")
    ax.plot(x[np.isneginf(f.values)], np.zeros(np.isneginf(f.values).sum()),
            "rv", label="-inf node")
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    ax.set_title("collapsing counterexample input")
    ax.legend(fontsize=7)
    _save(fig, path)


def save_bench_figure(rows, path) -> None:
    fig, ax = plt.subplots()
    sizes = [r["size"] for r in rows]
    fast = [r["fast_median_s"] for r in rows]
    ax.loglog(sizes, fast, "o-", label="fast path")
    oracle = [(r["size"], r["oracle_s"]) for r in rows if r["oracle_s"] is not None]
    if oracle:
        ax.loglog([s for s, _ in oracle], [t for _, t in oracle], "s--",
                  label="brute force")
    ax.set_xlabel("points")
    ax.set_ylabel("seconds (median)")
    ax.set_title("transform runtime")
    ax.legend(fontsize=7)
    _save(fig, path)
