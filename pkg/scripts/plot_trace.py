#!/usr/bin/env python3
"""Render the standard four figures from a trace CSV.

Usage:
    python scripts/plot_trace.py trace.csv --scenario paperV --out figs/

Produces state-tracking, control-input, and per-channel error plots with the
envelope overlaid.  Plotting is deliberately out of process: the simulator
only emits CSV, this script only consumes it.
"""

import argparse
from pathlib import Path

import numpy as np

from ppcsim import Envelope, resolve_scenario, rho_value


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("trace", help="trace CSV written by 'ppcsim simulate'")
    ap.add_argument("--scenario", required=True, help="scenario path or bundled name")
    ap.add_argument("--out", default="figs", help="output directory for PNGs")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    sc = resolve_scenario(args.scenario)
    env = Envelope(sc.T1, sc.c)
    n = sc.order

    with open(args.trace) as fh:
        names = fh.readline().strip().split(",")
    data = np.loadtxt(args.trace, delimiter=",", skiprows=1)
    col = {name: i for i, name in enumerate(names)}
    t = data[:, col["t"]]
    rho = np.array([min(rho_value(env, float(tt)), 10.0 * sc.c) for tt in t])  # clip for plotting

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(t, data[:, col["x_r"]], "k--", lw=1, label="reference")
    ax.plot(t, data[:, col["x_1"]], lw=1, label="$x_1$")
    ax.set_xlabel("t [s]")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(outdir / "state_x1.png", dpi=150)

    if n >= 2:
        fig, ax = plt.subplots(figsize=(8, 4))
        ax.plot(t, data[:, col["x_2"]], lw=1, label="$x_2$")
        ax.set_xlabel("t [s]")
        ax.legend()
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(outdir / "state_x2.png", dpi=150)

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(t, data[:, col["u"]], lw=0.8, label="u")
    ax.set_xlabel("t [s]")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(outdir / "control.png", dpi=150)

    for i in range(1, n + 1):
        fig, ax = plt.subplots(figsize=(8, 4))
        ax.plot(t, data[:, col[f"e_{i}"]], lw=1, label=f"$e_{i}$")
        ax.plot(t, rho, "r--", lw=0.8, label="envelope")
        ax.plot(t, -rho, "r--", lw=0.8)
        ax.set_xlabel("t [s]")
        ax.set_ylim(-4.0 * sc.c, 4.0 * sc.c)
        ax.legend()
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(outdir / f"error_e{i}.png", dpi=150)

    print(f"wrote figures to {outdir}/")


if __name__ == "__main__":
    main()
