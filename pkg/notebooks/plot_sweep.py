"""
Plot a sweep CSV
================

Usage::

    dudecap sweep --spec configs/fig2.json --out fig2.csv
    python notebooks/plot_sweep.py fig2.csv fig2.png

Needs matplotlib, which the library itself does not depend on.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from dudecap.experiments import read_csv


def main(csv_path, png_path):
    with open(csv_path, encoding="utf-8") as fh:
        rows = read_csv(fh.read())
    lambdas = {r["lambda_sc"] for r in rows}
    axis = "d0_m" if len(lambdas) == 1 else "lambda_sc"
    fig, ax = plt.subplots(figsize=(6, 4))
    for policy in dict.fromkeys(r["policy"] for r in rows):
        sub = [r for r in rows if r["policy"] == policy]
        x = [r[axis] for r in sub]
        line, = ax.plot(x, [r["bound_nats"] for r in sub], label=f"{policy} bound")
        if sub[0]["mc_mean_nats"] is not None:
            ax.plot(x, [r["mc_mean_nats"] for r in sub], "o", ms=3, color=line.get_color(),
                    label=f"{policy} simulated")
    if axis == "lambda_sc":
        ax.set_xscale("log")
    ax.set_xlabel("d0 [m]" if axis == "d0_m" else "lambda [SC/m^2]")
    ax.set_ylabel("expected UL rate [nats/channel use]")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
