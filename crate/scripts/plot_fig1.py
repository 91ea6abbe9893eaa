"""Plot the bound ratios written by `fewbound fig1`.

Usage: python scripts/plot_fig1.py results/fig1.csv [out.png]
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    src = sys.argv[1] if len(sys.argv) > 1 else "results/fig1.csv"
    dst = sys.argv[2] if len(sys.argv) > 2 else src.rsplit(".", 1)[0] + ".png"
    data = pd.read_csv(src, comment="#", dtype={"spin": str})
    panels = list(data.groupby(["n", "spin"], sort=False))
    fig, axes = plt.subplots(1, len(panels), figsize=(4 * len(panels), 3.5), squeeze=False)
    for ax, ((n, spin), d) in zip(axes[0], panels):
        d = d.sort_values("q")
        ax.plot(d["q"], d["our_ratio"], "k-", lw=2.5, label="this work")
        ax.plot(d["q"], d["bm_ratio"], "k:", label="Basdevant-Martin")
        ax.plot(d["q"], d["ll_ratio"], "k-", lw=0.8, label="Levy-Leblond")
        ax.set_title(f"N = {n}, S = {spin}")
        ax.set_xlabel("q")
    axes[0][0].set_ylabel("exact / bound")
    axes[0][0].legend(frameon=False)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)
    print(f"wrote {dst}")


if __name__ == "__main__":
    main()
