"""Plot CSV outputs of the dgsam CLI with matplotlib.

usage: python scripts/plot.py <output_dir>
"""
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k: [float(r[k]) for r in rows] for k in rows[0]} if rows else {}


def main(out):
    out = Path(out)
    runs = sorted(out.glob("run_*.csv"))
    if runs:
        fig, ax = plt.subplots()
        for p in runs:
            d = read(p)
            ax.semilogy(d["iter"], d["grad_norm"], label=p.stem[4:])
        ax.set_xlabel("iteration")
        ax.set_ylabel("|grad L_s|")
        ax.legend(fontsize=6)
        fig.savefig(out / "runs.png", dpi=150)
    if (out / "landscape.csv").exists():
        d = read(out / "landscape.csv")
        n = int(round(len(d["u"]) ** 0.5))
        fig, ax = plt.subplots()
        z = [d["loss_total"][i * n:(i + 1) * n] for i in range(n)]
        cs = ax.contourf(sorted(set(d["v"])), sorted(set(d["u"])), z, levels=30)
        fig.colorbar(cs)
        ax.set_xlabel("v")
        ax.set_ylabel("u")
        fig.savefig(out / "landscape.png", dpi=150)
    if (out / "spectrum.csv").exists():
        d = read(out / "spectrum.csv")
        fig, ax = plt.subplots()
        ax.plot(d["eigenvalue"], d["density"])
        ax.set_xlabel("eigenvalue")
        ax.set_ylabel("density")
        fig.savefig(out / "spectrum.png", dpi=150)
    for name in ("trace_total", "trace_sequential"):
        if (out / f"{name}.csv").exists():
            d = read(out / f"{name}.csv")
            fig, ax = plt.subplots()
            for k in d:
                if k != "step":
                    ax.plot(d["step"], d[k], marker="o", label=k)
            ax.set_xlabel("perturbation step")
            ax.set_ylabel("loss increment")
            ax.legend()
            fig.savefig(out / f"{name}.png", dpi=150)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "out")
