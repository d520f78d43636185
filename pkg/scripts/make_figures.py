"""Run every figure scenario and, when matplotlib is installed, plot the results.

    python3 scripts/make_figures.py --out results [--workers 4]
"""
import argparse
import os
import sys

import numpy as np

from hybridmem.cli import run_scenario

HERE = os.path.dirname(os.path.abspath(__file__))
CONFIGS = os.path.join(HERE, os.pardir, "configs")

RUNS = [
    ("fig2", "fig2.json"),
    ("fig3", "fig3.json"),
    ("fig4", "fig4.json"),
    ("fig4", "fig4_mismatch.json"),
    ("fig5", "fig5.json"),
    ("fig6", "fig6.json"),
    ("fig7", "fig7.json"),
    ("fig7", "fig7_dispersive.json"),
    ("fig8", "fig8.json"),
    ("fig8", "fig8_dispersive.json"),
]


def load(path):
    with open(path) as fh:
        fh.readline()
        names = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=2, ndmin=2)
    return {n: data[:, k] for k, n in enumerate(names)}


def plot_run(plt, out, tag):
    files = sorted(f for f in os.listdir(out) if f.endswith(".csv"))
    for name in files:
        cols = load(os.path.join(out, name))
        fig, ax = plt.subplots(figsize=(5, 3.5))
        keys = list(cols)
        if "t" in cols and "gamma" in cols:
            for gamma in np.unique(cols["gamma"]):
                sel = cols["gamma"] == gamma
                ax.plot(cols["t"][sel], cols["fidelity"][sel], label=f"Gamma = {gamma:g}")
            ax.legend()
        elif "t" in cols:
            for k in ("fidelity", "pop_C", "pop_M", "pop_NVE"):
                ax.plot(cols["t"], cols[k], label=k)
            ax.legend()
        elif keys[-1] == "fidelity" and len(keys) == 3:
            x, y = np.unique(cols[keys[0]]), np.unique(cols[keys[1]])
            z = cols["fidelity"].reshape(len(x), len(y))
            mesh = ax.pcolormesh(x, y, z.T, shading="nearest", vmin=0, vmax=1)
            fig.colorbar(mesh, ax=ax, label="fidelity")
            ax.set_ylabel(keys[1])
        else:
            for k in keys[1:]:
                ax.plot(cols[keys[0]], cols[k], marker="o", label=k)
            ax.legend()
        ax.set_xlabel(keys[0] if "t" not in cols else "t")
        ax.set_title(f"{tag}: {name[:-4]}")
        fig.tight_layout()
        fig.savefig(os.path.join(out, name[:-4] + ".png"), dpi=120)
        plt.close(fig)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-plots", action="store_true")
    args = p.parse_args(argv)
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        plt = None
    for scenario, config in RUNS:
        tag = config[:-5]
        out = os.path.join(args.out, tag)
        m = run_scenario(scenario, os.path.join(CONFIGS, config), out, workers=args.workers)
        print(f"{tag:18s} {m.wall_clock_seconds:7.2f} s  {', '.join(m.outputs)}")
        if plt is not None and not args.no_plots:
            plot_run(plt, out, tag)
    return 0


if __name__ == "__main__":
    sys.exit(main())
