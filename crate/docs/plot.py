"""Plot the tables written by scripts/fig2.sh and scripts/fig3.sh.

    python3 docs/plot.py out/fig2.csv out/fig3.csv

Writes fig2.png and fig3.png next to the inputs.
"""

import sys
from datetime import datetime, timezone
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_windowed(path: Path) -> Path:
    table = pd.read_csv(path, dtype={"node": str}).set_index("node")
    starts = [datetime.fromtimestamp(int(c), tz=timezone.utc) for c in table.columns]
    fig, ax = plt.subplots(figsize=(8, 4))
    for node, row in table.iterrows():
        ax.plot(starts, row.values, marker="o", label=node)
    ax.set_xlabel("window start")
    ax.set_ylabel("PageRank")
    ax.legend(title="node")
    fig.autofmt_xdate()
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=150, bbox_inches="tight")
    return out


def plot_motifs(path: Path) -> Path:
    table = pd.read_csv(path).set_index("motif")
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(table.values, cmap="viridis")
    ax.set_xticks(range(len(table.columns)), table.columns)
    ax.set_yticks(range(len(table.index)), table.index)
    ax.set_xlabel("third edge")
    ax.set_ylabel("first two edges")
    peak = table.values.max()
    for i, row in enumerate(table.values):
        for j, n in enumerate(row):
            ax.text(j, i, n, ha="center", va="center", color="white" if n < peak / 2 else "black", fontsize=8)
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=150, bbox_inches="tight")
    return out


def main(paths):
    if not paths:
        sys.exit(__doc__)
    for p in map(Path, paths):
        header = p.read_text().split("\n", 1)[0]
        out = plot_motifs(p) if header.startswith("motif,") else plot_windowed(p)
        print(f"wrote {out}")


if __name__ == "__main__":
    main(sys.argv[1:])
