"""Benchmark figures (Agg backend, PNG output)."""
from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (4.5, 3.2),
    "savefig.dpi": 150,
}
MARKERS = {"ga": "o", "addm": "s"}


def _series(rows, field):
    out = defaultdict(list)
    for r in rows:
        if r.get(field) in (None, ""):
            continue
        out[r["alg"]].append((float(r["eps"]), float(r[field])))
    return {k: sorted(v) for k, v in out.items()}


def _plot(rows, field, ylabel, title, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for alg, pts in sorted(_series(rows, field).items()):
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker=MARKERS.get(alg, "^"), label=alg.upper())
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("tolerance eps")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def bench_figures(rows, outdir) -> list:
    """Vertex count and runtime against ``eps``, one pair of PNGs per fixture."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    by_fixture = defaultdict(list)
    for r in rows:
        by_fixture[r["fixture"]].append(r)
    paths = []
    for name, rs in sorted(by_fixture.items()):
        safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in name)
        paths.append(_plot(rs, "n_vertices", "vertices", name, outdir / f"{safe}_vertices.png"))
        paths.append(_plot(rs, "runtime_ms", "runtime [ms]", name, outdir / f"{safe}_runtime.png"))
    return paths
