# experiments/plots.py
"""Gráficos de linha (t contra cada funcional) em PNG, backend Agg."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from diagnostics.records import DiagnosticsRecord  # noqa: E402

logger = logging.getLogger(__name__)

# nome do arquivo -> (rótulo do eixo, extrator de séries {legenda: valor})
FUNCTIONALS = {
    "mass": ("massa", lambda r: {f"espécie {k + 1}": x for k, x in enumerate(r.mass)}),
    "momentum": ("momento", lambda r: dict(zip(("px", "py", "pz"), r.momentum))),
    "energy": ("energia", lambda r: {"energia": r.energy}),
    "entropy": ("E(F)", lambda r: {"E": r.entropy}),
    "rel_entropy": ("𝓔(F)", lambda r: {"𝓔": r.rel_entropy}),
    "entropy_production": ("D(F)", lambda r: {"D": r.entropy_production}),
    "winf": ("‖w f‖∞", lambda r: {f"espécie {k + 1}": x for k, x in enumerate(r.winf_norm)}),
    "gauss": ("monitor gaussiano", lambda r: {f"espécie {k + 1}": x for k, x in enumerate(r.gauss_monitor)}),
    "rfreq": ("𝓡/ν", lambda r: {f"espécie {k + 1}": x for k, x in enumerate(r.rfreq_ratio)}),
}
LOG_SCALE = {"rel_entropy", "winf", "gauss"}


def write_plots(records: Sequence[DiagnosticsRecord], directory: Path, n_species: int) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    times = [r.time for r in records]
    paths = []
    for name, (label, extract) in FUNCTIONALS.items():
        series: dict[str, list[float]] = {}
        for record in records:
            for key, value in extract(record).items():
                series.setdefault(key, []).append(value)

        fig, ax = plt.subplots(figsize=(6, 4))
        for key, ys in series.items():
            ax.plot(times, ys, marker="o", markersize=3, label=key)
        if name in LOG_SCALE and all(y > 0 for ys in series.values() for y in ys):
            ax.set_yscale("log")
        if name == "rfreq":
            ax.axhline(0.5, color="gray", linestyle="--", linewidth=1)
        ax.set_xlabel("t")
        ax.set_ylabel(label)
        if len(series) > 1:
            ax.legend()
        ax.grid(alpha=0.3)
        fig.tight_layout()
        path = directory / f"{name}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    logger.info("[Plots] %d gráficos em %s (N=%d)", len(paths), directory, n_species)
    return paths
