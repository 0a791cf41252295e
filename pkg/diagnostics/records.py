# diagnostics/records.py
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from collision.engine import CollisionEngine
from collision.operators import loss_rates
from collision.state import MixtureState
from linearized.frequency import CollisionFrequencyTable
from species.params import WeightSpec

from .functionals import (
    conserved_moments,
    entropy,
    entropy_production,
    gauss_monitor,
    relative_entropy,
    to_perturbation,
    weighted_sup_norm,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    mass: tuple[float, ...]
    momentum: tuple[float, float, float]
    energy: float
    entropy: float
    rel_entropy: float
    entropy_production: float
    winf_norm: tuple[float, ...]
    gauss_monitor: tuple[float, ...]
    rfreq_ratio: tuple[float, ...]

    @staticmethod
    def csv_header(n_species: int) -> list[str]:
        idx = range(1, n_species + 1)
        return (
            ["time"]
            + [f"mass_{k}" for k in idx]
            + ["px", "py", "pz", "energy", "entropy", "rel_entropy", "entropy_production"]
            + [f"winf_{k}" for k in idx]
            + [f"gauss_{k}" for k in idx]
            + [f"rfreq_{k}" for k in idx]
        )

    def csv_row(self) -> list[str]:
        values = (
            [self.time, *self.mass, *self.momentum, self.energy, self.entropy,
             self.rel_entropy, self.entropy_production, *self.winf_norm,
             *self.gauss_monitor, *self.rfreq_ratio]
        )
        return [repr(float(v)) for v in values]

    def as_dict(self) -> dict[str, float]:
        header = self.csv_header(len(self.mass))
        return dict(zip(header, (float(v) for v in self.csv_row())))

    def field(self, name: str) -> float:
        """Coluna do CSV pelo nome; 'winf'/'gauss'/'mass' sem índice somam as espécies."""
        if name in ("winf", "gauss", "mass"):
            attr = {"winf": self.winf_norm, "gauss": self.gauss_monitor, "mass": self.mass}[name]
            return float(sum(attr))
        data = self.as_dict()
        if name not in data:
            raise KeyError(name)
        return data[name]


def collect_record(
    engine: CollisionEngine,
    state: MixtureState,
    time: float,
    weight: WeightSpec,
    table: CollisionFrequencyTable,
) -> DiagnosticsRecord:
    """Amostra todos os funcionais do estado (homogêneo ou no toro)."""
    moments = conserved_moments(state)
    pert = to_perturbation(state)
    ratios = np.full(state.n_species, np.inf)
    for c in range(state.cells):
        rates = loss_rates(engine, state.cell(c).values)
        ratios = np.minimum(ratios, (rates / table.total).min(axis=1))
    record = DiagnosticsRecord(
        time=float(time),
        mass=tuple(float(x) for x in moments.mass),
        momentum=tuple(float(x) for x in moments.momentum),
        energy=moments.energy,
        entropy=entropy(state),
        rel_entropy=relative_entropy(state),
        entropy_production=entropy_production(engine, state),
        winf_norm=tuple(float(x) for x in weighted_sup_norm(pert, weight)),
        gauss_monitor=tuple(float(x) for x in gauss_monitor(pert, weight)),
        rfreq_ratio=tuple(float(x) for x in ratios),
    )
    logger.info(
        "[Diagnostico] t=%.4f 𝓔=%.6e D=%.3e ‖wf‖∞=%s 𝓡/ν=%s",
        record.time, record.rel_entropy, record.entropy_production,
        ", ".join(f"{x:.3e}" for x in record.winf_norm),
        ", ".join(f"{x:.3f}" for x in record.rfreq_ratio),
    )
    return record


def write_csv(records: Sequence[DiagnosticsRecord], path: Path, n_species: int) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DiagnosticsRecord.csv_header(n_species))
        for record in records:
            writer.writerow(record.csv_row())
    return path


def read_csv(path: Path) -> list[dict[str, float]]:
    with Path(path).open(newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def max_conservation_drift(records: Iterable[DiagnosticsRecord]) -> float:
    """Maior desvio relativo (à primeira amostra) entre massas, momento e energia."""
    records = list(records)
    if not records:
        return 0.0
    first = records[0]
    scale_p = max(1.0, float(np.max(np.abs(first.momentum))))
    drift = 0.0
    for r in records[1:]:
        drift = max(drift, float(np.max(np.abs(np.subtract(r.mass, first.mass)) / np.abs(first.mass))))
        drift = max(drift, float(np.max(np.abs(np.subtract(r.momentum, first.momentum)))) / scale_p)
        drift = max(drift, abs(r.energy - first.energy) / abs(first.energy))
    return drift
