# linearized/frequency.py
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from collision.engine import CollisionEngine
from quadrature.grids import VelocityGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CollisionFrequencyTable:
    pairwise: np.ndarray  # (N, N, n_nodes): ν_ij
    total: np.ndarray  # (N, n_nodes): ν_i = Σ_j ν_ij

    @property
    def max_value(self) -> float:
        return float(self.total.max())


@dataclass(frozen=True)
class FrequencyEnvelope:
    lower: np.ndarray  # ν̂⁽⁰⁾_i = min ν_i/(1+|v|)^γ
    upper: np.ndarray  # ν̂⁽¹⁾_i = max ν_i/(1+|v|)^γ
    beta: float  # max_i max_v ν_i/ν_ii


def build_nu(engine: CollisionEngine) -> CollisionFrequencyTable:
    """ν_ij(v) = ∬ B_ij μ_j(v_*) dσ dv_* em todos os nós."""
    n = engine.n_species
    pairwise = np.empty((n, n, engine.grid.node_count))
    for i, j in engine.pairs():
        pairwise[i, j] = engine.rate(i, j, engine.mu[j])
    total = pairwise.sum(axis=1)
    if np.any(total <= 0):
        logger.warning("[Nu] frequência não positiva em %d nós", int(np.sum(total <= 0)))
    logger.debug("[Nu] ν_i em [%.4g, %.4g]", total.min(), total.max())
    return CollisionFrequencyTable(pairwise=pairwise, total=total)


def frequency_envelope(table: CollisionFrequencyTable, grid: VelocityGrid, gamma: float) -> FrequencyEnvelope:
    scaled = table.total / (1.0 + grid.speeds[None, :]) ** gamma
    diagonal = np.stack([table.pairwise[i, i] for i in range(table.total.shape[0])])
    return FrequencyEnvelope(
        lower=scaled.min(axis=1),
        upper=scaled.max(axis=1),
        beta=float(np.max(table.total / diagonal)),
    )
