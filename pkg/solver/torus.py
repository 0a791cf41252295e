# solver/torus.py
"""
Toro 1D unitário em x: splitting de Strang transporte/colisão/transporte.

Transporte semi-Lagrangiano: F(x) <- F(x - v_x τ) com interpolação linear periódica
entre centros de células. Cada fatia de velocidade conserva sua soma em x exatamente;
com deslocamento inteiro em células o transporte é uma permutação.
"""
from __future__ import annotations

import logging

import numpy as np

from collision.engine import CollisionEngine
from collision.state import MixtureState
from diagnostics.records import DiagnosticsRecord
from linearized.frequency import CollisionFrequencyTable
from species.invariants import invariant_tables
from species.params import WeightSpec

from .config import StepConfig, TorusConfig
from .homogeneous import collide, march

logger = logging.getLogger(__name__)


def transport(values: np.ndarray, vx: np.ndarray, tau: float) -> np.ndarray:
    """values (cells, N, n_nodes), vx (n_nodes,) -> valores transportados por τ."""
    cells = values.shape[0]
    shift = vx * tau * cells  # em células
    nearest = np.round(shift)
    shift = np.where(np.abs(shift - nearest) < 1e-9, nearest, shift)
    whole = np.floor(shift).astype(int)
    frac = shift - whole

    c = np.arange(cells)[:, None]
    src0 = np.mod(c - whole[None, :], cells)  # (cells, n_nodes)
    src1 = np.mod(c - whole[None, :] - 1, cells)
    shape = values.shape
    idx0 = np.broadcast_to(src0[:, None, :], shape)
    idx1 = np.broadcast_to(src1[:, None, :], shape)
    left = np.take_along_axis(values, idx0, axis=0)
    right = np.take_along_axis(values, idx1, axis=0)
    return (1.0 - frac) * left + frac * right


def step_torus(engine: CollisionEngine, state: MixtureState, cfg: StepConfig, torus: TorusConfig | None = None) -> MixtureState:
    state.require_physical()
    if not state.spatial:
        raise ValueError("step_torus recebe estado com eixo espacial (cells, N, n_nodes).")
    if torus is not None and torus.cells != state.cells:
        raise ValueError(f"Estado tem {state.cells} células, TorusConfig pede {torus.cells}.")
    vx = engine.grid.nodes[:, 0]
    half = 0.5 * cfg.dt
    psi = invariant_tables(engine.species, engine.grid.nodes) if cfg.conservation_fix else None

    values = transport(state.values, vx, half)
    if not engine.kernel.collisionless:
        values = np.stack([collide(engine, values[c], cfg, psi) for c in range(state.cells)])
    values = transport(values, vx, half)
    return state.with_values(values)


def run_torus(
    engine: CollisionEngine,
    initial: MixtureState,
    cfg: StepConfig,
    torus: TorusConfig,
    t_end: float,
    sample_every: int = 1,
    weight: WeightSpec | None = None,
    table: CollisionFrequencyTable | None = None,
) -> list[DiagnosticsRecord]:
    return march(
        engine, initial, cfg, t_end, sample_every,
        lambda e, s, c: step_torus(e, s, c, torus),
        weight, table,
    )
