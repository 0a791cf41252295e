# solver/homogeneous.py
"""
Passo espacialmente homogêneo.

semi_implicit_loss:  F⁺ = (F + dt·G(F)) / (1 + dt·𝓡(F))        (perda implícita, ganho explícito)
exponential:         F⁺ = e^{-dt𝓡}F + (1 - e^{-dt𝓡}) G(F)/𝓡     (fator de amortecimento congelado no passo)
explicit_euler:      F⁺ = F + dt·(G(F) - 𝓡(F)F)                 (sem garantia de positividade)

𝓡 e G são avaliados no estado antigo.
"""
from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np

from collision.engine import CollisionEngine
from collision.operators import gain_terms, loss_rates
from collision.state import MixtureState
from diagnostics.records import DiagnosticsRecord, collect_record
from linearized.frequency import CollisionFrequencyTable, build_nu
from species.invariants import invariant_tables
from species.params import WeightSpec

from .config import Scheme, StepConfig
from .conservation import conservation_fix, moments_of

logger = logging.getLogger(__name__)

Stepper = Callable[[CollisionEngine, MixtureState, StepConfig], MixtureState]


def advance(values: np.ndarray, gain: np.ndarray, rate: np.ndarray, dt: float, scheme: str) -> np.ndarray:
    if scheme == Scheme.SEMI_IMPLICIT_LOSS:
        return (values + dt * gain) / (1.0 + dt * rate)
    if scheme == Scheme.EXPONENTIAL:
        damping = np.exp(-dt * rate)
        # (1 - e^{-dt R})/R -> dt quando R -> 0
        with np.errstate(divide="ignore", invalid="ignore"):
            relax = np.where(rate > 0, -np.expm1(-dt * rate) / rate, dt)
        return damping * values + relax * gain
    return values + dt * (gain - rate * values)


def collide(engine: CollisionEngine, values: np.ndarray, cfg: StepConfig, psi: np.ndarray | None = None) -> np.ndarray:
    """Um passo de colisão sobre valores (N, n_nodes), com correção de conservação opcional."""
    rate = loss_rates(engine, values)
    gain = gain_terms(engine, values)
    new = advance(values, gain, rate, cfg.dt, cfg.scheme)
    if cfg.conservation_fix:
        if psi is None:
            psi = invariant_tables(engine.species, engine.grid.nodes)
        target = moments_of(values, psi, engine.grid.cell_volume)
        new = conservation_fix(new, target, psi, engine.grid.cell_volume)
    return new


def step_homogeneous(engine: CollisionEngine, state: MixtureState, cfg: StepConfig) -> MixtureState:
    state.require_physical()
    if state.spatial:
        raise ValueError("step_homogeneous recebe estado sem eixo espacial; use step_torus.")
    return state.with_values(collide(engine, state.values, cfg))


def march(
    engine: CollisionEngine,
    initial: MixtureState,
    cfg: StepConfig,
    t_end: float,
    sample_every: int,
    stepper: Stepper,
    weight: WeightSpec | None = None,
    table: CollisionFrequencyTable | None = None,
    on_state: Callable[[int, float, MixtureState], None] | None = None,
) -> list[DiagnosticsRecord]:
    """
    Avança até t_end com passos uniformes (dt ajustado para baixo para cair em t_end)
    e amostra a cada `sample_every` passos, além do estado inicial e do final.
    """
    if t_end < 0:
        raise ValueError("t_end não pode ser negativo.")
    if sample_every < 1:
        raise ValueError("sample_every deve ser >= 1.")
    initial.require_physical()
    weight = weight or WeightSpec()
    table = table or build_nu(engine)

    n_steps = 0 if t_end == 0 else max(1, math.ceil(t_end / cfg.dt - 1e-12))
    step_cfg = cfg if n_steps == 0 else StepConfig(
        dt=t_end / n_steps, scheme=cfg.scheme, conservation_fix=cfg.conservation_fix
    )
    logger.info("[Solver] %d passos de dt=%.4g até t=%.4g", n_steps, step_cfg.dt, t_end)

    state = initial
    records = [collect_record(engine, state, 0.0, weight, table)]
    if on_state:
        on_state(0, 0.0, state)
    for n in range(1, n_steps + 1):
        state = stepper(engine, state, step_cfg)
        t = n * step_cfg.dt
        logger.debug("[Solver] passo %d t=%.4f min F=%.3e", n, t, float(state.values.min()))
        if n % sample_every == 0 or n == n_steps:
            records.append(collect_record(engine, state, t, weight, table))
            if on_state:
                on_state(n, t, state)
    return records


def run_homogeneous(
    engine: CollisionEngine,
    initial: MixtureState,
    cfg: StepConfig,
    t_end: float,
    sample_every: int = 1,
    weight: WeightSpec | None = None,
    table: CollisionFrequencyTable | None = None,
) -> list[DiagnosticsRecord]:
    return march(engine, initial, cfg, t_end, sample_every, step_homogeneous, weight, table)
