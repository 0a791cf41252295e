# linearized/operator.py
"""
L_i(f) = -ν_i f_i + K_i(f), com K_i pela definição integral:

  K_i(f) = Σ_j ∬ B_ij √μ_j(v_*) [√μ_i(v') f_j(v'_*) + √μ_j(v'_*) f_i(v')] dσ dv_*
         - Σ_j ∬ B_ij √μ_j(v_*) √μ_i(v) f_j(v_*) dσ dv_*

√μ é avaliada analiticamente fora da malha; f é reconstruída por engine.perturbation_field.
"""
from __future__ import annotations

import numpy as np

from collision.engine import CollisionEngine
from collision.state import MixtureState

from .frequency import CollisionFrequencyTable, build_nu


def apply_K(engine: CollisionEngine, pert: MixtureState, i: int) -> np.ndarray:
    pert.require_perturbation()
    f = pert.values
    field_i = engine.perturbation_field(i, f[i])
    total = np.zeros(engine.grid.node_count)
    for j in range(engine.n_species):
        star = engine.sqrt_mu[j]
        total += engine.gain(i, j, engine.sqrt_maxwellian_field(i), engine.perturbation_field(j, f[j]), star_weight=star)
        total += engine.gain(i, j, field_i, engine.sqrt_maxwellian_field(j), star_weight=star)
        total -= engine.sqrt_mu[i] * engine.rate(i, j, star * f[j])
    return total


def apply_L(engine: CollisionEngine, pert: MixtureState, table: CollisionFrequencyTable | None = None) -> np.ndarray:
    """(N, n_nodes)."""
    pert.require_perturbation()
    table = table or build_nu(engine)
    return np.stack([
        -table.total[i] * pert.values[i] + apply_K(engine, pert, i)
        for i in range(engine.n_species)
    ])


def linearized_via_collision(engine: CollisionEngine, pert: MixtureState) -> np.ndarray:
    """
    Segunda rota: (1/√μ_i) Σ_j [Q_ij(μ_i, √μ_j f_j) + Q_ij(√μ_i f_i, μ_j)] pelo motor
    do operador completo (ganho - perda), com √μ f reconstruída por engine.lifted_field.
    """
    pert.require_perturbation()
    f = pert.values
    tilde = engine.sqrt_mu * f
    lifted = [engine.lifted_field(k, f[k]) for k in range(engine.n_species)]
    out = np.empty_like(f)
    for i in range(engine.n_species):
        acc = np.zeros(engine.grid.node_count)
        for j in range(engine.n_species):
            acc += engine.gain(i, j, engine.maxwellian_field(i), lifted[j])
            acc -= engine.mu[i] * engine.rate(i, j, tilde[j])
            acc += engine.gain(i, j, lifted[i], engine.maxwellian_field(j))
            acc -= tilde[i] * engine.rate(i, j, engine.mu[j])
        out[i] = acc / engine.sqrt_mu[i]
    return out
