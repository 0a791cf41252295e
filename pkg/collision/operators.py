# collision/operators.py
"""
Operadores de colisão completos (Q_ij^±) e perturbativos (Γ_i^±).

Convenção de retorno: com v_node inteiro devolve o valor nesse nó (float);
com v_node=None devolve o array em todos os nós.
"""
from __future__ import annotations

import logging

import numpy as np

from species.invariants import CollisionInvariant, all_invariants

from .engine import CollisionEngine
from .state import CollisionTally, MixtureState

logger = logging.getLogger(__name__)


def _points(engine: CollisionEngine, v_node: int | None) -> np.ndarray | None:
    if v_node is None:
        return None
    return engine.grid.nodes[[int(v_node)]]


def _pick(values: np.ndarray, v_node: int | None):
    return float(values[0]) if v_node is not None else values


def _homogeneous(state: MixtureState) -> None:
    if state.spatial:
        raise ValueError("Operador de colisão atua célula a célula: use state.cell(c).")


# ---------- Operador completo ----------
def q_loss(engine: CollisionEngine, state: MixtureState, i: int, j: int, v_node: int | None = None):
    """Q_ij^-(v) = F_i(v) ∬ B_ij F_j(v_*) dσ dv_*."""
    state.require_physical()
    _homogeneous(state)
    rate = engine.rate(i, j, state.values[j], points=_points(engine, v_node))
    f_i = state.values[i] if v_node is None else state.values[i][[int(v_node)]]
    return _pick(f_i * rate, v_node)


def q_gain(engine: CollisionEngine, state: MixtureState, i: int, j: int, v_node: int | None = None):
    """Q_ij^+(v) = ∬ B_ij F_i(v') F_j(v'_*) dσ dv_*, F reconstruído por engine.physical_field."""
    state.require_physical()
    _homogeneous(state)
    gain = engine.gain(
        i, j,
        engine.physical_field(i, state.values[i]),
        engine.physical_field(j, state.values[j]),
        points=_points(engine, v_node),
    )
    return _pick(gain, v_node)


def nonlinear_frequency(engine: CollisionEngine, state: MixtureState, i: int, v_node: int | None = None):
    """𝓡_i(v) = Σ_j ∬ B_ij F_j(v_*) dσ dv_*."""
    state.require_physical()
    _homogeneous(state)
    points = _points(engine, v_node)
    total = sum(engine.rate(i, j, state.values[j], points=points) for j in range(engine.n_species))
    return _pick(total, v_node)


def loss_rates(engine: CollisionEngine, values: np.ndarray) -> np.ndarray:
    """(N, n_nodes): 𝓡_i em todos os nós para valores F (sem checagem de modo)."""
    return np.stack([
        sum(engine.rate(i, j, values[j]) for j in range(engine.n_species))
        for i in range(engine.n_species)
    ])


def gain_terms(engine: CollisionEngine, values: np.ndarray) -> np.ndarray:
    """(N, n_nodes): Σ_j Q_ij^+(F_i, F_j)."""
    fields = [engine.physical_field(k, values[k]) for k in range(engine.n_species)]
    return np.stack([
        sum(engine.gain(i, j, fields[i], fields[j]) for j in range(engine.n_species))
        for i in range(engine.n_species)
    ])


def collision_tally(engine: CollisionEngine, state: MixtureState) -> CollisionTally:
    """Ganho e perda totais Σ_j Q_ij^± por espécie."""
    state.require_physical()
    _homogeneous(state)
    rates = loss_rates(engine, state.values)
    return CollisionTally(gain=gain_terms(engine, state.values), loss=state.values * rates)


def weak_form_residual(engine: CollisionEngine, state: MixtureState, invariant: CollisionInvariant | str) -> float:
    """Σ_ij ∫ Q_ij(F_i, F_j) ψ_i dv pela quadratura da malha."""
    if isinstance(invariant, str):
        invariant = CollisionInvariant.parse(invariant)
    tally = collision_tally(engine, state)
    psi = invariant.table(engine.species, engine.grid.nodes)
    return float(np.sum(tally.net * psi)) * engine.grid.cell_volume


def weak_form_residuals(engine: CollisionEngine, state: MixtureState) -> dict[str, tuple[float, float]]:
    """
    Todos os N+4 resíduos numa única avaliação de Q, com a escala usada na
    normalização: (resíduo, Σ_i ∫ |Q_i| |ψ_i| dv).
    """
    tally = collision_tally(engine, state)
    out: dict[str, tuple[float, float]] = {}
    for inv in all_invariants(engine.n_species):
        psi = inv.table(engine.species, engine.grid.nodes)
        residual = float(np.sum(tally.net * psi)) * engine.grid.cell_volume
        scale = float(np.sum((tally.gain + tally.loss) * np.abs(psi))) * engine.grid.cell_volume
        out[inv.label] = (residual, scale)
    return out


# ---------- Operador perturbativo ----------
def gamma_ops(engine: CollisionEngine, pert: MixtureState) -> CollisionTally:
    """
    Γ_i^+(f)(v) = Σ_j ∬ B_ij √μ_j(v_*) f_i(v') f_j(v'_*) dσ dv_*
    Γ_i^-(f)(v) = f_i(v) Σ_j ∬ B_ij √μ_j(v_*) f_j(v_*) dσ dv_*
    """
    pert.require_perturbation()
    _homogeneous(pert)
    f = pert.values
    fields = [engine.perturbation_field(k, f[k]) for k in range(engine.n_species)]
    gain = np.stack([
        sum(engine.gain(i, j, fields[i], fields[j], star_weight=engine.sqrt_mu[j]) for j in range(engine.n_species))
        for i in range(engine.n_species)
    ])
    loss = np.stack([
        f[i] * sum(engine.rate(i, j, engine.sqrt_mu[j] * f[j]) for j in range(engine.n_species))
        for i in range(engine.n_species)
    ])
    return CollisionTally(gain=gain, loss=loss)


def gamma_via_full_operator(engine: CollisionEngine, pert: MixtureState) -> CollisionTally:
    """
    Segunda rota: (1/√μ_i) Σ_j Q_ij^±(√μ_i f_i, √μ_j f_j) pelo motor do operador completo,
    com F̃ = √μ f reconstruído fora da malha como √μ(x)·f̂(x) (engine.lifted_field).
    """
    pert.require_perturbation()
    _homogeneous(pert)
    f = pert.values
    lifted = [engine.lifted_field(k, f[k]) for k in range(engine.n_species)]
    tilde = engine.sqrt_mu * f
    gain = np.stack([
        sum(engine.gain(i, j, lifted[i], lifted[j]) for j in range(engine.n_species)) / engine.sqrt_mu[i]
        for i in range(engine.n_species)
    ])
    loss = np.stack([
        tilde[i] * sum(engine.rate(i, j, tilde[j]) for j in range(engine.n_species)) / engine.sqrt_mu[i]
        for i in range(engine.n_species)
    ])
    return CollisionTally(gain=gain, loss=loss)
