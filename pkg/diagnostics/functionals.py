# diagnostics/functionals.py
"""
Funcionais monitorados: momentos conservados, entropia, entropia relativa,
produção de entropia, normas com peso e o monitor gaussiano.

Estados espaciais (toro 1D de comprimento 1) integram em x com dx = 1/células.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from collision.engine import CollisionEngine
from collision.state import MixtureState, StateMode
from species.maxwellian import maxwellian_table, sqrt_maxwellian, velocity_weight
from species.params import WeightSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Moments:
    mass: np.ndarray  # (N,)
    momentum: np.ndarray  # (3,)
    energy: float

    def as_vector(self) -> np.ndarray:
        """Na ordem das N+4 invariantes (massas, px, py, pz, energia)."""
        return np.concatenate([self.mass, self.momentum, [self.energy]])


def _cell_average(per_cell: np.ndarray, state: MixtureState) -> np.ndarray:
    return per_cell.mean(axis=0) if state.spatial else per_cell


def _mu(state: MixtureState) -> np.ndarray:
    return maxwellian_table(state.species, state.grid.nodes)


def _sqrt_mu(state: MixtureState) -> np.ndarray:
    return np.stack([sqrt_maxwellian(s, state.grid.nodes) for s in state.species])


def x_log_x(values: np.ndarray) -> np.ndarray:
    """x log x com extensão contínua 0 em x = 0."""
    out = np.zeros_like(values)
    positive = values > 0
    out[positive] = values[positive] * np.log(values[positive])
    return out


# ---------- Conversões ----------
def to_perturbation(state: MixtureState) -> MixtureState:
    """f = (F - μ)/√μ."""
    state.require_physical()
    return MixtureState(
        species=state.species, grid=state.grid,
        values=(state.values - _mu(state)) / _sqrt_mu(state), mode=StateMode.PERTURBATION,
    )


def from_perturbation(pert: MixtureState) -> MixtureState:
    """F = μ + √μ f."""
    pert.require_perturbation()
    return MixtureState(
        species=pert.species, grid=pert.grid,
        values=_mu(pert) + _sqrt_mu(pert) * pert.values, mode=StateMode.PHYSICAL,
    )


def weighted_perturbation(pert: MixtureState, weight: WeightSpec) -> np.ndarray:
    """h = w f."""
    pert.require_perturbation()
    return velocity_weight(weight, pert.grid.nodes) * pert.values


# ---------- Momentos e entropias ----------
def conserved_moments(state: MixtureState) -> Moments:
    state.require_physical()
    grid = state.grid
    nodes = grid.nodes
    masses = state.masses
    dv = grid.cell_volume
    values = state.values
    mass = values.sum(axis=-1) * dv  # (..., N)
    momentum = np.einsum("...in,nk->...ik", values, nodes) * dv
    momentum = np.einsum("...ik,i->...k", momentum, masses)
    sq = np.einsum("nk,nk->n", nodes, nodes)
    energy = np.einsum("...in,n,i->...", values, 0.5 * sq, masses) * dv
    return Moments(
        mass=_cell_average(mass, state),
        momentum=_cell_average(momentum, state),
        energy=float(_cell_average(np.asarray(energy), state)),
    )


def entropy(state: MixtureState) -> float:
    """E(F) = Σ_i ∫ F_i log F_i dv (dx)."""
    state.require_physical()
    per_cell = x_log_x(state.values).sum(axis=(-2, -1)) * state.grid.cell_volume
    return float(_cell_average(np.asarray(per_cell), state))


def relative_entropy(state: MixtureState) -> float:
    """
    𝓔(F) = E(F) - E(μ) = Σ_i ∫ (F_i log F_i - μ_i log μ_i) dv (dx).

    Não tem sinal para F arbitrário; é >= 0 quando F tem massa, momento e energia de μ.
    """
    state.require_physical()
    integrand = x_log_x(state.values) - x_log_x(_mu(state))
    per_cell = integrand.sum(axis=(-2, -1)) * state.grid.cell_volume
    return float(_cell_average(np.asarray(per_cell), state))


def relative_entropy_kl(state: MixtureState) -> float:
    """
    Σ_i ∫ (F_i log(F_i/μ_i) - F_i + μ_i) dv (dx), com integrando >= 0 nó a nó.

    Coincide com relative_entropy quando F tem os momentos conservados de μ
    (log μ_i é combinação de invariantes).
    """
    state.require_physical()
    mu = _mu(state)
    floor = getattr(settings, "KINETIC_LOG_FLOOR", 1e-300)
    values = state.values
    integrand = x_log_x(values) - values * np.log(np.maximum(mu, floor)) - values + mu
    per_cell = integrand.sum(axis=(-2, -1)) * state.grid.cell_volume
    return float(_cell_average(np.asarray(per_cell), state))


def entropy_production(engine: CollisionEngine, state: MixtureState) -> float:
    """D(F) = (1/4) Σ_ij ∭ B_ij (F'F'_* - FF_*) log(FF_*/F'F'_*) (média em x)."""
    state.require_physical()
    total = 0.0
    for c in range(state.cells):
        values = state.cell(c).values
        total += 0.25 * sum(engine.production(i, j, values[i], values[j]) for i, j in engine.pairs())
    return total / state.cells


def epsilon_quad(engine: CollisionEngine) -> float:
    """
    ε_quad medido: |D(μ)|, com piso no arredondamento da própria soma
    (ε de máquina × Σ dos módulos dos termos).
    """
    total, scale = 0.0, 0.0
    for i, j in engine.pairs():
        part, magnitude = engine.production_terms(i, j, engine.mu[i], engine.mu[j])
        total += 0.25 * part
        scale += 0.25 * magnitude
    return max(abs(total), float(np.finfo(float).eps) * scale)


def maxwellian_mass_defect(engine: CollisionEngine) -> float:
    """max_i |∫ μ_i - n_i| / n_i na malha configurada."""
    masses = engine.mu.sum(axis=1) * engine.grid.cell_volume
    densities = np.array([s.eq_density for s in engine.species])
    return float(np.max(np.abs(masses - densities) / densities))


def entropy_splitting_check(state: MixtureState) -> tuple[float, float]:
    """
    lhs = Σ_i [∫ |F_i - μ_i|²/(4μ_i) χ_{|F_i-μ_i|<=μ_i} + ∫ |F_i - μ_i|/4 χ_{|F_i-μ_i|>μ_i}],
    rhs = relative_entropy_kl(F). Nas variáveis f o lhs é entropy_splitting_perturbation.
    """
    state.require_physical()
    mu = _mu(state)
    gap = np.abs(state.values - mu)
    near = gap <= mu
    integrand = np.where(near, gap ** 2 / (4.0 * mu), 0.25 * gap)
    per_cell = integrand.sum(axis=(-2, -1)) * state.grid.cell_volume
    lhs = float(_cell_average(np.asarray(per_cell), state))
    return lhs, relative_entropy_kl(state)


def entropy_splitting_perturbation(pert: MixtureState) -> float:
    """Mesmo lhs nas variáveis f: (1/4) Σ_i [∫ |f_i|² χ_{|f_i|<=√μ_i} + ∫ √μ_i |f_i| χ_{|f_i|>√μ_i}]."""
    pert.require_perturbation()
    root = _sqrt_mu(pert)
    f = np.abs(pert.values)
    integrand = 0.25 * np.where(f <= root, f ** 2, root * f)
    per_cell = integrand.sum(axis=(-2, -1)) * pert.grid.cell_volume
    return float(_cell_average(np.asarray(per_cell), pert))


# ---------- Normas ----------
def weighted_sup_norm(pert: MixtureState, weight: WeightSpec) -> np.ndarray:
    """max sobre nós (e células) de w(v)|f_i|, por espécie."""
    h = np.abs(weighted_perturbation(pert, weight))
    if pert.spatial:
        h = h.max(axis=0)
    return h.max(axis=-1)


def gauss_monitor(pert: MixtureState, weight: WeightSpec, species_weighted: bool = False) -> np.ndarray:
    """
    max sobre células de ∫ e^{-|v|²/4} |h_i| dv (ou e^{-m_i|v|²/8} com species_weighted).
    """
    h = np.abs(weighted_perturbation(pert, weight))
    sq = np.einsum("nk,nk->n", pert.grid.nodes, pert.grid.nodes)
    if species_weighted:
        kernel = np.exp(-np.outer(pert.masses, sq) / 8.0)
    else:
        kernel = np.broadcast_to(np.exp(-sq / 4.0), (pert.n_species, sq.size))
    per_cell = (h * kernel).sum(axis=-1) * pert.grid.cell_volume
    return per_cell.max(axis=0) if pert.spatial else per_cell
