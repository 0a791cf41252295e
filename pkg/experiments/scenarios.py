# experiments/scenarios.py
"""
Condições iniciais dos presets.

Todas produzem estados físicos F >= 0. Com scenario.match_moments=true o dado é
projetado (multiplicativamente) sobre massa, momento e energia de μ na malha,
de modo que 𝓔(F) = E(F) - E(μ).
"""
from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from collision.state import MixtureState
from core.exceptions import ConfigError
from quadrature.grids import VelocityGrid
from solver.conservation import conservation_fix, moments_of
from species.invariants import invariant_tables
from species.maxwellian import maxwellian_table, shifted_maxwellian, velocity_weight

from .config import RunConfig

logger = logging.getLogger(__name__)

# |v| da casca onde ficam as saliências do dado de grande amplitude
LARGE_SHELL = (1.0, 4.0)
# fração de √μ permitida para valores negativos de f (F >= 0.1 μ)
NEGATIVE_CLIP = 0.9

Builder = Callable[[RunConfig, VelocityGrid, np.random.Generator], np.ndarray]


def match_moments(values: np.ndarray, species, grid: VelocityGrid) -> np.ndarray:
    """Reescala F_i·exp(Σλψ) para ter os momentos de μ na malha."""
    psi = invariant_tables(species, grid.nodes)
    target = moments_of(maxwellian_table(species, grid.nodes), psi, grid.cell_volume)
    return conservation_fix(values, target, psi, grid.cell_volume)


def _checkerboard(grid: VelocityGrid) -> np.ndarray:
    parity = np.indices(grid.shape).reshape(3, -1).sum(axis=0)
    return np.where(parity % 2 == 0, 1.0, -1.0)


# ---------- Construtores (valores homogêneos (N, n_nodes)) ----------
def bulk_velocities(masses: np.ndarray, densities: np.ndarray, u: float) -> np.ndarray:
    """Espécie 1 com +u em x; as demais dividem o momento oposto (momento total nulo)."""
    bulk = np.zeros(len(masses))
    bulk[0] = u
    bulk[1:] = -masses[0] * densities[0] * u / np.sum(masses[1:] * densities[1:])
    return bulk


def two_species_relax(config: RunConfig, grid: VelocityGrid, rng: np.random.Generator) -> np.ndarray:
    """Bi-Maxwellianas deslocadas com temperatura comum (energia total a de μ)."""
    species = config.build_species()
    masses = np.array([s.mass for s in species])
    densities = np.array([s.eq_density for s in species])
    bulk = bulk_velocities(masses, densities, config.section("scenario")["amplitude"])
    temperature = 1.0 - np.sum(masses * densities * bulk ** 2) / (3.0 * np.sum(densities))
    if temperature <= 0:
        raise ConfigError({"scenario.amplitude": ["Amplitude grande demais: temperatura resultante <= 0."]})
    logger.info("[Cenario] bi-Maxwelliana: u_x=%s, T=%.4f", np.round(bulk, 6).tolist(), temperature)
    return np.stack([
        shifted_maxwellian(s, grid.nodes, s.eq_density, (u, 0.0, 0.0), temperature)
        for s, u in zip(species, bulk)
    ])


def explicit(config: RunConfig, grid: VelocityGrid, rng: np.random.Generator) -> np.ndarray:
    """Maxwellianas locais com u_x e T por espécie (scenario.bulk_x, scenario.temperatures)."""
    species = config.build_species()
    sec = config.section("scenario")
    bulk = sec.get("bulk_x") or [0.0] * len(species)
    temps = sec.get("temperatures") or [1.0] * len(species)
    return np.stack([
        shifted_maxwellian(s, grid.nodes, s.eq_density, (u, 0.0, 0.0), t)
        for s, u, t in zip(species, bulk, temps)
    ])


def small_amplitude(config: RunConfig, grid: VelocityGrid, rng: np.random.Generator) -> np.ndarray:
    """F = μ exp(ε P), P um polinômio de tensões (sem traço) amortecido, coeficientes sorteados."""
    species = config.build_species()
    eps = config.section("scenario")["amplitude"]
    v = grid.nodes
    sq = np.einsum("nk,nk->n", v, v)
    out = []
    for s, mu in zip(species, maxwellian_table(species, v)):
        c = rng.uniform(0.5, 1.0, size=3) * rng.choice([-1.0, 1.0], size=3)
        stress = c[0] * v[:, 0] * v[:, 1] + c[1] * v[:, 1] * v[:, 2] + c[2] * (v[:, 0] ** 2 - v[:, 2] ** 2)
        shape = s.mass * stress / (1.0 + 0.5 * s.mass * sq)
        out.append(mu * np.exp(eps * shape))
    return np.stack(out)


def large_amplitude(config: RunConfig, grid: VelocityGrid, rng: np.random.Generator) -> np.ndarray:
    """
    Saliências em xadrez na casca LARGE_SHELL com w|f| = H (scenario.amplitude);
    onde H/w excede NEGATIVE_CLIP·√μ o valor é cortado para manter F >= 0.1 μ.
    """
    species = config.build_species()
    height = config.section("scenario")["amplitude"]
    w = velocity_weight(config.build_weight(), grid.nodes)
    shell = (grid.speeds >= LARGE_SHELL[0]) & (grid.speeds <= LARGE_SHELL[1])
    sign = _checkerboard(grid)
    mu = maxwellian_table(species, grid.nodes)
    root = np.sqrt(mu)
    f = np.where(shell, sign * np.minimum(height / w, NEGATIVE_CLIP * root), 0.0)
    reached = np.max(w * np.abs(f), axis=1)
    if np.any(reached < height):
        logger.warning(
            "[Cenario] amplitude pedida %.3g limitada pela positividade; atingida por espécie: %s",
            height, ", ".join(f"{x:.3g}" for x in reached),
        )
    return mu + root * f


def equilibrium(config: RunConfig, grid: VelocityGrid, rng: np.random.Generator) -> np.ndarray:
    return maxwellian_table(config.build_species(), grid.nodes)


BUILDERS: dict[str, Builder] = {
    "two_species_relax": two_species_relax,
    "small_amplitude": small_amplitude,
    "large_amplitude": large_amplitude,
    "explicit": explicit,
    "equilibrium": equilibrium,
}


def standing_wave(config: RunConfig, grid: VelocityGrid, rng: np.random.Generator) -> np.ndarray:
    """(cells, N, n_nodes): F(x, v) = (1 + A cos(2πkx)) μ(v) nos centros das células."""
    cells = config.section("torus")["cells"]
    sec = config.section("scenario")
    if 2 * sec["wave_number"] >= cells:
        raise ConfigError({"scenario.wave_number": [f"Use wave_number < {cells // 2} com {cells} células."]})
    if sec["amplitude"] >= 1.0:
        raise ConfigError({"scenario.amplitude": ["Onda estacionária exige amplitude < 1 (densidade positiva)."]})
    x = (np.arange(cells) + 0.5) / cells
    profile = 1.0 + sec["amplitude"] * np.cos(2.0 * np.pi * sec["wave_number"] * x)
    mu = maxwellian_table(config.build_species(), grid.nodes)
    return profile[:, None, None] * mu[None, :, :]


def initial_state(config: RunConfig, grid: VelocityGrid | None = None) -> MixtureState:
    grid = grid or config.build_grid()
    species = config.build_species()
    rng = config.rng()
    name = config.scenario
    cells = config.section("torus")["cells"]

    if name == "standing_wave":
        values = standing_wave(config, grid, rng)
    else:
        values = BUILDERS[name](config, grid, rng)
        if config.section("scenario")["match_moments"] and name != "equilibrium":
            values = match_moments(values, species, grid)
        if cells:
            values = np.broadcast_to(values, (cells,) + values.shape).copy()
    state = MixtureState(species=species, grid=grid, values=values)
    state.require_physical()
    logger.info("[Cenario] '%s' pronto: shape=%s, min F=%.3e", name, values.shape, float(values.min()))
    return state
