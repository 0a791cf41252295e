# linearized/probes.py
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from collision.engine import CollisionEngine
from collision.state import MixtureState, StateMode
from species.maxwellian import velocity_weight
from species.params import WeightSpec

from .basis import KernelBasis, inner, project_PL
from .frequency import CollisionFrequencyTable, build_nu
from .operator import apply_K, apply_L

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoercivityEstimate:
    lambda_hat: float
    max_dirichlet: float  # maior ⟨f, Lf⟩ amostrado (deve ser <= folga)
    samples: int


def coercivity_probe(
    engine: CollisionEngine,
    pert: MixtureState,
    basis: KernelBasis,
    table: CollisionFrequencyTable | None = None,
) -> tuple[float, float]:
    """(⟨f, L f⟩, Σ_i ∫ ⟨v⟩^γ |(I - P_L) f|²)."""
    pert.require_perturbation()
    lf = apply_L(engine, pert, table)
    dirichlet = inner(pert.values, lf, engine.grid.cell_volume)
    _, micro = project_PL(pert, basis)
    bracket = (1.0 + engine.grid.speeds ** 2) ** (0.5 * engine.kernel.gamma)
    micro_norm = inner(micro, micro * bracket[None, :], engine.grid.cell_volume)
    return dirichlet, micro_norm


def random_perturbation(engine: CollisionEngine, rng: np.random.Generator, micro_only: bool = False,
                        basis: KernelBasis | None = None) -> MixtureState:
    """f aleatória com decaimento gaussiano suave (√μ·ruído), opcionalmente sem parte macro."""
    noise = rng.standard_normal((engine.n_species, engine.grid.node_count))
    pert = MixtureState(
        species=engine.species, grid=engine.grid,
        values=noise * engine.sqrt_mu ** 0.5, mode=StateMode.PERTURBATION,
    )
    if micro_only:
        _, micro = project_PL(pert, basis)
        pert = pert.with_values(micro)
    return pert


def estimate_coercivity(
    engine: CollisionEngine,
    basis: KernelBasis,
    rng: np.random.Generator,
    samples: int = 8,
    table: CollisionFrequencyTable | None = None,
) -> CoercivityEstimate:
    """λ̂_L = min sobre amostras micro de -⟨f, Lf⟩ / ‖(I - P_L) f‖²."""
    table = table or build_nu(engine)
    ratios, dirichlets = [], []
    for _ in range(samples):
        pert = random_perturbation(engine, rng, micro_only=True, basis=basis)
        dirichlet, micro_norm = coercivity_probe(engine, pert, basis, table)
        dirichlets.append(dirichlet)
        ratios.append(-dirichlet / micro_norm)
    estimate = CoercivityEstimate(lambda_hat=float(min(ratios)), max_dirichlet=float(max(dirichlets)), samples=samples)
    logger.info("[Coercividade] λ̂_L=%.4g em %d amostras", estimate.lambda_hat, samples)
    return estimate


def kernel_residuals(engine: CollisionEngine, basis: KernelBasis, table: CollisionFrequencyTable | None = None) -> np.ndarray:
    """‖L φ_k‖_{L²} para cada direção do núcleo."""
    table = table or build_nu(engine)
    out = np.empty(basis.size)
    for k in range(basis.size):
        phi = MixtureState(species=engine.species, grid=engine.grid, values=basis.vectors[k], mode=StateMode.PERTURBATION)
        lphi = apply_L(engine, phi, table)
        out[k] = np.sqrt(inner(lphi, lphi, engine.grid.cell_volume))
    return out


def weighted_k_bound(engine: CollisionEngine, weight: WeightSpec) -> np.ndarray:
    """
    max_v w(v)|K_i(f)| para f_j = 1/w (‖wf‖_∞ = 1): métrica de limitação de K em
    normas com peso, apenas reportada.
    """
    w = velocity_weight(weight, engine.grid.nodes)
    pert = MixtureState(
        species=engine.species, grid=engine.grid,
        values=np.tile(1.0 / w, (engine.n_species, 1)), mode=StateMode.PERTURBATION,
    )
    return np.array([np.max(w * np.abs(apply_K(engine, pert, i))) for i in range(engine.n_species)])
