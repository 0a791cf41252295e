# linearized/basis.py
"""
Base do núcleo de L (N+4 direções) e projeção P_L.

  φ_i     = √μ_i e_i / √n_i                                  (i = 1..N)
  φ_{N+k} = v_k Σ_j m_j √μ_j e_j / (Σ_j m_j n_j)^{1/2}         (k = 1, 2, 3)
  φ_{N+4} = Σ_j (|v|² - 3/m_j)/√6 · m_j √μ_j e_j / (Σ_j n_j)^{1/2}
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from collision.state import MixtureState
from quadrature.grids import VelocityGrid
from species.maxwellian import sqrt_maxwellian
from species.params import SpeciesParams


@dataclass(frozen=True, eq=False)
class KernelBasis:
    vectors: np.ndarray  # (N+4, N, n_nodes)
    gram: np.ndarray  # (N+4, N+4)
    cell_volume: float

    @property
    def size(self) -> int:
        return self.vectors.shape[0]


def inner(f: np.ndarray, g: np.ndarray, cell_volume: float) -> float:
    """⟨f, g⟩ = Σ_i ∫ f_i g_i dv."""
    return float(np.sum(f * g)) * cell_volume


def build_basis(species: Sequence[SpeciesParams], grid: VelocityGrid) -> KernelBasis:
    nodes = grid.nodes
    n = len(species)
    sq = np.einsum("nk,nk->n", nodes, nodes)
    root = np.stack([sqrt_maxwellian(s, nodes) for s in species])
    masses = np.array([s.mass for s in species])
    densities = np.array([s.eq_density for s in species])

    vectors = np.zeros((n + 4, n, grid.node_count))
    for i in range(n):
        vectors[i, i] = root[i] / np.sqrt(densities[i])
    momentum_norm = np.sqrt(np.sum(masses * densities))
    for k in range(3):
        vectors[n + k] = nodes[:, k][None, :] * masses[:, None] * root / momentum_norm
    energy_norm = np.sqrt(np.sum(densities))
    vectors[n + 3] = (
        (sq[None, :] - 3.0 / masses[:, None]) / np.sqrt(6.0) * masses[:, None] * root / energy_norm
    )

    flat = vectors.reshape(n + 4, -1)
    gram = flat @ flat.T * grid.cell_volume
    return KernelBasis(vectors=vectors, gram=gram, cell_volume=grid.cell_volume)


def macro_coefficients(values: np.ndarray, basis: KernelBasis) -> np.ndarray:
    """Coeficientes da projeção ortogonal discreta (Gram exata da malha)."""
    flat = basis.vectors.reshape(basis.size, -1)
    moments = flat @ values.ravel() * basis.cell_volume
    return np.linalg.solve(basis.gram, moments)


def project_PL(pert: MixtureState, basis: KernelBasis) -> tuple[np.ndarray, np.ndarray]:
    """
    macro = Σ_kl φ_k (G⁻¹)_kl ⟨f, φ_l⟩, micro = f - macro.

    Com G = identidade isto é Σ ⟨f, φ_k⟩ φ_k; usar a Gram da malha torna a projeção
    idempotente e simétrica até o arredondamento.
    """
    pert.require_perturbation()
    coeffs = macro_coefficients(pert.values, basis)
    macro = np.tensordot(coeffs, basis.vectors, axes=1)
    return macro, pert.values - macro
