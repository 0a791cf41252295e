# species/maxwellian.py
from __future__ import annotations

from typing import Sequence

import numpy as np

from .params import SpeciesParams, WeightSpec


def maxwellian(species: SpeciesParams, v) -> np.ndarray | float:
    """μ_i(v) = n_i (m_i/2π)^{3/2} exp(-m_i|v|²/2), com k_B = T = 1 e velocidade média nula."""
    v = np.asarray(v, dtype=float)
    sq = np.einsum("...k,...k->...", v, v)
    out = species.eq_density * (species.mass / (2.0 * np.pi)) ** 1.5 * np.exp(-0.5 * species.mass * sq)
    return float(out) if out.ndim == 0 else out


def sqrt_maxwellian(species: SpeciesParams, v) -> np.ndarray | float:
    v = np.asarray(v, dtype=float)
    sq = np.einsum("...k,...k->...", v, v)
    out = np.sqrt(species.eq_density) * (species.mass / (2.0 * np.pi)) ** 0.75 * np.exp(-0.25 * species.mass * sq)
    return float(out) if out.ndim == 0 else out


def shifted_maxwellian(species: SpeciesParams, v, density: float, bulk, temperature: float = 1.0) -> np.ndarray:
    """Maxwelliana local n (m/2πT)^{3/2} exp(-m|v-u|²/2T)."""
    v = np.asarray(v, dtype=float)
    d = v - np.asarray(bulk, dtype=float)
    sq = np.einsum("...k,...k->...", d, d)
    m = species.mass
    return density * (m / (2.0 * np.pi * temperature)) ** 1.5 * np.exp(-0.5 * m * sq / temperature)


def maxwellian_table(species: Sequence[SpeciesParams], nodes: np.ndarray) -> np.ndarray:
    """(N, n_nodes) com μ_i nos nós."""
    return np.stack([maxwellian(s, nodes) for s in species])


def velocity_weight(weight: WeightSpec, v) -> np.ndarray | float:
    """w(v) = (1+|v|²)^{q/2}."""
    v = np.asarray(v, dtype=float)
    out = (1.0 + np.einsum("...k,...k->...", v, v)) ** (0.5 * weight.q)
    return float(out) if out.ndim == 0 else out
