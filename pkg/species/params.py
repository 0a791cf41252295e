# species/params.py
"""
Parâmetros das espécies e do núcleo de colisão B_ij(z, σ) = C^Φ_ij |z|^γ b_ij(cosθ).

Índices de espécie são 0..N-1 no código (1..N só nos nomes de colunas do CSV).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from core.exceptions import InvalidParameterError

AngularProfile = Callable[[np.ndarray], np.ndarray]

# Perfis angulares disponíveis (todos satisfazem 0 <= b(t) <= C^b |t|)
ANGULAR_PROFILES: dict[str, AngularProfile] = {
    "abs_cos": lambda t: np.abs(t),
    "cos_squared": lambda t: t * t,
    "forward_cos": lambda t: 2.0 * np.maximum(t, 0.0),
}

DEFAULT_ANGULAR = "abs_cos"
DEFAULT_Q = 5.0


@dataclass(frozen=True)
class SpeciesParams:
    mass: float
    eq_density: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.mass) or self.mass <= 0:
            raise InvalidParameterError(f"Massa deve ser positiva (recebido {self.mass!r}).")
        if not np.isfinite(self.eq_density) or self.eq_density <= 0:
            raise InvalidParameterError(f"Densidade de equilíbrio deve ser positiva (recebido {self.eq_density!r}).")


@dataclass(frozen=True)
class WeightSpec:
    q: float = DEFAULT_Q

    def __post_init__(self):
        if not self.q > 4:
            raise InvalidParameterError(f"Expoente do peso deve ser > 4 (recebido {self.q!r}).")


@dataclass(frozen=True)
class CollisionPair:
    i: int
    j: int
    v: np.ndarray
    v_star: np.ndarray

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise InvalidParameterError("Índices de espécie começam em 0.")
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        object.__setattr__(self, "v_star", np.asarray(self.v_star, dtype=float))


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """
    Dados do núcleo por par de espécies.

    - c_phi: matriz N×N simétrica, positiva (zero só com `collisionless=True`,
      usado no modo de transporte puro).
    - angular: nome do perfil padrão; `pair_angular` sobrescreve por par (i, j),
      sempre de forma simétrica.
    """
    gamma: float
    c_phi: np.ndarray
    angular: str = DEFAULT_ANGULAR
    c_b: float = 1.0
    pair_angular: Mapping[tuple[int, int], str] = field(default_factory=dict)
    collisionless: bool = False

    def __post_init__(self):
        c_phi = np.array(self.c_phi, dtype=float)
        if c_phi.ndim == 0:
            c_phi = c_phi.reshape(1, 1)
        object.__setattr__(self, "c_phi", c_phi)

        if not (0.0 <= self.gamma <= 1.0):
            raise InvalidParameterError(f"gamma deve estar em [0, 1] (recebido {self.gamma!r}).")
        if c_phi.ndim != 2 or c_phi.shape[0] != c_phi.shape[1]:
            raise InvalidParameterError("c_phi deve ser uma matriz quadrada N×N.")
        if not np.allclose(c_phi, c_phi.T, rtol=0.0, atol=0.0):
            raise InvalidParameterError("c_phi deve ser simétrica.")
        if self.collisionless:
            if np.any(c_phi < 0):
                raise InvalidParameterError("c_phi não pode ser negativa.")
        elif np.any(c_phi <= 0):
            raise InvalidParameterError("c_phi deve ser estritamente positiva.")
        if not self.c_b > 0:
            raise InvalidParameterError("c_b deve ser positivo.")

        # normaliza sobrescritas para as duas ordens do par
        pairs: dict[tuple[int, int], str] = {}
        for (i, j), name in dict(self.pair_angular).items():
            pairs[(i, j)] = name
            pairs[(j, i)] = name
        object.__setattr__(self, "pair_angular", pairs)

        t = np.linspace(-1.0, 1.0, 2001)
        for name in {self.angular, *pairs.values()}:
            if name not in ANGULAR_PROFILES:
                raise InvalidParameterError(
                    f"Perfil angular '{name}' desconhecido (opções: {', '.join(sorted(ANGULAR_PROFILES))})."
                )
            b = ANGULAR_PROFILES[name](t)
            if np.any(b < 0) or np.any(b > self.c_b * np.abs(t) + 1e-14):
                raise InvalidParameterError(
                    f"Perfil '{name}' viola 0 <= b(t) <= c_b|t| com c_b={self.c_b:g}."
                )

    @classmethod
    def uniform(cls, n_species: int, gamma: float = 0.0, c_phi: float = 1.0, **kwargs) -> "KernelSpec":
        return cls(gamma=gamma, c_phi=np.full((n_species, n_species), float(c_phi)), **kwargs)

    @property
    def n_species(self) -> int:
        return self.c_phi.shape[0]

    def angular_name(self, i: int, j: int) -> str:
        return self.pair_angular.get((i, j), self.angular)

    def angular_fn(self, i: int, j: int) -> AngularProfile:
        return ANGULAR_PROFILES[self.angular_name(i, j)]

    def kinetic(self, i: int, j: int, r: np.ndarray) -> np.ndarray:
        """Parte cinética Φ_ij(|z|) = C^Φ_ij |z|^γ (|0|^0 = 1)."""
        r = np.asarray(r, dtype=float)
        if self.gamma == 0.0:
            return np.full(r.shape, self.c_phi[i, j])
        return self.c_phi[i, j] * r ** self.gamma

    def evaluate(self, i: int, j: int, z: np.ndarray, sigma: np.ndarray) -> np.ndarray:
        """B_ij(z, σ) para z, σ com shape (..., 3)."""
        z = np.asarray(z, dtype=float)
        sigma = np.asarray(sigma, dtype=float)
        r = np.linalg.norm(z, axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            cos = np.where(r > 0, np.einsum("...k,...k->...", z, sigma) / np.where(r > 0, r, 1.0), 1.0)
        return self.kinetic(i, j, r) * self.angular_fn(i, j)(cos)
