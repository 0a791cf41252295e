# collision/state.py
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from django.db import models

from core.exceptions import GridMismatchError, ModeError
from quadrature.grids import VelocityGrid
from species.maxwellian import maxwellian_table
from species.params import SpeciesParams


class StateMode(models.TextChoices):
    PHYSICAL     = "physical",     "Distribuição F"
    PERTURBATION = "perturbation", "Perturbação f = (F - μ)/√μ"


@dataclass(frozen=True, eq=False)
class MixtureState:
    """
    Valores por espécie e por nó.

    - homogêneo: values com shape (N, n_nodes)
    - toro 1D:   values com shape (cells, N, n_nodes)
    """
    species: tuple[SpeciesParams, ...]
    grid: VelocityGrid
    values: np.ndarray
    mode: str = StateMode.PHYSICAL

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim not in (2, 3):
            raise GridMismatchError(f"values deve ter 2 ou 3 eixos (recebido {values.ndim}).")
        if values.shape[-2] != len(self.species):
            raise GridMismatchError(
                f"values tem {values.shape[-2]} espécies, esperado {len(self.species)}."
            )
        self.grid.check_values(values)

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def masses(self) -> np.ndarray:
        return np.array([s.mass for s in self.species])

    @property
    def spatial(self) -> bool:
        return self.values.ndim == 3

    @property
    def cells(self) -> int:
        return self.values.shape[0] if self.spatial else 1

    def cell(self, c: int) -> "MixtureState":
        if not self.spatial:
            return self
        return replace(self, values=self.values[c])

    def with_values(self, values: np.ndarray) -> "MixtureState":
        return replace(self, values=values)

    def require_physical(self) -> None:
        if self.mode != StateMode.PHYSICAL:
            raise ModeError("Operação exige estado físico (F), recebido modo perturbação.")
        if np.any(self.values < 0):
            raise ModeError(
                f"Estado físico com valores negativos (mínimo {self.values.min():.3e})."
            )

    def require_perturbation(self) -> None:
        if self.mode != StateMode.PERTURBATION:
            raise ModeError("Operação exige estado de perturbação (f), recebido modo físico.")


@dataclass(frozen=True)
class CollisionTally:
    gain: np.ndarray  # (N, n_nodes)
    loss: np.ndarray  # (N, n_nodes)

    @property
    def net(self) -> np.ndarray:
        return self.gain - self.loss


def equilibrium_state(species: Sequence[SpeciesParams], grid: VelocityGrid, cells: int | None = None) -> MixtureState:
    mu = maxwellian_table(species, grid.nodes)
    if cells:
        mu = np.broadcast_to(mu, (cells,) + mu.shape).copy()
    return MixtureState(species=tuple(species), grid=grid, values=mu)


def zero_perturbation(species: Sequence[SpeciesParams], grid: VelocityGrid) -> MixtureState:
    return MixtureState(
        species=tuple(species),
        grid=grid,
        values=np.zeros((len(species), grid.node_count)),
        mode=StateMode.PERTURBATION,
    )
