# species/invariants.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.exceptions import InvalidParameterError

from .params import SpeciesParams

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class CollisionInvariant:
    """ψ = (ψ_1, ..., ψ_N): kind em {mass, momentum, energy}; index = espécie ou eixo."""
    kind: str
    index: int = 0

    @property
    def label(self) -> str:
        if self.kind == "mass":
            return f"mass_{self.index + 1}"
        if self.kind == "momentum":
            return f"p{AXES[self.index]}"
        return "energy"

    @classmethod
    def parse(cls, text: str) -> "CollisionInvariant":
        """Aceita 'mass:1' (espécie 1-based), 'momentum:x' e 'energy'."""
        kind, _, arg = text.partition(":")
        kind = kind.strip().lower()
        if kind == "mass":
            try:
                return cls("mass", int(arg) - 1)
            except ValueError:
                raise InvalidParameterError(f"Invariante de massa precisa de índice: '{text}'.")
        if kind == "momentum":
            if arg not in AXES:
                raise InvalidParameterError(f"Eixo inválido em '{text}' (use x, y ou z).")
            return cls("momentum", AXES.index(arg))
        if kind == "energy":
            return cls("energy")
        raise InvalidParameterError(f"Invariante desconhecido: '{text}'.")

    def table(self, species: Sequence[SpeciesParams], nodes: np.ndarray) -> np.ndarray:
        n = len(species)
        out = np.zeros((n, nodes.shape[0]))
        if self.kind == "mass":
            if not 0 <= self.index < n:
                raise InvalidParameterError(f"Espécie {self.index + 1} inexistente.")
            out[self.index] = 1.0
        elif self.kind == "momentum":
            for i, s in enumerate(species):
                out[i] = s.mass * nodes[:, self.index]
        else:
            sq = np.einsum("nk,nk->n", nodes, nodes)
            for i, s in enumerate(species):
                out[i] = 0.5 * s.mass * sq
        return out


def all_invariants(n_species: int) -> list[CollisionInvariant]:
    """As N+4 funções: massas por espécie, três momentos e a energia."""
    return (
        [CollisionInvariant("mass", k) for k in range(n_species)]
        + [CollisionInvariant("momentum", a) for a in range(3)]
        + [CollisionInvariant("energy")]
    )


def invariant_tables(species: Sequence[SpeciesParams], nodes: np.ndarray) -> np.ndarray:
    """(N+4, N, n_nodes)."""
    return np.stack([inv.table(species, nodes) for inv in all_invariants(len(species))])
