# quadrature/grids.py
"""
Malha cartesiana truncada em velocidade.

Nós centrados nas células: v_k = -L + (k + 1/2)h, h = 2L/n, de modo que o conjunto
de nós é simétrico (o nó de -v é o espelhado do nó de v) e nenhum nó cai em v = 0.
A ordem dos nós achatados é C (x, y, z).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import ndimage

from core.exceptions import GridMismatchError, InvalidParameterError
from core.parallel import parallel_sum

Evaluator = Callable[[np.ndarray], np.ndarray]

DEFAULT_HALF_WIDTH = 8.0


@dataclass(frozen=True, eq=False)
class VelocityGrid:
    half_width: float = DEFAULT_HALF_WIDTH
    points_per_axis: int = 32

    def __post_init__(self):
        if not self.half_width > 0:
            raise InvalidParameterError(f"half_width deve ser positivo (recebido {self.half_width!r}).")
        if self.points_per_axis < 8 or self.points_per_axis % 2:
            raise InvalidParameterError(
                f"points_per_axis deve ser par e >= 8 (recebido {self.points_per_axis!r})."
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing ** 3

    @property
    def node_count(self) -> int:
        return self.points_per_axis ** 3

    @property
    def shape(self) -> tuple[int, int, int]:
        n = self.points_per_axis
        return (n, n, n)

    @cached_property
    def axis(self) -> np.ndarray:
        h = self.spacing
        return -self.half_width + (np.arange(self.points_per_axis) + 0.5) * h

    @cached_property
    def nodes(self) -> np.ndarray:
        vx, vy, vz = np.meshgrid(self.axis, self.axis, self.axis, indexing="ij")
        return np.stack([vx.ravel(), vy.ravel(), vz.ravel()], axis=1)

    @cached_property
    def speeds(self) -> np.ndarray:
        return np.linalg.norm(self.nodes, axis=1)

    def check_values(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.shape[-1] != self.node_count:
            raise GridMismatchError(
                f"Esperado {self.node_count} valores por nó, recebido {values.shape[-1]}."
            )
        return values

    def reflect(self, values: np.ndarray) -> np.ndarray:
        """Valores em -v (últimos eixos são os nós)."""
        values = self.check_values(values)
        cube = values.reshape(values.shape[:-1] + self.shape)
        return cube[..., ::-1, ::-1, ::-1].reshape(values.shape)

    def interpolate(self, values: np.ndarray, points: np.ndarray, extend: str = "zero") -> np.ndarray:
        """
        Interpolação trilinear em pontos fora da malha.

        extend="zero": fora dos nós a malha é estendida com zeros; extend="nearest":
        repete o nó de borda mais próximo. Em ambos os casos o resultado é
        combinação convexa de valores nodais, logo preserva positividade.
        """
        values = self.check_values(values)
        points = np.asarray(points, dtype=float)
        coords = (points.reshape(-1, 3).T - self.axis[0]) / self.spacing
        out = ndimage.map_coordinates(
            values.reshape(self.shape),
            coords,
            order=1,
            mode="grid-constant" if extend == "zero" else "nearest",
            cval=0.0,
            prefilter=False,
        )
        return out.reshape(points.shape[:-1])

    def interpolate_quadratic(self, values: np.ndarray, points: np.ndarray) -> np.ndarray:
        """
        Lagrange quadrático por eixo (27 nós em torno do nó mais próximo, estêncil
        recuado para dentro na borda). Reproduz exatamente todo polinômio de grau
        <= 2 em cada eixo, inclusive fora da malha (extrapolação); não preserva sinal.
        """
        values = self.check_values(values)
        points = np.asarray(points, dtype=float)
        flat = points.reshape(-1, 3)
        coords = (flat - self.axis[0]) / self.spacing
        centre = np.clip(np.rint(coords), 1, self.points_per_axis - 2).astype(np.intp)
        t = coords - centre
        # pesos nos nós -1, 0, +1 de cada eixo: (3, n_pontos, 3)
        weights = np.stack([0.5 * t * (t - 1.0), (1.0 - t) * (1.0 + t), 0.5 * t * (t + 1.0)])
        cube = values.reshape(self.shape)
        out = np.zeros(len(flat))
        for a in range(3):
            ix = centre[:, 0] + a - 1
            for b in range(3):
                iy = centre[:, 1] + b - 1
                wab = weights[a, :, 0] * weights[b, :, 1]
                for c in range(3):
                    out += wab * weights[c, :, 2] * cube[ix, iy, centre[:, 2] + c - 1]
        return out.reshape(points.shape[:-1])

    def interpolator(self, values: np.ndarray, extend: str = "zero") -> Evaluator:
        values = self.check_values(values).copy()
        return lambda points: self.interpolate(values, points, extend)

    def quadratic_interpolator(self, values: np.ndarray) -> Evaluator:
        values = self.check_values(values).copy()
        return lambda points: self.interpolate_quadratic(values, points)


def grid_integral(grid: VelocityGrid, values: np.ndarray, workers: int | None = None) -> float:
    """Σ values · h³ com redução de árvore fixa."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size != grid.node_count:
        raise GridMismatchError(
            f"grid_integral espera {grid.node_count} valores, recebido shape {values.shape}."
        )
    return parallel_sum(values, workers) * grid.cell_volume


def integrate_nodes(grid: VelocityGrid, values: np.ndarray) -> np.ndarray:
    """Integral sobre o último eixo (nós), para arrays (..., n_nodes)."""
    values = grid.check_values(values)
    return values.sum(axis=-1) * grid.cell_volume
