# collision/engine.py
"""
Motor de quadratura das integrais de colisão.

Para cada par (v, v_*) a regra esférica é girada para o referencial de
û = (v - v_*)/|v - v_*|: o cosseno de desvio coincide com os nós polares da regra
e ∫ b dσ é integrado exatamente. Em v = v_* usa-se û = e_z.

As integrais são somas sobre (nó de saída a, parceiro b, direção k) em blocos de
linhas de tamanho fixo; cada bloco reduz com np.sum e os blocos são concatenados
em ordem (determinístico para qualquer número de workers).
"""
from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from django.conf import settings

from core.exceptions import InvalidParameterError
from core.parallel import chunk_slices, map_chunks, resolve_workers, rows_per_chunk
from quadrature.grids import Evaluator, VelocityGrid
from quadrature.sphere import SphereRule, aligned_directions
from species.maxwellian import maxwellian, maxwellian_table, sqrt_maxwellian
from species.params import KernelSpec, SpeciesParams

logger = logging.getLogger(__name__)

E_Z = np.array([0.0, 0.0, 1.0])


class CollisionEngine:
    def __init__(
        self,
        species: Sequence[SpeciesParams],
        kernel: KernelSpec,
        grid: VelocityGrid,
        rule: SphereRule,
        workers: int | None = None,
    ):
        if kernel.n_species != len(species):
            raise InvalidParameterError(
                f"KernelSpec tem {kernel.n_species} espécies, mas foram dadas {len(species)}."
            )
        self.species = tuple(species)
        self.kernel = kernel
        self.grid = grid
        self.rule = rule
        self.workers = resolve_workers(workers)
        self.masses = np.array([s.mass for s in self.species])
        self.mu = maxwellian_table(self.species, grid.nodes)
        self.sqrt_mu = np.stack([sqrt_maxwellian(s, grid.nodes) for s in self.species])
        self._angular = {
            (i, j): rule.weights * kernel.angular_fn(i, j)(rule.cos_polar)
            for i in range(self.n_species)
            for j in range(self.n_species)
        }
        logger.debug(
            "[Engine] N=%d, malha %d³ (L=%.3g), regra %d×%d, gamma=%.3g, workers=%d",
            self.n_species, grid.points_per_axis, grid.half_width,
            rule.n_polar, rule.n_azimuth, kernel.gamma, self.workers,
        )

    @property
    def n_species(self) -> int:
        return len(self.species)

    def pairs(self):
        for i in range(self.n_species):
            for j in range(self.n_species):
                yield i, j

    def angular_mass(self, i: int, j: int) -> float:
        """∫ b_ij(cosθ) dσ pela regra (exato para os perfis disponíveis)."""
        return float(np.sum(self._angular[(i, j)]))

    # ---------- Campos fora da malha ----------
    def physical_field(self, i: int, values: np.ndarray) -> Evaluator:
        """
        x -> μ_i(x)·I₁[F_i/μ_i](x), I₁ trilinear com extensão pelo nó de borda.

        Exato para F_i = c·μ_i (logo Q(μ, μ) = 0 até arredondamento) e >= 0 para F_i >= 0.
        """
        s = self.species[i]
        ratio = np.divide(values, self.mu[i], out=np.zeros(self.grid.node_count), where=self.mu[i] > 0)
        interp = self.grid.interpolator(ratio, extend="nearest")
        return lambda x: maxwellian(s, x) * interp(x)

    def perturbation_field(self, i: int, f_values: np.ndarray) -> Evaluator:
        """
        x -> √μ_i(x)·I₂[f_i/√μ_i](x), I₂ Lagrange quadrático por eixo.

        Exato para f_i = √μ_i·φ com φ polinômio de grau <= 2 por eixo (invariantes de colisão).
        """
        s = self.species[i]
        root = self.sqrt_mu[i]
        ratio = np.divide(f_values, root, out=np.zeros(self.grid.node_count), where=root > 0)
        interp = self.grid.quadratic_interpolator(ratio)
        return lambda x: sqrt_maxwellian(s, x) * interp(x)

    def maxwellian_field(self, i: int) -> Evaluator:
        s = self.species[i]
        return lambda x: maxwellian(s, x)

    def sqrt_maxwellian_field(self, i: int) -> Evaluator:
        s = self.species[i]
        return lambda x: sqrt_maxwellian(s, x)

    def lifted_field(self, i: int, f_values: np.ndarray) -> Evaluator:
        """x -> √μ_i(x)·f̂_i(x), com f̂_i = perturbation_field(i, f_i)."""
        s = self.species[i]
        field = self.perturbation_field(i, f_values)
        return lambda x: sqrt_maxwellian(s, x) * field(x)

    # ---------- Geometria ----------
    def pair_geometry(self, i: int, j: int, points: np.ndarray, partners: slice = slice(None)):
        """
        Para pontos v (A, 3) contra os nós v_* (B) do recorte `partners`: pesos
        C^Φ|v-v_*|^γ w_k b(t_k) (A, B, K) e as velocidades pós-colisão v', v'_* (A, B, K, 3).
        """
        nodes = self.grid.nodes[partners]
        z = points[:, None, :] - nodes[None, :, :]
        r = np.linalg.norm(z, axis=-1)
        positive = r > 0
        safe = np.where(positive, r, 1.0)
        u_hat = np.where(positive[..., None], z / safe[..., None], E_Z)
        sigma = aligned_directions(self.rule, u_hat)

        m_i, m_j = self.masses[i], self.masses[j]
        total = m_i + m_j
        center = ((m_i * points[:, None, :] + m_j * nodes[None, :, :]) / total)[:, :, None, :]
        reach = r[:, :, None, None] * sigma
        v_prime = center + (m_j / total) * reach
        v_star_prime = center - (m_i / total) * reach
        weights = self.kernel.kinetic(i, j, r)[:, :, None] * self._angular[(i, j)]
        return weights, v_prime, v_star_prime

    def _blocks(self, n_points: int, per_row: int) -> list[slice]:
        return chunk_slices(n_points, rows_per_chunk(per_row))

    def _partner_blocks(self) -> list[slice]:
        """Recortes de v_* para que uma única linha caiba num bloco."""
        return chunk_slices(self.grid.node_count, rows_per_chunk(self.rule.size))

    # ---------- Integrais ----------
    def gain(
        self,
        i: int,
        j: int,
        field_i: Evaluator,
        field_j: Evaluator,
        star_weight: np.ndarray | None = None,
        points: np.ndarray | None = None,
    ) -> np.ndarray:
        """
        Σ_{v_*} Σ_σ B_ij · field_i(v') · field_j(v'_*) · star_weight(v_*) · h³
        nos pontos pedidos (por padrão, todos os nós).
        """
        points = self.grid.nodes if points is None else np.atleast_2d(np.asarray(points, dtype=float))
        inner = self.grid.node_count * self.rule.size

        def block(rows: slice) -> np.ndarray:
            total = 0.0
            for cols in self._partner_blocks():
                weights, v_prime, v_star_prime = self.pair_geometry(i, j, points[rows], cols)
                vals = weights * field_i(v_prime) * field_j(v_star_prime)
                if star_weight is not None:
                    vals = vals * star_weight[None, cols, None]
                total = total + vals.sum(axis=(1, 2))
            return total

        parts = map_chunks(block, self._blocks(len(points), inner), self.workers)
        return np.concatenate(parts) * self.grid.cell_volume

    def rate(self, i: int, j: int, partner: np.ndarray, points: np.ndarray | None = None) -> np.ndarray:
        """Σ_{v_*} ∫ B_ij dσ · partner(v_*) · h³ (a integral de perda sem o fator F_i(v))."""
        points = self.grid.nodes if points is None else np.atleast_2d(np.asarray(points, dtype=float))
        nodes = self.grid.nodes
        partner = np.asarray(partner, dtype=float)

        def block(rows: slice) -> np.ndarray:
            r = np.linalg.norm(points[rows][:, None, :] - nodes[None, :, :], axis=-1)
            return (self.kernel.kinetic(i, j, r) * partner[None, :]).sum(axis=1)

        parts = map_chunks(block, self._blocks(len(points), self.grid.node_count), self.workers)
        return np.concatenate(parts) * self.angular_mass(i, j) * self.grid.cell_volume

    def production(self, i: int, j: int, f_i: np.ndarray, f_j: np.ndarray) -> float:
        """
        Σ_{v, v_*, σ} B_ij (F'_i F'_{j*} - F_i F_{j*}) log(F_i F_{j*} / F'_i F'_{j*}) · h⁶.

        Logaritmos com piso KINETIC_LOG_FLOOR fator a fator; cada termo é <= 0.
        """
        return self.production_terms(i, j, f_i, f_j)[0]

    def production_terms(self, i: int, j: int, f_i: np.ndarray, f_j: np.ndarray) -> tuple[float, float]:
        """
        (soma de production, Σ B (|F'F'_*| + |FF_*|)(|log pré| + |log pós|) h⁶): a segunda
        parcela mede o arredondamento que a soma consegue resolver.
        """
        floor = getattr(settings, "KINETIC_LOG_FLOOR", 1e-300)
        nodes = self.grid.nodes
        field_i = self.physical_field(i, f_i)
        field_j = self.physical_field(j, f_j)
        log_i = np.log(np.maximum(f_i, floor))
        log_j = np.log(np.maximum(f_j, floor))
        inner = self.grid.node_count * self.rule.size

        def block(rows: slice) -> tuple[float, float]:
            total, scale = 0.0, 0.0
            for cols in self._partner_blocks():
                weights, v_prime, v_star_prime = self.pair_geometry(i, j, nodes[rows], cols)
                post_i = field_i(v_prime)
                post_j = field_j(v_star_prime)
                post = post_i * post_j
                pre = (f_i[rows][:, None] * f_j[None, cols])[:, :, None]
                log_pre = (log_i[rows][:, None] + log_j[None, cols])[:, :, None]
                log_post = np.log(np.maximum(post_i, floor)) + np.log(np.maximum(post_j, floor))
                total += float(np.sum(weights * (post - pre) * (log_pre - log_post)))
                scale += float(np.sum(np.abs(weights) * (np.abs(post) + np.abs(pre)) * (np.abs(log_pre) + np.abs(log_post))))
            return total, scale

        parts = np.asarray(map_chunks(block, self._blocks(self.grid.node_count, inner), self.workers))
        volume = self.grid.cell_volume ** 2
        return float(np.sum(parts[:, 0])) * volume, float(np.sum(parts[:, 1])) * volume
