# collision/carleman.py
"""
Ganho na forma de Carleman (massas distintas) e sua validação contra a forma σ.

  ∬ B f(v') g(v'_*) dσ dv_* = C ∫ dv'_* g(v'_*)/|v - v'_*| ∫_Ẽ dE(v') B(v - V, σ̂)/|v' - v'_*| f(v')

com V = v'_* + (m_i/m_j)(v' - v), σ̂ = (v' - v'_*)/|v' - v'_*| e Ẽ a esfera de
centro O e raio R (species.carleman). A integral de fora usa os nós da malha,
a de dentro a regra esférica escalada (dE = R² dσ).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from core.exceptions import DegenerateMassError
from core.parallel import chunk_slices, map_chunks, rows_per_chunk
from quadrature.grids import Evaluator
from species.carleman import carleman_constant, masses_coincide, sphere_geometry

from .engine import CollisionEngine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CarlemanCalibration:
    i: int
    j: int
    constant: float  # ajustada
    analytic: float  # ((m_i + m_j)/m_j)²
    at: np.ndarray

    @property
    def relative_gap(self) -> float:
        return abs(self.constant - self.analytic) / self.analytic


def _require_distinct(engine: CollisionEngine, i: int, j: int) -> tuple[float, float]:
    m_i, m_j = float(engine.masses[i]), float(engine.masses[j])
    if masses_coincide(m_i, m_j):
        raise DegenerateMassError(m_i, m_j)
    return m_i, m_j


def carleman_integral(engine: CollisionEngine, field_i: Evaluator, field_j: Evaluator, i: int, j: int, v) -> float:
    """Integral de Carleman sem a constante C."""
    m_i, m_j = _require_distinct(engine, i, j)
    v = np.asarray(v, dtype=float)
    outer = engine.grid.nodes
    gap = np.linalg.norm(v[None, :] - outer, axis=1)
    keep = gap > 1e-14  # R = 0: esfera colapsa, medida nula
    outer, gap = outer[keep], gap[keep]
    rule = engine.rule
    angular = engine.kernel.angular_fn(i, j)

    def block(part: slice) -> float:
        nodes = outer[part]
        center, radius = sphere_geometry(v[None, :], nodes, m_i, m_j)
        v_prime = center[:, None, :] + radius[:, None, None] * rule.nodes[None, :, :]
        rel_post = v_prime - nodes[:, None, :]
        rho = np.linalg.norm(rel_post, axis=-1)
        sigma_hat = rel_post / rho[..., None]

        big_v = nodes[:, None, :] + (m_i / m_j) * (v_prime - v)
        z = v - big_v
        z_norm = np.linalg.norm(z, axis=-1)
        cos = np.einsum("bkc,bkc->bk", z, sigma_hat) / z_norm
        kernel = engine.kernel.kinetic(i, j, z_norm) * angular(cos)

        inner = (rule.weights * radius[:, None] ** 2) * kernel / rho * field_i(v_prime)
        return float(np.sum(field_j(nodes) / gap[part] * inner.sum(axis=1)))

    parts = map_chunks(block, chunk_slices(len(outer), rows_per_chunk(rule.size)), engine.workers)
    return float(np.sum(np.asarray(parts))) * engine.grid.cell_volume


def direct_gain(engine: CollisionEngine, field_i: Evaluator, field_j: Evaluator, i: int, j: int, v) -> float:
    points = np.asarray(v, dtype=float).reshape(1, 3)
    return float(engine.gain(i, j, field_i, field_j, points=points)[0])


def calibrate_carleman(engine: CollisionEngine, field_i: Evaluator, field_j: Evaluator, i: int, j: int, v=None) -> CarlemanCalibration:
    """Ajuste de C num ponto (padrão v = 0): C = ganho direto / integral de Carleman."""
    m_i, m_j = _require_distinct(engine, i, j)
    v = np.zeros(3) if v is None else np.asarray(v, dtype=float)
    direct = direct_gain(engine, field_i, field_j, i, j, v)
    raw = carleman_integral(engine, field_i, field_j, i, j, v)
    constant = direct / raw
    analytic = carleman_constant(m_i, m_j)
    logger.info("[Carleman] par (%d,%d): C ajustada=%.6g, analítica=%.6g", i, j, constant, analytic)
    return CarlemanCalibration(i=i, j=j, constant=constant, analytic=analytic, at=v)


def gain_carleman(
    engine: CollisionEngine,
    field_i: Evaluator,
    field_j: Evaluator,
    i: int,
    j: int,
    v,
    calibration: CarlemanCalibration | None = None,
) -> float:
    """Q_ij^+(f_i, f_j)(v) pela forma de Carleman; sem calibração usa a constante analítica."""
    m_i, m_j = _require_distinct(engine, i, j)
    constant = calibration.constant if calibration is not None else carleman_constant(m_i, m_j)
    return constant * carleman_integral(engine, field_i, field_j, i, j, v)


# ---------- Sonda de decaimento do núcleo de ganho ----------
def decay_probe_integral(speed: float, m_i: float, m_j: float) -> float:
    """
    I(v) = ∫ |m_i v - m_j v'_*|^{-5/2} (1 + |v'_*|)^{-1} dv'_*, reduzida a 1D.

    Com u = m_j v'_* centrado em a = m_i v e s = t², I = 2 m_j^{-3} ∫_0^∞ Ang(t²) dt, onde
    Ang(s) é a média angular exata de 1/(1 + |a + sω|/m_j).
    """
    a = m_i * abs(speed)

    def primitive(rho):
        return m_j * (rho - m_j * np.log1p(rho / m_j))

    def angular(s: float) -> float:
        if a < 1e-12:
            return 4.0 * np.pi / (1.0 + s / m_j)
        return (2.0 * np.pi / (a * s)) * (primitive(a + s) - primitive(abs(a - s)))

    def integrand(t: float) -> float:
        s = t * t
        if s == 0.0:
            return 4.0 * np.pi / (1.0 + a / m_j)
        return angular(s)

    breaks = [np.sqrt(a)] if a > 0 else None
    head, _ = integrate.quad(integrand, 0.0, max(1.0, 2.0 * np.sqrt(a)), points=breaks, limit=200)
    tail, _ = integrate.quad(integrand, max(1.0, 2.0 * np.sqrt(a)), np.inf, limit=200)
    return 2.0 * (head + tail) / m_j ** 3


def decay_probe(m_i: float, m_j: float, speeds=(1.0, 2.0, 4.0, 8.0, 16.0)) -> dict[float, float]:
    """|v| -> I(v)·(1 + |v|)^{1/2}; a cota é o máximo desses valores."""
    return {float(s): decay_probe_integral(s, m_i, m_j) * np.sqrt(1.0 + s) for s in speeds}
