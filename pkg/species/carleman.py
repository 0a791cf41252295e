# species/carleman.py
"""
Geometria da representação de Carleman para massas distintas.

Com v e v'_* fixos, v' percorre a esfera de centro O = (m_i v - m_j v'_*)/(m_i - m_j)
e raio R = m_j|v - v'_*|/|m_i - m_j|. Para m_i = m_j a esfera vira um hiperplano.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from django.conf import settings

from core.exceptions import DegenerateMassError


@dataclass(frozen=True)
class CarlemanSphere:
    center: np.ndarray | None
    radius: float | None
    degenerate: bool


def masses_coincide(m_i: float, m_j: float) -> bool:
    tol = getattr(settings, "KINETIC_MASS_TOLERANCE", 1e-9)
    return abs(m_i - m_j) <= tol * max(m_i, m_j)


def carleman_constant(m_i: float, m_j: float) -> float:
    """Constante da troca de variáveis (v_*, σ) -> (v', v'_*): ((m_i + m_j)/m_j)²."""
    return ((m_i + m_j) / m_j) ** 2


def sphere_geometry(v, v_star_prime, m_i: float, m_j: float) -> tuple[np.ndarray, np.ndarray]:
    """Versão vetorizada: (centros (..., 3), raios (...))."""
    if masses_coincide(m_i, m_j):
        raise DegenerateMassError(m_i, m_j)
    v = np.asarray(v, dtype=float)
    v_star_prime = np.asarray(v_star_prime, dtype=float)
    delta = m_i - m_j
    center = (m_i * v - m_j * v_star_prime) / delta
    radius = m_j * np.linalg.norm(v - v_star_prime, axis=-1) / abs(delta)
    return center, radius


def carleman_sphere(v, v_star_prime, m_i: float, m_j: float) -> CarlemanSphere:
    if masses_coincide(m_i, m_j):
        return CarlemanSphere(center=None, radius=None, degenerate=True)
    center, radius = sphere_geometry(v, v_star_prime, m_i, m_j)
    return CarlemanSphere(center=center, radius=float(radius), degenerate=False)


def _require_distinct_batch(m_i: np.ndarray, m_j: np.ndarray) -> None:
    tol = getattr(settings, "KINETIC_MASS_TOLERANCE", 1e-9)
    mi, mj = np.broadcast_arrays(m_i, m_j)
    coincide = np.abs(mi - mj) <= tol * np.maximum(mi, mj)
    if np.any(coincide):
        k = int(np.flatnonzero(coincide)[0])
        raise DegenerateMassError(float(mi.ravel()[k]), float(mj.ravel()[k]))


def exponent_terms(v, v_star_prime, m_i, m_j) -> np.ndarray:
    """
    Os cinco termos do lado esquerdo, (5, ...), com O e R pelas fórmulas da esfera:

    -(m_j/4)|v'_*|², (m_i/4)|v|², -(m_i/4)R², -(m_i/4)|O|², (m_i/2)R|O|
    """
    v = np.asarray(v, dtype=float)
    v_star_prime = np.asarray(v_star_prime, dtype=float)
    m_i = np.asarray(m_i, dtype=float)
    m_j = np.asarray(m_j, dtype=float)
    _require_distinct_batch(m_i, m_j)
    delta = (m_i - m_j)[..., None]
    center = (m_i[..., None] * v - m_j[..., None] * v_star_prime) / delta
    radius = m_j * np.linalg.norm(v - v_star_prime, axis=-1) / np.abs(m_i - m_j)
    center_norm = np.linalg.norm(center, axis=-1)
    return np.stack(np.broadcast_arrays(
        -0.25 * m_j * np.einsum("...k,...k->...", v_star_prime, v_star_prime),
        0.25 * m_i * np.einsum("...k,...k->...", v, v),
        -0.25 * m_i * radius ** 2,
        -0.25 * m_i * center_norm ** 2,
        0.5 * m_i * radius * center_norm,
    ))


def exponent_cancellation_batch(v, v_star_prime, m_i, m_j) -> tuple[np.ndarray, np.ndarray]:
    """
    Os dois lados da identidade, vetorizados (massas podem ser arrays).

    lhs = -(m_j/4)|v'_*|² + (m_i/4)|v|² - (m_i/4)R² - (m_i/4)|O|² + (m_i/2)R|O|
    rhs = -(m_j/4|m_i-m_j|²)(|m_i v - m_j v'_*| - m_i|v - v'_*|)²

    lhs é a soma dos termos de exponent_terms; o erro de arredondamento escala
    com o maior deles.
    """
    v = np.asarray(v, dtype=float)
    v_star_prime = np.asarray(v_star_prime, dtype=float)
    m_i = np.asarray(m_i, dtype=float)
    m_j = np.asarray(m_j, dtype=float)
    lhs = exponent_terms(v, v_star_prime, m_i, m_j).sum(axis=0)
    gap = np.abs(m_i - m_j)
    rel = np.linalg.norm(v - v_star_prime, axis=-1)
    mixed = np.linalg.norm(m_i[..., None] * v - m_j[..., None] * v_star_prime, axis=-1)
    rhs = -(m_j / (4.0 * gap ** 2)) * (mixed - m_i * rel) ** 2
    return lhs, rhs


def exponent_cancellation(v, v_star_prime, m_i: float, m_j: float) -> tuple[float, float]:
    lhs, rhs = exponent_cancellation_batch(v, v_star_prime, m_i, m_j)
    return float(lhs), float(rhs)
