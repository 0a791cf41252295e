# species/collisions.py
"""
Velocidades pós-colisão para massas (m_i, m_j), nas parametrizações σ e ω.

As funções *_map são vetorizadas (arrays com shape (..., 3)) e não validam;
post_collision_sigma / post_collision_omega são a interface checada.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from core.exceptions import NonUnitVectorError

from .params import CollisionPair

UNIT_TOLERANCE = 1e-12


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...k,...k->...", a, b)


def _require_unit(vec: np.ndarray, name: str) -> None:
    norm = np.linalg.norm(vec, axis=-1)
    if np.any(np.abs(norm - 1.0) > UNIT_TOLERANCE):
        raise NonUnitVectorError(f"{name} deve ser unitário (|{name}| = {np.max(norm):.16g}).")


def sigma_map(v, v_star, m_i: float, m_j: float, sigma) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    total = m_i + m_j
    center = (m_i * v + m_j * v_star) / total
    r = np.linalg.norm(v - v_star, axis=-1)[..., None]
    v_prime = center + (m_j / total) * r * sigma
    v_star_prime = center - (m_i / total) * r * sigma
    return v_prime, v_star_prime


def omega_map(v, v_star, m_i: float, m_j: float, omega) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    total = m_i + m_j
    proj = _dot(v_star - v, omega)[..., None] * omega
    return v + (2.0 * m_j / total) * proj, v_star - (2.0 * m_i / total) * proj


def sigma_from_omega(v, v_star, omega) -> np.ndarray:
    """σ = û - 2(û·ω)ω com û = (v - v_*)/|v - v_*|."""
    z = np.asarray(v, dtype=float) - np.asarray(v_star, dtype=float)
    u_hat = z / np.linalg.norm(z, axis=-1)[..., None]
    return u_hat - 2.0 * _dot(u_hat, omega)[..., None] * omega


def post_collision_sigma(pair: CollisionPair, masses: Sequence[float], sigma) -> tuple[np.ndarray, np.ndarray]:
    sigma = np.asarray(sigma, dtype=float)
    _require_unit(sigma, "sigma")
    return sigma_map(pair.v, pair.v_star, masses[pair.i], masses[pair.j], sigma)


def post_collision_omega(pair: CollisionPair, masses: Sequence[float], omega) -> tuple[np.ndarray, np.ndarray]:
    omega = np.asarray(omega, dtype=float)
    _require_unit(omega, "omega")
    return omega_map(pair.v, pair.v_star, masses[pair.i], masses[pair.j], omega)


def conservation_residuals(v, v_star, v_prime, v_star_prime, m_i: float, m_j: float) -> tuple[np.ndarray, np.ndarray]:
    """Resíduos relativos de momento e energia (escala: maior termo envolvido)."""
    p_in = m_i * np.asarray(v) + m_j * np.asarray(v_star)
    p_out = m_i * v_prime + m_j * v_star_prime
    p_scale = np.maximum(
        1.0, np.maximum(m_i * np.linalg.norm(v, axis=-1), m_j * np.linalg.norm(v_star, axis=-1))
    )
    e_in = m_i * _dot(v, v) + m_j * _dot(v_star, v_star)
    e_out = m_i * _dot(v_prime, v_prime) + m_j * _dot(v_star_prime, v_star_prime)
    momentum = np.linalg.norm(p_in - p_out, axis=-1) / p_scale
    energy = np.abs(e_in - e_out) / np.maximum(1.0, e_in)
    return momentum, energy


def energy_split_holds(v, v_prime, v_star_prime, m_i: float, m_j: float) -> np.ndarray:
    """(m_i/4)|v|² <= (m_i/2)|v'|²  ou  (m_i/4)|v|² <= (m_j/2)|v'_*|²."""
    quarter = 0.25 * m_i * _dot(v, v)
    slack = 1e-12 * np.maximum(1.0, quarter)
    return (quarter <= 0.5 * m_i * _dot(v_prime, v_prime) + slack) | (
        quarter <= 0.5 * m_j * _dot(v_star_prime, v_star_prime) + slack
    )
