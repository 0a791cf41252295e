# quadrature/sphere.py
"""
Regras de quadratura na esfera unitária.

Regra produto: Gauss–Legendre em t = cosθ × trapézio uniforme em φ.
Com n_polar par, a regra em t é composta (n_polar/2 nós em [-1, 0] e em [0, 1]),
o que integra exatamente perfis polinomiais por partes em t = 0, como |cosθ|.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from core.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

FOUR_PI = 4.0 * np.pi
SERIES_THRESHOLD = 1e-8


@dataclass(frozen=True, eq=False)
class SphereRule:
    nodes: np.ndarray  # (K, 3), eixo polar = e_z
    weights: np.ndarray  # (K,)
    n_polar: int
    n_azimuth: int

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def cos_polar(self) -> np.ndarray:
        return self.nodes[:, 2]

    def integrate(self, fn) -> float:
        return float(np.sum(self.weights * fn(self.nodes)))

    def integrate_profile(self, profile) -> float:
        """∫ b(σ·e_z) dσ."""
        return float(np.sum(self.weights * profile(self.cos_polar)))


def _polar_nodes(n_polar: int) -> tuple[np.ndarray, np.ndarray]:
    if n_polar % 2:
        return roots_legendre(n_polar)
    x, w = roots_legendre(n_polar // 2)
    half = 0.5 * (x + 1.0)
    t = np.concatenate([half - 1.0, half])
    return t, np.concatenate([0.5 * w, 0.5 * w])


def make_sphere_rule(n_polar: int = 8, n_azimuth: int = 16) -> SphereRule:
    if n_polar < 4:
        raise InvalidParameterError(f"n_polar deve ser >= 4 (recebido {n_polar!r}).")
    if n_azimuth < 8:
        raise InvalidParameterError(f"n_azimuth deve ser >= 8 (recebido {n_azimuth!r}).")

    t, wt = _polar_nodes(n_polar)
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))

    tt, pp = np.meshgrid(t, phi, indexing="ij")
    ss, _ = np.meshgrid(s, phi, indexing="ij")
    nodes = np.stack([ss * np.cos(pp), ss * np.sin(pp), tt], axis=-1).reshape(-1, 3)
    nodes /= np.linalg.norm(nodes, axis=1)[:, None]
    weights = np.repeat(wt * (2.0 * np.pi / n_azimuth), n_azimuth)
    return SphereRule(nodes=nodes, weights=weights, n_polar=n_polar, n_azimuth=n_azimuth)


def sphere_average_exp(rule: SphereRule, k: float, x) -> float:
    """Quadratura de ∫ exp(-k σ·x) dσ."""
    if not k > 0:
        raise InvalidParameterError(f"k deve ser positivo (recebido {k!r}).")
    x = np.asarray(x, dtype=float)
    return float(np.sum(rule.weights * np.exp(-k * (rule.nodes @ x))))


def sphere_average_exp_exact(k: float, x) -> float:
    """4π sinh(k|x|)/(k|x|); série de sinh(z)/z para k|x| pequeno."""
    z = k * float(np.linalg.norm(x))
    if z < SERIES_THRESHOLD:
        return FOUR_PI * (1.0 + z * z / 6.0)
    return FOUR_PI * np.sinh(z) / z


def orthonormal_frame(u_hat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(e1, e2) tais que (e1, e2, û) é base ortonormal positiva; û com shape (..., 3)."""
    helper = np.zeros_like(u_hat)
    use_y = np.abs(u_hat[..., 0]) > 0.9
    helper[..., 0] = np.where(use_y, 0.0, 1.0)
    helper[..., 1] = np.where(use_y, 1.0, 0.0)
    e1 = np.cross(u_hat, helper)
    e1 /= np.linalg.norm(e1, axis=-1)[..., None]
    e2 = np.cross(u_hat, e1)
    return e1, e2


def aligned_directions(rule: SphereRule, u_hat: np.ndarray) -> np.ndarray:
    """
    Regra girada para que o eixo polar coincida com û: shape (..., K, 3).
    O cosseno entre cada direção e û é exatamente o nó polar da regra.
    """
    e1, e2 = orthonormal_frame(u_hat)
    x, y, t = rule.nodes[:, 0], rule.nodes[:, 1], rule.nodes[:, 2]
    return (
        t[:, None] * u_hat[..., None, :]
        + x[:, None] * e1[..., None, :]
        + y[:, None] * e2[..., None, :]
    )
