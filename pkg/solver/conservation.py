# solver/conservation.py
"""
Correção de conservação pós-passo.

Procura λ (N+4 multiplicadores) com F·exp(Σ_k λ_k ψ_k) tendo os momentos-alvo, por
Newton sobre o sistema de Gram G_kl = Σ F ψ_k ψ_l h³ (lstsq). O primeiro passo de
Newton é exatamente a correção linear F(1 + Σ λ_k ψ_k); as iterações seguintes
fecham os momentos ao arredondamento sem nunca trocar o sinal de F.
"""
from __future__ import annotations

import logging

import numpy as np

logger = logging.getLogger(__name__)

MAX_NEWTON = 25
RELATIVE_TOL = 1e-13


def moments_of(values: np.ndarray, psi: np.ndarray, cell_volume: float) -> np.ndarray:
    """(N+4,) momentos Σ_i ∫ F_i ψ_k,i."""
    return np.tensordot(psi, values, axes=([1, 2], [0, 1])) * cell_volume


def moment_scale(values: np.ndarray, psi: np.ndarray, cell_volume: float) -> np.ndarray:
    """Escala absoluta por momento: Σ_i ∫ F_i |ψ_k,i|."""
    return np.tensordot(np.abs(psi), np.abs(values), axes=([1, 2], [0, 1])) * cell_volume


def conservation_fix(values: np.ndarray, target: np.ndarray, psi: np.ndarray, cell_volume: float) -> np.ndarray:
    scale = np.maximum(moment_scale(values, psi, cell_volume), np.finfo(float).tiny)
    flat_psi = psi.reshape(psi.shape[0], -1)
    base = values.ravel()
    lam = np.zeros(psi.shape[0])
    corrected = values

    for it in range(MAX_NEWTON):
        factor = np.exp(lam @ flat_psi)
        weighted = base * factor
        corrected = weighted.reshape(values.shape)
        residual = target - flat_psi @ weighted * cell_volume
        if np.max(np.abs(residual) / scale) <= RELATIVE_TOL:
            break
        gram = (flat_psi * weighted) @ flat_psi.T * cell_volume
        step, *_ = np.linalg.lstsq(gram, residual, rcond=None)
        lam = lam + step
    else:
        logger.warning(
            "[Conservacao] Newton não convergiu em %d iterações (resíduo relativo %.2e)",
            MAX_NEWTON, float(np.max(np.abs(residual) / scale)),
        )
    return corrected
