# diagnostics/fitting.py
from __future__ import annotations

from typing import Sequence

import numpy as np

from core.exceptions import InsufficientDataError

from .records import DiagnosticsRecord

MIN_SAMPLES = 10


def fit_decay_rate(
    records: Sequence[DiagnosticsRecord],
    field: str,
    window: tuple[float, float] | None = None,
) -> tuple[float, float]:
    """
    Ajuste de mínimos quadrados de log(campo) contra t na janela [t0, t1].
    Retorna (taxa, r²) com taxa = -inclinação.
    """
    t0, t1 = window if window is not None else (-np.inf, np.inf)
    picked = [r for r in records if t0 <= r.time <= t1]
    if len(picked) < MIN_SAMPLES:
        raise InsufficientDataError(
            f"Ajuste exige ao menos {MIN_SAMPLES} amostras na janela (há {len(picked)})."
        )
    t = np.array([r.time for r in picked])
    y = np.array([r.field(field) for r in picked])
    if np.any(~np.isfinite(y)) or np.any(y <= 0):
        raise InsufficientDataError(f"Campo '{field}' tem valores não positivos na janela.")

    logy = np.log(y)
    slope, intercept = np.polyfit(t, logy, 1)
    fitted = slope * t + intercept
    ss_res = float(np.sum((logy - fitted) ** 2))
    ss_tot = float(np.sum((logy - logy.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(-slope), r_squared
