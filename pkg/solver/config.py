# solver/config.py
from __future__ import annotations

from dataclasses import dataclass

from django.db import models

from core.exceptions import InvalidParameterError

DEFAULT_DT_FACTOR = 0.2
MIN_TORUS_CELLS = 8


class Scheme(models.TextChoices):
    SEMI_IMPLICIT_LOSS = "semi_implicit_loss", "Perda implícita / ganho explícito"
    EXPLICIT_EULER     = "explicit_euler",     "Euler explícito"
    EXPONENTIAL        = "exponential",        "Fator integrante exponencial"


@dataclass(frozen=True)
class StepConfig:
    dt: float
    scheme: str = Scheme.SEMI_IMPLICIT_LOSS
    conservation_fix: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParameterError(f"dt deve ser positivo (recebido {self.dt!r}).")
        if self.scheme not in Scheme.values:
            raise InvalidParameterError(
                f"Esquema '{self.scheme}' desconhecido (opções: {', '.join(Scheme.values)})."
            )


@dataclass(frozen=True)
class TorusConfig:
    cells: int = 16

    def __post_init__(self):
        if self.cells < MIN_TORUS_CELLS:
            raise InvalidParameterError(f"O toro precisa de ao menos {MIN_TORUS_CELLS} células (recebido {self.cells}).")

    @property
    def dx(self) -> float:
        return 1.0 / self.cells


def default_dt(max_frequency: float) -> float:
    """dt = 0.2 / max ν_i (precisão; a estabilidade não depende de dt)."""
    return DEFAULT_DT_FACTOR / max_frequency
