# core/exceptions.py
"""
Hierarquia de erros do laboratório cinético.

Todas derivam de ValueError: quem já trata ValueError continua funcionando.
"""
from __future__ import annotations


class KineticError(ValueError):
    """Erro base do domínio."""


class InvalidParameterError(KineticError):
    """Parâmetro viola um invariante de tipo (massa <= 0, gamma fora de [0,1], ...)."""


class NonUnitVectorError(KineticError):
    """σ ou ω não unitário."""


class DegenerateMassError(KineticError):
    """Massas iguais: a esfera de Carleman degenera no hiperplano."""

    def __init__(self, m_i: float, m_j: float):
        self.m_i = m_i
        self.m_j = m_j
        super().__init__(
            f"Ramo degenerado (hiperplano): massas m_i={m_i:g} e m_j={m_j:g} coincidem; "
            "a representação de Carleman por esfera exige massas distintas."
        )


class ModeError(KineticError):
    """Estado no modo errado (físico x perturbação) ou valores negativos no modo físico."""


class GridMismatchError(KineticError):
    """Tamanho/forma dos valores não bate com a malha."""


class InsufficientDataError(KineticError):
    """Amostras insuficientes ou não positivas para o ajuste de decaimento."""


class ConfigError(KineticError):
    """
    Erro de configuração. `errors` mapeia caminho pontuado -> lista de mensagens,
    p.ex. {"kernel.gamma": ["Deve estar em [0, 1]."]}.
    """

    def __init__(self, errors: dict[str, list[str]]):
        self.errors = errors
        lines = [f"{path}: {'; '.join(msgs)}" for path, msgs in sorted(errors.items())]
        super().__init__("Configuração inválida:\n  " + "\n  ".join(lines))
