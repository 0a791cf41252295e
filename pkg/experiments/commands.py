# experiments/commands.py
"""Base comum dos comandos verify/simulate/sweep."""
from __future__ import annotations

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import KineticError

from .config import RunConfig, cli_overrides, load_config


class KineticCommand(BaseCommand):
    def add_arguments(self, parser):
        parser.add_argument("--config", help="Arquivo .env de configuração ou nome de preset (experiments/presets).")
        parser.add_argument("--out", help="Diretório de saída (sobrescreve run.output_dir).")
        parser.add_argument("--workers", type=int, help="Número de threads (sobrescreve run.workers).")
        parser.add_argument("--seed", type=int, help="Semente do gerador (sobrescreve run.seed).")
        parser.add_argument("--plots", action="store_true", help="Grava gráficos PNG de cada funcional.")

    def load(self, options) -> RunConfig:
        try:
            return load_config(options.get("config"), cli_overrides(options))
        except KineticError as exc:
            raise CommandError(str(exc))
