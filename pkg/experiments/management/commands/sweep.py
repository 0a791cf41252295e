# experiments/management/commands/sweep.py
from django.core.management.base import CommandError

from core.exceptions import KineticError
from experiments.commands import KineticCommand
from experiments.runner import stable, sweep


class Command(KineticCommand):
    help = "Uma simulação por valor do parâmetro e um CSV de resumo (𝓔 final, taxa de decaimento, deriva)."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--parameter", required=True, help="Caminho pontuado, p.ex. kernel.gamma ou species.mass_ratio.")
        parser.add_argument("--values", required=True, help="Valores separados por vírgula, p.ex. 0,0.5,1.")

    def handle(self, *args, **opts):
        config = self.load(opts)
        values = [v for v in opts["values"].split(",") if v.strip()]
        try:
            path, outcomes = sweep(config, opts["parameter"], values)
        except KineticError as exc:
            raise CommandError(str(exc))

        unstable = [o.run.sweep_value for o in outcomes if not stable(o)]
        if unstable:
            self.stdout.write(self.style.WARNING(f"Execuções instáveis: {', '.join(unstable)}"))
        self.stdout.write(self.style.SUCCESS(f"{len(outcomes)} execuções; resumo em {path}"))
