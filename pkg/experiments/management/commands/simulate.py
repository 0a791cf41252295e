# experiments/management/commands/simulate.py
from django.core.management.base import CommandError

from core.exceptions import KineticError
from experiments.commands import KineticCommand
from experiments.runner import simulate


class Command(KineticCommand):
    help = "Roda o cenário configurado e grava o CSV de diagnósticos (e gráficos com --plots)."

    def handle(self, *args, **opts):
        config = self.load(opts)
        try:
            outcome = simulate(config)
        except KineticError as exc:
            raise CommandError(str(exc))

        s = outcome.summary
        self.stdout.write(f"Amostras: {len(outcome.records)}  𝓔 final: {s.final_rel_entropy:.6e}")
        if s.decay_rate is not None:
            self.stdout.write(f"Taxa de decaimento: {s.decay_rate:.4e} (r²={s.r_squared:.4f})")
        if s.rfreq_crossing_time is not None:
            self.stdout.write(f"𝓡/ν >= 1/2 a partir de t={s.rfreq_crossing_time:.4f}")
        if s.splitting_violations:
            self.stdout.write(self.style.WARNING(f"Desigualdade de separação violada em {s.splitting_violations} amostra(s)."))
        self.stdout.write(self.style.SUCCESS(f"CSV gravado em {outcome.csv_path}"))
