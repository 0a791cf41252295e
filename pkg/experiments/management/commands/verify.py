# experiments/management/commands/verify.py
from pathlib import Path

from django.core.management.base import CommandError

from core.exceptions import KineticError
from experiments.commands import KineticCommand
from experiments.models import VerificationReport
from experiments.suites import SUITES


class Command(KineticCommand):
    help = "Roda uma suíte de verificação e grava o relatório em texto (falha se alguma checagem falhar)."

    def add_arguments(self, parser):
        parser.add_argument("suite", choices=sorted(SUITES), help="Suíte a executar.")
        super().add_arguments(parser)

    def handle(self, *args, **opts):
        suite = opts["suite"]
        config = self.load(opts)
        out = Path(config.output_dir("verify"))
        try:
            report = SUITES[suite](config)
        except KineticError as exc:
            raise CommandError(str(exc))

        config.write(out)
        path = out / f"report-{suite}.txt"
        path.write_text(report.render(opts.get("config") or "padrões"), encoding="utf-8")
        VerificationReport.objects.create(
            suite=suite,
            passed=report.passed,
            config=config.flat,
            metrics=report.metrics(),
            report=path.read_text(encoding="utf-8"),
        )

        if not report.passed:
            failed = [c.name for c in report.checks if not c.passed]
            raise CommandError(f"Suíte '{suite}' falhou em {len(failed)} checagem(ns): {', '.join(failed)}. Relatório: {path}")
        self.stdout.write(self.style.SUCCESS(f"Suíte '{suite}' aprovada ({len(report.checks)} checagens). Relatório: {path}"))
