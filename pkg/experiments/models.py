# experiments/models.py
from django.db import models


class RunKind(models.TextChoices):
    SIMULATE = "simulate", "Simulação"
    SWEEP = "sweep", "Varredura"


class RunStatus(models.TextChoices):
    RUNNING = "running", "Em execução"
    DONE = "done", "Concluída"
    FAILED = "failed", "Falhou"


class SimulationRun(models.Model):
    kind = models.CharField(max_length=12, choices=RunKind.choices, default=RunKind.SIMULATE)
    scenario = models.CharField(max_length=40)
    status = models.CharField(max_length=12, choices=RunStatus.choices, default=RunStatus.RUNNING)
    seed = models.PositiveIntegerField(default=0)
    workers = models.PositiveIntegerField(default=1)
    config = models.JSONField(default=dict)
    output_dir = models.CharField(max_length=500)

    final_rel_entropy = models.FloatField(null=True, blank=True)
    decay_rate = models.FloatField(null=True, blank=True)
    decay_r_squared = models.FloatField(null=True, blank=True)
    max_conservation_drift = models.FloatField(null=True, blank=True)
    erro = models.TextField(blank=True, default="")

    # preenchidos só em varreduras
    sweep_parameter = models.CharField(max_length=60, blank=True, default="")
    sweep_value = models.CharField(max_length=60, blank=True, default="")

    criado_em = models.DateTimeField(auto_now_add=True)
    finalizado_em = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ["-criado_em", "-id"]
        indexes = [models.Index(fields=["scenario", "status"])]

    def __str__(self):
        label = f"{self.kind}:{self.scenario}"
        if self.sweep_parameter:
            label += f" [{self.sweep_parameter}={self.sweep_value}]"
        return label


class DiagnosticsSample(models.Model):
    run = models.ForeignKey(SimulationRun, on_delete=models.CASCADE, related_name="samples")
    time = models.FloatField()
    energy = models.FloatField()
    entropy = models.FloatField()
    rel_entropy = models.FloatField()
    entropy_production = models.FloatField()
    payload = models.JSONField(default=dict)  # linha completa do CSV

    class Meta:
        ordering = ["run", "time"]
        constraints = [
            models.UniqueConstraint(fields=["run", "time"], name="uniq_sample_run_time"),
        ]

    def __str__(self):
        return f"{self.run_id}@t={self.time:g}"


class VerificationReport(models.Model):
    suite = models.CharField(max_length=20)
    passed = models.BooleanField(default=False)
    config = models.JSONField(default=dict)
    metrics = models.JSONField(default=list)
    report = models.TextField()
    criado_em = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-criado_em", "-id"]

    def __str__(self):
        return f"{self.suite} ({'ok' if self.passed else 'falhou'})"
