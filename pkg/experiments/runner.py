# experiments/runner.py
"""
Orquestração de simulações e varreduras: executa o cenário, grava CSV,
config.env e gráficos e registra a execução no banco.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from django.db import transaction
from django.utils import timezone

from collision.state import MixtureState
from core.exceptions import ConfigError, InsufficientDataError
from diagnostics.fitting import fit_decay_rate
from diagnostics.functionals import entropy_splitting_check, epsilon_quad
from diagnostics.records import DiagnosticsRecord, max_conservation_drift, write_csv
from linearized.frequency import build_nu
from solver.homogeneous import march, step_homogeneous
from solver.torus import step_torus

from .config import DEFAULTS, SWEEP_ALIASES, RunConfig
from .models import DiagnosticsSample, RunKind, RunStatus, SimulationRun
from .plots import write_plots
from .scenarios import initial_state

logger = logging.getLogger(__name__)

CSV_FILENAME = "diagnostics.csv"
SUMMARY_FILENAME = "summary.csv"
RFREQ_THRESHOLD = 0.5

SUMMARY_HEADER = [
    "parameter", "value", "final_rel_entropy", "decay_rate", "r_squared",
    "max_conservation_drift", "min_value", "rfreq_crossing_time", "output_dir",
]


@dataclass
class RunSummary:
    final_rel_entropy: float
    decay_rate: float | None
    r_squared: float | None
    max_conservation_drift: float
    min_value: float
    splitting_violations: int
    rfreq_crossing_time: float | None


@dataclass
class RunOutcome:
    run: SimulationRun
    records: list[DiagnosticsRecord]
    summary: RunSummary
    csv_path: Path
    plot_paths: list[Path] = field(default_factory=list)


def rfreq_crossing_time(records: Sequence[DiagnosticsRecord], threshold: float = RFREQ_THRESHOLD) -> float | None:
    """Primeiro t a partir do qual min_i 𝓡_i/ν_i >= threshold em todas as amostras seguintes."""
    crossing = None
    for record in records:
        if min(record.rfreq_ratio) >= threshold:
            crossing = record.time if crossing is None else crossing
        else:
            crossing = None
    return crossing


def summarize(config: RunConfig, records: Sequence[DiagnosticsRecord], min_value: float, violations: int) -> RunSummary:
    run = config.section("run")
    rate = r_squared = None
    t_end = records[-1].time
    try:
        rate, r_squared = fit_decay_rate(records, run["fit_field"], (run["fit_start"] * t_end, t_end))
    except InsufficientDataError as exc:
        logger.warning("[Runner] taxa de decaimento não ajustada: %s", exc)
    except KeyError:
        raise ConfigError({"run.fit_field": [f"Coluna desconhecida: '{run['fit_field']}'."]})
    return RunSummary(
        final_rel_entropy=records[-1].rel_entropy,
        decay_rate=rate,
        r_squared=r_squared,
        max_conservation_drift=max_conservation_drift(records),
        min_value=min_value,
        splitting_violations=violations,
        rfreq_crossing_time=rfreq_crossing_time(records),
    )


def _persist_samples(run: SimulationRun, records: Sequence[DiagnosticsRecord]) -> None:
    DiagnosticsSample.objects.bulk_create([
        DiagnosticsSample(
            run=run,
            time=r.time,
            energy=r.energy,
            entropy=r.entropy,
            rel_entropy=r.rel_entropy,
            entropy_production=r.entropy_production,
            payload=r.as_dict(),
        )
        for r in records
    ])


def simulate(
    config: RunConfig,
    out_dir: Path | None = None,
    kind: str = RunKind.SIMULATE,
    sweep: tuple[str, str] | None = None,
) -> RunOutcome:
    out_dir = Path(out_dir or config.output_dir("simulate"))
    config.write(out_dir)
    run = SimulationRun.objects.create(
        kind=kind,
        scenario=config.scenario,
        seed=config.seed,
        workers=config.workers,
        config=config.flat,
        output_dir=str(out_dir),
        sweep_parameter=sweep[0] if sweep else "",
        sweep_value=sweep[1] if sweep else "",
    )
    try:
        outcome = _execute(config, out_dir, run)
    except Exception as exc:
        run.status = RunStatus.FAILED
        run.erro = str(exc)
        run.finalizado_em = timezone.now()
        run.save(update_fields=["status", "erro", "finalizado_em"])
        logger.error("[Runner] execução %s falhou: %s", run.pk, exc)
        raise
    return outcome


def _execute(config: RunConfig, out_dir: Path, run: SimulationRun) -> RunOutcome:
    engine = config.build_engine()
    table = build_nu(engine)
    cfg = config.step_config(table.max_value)
    weight = config.build_weight()
    initial = initial_state(config, engine.grid)
    eps = epsilon_quad(engine)
    tracker = {"min": float(initial.values.min()), "violations": 0}

    def on_state(step: int, t: float, state: MixtureState) -> None:
        tracker["min"] = min(tracker["min"], float(state.values.min()))
        lhs, rhs = entropy_splitting_check(state)
        if lhs > rhs + eps:
            tracker["violations"] += 1
            logger.warning("[Runner] separação violada em t=%.4f: lhs=%.4e > rhs=%.4e", t, lhs, rhs)

    torus = config.torus_config()
    stepper = step_homogeneous if torus is None else (lambda e, s, c: step_torus(e, s, c, torus))
    sec = config.section("run")
    logger.info(
        "[Runner] '%s': esquema=%s dt=%.4g t_end=%g (%s)",
        config.scenario, cfg.scheme, cfg.dt, sec["t_end"],
        "homogêneo" if torus is None else f"toro {torus.cells} células",
    )
    records = march(engine, initial, cfg, sec["t_end"], sec["sample_every"], stepper, weight, table, on_state)

    csv_path = write_csv(records, out_dir / CSV_FILENAME, engine.n_species)
    plots = write_plots(records, out_dir, engine.n_species) if sec["plots"] else []
    summary = summarize(config, records, tracker["min"], tracker["violations"])

    with transaction.atomic():
        _persist_samples(run, records)
        run.status = RunStatus.DONE
        run.final_rel_entropy = summary.final_rel_entropy
        run.decay_rate = summary.decay_rate
        run.decay_r_squared = summary.r_squared
        run.max_conservation_drift = summary.max_conservation_drift
        run.finalizado_em = timezone.now()
        run.save()
    logger.info(
        "[Runner] execução %s concluída: 𝓔 final=%.4e, deriva=%.2e, CSV em %s",
        run.pk, summary.final_rel_entropy, summary.max_conservation_drift, csv_path,
    )
    return RunOutcome(run=run, records=records, summary=summary, csv_path=csv_path, plot_paths=plots)


# -------------------------------
# Varreduras
# -------------------------------
def check_sweep_parameter(parameter: str) -> None:
    if parameter not in DEFAULTS and parameter not in SWEEP_ALIASES:
        raise ConfigError({"parameter": [f"Caminho de configuração desconhecido: '{parameter}'."]})
    if parameter.startswith(("run.", "verify.")):
        raise ConfigError({"parameter": [f"'{parameter}' não é um parâmetro físico/numérico varrível."]})


def _fmt(value: float | None) -> str:
    return "" if value is None or (isinstance(value, float) and math.isnan(value)) else repr(float(value))


def sweep(config: RunConfig, parameter: str, values: Sequence[str], out_dir: Path | None = None) -> tuple[Path, list[RunOutcome]]:
    check_sweep_parameter(parameter)
    if not values:
        raise ConfigError({"values": ["Informe ao menos um valor."]})
    base = Path(out_dir or config.output_dir("sweep"))
    config.write(base)

    outcomes: list[RunOutcome] = []
    rows = []
    for value in values:
        value = str(value).strip()
        sub = config.with_overrides({parameter: value})
        target = base / f"{parameter.replace('.', '_')}-{value}"
        logger.info("[Sweep] %s=%s -> %s", parameter, value, target)
        outcome = simulate(sub, out_dir=target, kind=RunKind.SWEEP, sweep=(parameter, value))
        outcomes.append(outcome)
        s = outcome.summary
        rows.append([
            parameter, value, _fmt(s.final_rel_entropy), _fmt(s.decay_rate), _fmt(s.r_squared),
            _fmt(s.max_conservation_drift), _fmt(s.min_value), _fmt(s.rfreq_crossing_time), str(target),
        ])

    path = base / SUMMARY_FILENAME
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        writer.writerows(rows)
    logger.info("[Sweep] %d execuções; resumo em %s", len(rows), path)
    return path, outcomes


def stable(outcome: RunOutcome) -> bool:
    """Execução sem valores negativos e com 𝓔 finita."""
    return outcome.summary.min_value >= 0 and np.isfinite(outcome.summary.final_rel_entropy)
