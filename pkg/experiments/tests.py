# experiments/tests.py
import csv
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings
from django.urls import reverse

from core.exceptions import ConfigError
from diagnostics.records import DiagnosticsRecord
from species.invariants import invariant_tables
from species.maxwellian import maxwellian_table
from solver.conservation import moment_scale, moments_of

from .config import DEFAULTS, cli_overrides, load_config, unflatten
from .models import DiagnosticsSample, RunKind, RunStatus, SimulationRun, VerificationReport
from .runner import check_sweep_parameter, rfreq_crossing_time
from .scenarios import bulk_velocities, initial_state
from .suites import SuiteReport

SMALL = {"grid.points": "8", "grid.half_width": "5"}


def write_env(directory, values) -> Path:
    path = Path(directory) / "teste.env"
    path.write_text("".join(f"{k}={v}\n" for k, v in values.items()), encoding="utf-8")
    return path


def record(t, rfreq):
    return DiagnosticsRecord(
        time=t, mass=(1.0,), momentum=(0.0, 0.0, 0.0), energy=1.5, entropy=0.0,
        rel_entropy=0.1, entropy_production=0.0, winf_norm=(1.0,), gauss_monitor=(1.0,), rfreq_ratio=(rfreq,),
    )


class ConfigTests(SimpleTestCase):
    def test_defaults_are_valid(self):
        config = load_config()
        self.assertEqual(config.scenario, "two_species_relax")
        self.assertEqual(config.n_species, 2)
        self.assertIsNone(config.section("step")["dt"])
        self.assertEqual(config.section("verify")["refine_points"], [16, 32])
        self.assertFalse(config.spatial)
        self.assertIsNone(config.torus_config())

    def test_errors_use_dotted_paths(self):
        with self.assertRaises(ConfigError) as ctx:
            load_config(overrides={"kernel.gamma": "2", "grid.points": "9"})
        self.assertIn("kernel.gamma", ctx.exception.errors)
        self.assertIn("grid.points", ctx.exception.errors)

        with self.assertRaises(ConfigError) as ctx:
            load_config(overrides={"kernel.gama": "0.5"})
        self.assertEqual(ctx.exception.errors["kernel.gama"], ["Chave desconhecida."])

        with self.assertRaises(ConfigError) as ctx:
            unflatten({"gamma": "1"})
        self.assertIn("gamma", ctx.exception.errors)

    def test_cross_section_rules(self):
        with self.assertRaises(ConfigError) as ctx:
            load_config(overrides={"scenario.name": "standing_wave"})
        self.assertIn("torus.cells", ctx.exception.errors)
        with self.assertRaises(ConfigError) as ctx:
            load_config(overrides={"kernel.c_phi": "1,2,3"})
        self.assertIn("kernel.c_phi", ctx.exception.errors)
        with self.assertRaises(ConfigError) as ctx:
            load_config(overrides={"scenario.name": "explicit", "scenario.temperatures": "1,-1"})
        self.assertIn("scenario.temperatures", ctx.exception.errors)

    def test_mass_ratio_alias(self):
        config = load_config(overrides={"species.mass_ratio": "3"})
        self.assertEqual(config.section("species")["masses"], [1.0, 3.0])
        with self.assertRaises(ConfigError):
            load_config(overrides={"species.mass_ratio": "-1"})

    def test_presets_and_missing_files(self):
        config = load_config("small_amplitude")
        self.assertEqual(config.scenario, "small_amplitude")
        self.assertEqual(config.section("scenario")["amplitude"], 0.1)
        self.assertEqual(load_config("standing_wave").torus_config().cells, 16)
        with self.assertRaises(ConfigError):
            load_config("nao_existe")

    def test_written_config_reloads_identically(self):
        config = load_config(overrides={"kernel.gamma": "0.5", "step.dt": "0.05"})
        with tempfile.TemporaryDirectory() as tmp:
            path = config.write(Path(tmp))
            again = load_config(path)
        self.assertEqual(again.flat, config.flat)
        self.assertEqual(again.section("step")["dt"], 0.05)
        self.assertEqual(sorted(config.flat), sorted(DEFAULTS))

    def test_flags_override_file(self):
        overrides = cli_overrides({"workers": 3, "seed": None, "out": "/tmp/saida", "plots": True})
        self.assertEqual(overrides, {"run.workers": "3", "run.output_dir": "/tmp/saida", "run.plots": "true"})
        config = load_config(overrides=overrides)
        self.assertEqual(config.workers, 3)
        self.assertEqual(config.output_dir("simulate"), Path("/tmp/saida"))

    @override_settings(KINETIC_OUTPUT_DIR="/tmp/kinetic-runs")
    def test_default_output_dir(self):
        self.assertEqual(load_config().output_dir("sweep"), Path("/tmp/kinetic-runs/sweep-two_species_relax"))


class ScenarioTests(SimpleTestCase):
    def test_every_scenario_is_physical(self):
        for name in ("two_species_relax", "small_amplitude", "large_amplitude", "explicit", "equilibrium"):
            config = load_config(overrides={**SMALL, "scenario.name": name, "scenario.amplitude": "0.3"})
            state = initial_state(config)
            self.assertEqual(state.values.shape, (2, 512), name)
            self.assertGreaterEqual(state.values.min(), 0.0, name)

    def test_matched_moments_equal_maxwellian(self):
        config = load_config(overrides={**SMALL, "scenario.name": "small_amplitude"})
        state = initial_state(config)
        grid, species = state.grid, state.species
        psi = invariant_tables(species, grid.nodes)
        target = moments_of(maxwellian_table(species, grid.nodes), psi, grid.cell_volume)
        gap = np.abs(moments_of(state.values, psi, grid.cell_volume) - target)
        self.assertLess(np.max(gap / moment_scale(state.values, psi, grid.cell_volume)), 1e-12)

    def test_large_amplitude_keeps_a_tenth_of_mu(self):
        config = load_config(overrides={**SMALL, "scenario.name": "large_amplitude",
                                        "scenario.amplitude": "50", "scenario.match_moments": "false"})
        state = initial_state(config)
        mu = maxwellian_table(state.species, state.grid.nodes)
        self.assertTrue(np.all(state.values >= 0.1 * mu * (1 - 1e-12)))
        self.assertGreater(np.abs(state.values - mu).max(), 0.0)

    def test_bulk_velocities_cancel_momentum(self):
        masses, densities = np.array([1.0, 2.0, 4.0]), np.array([1.0, 0.5, 0.25])
        bulk = bulk_velocities(masses, densities, 0.7)
        self.assertAlmostEqual(float(np.sum(masses * densities * bulk)), 0.0, places=14)

    def test_too_large_relaxation_amplitude(self):
        config = load_config(overrides={**SMALL, "scenario.amplitude": "3"})
        with self.assertRaises(ConfigError) as ctx:
            initial_state(config)
        self.assertIn("scenario.amplitude", ctx.exception.errors)

    def test_standing_wave(self):
        config = load_config(overrides={**SMALL, "scenario.name": "standing_wave", "torus.cells": "8",
                                        "scenario.amplitude": "0.2"})
        state = initial_state(config)
        self.assertEqual(state.values.shape, (8, 2, 512))
        density = state.values[:, 0].sum(axis=-1)
        self.assertAlmostEqual(density.max() / density.mean(), 1.0 + 0.2 * np.cos(np.pi / 8), places=12)

        config = load_config(overrides={**SMALL, "scenario.name": "standing_wave", "torus.cells": "8",
                                        "scenario.wave_number": "4"})
        with self.assertRaises(ConfigError):
            initial_state(config)

    def test_uniform_scenarios_broadcast_over_cells(self):
        config = load_config(overrides={**SMALL, "torus.cells": "8"})
        state = initial_state(config)
        self.assertEqual(state.cells, 8)
        np.testing.assert_array_equal(state.values[0], state.values[7])


class SuiteReportTests(SimpleTestCase):
    def test_render_and_metrics(self):
        report = SuiteReport("teste")
        report.at_most("pequeno", 1e-14, 1e-12)
        report.at_least("razao", 3.0, 4.0)
        report.note("info", 0.5)
        self.assertFalse(report.passed)
        text = report.render("padrões")
        self.assertIn("[PASS] pequeno", text)
        self.assertIn("[FALHA] razao", text)
        self.assertIn("Resultado: FALHA (1/2 checagens)", text)
        self.assertEqual([m["passed"] for m in report.metrics()], [True, False])


class RunnerHelperTests(SimpleTestCase):
    def test_rfreq_crossing_requires_staying_above(self):
        records = [record(0.0, 0.9), record(1.0, 0.4), record(2.0, 0.6), record(3.0, 0.7)]
        self.assertEqual(rfreq_crossing_time(records), 2.0)
        self.assertIsNone(rfreq_crossing_time(records + [record(4.0, 0.1)]))

    def test_sweep_parameter_rules(self):
        check_sweep_parameter("kernel.gamma")
        check_sweep_parameter("species.mass_ratio")
        for bad in ("kernel.gama", "run.t_end", "verify.draws"):
            with self.assertRaises(ConfigError):
                check_sweep_parameter(bad)


class CommandTests(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.root = Path(self.tmp.name)

    def env(self, **values):
        return write_env(self.root, {**SMALL, **{k.replace("__", "."): v for k, v in values.items()}})

    def test_simulate_writes_csv_and_records_run(self):
        path = self.env(run__t_end="0.2", step__dt="0.1")
        out = self.root / "sim"
        stdout = StringIO()
        call_command("simulate", config=str(path), out=str(out), stdout=stdout)

        with (out / "diagnostics.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        self.assertEqual([float(r["time"]) for r in rows], [0.0, 0.1, 0.2])
        self.assertTrue((out / "config.env").is_file())
        self.assertIn("CSV gravado em", stdout.getvalue())

        run = SimulationRun.objects.get()
        self.assertEqual(run.status, RunStatus.DONE)
        self.assertEqual(run.kind, RunKind.SIMULATE)
        self.assertEqual(run.samples.count(), 3)
        self.assertLess(run.max_conservation_drift, 1e-10)
        self.assertIsNone(run.decay_rate)
        first, last = float(rows[0]["rel_entropy"]), float(rows[-1]["rel_entropy"])
        self.assertLess(last, first)

    def test_zero_time_gives_one_row_and_plots(self):
        path = self.env(run__t_end="0")
        out = self.root / "zero"
        call_command("simulate", config=str(path), out=str(out), plots=True, stdout=StringIO())
        with (out / "diagnostics.csv").open() as fh:
            self.assertEqual(len(list(csv.DictReader(fh))), 1)
        self.assertTrue((out / "rel_entropy.png").is_file())
        self.assertTrue((out / "rfreq.png").is_file())

    def test_failed_run_is_marked(self):
        path = self.env(run__t_end="0", scenario__amplitude="3")
        with self.assertRaises(CommandError):
            call_command("simulate", config=str(path), out=str(self.root / "falha"), stdout=StringIO())
        run = SimulationRun.objects.get()
        self.assertEqual(run.status, RunStatus.FAILED)
        self.assertIn("scenario.amplitude", run.erro)

    def test_invalid_config_is_a_command_error(self):
        path = self.env(kernel__gamma="7")
        with self.assertRaises(CommandError) as ctx:
            call_command("simulate", config=str(path), stdout=StringIO())
        self.assertIn("kernel.gamma", str(ctx.exception))
        self.assertFalse(SimulationRun.objects.exists())

    def test_sweep_writes_summary(self):
        path = self.env(run__t_end="0")
        out = self.root / "sweep"
        call_command("sweep", config=str(path), out=str(out), parameter="kernel.gamma", values="0,1", stdout=StringIO())

        with (out / "summary.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        self.assertEqual([r["value"] for r in rows], ["0", "1"])
        self.assertTrue((out / "kernel_gamma-1" / "diagnostics.csv").is_file())
        runs = SimulationRun.objects.filter(kind=RunKind.SWEEP)
        self.assertEqual(runs.count(), 2)
        self.assertEqual(sorted(runs.values_list("sweep_value", flat=True)), ["0", "1"])

    def test_sweep_rejects_unknown_parameter(self):
        path = self.env(run__t_end="0")
        with self.assertRaises(CommandError):
            call_command("sweep", config=str(path), out=str(self.root / "x"), parameter="kernel.gama",
                         values="0,1", stdout=StringIO())

    def test_verify_identities_passes(self):
        path = self.env(verify__draws="2000")
        out = self.root / "verify"
        call_command("verify", "identities", config=str(path), out=str(out), stdout=StringIO())
        text = (out / "report-identities.txt").read_text(encoding="utf-8")
        self.assertIn("Resultado: PASS", text)
        report = VerificationReport.objects.get()
        self.assertTrue(report.passed)
        self.assertEqual(report.suite, "identities")

    def test_verify_carleman_rejects_equal_masses(self):
        path = self.env(species__masses="1,1")
        with self.assertRaises(CommandError) as ctx:
            call_command("verify", "carleman", config=str(path), out=str(self.root / "c"), stdout=StringIO())
        self.assertIn("Ramo degenerado", str(ctx.exception))
        self.assertFalse(VerificationReport.objects.exists())


class ApiTests(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.done = SimulationRun.objects.create(scenario="equilibrium", status=RunStatus.DONE, output_dir="runs/a")
        SimulationRun.objects.create(scenario="large_amplitude", status=RunStatus.FAILED, output_dir="runs/b")
        DiagnosticsSample.objects.create(
            run=cls.done, time=0.0, energy=1.5, entropy=-1.0, rel_entropy=0.0, entropy_production=0.0,
            payload={"time": 0.0},
        )
        VerificationReport.objects.create(suite="identities", passed=True, report="ok")
        VerificationReport.objects.create(suite="entropy", passed=False, report="falha")

    def test_run_list_filters(self):
        response = self.client.get(reverse("api_experiments:run-list"), {"status": "done"})
        self.assertEqual(response.status_code, 200)
        data = response.json()
        self.assertEqual([r["scenario"] for r in data], ["equilibrium"])
        self.assertNotIn("samples", data[0])

    def test_run_detail_includes_samples(self):
        response = self.client.get(reverse("api_experiments:run-detail", args=[self.done.pk]))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(len(response.json()["samples"]), 1)
        missing = self.client.get(reverse("api_experiments:run-detail", args=[9999]))
        self.assertEqual(missing.status_code, 404)

    def test_report_list_filters_by_suite(self):
        response = self.client.get(reverse("api_experiments:report-list"), {"suite": "entropy"})
        self.assertEqual([r["passed"] for r in response.json()], [False])
