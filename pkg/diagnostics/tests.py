# diagnostics/tests.py
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from collision.engine import CollisionEngine
from collision.state import MixtureState, equilibrium_state
from core.exceptions import InsufficientDataError, ModeError
from linearized.frequency import build_nu
from quadrature.grids import VelocityGrid
from quadrature.sphere import make_sphere_rule
from species.maxwellian import shifted_maxwellian
from species.params import KernelSpec, SpeciesParams, WeightSpec

from .fitting import fit_decay_rate
from .functionals import (
    conserved_moments,
    entropy,
    entropy_production,
    entropy_splitting_check,
    entropy_splitting_perturbation,
    epsilon_quad,
    from_perturbation,
    gauss_monitor,
    maxwellian_mass_defect,
    relative_entropy,
    relative_entropy_kl,
    to_perturbation,
    weighted_sup_norm,
)
from .records import DiagnosticsRecord, collect_record, max_conservation_drift, read_csv, write_csv

SPECIES = (SpeciesParams(1.0, 1.0), SpeciesParams(2.0, 0.5))


def record(t, rel_entropy=1.0, mass=(1.0, 0.5), energy=2.0, momentum=(0.0, 0.0, 0.0), winf=(1.0, 2.0)):
    return DiagnosticsRecord(
        time=t, mass=mass, momentum=momentum, energy=energy, entropy=-1.0,
        rel_entropy=rel_entropy, entropy_production=-0.1, winf_norm=winf,
        gauss_monitor=(0.1, 0.2), rfreq_ratio=(0.9, 0.8),
    )


class FunctionalTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.grid = VelocityGrid(half_width=5.0, points_per_axis=8)
        cls.mu = equilibrium_state(SPECIES, cls.grid)
        rng = np.random.default_rng(8)
        cls.noisy = cls.mu.with_values(cls.mu.values * rng.uniform(0.5, 1.5, cls.mu.values.shape))

    def test_equilibrium_functionals(self):
        self.assertAlmostEqual(relative_entropy(self.mu), 0.0, places=12)
        moments = conserved_moments(self.mu)
        np.testing.assert_allclose(moments.momentum, 0.0, atol=1e-14)
        self.assertEqual(moments.as_vector().shape, (6,))
        pert = to_perturbation(self.mu)
        np.testing.assert_array_equal(weighted_sup_norm(pert, WeightSpec()), [0.0, 0.0])
        np.testing.assert_array_equal(gauss_monitor(pert, WeightSpec()), [0.0, 0.0])

    def test_relative_entropy_bounds_splitting(self):
        self.assertGreater(relative_entropy_kl(self.noisy), 0.0)
        lhs, rhs = entropy_splitting_check(self.noisy)
        self.assertEqual(rhs, relative_entropy_kl(self.noisy))
        self.assertLessEqual(lhs, rhs)
        self.assertAlmostEqual(entropy_splitting_perturbation(to_perturbation(self.noisy)), lhs, places=12)

    def test_relative_entropy_is_entropy_difference(self):
        doubled = self.mu.with_values(2.0 * self.mu.values)
        self.assertAlmostEqual(relative_entropy(doubled), entropy(doubled) - entropy(self.mu), places=12)
        total_mass = float(conserved_moments(self.mu).mass.sum())
        self.assertAlmostEqual(relative_entropy_kl(doubled), (2.0 * np.log(2.0) - 1.0) * total_mass, places=12)
        self.assertNotAlmostEqual(relative_entropy(doubled), relative_entropy_kl(doubled), places=3)

    def test_perturbation_conversion(self):
        back = from_perturbation(to_perturbation(self.noisy))
        np.testing.assert_allclose(back.values, self.noisy.values, rtol=1e-12)
        with self.assertRaises(ModeError):
            to_perturbation(to_perturbation(self.noisy))

    def test_species_weighted_gauss_monitor_differs(self):
        pert = to_perturbation(self.noisy)
        plain = gauss_monitor(pert, WeightSpec())
        weighted = gauss_monitor(pert, WeightSpec(), species_weighted=True)
        self.assertEqual(weighted.shape, (2,))
        self.assertNotEqual(plain[0], weighted[0])

    def test_spatial_functionals_average_cells(self):
        spatial = equilibrium_state(SPECIES, self.grid, cells=8)
        self.assertAlmostEqual(entropy(spatial), entropy(self.mu), places=12)
        np.testing.assert_allclose(conserved_moments(spatial).mass, conserved_moments(self.mu).mass)

    def test_entropy_production_sign(self):
        engine = CollisionEngine(SPECIES, KernelSpec.uniform(2), self.grid, make_sphere_rule(4, 8))
        values = np.stack([
            shifted_maxwellian(SPECIES[0], self.grid.nodes, 1.0, [0.8, 0.0, 0.0], 1.0),
            shifted_maxwellian(SPECIES[1], self.grid.nodes, 0.5, [-0.8, 0.0, 0.0], 1.0),
        ])
        production = entropy_production(engine, MixtureState(species=SPECIES, grid=self.grid, values=values))
        self.assertLess(production, 0.0)
        self.assertTrue(np.isfinite(epsilon_quad(engine)))

    def test_epsilon_quad_has_rounding_floor(self):
        engine = CollisionEngine(SPECIES, KernelSpec.uniform(2), self.grid, make_sphere_rule(4, 8))
        self.assertGreater(epsilon_quad(engine), 0.0)
        self.assertLess(epsilon_quad(engine), 1e-10)

    def test_maxwellian_mass_defect_on_resolving_grid(self):
        grid = VelocityGrid(half_width=6.0, points_per_axis=12)
        engine = CollisionEngine(SPECIES, KernelSpec.uniform(2), grid, make_sphere_rule(4, 8))
        self.assertLess(maxwellian_mass_defect(engine), 1e-2)


class RecordTests(SimpleTestCase):
    def test_header_and_field_access(self):
        header = DiagnosticsRecord.csv_header(2)
        self.assertEqual(header[:3], ["time", "mass_1", "mass_2"])
        self.assertEqual(header[-2:], ["rfreq_1", "rfreq_2"])
        r = record(0.5)
        self.assertEqual(r.field("winf"), 3.0)
        self.assertEqual(r.field("rfreq_2"), 0.8)
        with self.assertRaises(KeyError):
            r.field("desconhecido")

    def test_csv_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_csv([record(0.0), record(0.5, rel_entropy=0.25)], Path(tmp) / "sub" / "d.csv", 2)
            rows = read_csv(path)
        self.assertEqual(len(rows), 2)
        self.assertEqual(rows[1]["rel_entropy"], 0.25)
        self.assertEqual(len(rows[0]), len(DiagnosticsRecord.csv_header(2)))

    def test_conservation_drift(self):
        records = [record(0.0), record(1.0, mass=(1.0, 0.5 * (1 + 1e-6)), energy=2.0 * (1 - 3e-6))]
        self.assertAlmostEqual(max_conservation_drift(records), 3e-6, places=12)
        self.assertEqual(max_conservation_drift([]), 0.0)

    def test_collect_record_at_equilibrium(self):
        grid = VelocityGrid(half_width=5.0, points_per_axis=8)
        engine = CollisionEngine(SPECIES, KernelSpec.uniform(2), grid, make_sphere_rule(4, 8))
        table = build_nu(engine)
        r = collect_record(engine, equilibrium_state(SPECIES, grid), 0.0, WeightSpec(), table)
        np.testing.assert_allclose(r.rfreq_ratio, 1.0, rtol=1e-12)
        self.assertEqual(r.winf_norm, (0.0, 0.0))
        self.assertAlmostEqual(r.rel_entropy, 0.0, places=12)


class FittingTests(SimpleTestCase):
    def test_recovers_exponential_rate(self):
        records = [record(t, rel_entropy=3.0 * np.exp(-0.7 * t)) for t in np.linspace(0.0, 5.0, 21)]
        rate, r_squared = fit_decay_rate(records, "rel_entropy", (1.0, 5.0))
        self.assertAlmostEqual(rate, 0.7, places=10)
        self.assertAlmostEqual(r_squared, 1.0, places=10)

    def test_needs_enough_positive_samples(self):
        few = [record(t) for t in range(5)]
        with self.assertRaises(InsufficientDataError):
            fit_decay_rate(few, "rel_entropy")
        zeros = [record(t, rel_entropy=0.0) for t in range(12)]
        with self.assertRaises(InsufficientDataError):
            fit_decay_rate(zeros, "rel_entropy")
